//! Per-thread count of exact arithmetic operations, reported by the CLI.

use std::cell::Cell;

thread_local! {
    static OPS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub(crate) fn bump() {
    OPS.with(|c| c.set(c.get().wrapping_add(1)));
}

pub fn op_count() -> u64 {
    OPS.with(|c| c.get())
}

pub fn reset_op_count() {
    OPS.with(|c| c.set(0));
}
