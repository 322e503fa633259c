//! Fault injection for the self-test mutation suite.
//!
//! Faults are scoped to the current thread and are off unless a caller
//! installs one with [`with_fault`].

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// The contraction operator adds `alpha^m g` instead of subtracting it.
    PhiSignError,
    /// The unit-certificate ledger books one digit less per division.
    LedgerOffByOne,
    /// Saturation checks accept every lattice and saturation is skipped.
    UnsaturatedLattice,
}

thread_local! {
    static ACTIVE: Cell<Option<Fault>> = const { Cell::new(None) };
}

pub fn active(f: Fault) -> bool {
    ACTIVE.with(|a| a.get() == Some(f))
}

/// Runs `body` with `fault` installed on this thread.
pub fn with_fault<T>(fault: Option<Fault>, body: impl FnOnce() -> T) -> T {
    let prev = ACTIVE.with(|a| a.replace(fault));
    let out = body();
    ACTIVE.with(|a| a.set(prev));
    out
}
