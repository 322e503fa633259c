//! Exact `ell`-adic kernels: Tate-algebra series and their contraction
//! operators, the multiplicative formal group in coordinates, and Mellin
//! transforms of monodromy data on tori with their jumping loci.

pub mod error;
pub mod exact;
pub mod fault;
pub mod formal;
pub mod mellin;
pub mod padic;
pub mod selftest;
pub mod stats;
pub mod tate;

pub use error::{Error, Result};
