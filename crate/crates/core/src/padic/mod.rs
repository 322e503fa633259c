//! Exact arithmetic in `O_E` and `E` for finite extensions `E / Q_ell`.

mod binom;
pub(crate) mod int;
mod params;
mod scalar;
mod teichmuller;

pub use binom::{binom_valuation, binom_valuation_closed_form};
pub use params::{cyclotomic_shifted, same_ring, ExtensionKind, RingParams};
pub use scalar::{AbsValue, ArithOp, PadicScalar, Valuation};
pub use teichmuller::teichmuller;
