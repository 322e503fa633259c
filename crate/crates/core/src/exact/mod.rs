//! Exact fields and lattices used by the rank and locus computations.

pub mod cyclo;
pub mod field;
pub mod lattice;
pub mod linalg;

pub use cyclo::{Cyclo, CyclotomicField};
pub use field::{Field, Rationals};
pub use lattice::{is_saturated, lattice_contains, lattice_equal, local_smith, saturate, LocalSmith};
pub use linalg::{determinant, rank, solve, EchelonBasis};
