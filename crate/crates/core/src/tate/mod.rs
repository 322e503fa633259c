//! Truncated Tate algebras, the `sigma`-action and the unit-ideal
//! certifier.

mod monomial;
mod series;

pub use monomial::Exponent;
pub use series::TruncatedSeries;
mod sigma;

pub use sigma::{apply_matrix, sigma_apply, Diagonalization, Matrix, SigmaAction};
mod certify;
mod phi;

pub use certify::{certify_unit_ideal, CertificateStep, UnitCertificate};
pub use phi::{phi_operator, phi_operator_by_substitution, stratum};
mod graded;

pub use graded::{format_rational_poly, graded_closure_check, GradedVerdict, RationalPoly};
mod weil;

pub use weil::{weil_condition_check, WeilVerdict};
