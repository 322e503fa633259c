//! Koszul models of the Fourier-Mellin transform of local systems on tori,
//! their fibers at torsion characters, generic ranks and jumping loci.

mod laurent;

pub use laurent::{bareiss_rank, LPoly};
mod data;

pub use data::{CycloMatrix, MonodromyData};
mod complex;

pub use complex::{build_mellin_complex, term_ranks, MellinComplex};
mod fibers;

pub use fibers::{fiber_dims, fiber_dims_at, fiber_dims_via_group_ring, generic_dims, generic_dims_of};
mod locus;

pub use locus::{jumping_locus, jumping_locus_of, level_points, verify_quasilinear, LocusReport, QlinVerdict};
mod limit;

pub use limit::{finite_level_limit_check, LevelCohomology, LimitVerdict};
