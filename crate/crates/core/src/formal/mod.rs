//! The multiplicative formal group over `O_E` in the coordinates
//! `[e_i] = 1 + X_i`.

mod character;

pub use character::{torsion_points, Character, TorsionId};
mod group_ring;

pub use group_ring::{
    comultiply, ell_power_isogeny, evaluate_at_character, inversion_twist, reduce_mod_torsion_ideal,
    torsion_ideal_membership, GroupRingElement,
};
mod chart;
mod divisibility;

pub use chart::{exp_chart, exp_minus_one, group_law, log_chart, log_one_plus, PolydiscPoint};
pub use divisibility::{lowest_surviving_degree, prosystem_divisibility_check};
mod hopf;
mod qlin;

pub use hopf::{hopf_invariants, HopfReport};
pub use qlin::{Component, QuasiLinearSet};
