//! Linear schemes over prime fields; the upper-bound side.

mod field;
mod linear;
mod star;
mod verify;

pub use field::{PrimeField, MAX_MODULUS};
pub use linear::LinearScheme;
pub use star::{build_star_scheme, build_star_scheme_with, PointAssignment, Star, StarCover, SECRET_DIM};
pub use verify::{
    exhaustive_entropies, information_ratios, sample_maximal_independent_sets, verify_perfect,
    verify_perfect_with, Entropy, IndependentSets, PerfectReport, Ratios, DEFAULT_SAMPLES, MAX_STATES,
};
