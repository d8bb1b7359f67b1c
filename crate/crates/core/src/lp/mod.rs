//! Exact linear programming for entropy-method bounds.

mod entropy;
mod float;
pub mod simplex;

pub use entropy::{
    build_lp, build_lp_scaled, extract_dual_certificate, shannon_bound, EntropyLp, LpRow,
    RationalSolution, Relation, RowOrigin, MAX_LP_VERTICES,
};
