//! Linear certificates for entropy-method lower bounds.
//!
//! A certificate lists inequality instances with nonnegative coefficients;
//! [`Certificate::check`] re-validates every side condition in the host graph
//! and confirms the weighted sum reproduces the target exactly.

mod builders;
mod certificate;
mod expr;
mod instance;

pub use builders::{
    build_lemma1, build_lemma2, build_lemma3, build_theorem_average, build_theorem_worst,
    cube_star_frame, lemma1_base_case, CubeStarFrame,
};
pub use certificate::{
    Certificate, CertificateFile, Inequality, Reason, Step, StepRecord, TargetRecord, Verdict,
};
pub use expr::{bracket, LinearExpr};
pub use instance::{InequalityInstance, InstanceKind, Sign};
