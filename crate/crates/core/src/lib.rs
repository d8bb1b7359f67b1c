//! Information ratio bounds for graph-based secret sharing.
//!
//! Lower bounds come from the entropy method, either as an exact rational
//! Shannon LP ([`lp`]) or as explicit inequality certificates
//! ([`cert`]) that scale to large hypercube-based graphs. Upper bounds come
//! from a star-decomposition linear scheme over a prime field ([`scheme`]).

pub mod cert;
pub mod error;
pub mod graph;
pub mod lp;
pub mod rational;
pub mod scheme;
pub mod vertex_set;

pub use error::{Error, Result};
pub use graph::{
    build_cube_star, build_delta, build_hypercube, chessboard_split, induced_cube_star_views,
    ChessboardSplit, DeltaMatchings, LabeledGraph, Matching, VertexKind, VertexLabel,
};
pub use rational::Rational;
pub use vertex_set::VertexSet;

/// Which information ratio a bound refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Maximum over participants.
    Worst,
    /// Mean over participants.
    Average,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Worst => "worst",
            Mode::Average => "average",
        })
    }
}
