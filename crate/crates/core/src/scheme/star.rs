//! The all-stars decomposition scheme.
//!
//! Every vertex of positive degree centers one star over its neighbours, so
//! each edge lies in exactly two stars. Star `k` carries the sub-secret
//! `c_k = s1 + x_k·s2` one-time padded by its own randomness `r_k`: the
//! center holds `r_k`, each leaf holds `r_k + c_k`. An edge `uv` sees `c_u`
//! and `c_v`, two evaluations of a degree-one polynomial, which fix the
//! secret whenever `x_u ≠ x_v`.

use super::field::PrimeField;
use super::linear::LinearScheme;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

pub const SECRET_DIM: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub center: usize,
    pub leaves: Vec<usize>,
}

/// How evaluation points are handed to stars.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PointAssignment {
    /// `0, 1, 2, …` in center order; needs `q` at least the number of stars.
    #[default]
    Distinct,
    /// Greedy proper colouring of the centers in vertex order. Adjacent
    /// centers still get different points, which is all an edge needs, so
    /// small fields work on sparse graphs.
    Coloring,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCover {
    pub stars: Vec<Star>,
    /// One evaluation point per star.
    pub points: Vec<u64>,
}

impl StarCover {
    pub fn new(g: &LabeledGraph, field: PrimeField, assignment: PointAssignment) -> Result<Self> {
        let stars: Vec<Star> = (0..g.vertex_count())
            .filter(|&v| g.degree(v) > 0)
            .map(|v| Star {
                center: v,
                leaves: g.neighbors(v).to_vec(),
            })
            .collect();
        let q = field.modulus();
        let points: Vec<u64> = match assignment {
            PointAssignment::Distinct => {
                if (stars.len() as u64) > q {
                    return Err(Error::param(format!(
                        "q = {q} is smaller than the {} stars needing distinct points",
                        stars.len()
                    )));
                }
                (0..stars.len() as u64).collect()
            }
            PointAssignment::Coloring => {
                let mut color = vec![u64::MAX; g.vertex_count()];
                for s in &stars {
                    let used: Vec<u64> = s.leaves.iter().map(|&u| color[u]).collect();
                    color[s.center] = (0..).find(|c| !used.contains(c)).expect("unbounded");
                }
                let needed = stars.iter().map(|s| color[s.center] + 1).max().unwrap_or(0);
                if needed > q {
                    return Err(Error::param(format!("q = {q} is smaller than the {needed} colours used")));
                }
                stars.iter().map(|s| color[s.center]).collect()
            }
        };
        Ok(StarCover { stars, points })
    }

    /// Star index centered at each vertex.
    fn index(&self, n: usize) -> Vec<Option<usize>> {
        let mut at = vec![None; n];
        for (k, s) in self.stars.iter().enumerate() {
            at[s.center] = Some(k);
        }
        at
    }
}

/// The star scheme with distinct evaluation points.
pub fn build_star_scheme(g: &LabeledGraph, q: u64) -> Result<LinearScheme> {
    build_star_scheme_with(g, q, PointAssignment::Distinct)
}

/// Secret coordinates `(s1, s2)`, then one randomness coordinate per star in
/// center order. Vertex `v` owns its center row followed by one leaf row per
/// neighbour in increasing order.
pub fn build_star_scheme_with(g: &LabeledGraph, q: u64, assignment: PointAssignment) -> Result<LinearScheme> {
    let field = PrimeField::new(q)?;
    let cover = StarCover::new(g, field, assignment)?;
    let n = g.vertex_count();
    let star_of = cover.index(n);
    let width = SECRET_DIM + cover.stars.len();
    let mut rows = Vec::new();
    let mut participants = Vec::with_capacity(n);
    for v in 0..n {
        let start = rows.len();
        if let Some(k) = star_of[v] {
            let mut center = vec![0; width];
            center[SECRET_DIM + k] = 1;
            rows.push(center);
            for &u in g.neighbors(v) {
                let k = star_of[u].expect("neighbours have positive degree");
                let mut leaf = vec![0; width];
                leaf[0] = 1;
                leaf[1] = cover.points[k];
                leaf[SECRET_DIM + k] = 1;
                rows.push(leaf);
            }
        }
        participants.push(start..rows.len());
    }
    LinearScheme::new(field, SECRET_DIM, cover.stars.len(), rows, participants)
}
