//! Perfectness checks, information ratios and the brute-force entropy oracle.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::linear::LinearScheme;
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, MAX_ENUMERATION_VERTICES};
use crate::rational::{self, Rational};
use crate::vertex_set::VertexSet;

pub const DEFAULT_SAMPLES: usize = 10_000;

/// Which maximal independent sets to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndependentSets {
    /// All of them; only for small graphs.
    Exhaustive,
    /// Random greedy maximal independent sets.
    Sampled { samples: usize, seed: u64 },
}

impl IndependentSets {
    /// Exhaustive up to the enumeration limit, sampled beyond.
    pub fn auto(g: &LabeledGraph) -> Self {
        if g.vertex_count() <= MAX_ENUMERATION_VERTICES {
            IndependentSets::Exhaustive
        } else {
            IndependentSets::Sampled {
                samples: DEFAULT_SAMPLES,
                seed: 0,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectReport {
    pub edges_checked: usize,
    /// Edges whose shares do not determine the secret.
    pub broken_edges: Vec<(usize, usize)>,
    pub independent_sets_checked: usize,
    /// Maximal independent sets whose shares leak.
    pub leaking_sets: Vec<VertexSet>,
    /// True when independent sets were sampled rather than enumerated.
    pub sampled: bool,
}

impl PerfectReport {
    pub fn is_perfect(&self) -> bool {
        self.broken_edges.is_empty() && self.leaking_sets.is_empty()
    }
}

#[derive(Serialize)]
pub(crate) struct PerfectRecord {
    perfect: bool,
    edges_checked: usize,
    broken_edges: Vec<(usize, usize)>,
    independent_sets_checked: usize,
    leaking_sets: Vec<String>,
    sampled: bool,
}

impl From<&PerfectReport> for PerfectRecord {
    fn from(r: &PerfectReport) -> Self {
        PerfectRecord {
            perfect: r.is_perfect(),
            edges_checked: r.edges_checked,
            broken_edges: r.broken_edges.clone(),
            independent_sets_checked: r.independent_sets_checked,
            leaking_sets: r.leaking_sets.iter().map(VertexSet::to_hex).collect(),
            sampled: r.sampled,
        }
    }
}

impl PerfectReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PerfectRecord::from(self)).expect("report serializes")
    }
}

/// Greedy maximal independent sets over random vertex orders.
pub fn sample_maximal_independent_sets(g: &LabeledGraph, samples: usize, seed: u64) -> Vec<VertexSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    (0..samples)
        .map(|_| {
            order.shuffle(&mut rng);
            let mut blocked = vec![false; g.vertex_count()];
            let mut set = VertexSet::new();
            for &v in &order {
                if !blocked[v] {
                    set.insert(v);
                    blocked[v] = true;
                    for &u in g.neighbors(v) {
                        blocked[u] = true;
                    }
                }
            }
            set
        })
        .collect()
}

/// Every edge must determine the secret and every maximal independent set
/// must be independent of it. Both properties are monotone, so this covers
/// all qualified and unqualified sets.
pub fn verify_perfect(s: &LinearScheme, g: &LabeledGraph) -> Result<PerfectReport> {
    verify_perfect_with(s, g, IndependentSets::auto(g))
}

pub fn verify_perfect_with(s: &LinearScheme, g: &LabeledGraph, plan: IndependentSets) -> Result<PerfectReport> {
    if s.participant_count() != g.vertex_count() {
        return Err(Error::param(format!(
            "scheme has {} participants, graph has {} vertices",
            s.participant_count(),
            g.vertex_count()
        )));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let edge_ok: Vec<bool> = edges
        .par_iter()
        .map(|&(u, v)| s.is_determining(&VertexSet::from_iter([u, v])))
        .collect::<Result<_>>()?;
    let (sets, sampled) = match plan {
        IndependentSets::Exhaustive => (g.maximal_independent_sets()?, false),
        IndependentSets::Sampled { samples, seed } => (sample_maximal_independent_sets(g, samples, seed), true),
    };
    let set_ok: Vec<bool> = sets
        .par_iter()
        .map(|m| s.is_independent_of_secret(m))
        .collect::<Result<_>>()?;
    let mut leaking_sets: Vec<VertexSet> = sets
        .iter()
        .zip(&set_ok)
        .filter(|(_, ok)| !**ok)
        .map(|(m, _)| m.clone())
        .collect();
    leaking_sets.sort();
    leaking_sets.dedup();
    Ok(PerfectReport {
        edges_checked: edges.len(),
        broken_edges: edges.iter().zip(&edge_ok).filter(|(_, ok)| !**ok).map(|(e, _)| *e).collect(),
        independent_sets_checked: sets.len(),
        leaking_sets,
        sampled,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratios {
    /// Share rank over secret dimension, per vertex.
    pub per_vertex: Vec<Rational>,
    pub max: Rational,
    /// Mean over all vertices.
    pub average: Rational,
}

impl Ratios {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "per_vertex": self.per_vertex.iter().map(rational::format).collect::<Vec<_>>(),
            "max": rational::format(&self.max),
            "average": rational::format(&self.average),
        })
    }
}

pub fn information_ratios(s: &LinearScheme) -> Ratios {
    let lambda = s.secret_dim() as i64;
    let per_vertex: Vec<Rational> = (0..s.participant_count())
        .into_par_iter()
        .map(|v| rational::ratio(s.share_rank(v) as i64, lambda))
        .collect();
    let max = per_vertex.iter().max().cloned().unwrap_or_default();
    let total: Rational = per_vertex.iter().sum();
    let average = if per_vertex.is_empty() {
        Rational::default()
    } else {
        total / rational::int(per_vertex.len() as i64)
    };
    Ratios {
        per_vertex,
        max,
        average,
    }
}

/// Limit on `q^(secret_dim + randomness_dim)` for exhaustive enumeration.
pub const MAX_STATES: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entropy {
    /// Shannon entropy in q-ary units.
    pub value: f64,
    /// `Some(k)` when the distribution is uniform on exactly `q^k` values,
    /// in which case the entropy is the integer `k` without rounding.
    pub exact_units: Option<u32>,
}

/// Entropies of share tuples under uniform secret and randomness, by full
/// enumeration. Element `participant_count()` stands for the secret.
pub fn exhaustive_entropies(s: &LinearScheme, subsets: &[VertexSet]) -> Result<Vec<Entropy>> {
    let q = s.field().modulus();
    let width = s.width();
    let states = (0..width).try_fold(1u64, |acc, _| acc.checked_mul(q).filter(|&x| x <= MAX_STATES));
    let Some(states) = states else {
        return Err(Error::Size {
            what: "scheme state space",
            actual: q.saturating_pow(width as u32) as usize,
            limit: MAX_STATES as usize,
        });
    };
    let n = s.participant_count();
    let forms: Vec<Vec<Vec<u64>>> = subsets
        .iter()
        .map(|a| {
            if let Some(v) = a.iter().find(|&v| v > n) {
                return Err(Error::param(format!("{v} is neither a participant nor the secret")));
            }
            let mut rows: Vec<Vec<u64>> = a
                .iter()
                .filter(|&v| v < n)
                .flat_map(|v| s.rows_of(v).iter().cloned())
                .collect();
            if a.contains(n) {
                rows.extend((0..s.secret_dim()).map(|i| {
                    let mut r = vec![0; width];
                    r[i] = 1;
                    r
                }));
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let field = s.field();
    let counts: Vec<HashMap<Vec<u64>, u64>> = forms
        .par_iter()
        .map(|rows| {
            let mut counts = HashMap::new();
            let mut z = vec![0u64; width];
            for _ in 0..states {
                let key: Vec<u64> = rows
                    .iter()
                    .map(|r| r.iter().zip(&z).fold(0, |acc, (a, b)| field.add(acc, field.mul(*a, *b))))
                    .collect();
                *counts.entry(key).or_insert(0) += 1;
                for x in z.iter_mut() {
                    *x += 1;
                    if *x < q {
                        break;
                    }
                    *x = 0;
                }
            }
            counts
        })
        .collect();
    Ok(counts
        .iter()
        .map(|c| {
            let total = states as f64;
            let value = c
                .values()
                .map(|&k| {
                    let p = k as f64 / total;
                    -p * p.log(q as f64)
                })
                .sum::<f64>()
                .max(0.0);
            let first = c.values().next().copied();
            let uniform = c.values().all(|&k| Some(k) == first);
            let support = c.len() as u64;
            let exact_units = uniform
                .then(|| (0..=width as u32).find(|&k| q.pow(k) == support))
                .flatten();
            Entropy { value, exact_units }
        })
        .collect())
}
