//! The Shannon-inequality LP on the ground set of participants plus secret.
//!
//! Variables are `f(A)` for every subset `A ⊆ V ∪ {s}`, indexed by bitmask
//! with the secret as the highest bit. Constraints are the elemental
//! polymatroid inequalities, the normalization `f(∅) = 0`, `f(s) = 1`, and
//! the access structure pinned at minimal qualified sets (edges) and maximal
//! unqualified sets (maximal independent sets).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cert::{Certificate, Inequality, InequalityInstance as I, LinearExpr, Sign, Step};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::lp::simplex::{SimplexError, StandardForm};
use crate::rational::{self, int, Rational};
use crate::vertex_set::VertexSet;
use crate::Mode;

pub const MAX_LP_VERTICES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    AtLeast,
    Equal,
}

/// Where an LP row came from; drives certificate extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOrigin {
    EmptyZero,
    SecretUnit,
    /// `f(N) − f(N ∖ element) ≥ 0`.
    Monotone { element: usize },
    /// `f(K+i) + f(K+j) − f(K+i+j) − f(K) ≥ 0`.
    Submodular { i: usize, j: usize, rest: u32 },
    /// `f(A+s) = f(A)` for an edge `A`.
    Qualified { set: u32 },
    /// `f(M+s) = f(M) + c` for a maximal independent `M`.
    Unqualified { set: u32 },
    /// `t − f(v) ≥ 0`, worst case only.
    WorstBound { vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpRow {
    pub origin: RowOrigin,
    /// `(variable, coefficient)` pairs.
    pub terms: Vec<(usize, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

impl LpRow {
    pub fn name(&self) -> String {
        match self.origin {
            RowOrigin::EmptyZero => "empty".into(),
            RowOrigin::SecretUnit => "secret".into(),
            RowOrigin::Monotone { element } => format!("mono_{element}"),
            RowOrigin::Submodular { i, j, rest } => format!("sub_{i}_{j}_{rest}"),
            RowOrigin::Qualified { set } => format!("qual_{set}"),
            RowOrigin::Unqualified { set } => format!("unq_{set}"),
            RowOrigin::WorstBound { vertex } => format!("bound_{vertex}"),
        }
    }
}

/// Minimize `objective` subject to `rows`; all variables are free.
#[derive(Clone, Debug)]
pub struct EntropyLp {
    pub graph: LabeledGraph,
    pub mode: Mode,
    /// Right-hand side of `f(s) = c`; 1 for the normalized problem.
    pub secret_entropy: i64,
    pub rows: Vec<LpRow>,
    pub objective: Vec<(usize, Rational)>,
}

impl EntropyLp {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Participants plus the secret.
    pub fn ground_size(&self) -> usize {
        self.vertex_count() + 1
    }

    /// Number of `f(A)` variables.
    pub fn subset_variable_count(&self) -> usize {
        1 << self.ground_size()
    }

    /// Index of the worst-case bound variable `t`.
    pub fn aux_variable(&self) -> Option<usize> {
        (self.mode == Mode::Worst).then(|| self.subset_variable_count())
    }

    pub fn variable_count(&self) -> usize {
        self.subset_variable_count() + usize::from(self.mode == Mode::Worst)
    }

    pub fn count_rows(&self, pred: impl Fn(&RowOrigin) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.origin)).count()
    }

    pub fn variable_name(&self, v: usize) -> String {
        if Some(v) == self.aux_variable() {
            "t".into()
        } else {
            format!("f_{v}")
        }
    }

    /// CPLEX-style LP text. `f_<k>` is `f` of the subset with bitmask `k`.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::new();
        let n = self.vertex_count();
        let _ = writeln!(
            out,
            "\\ {n} participants; f_<k> is the subset with bitmask k, the secret is bit {n}"
        );
        out.push_str("Minimize\n obj:");
        for (v, c) in &self.objective {
            let _ = write!(out, " + {} {}", rational::format(c), self.variable_name(*v));
        }
        out.push_str("\nSubject To\n");
        for row in &self.rows {
            let _ = write!(out, " {}:", row.name());
            for &(v, c) in &row.terms {
                let sign = if c < 0 { '-' } else { '+' };
                match c.abs() {
                    1 => write!(out, " {sign} {}", self.variable_name(v)),
                    mag => write!(out, " {sign} {mag} {}", self.variable_name(v)),
                }
                .expect("string write");
            }
            let rel = match row.relation {
                Relation::AtLeast => ">=",
                Relation::Equal => "=",
            };
            let _ = writeln!(out, " {rel} {}", row.rhs);
        }
        out.push_str("Bounds\n");
        for v in 0..self.variable_count() {
            let _ = writeln!(out, " {} free", self.variable_name(v));
        }
        out.push_str("End\n");
        out
    }

    /// Solves the dual (one equality per variable, one nonnegative column per
    /// inequality row) and reads the primal values off the final basis.
    pub fn solve(&self) -> Result<RationalSolution> {
        let vars = self.variable_count();
        let mut columns = Vec::new();
        let mut cost = Vec::new();
        let mut column_of_row = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let col: Vec<(usize, Rational)> = row.terms.iter().map(|&(v, c)| (v, int(c))).collect();
            column_of_row.push(columns.len());
            if row.relation == Relation::Equal {
                columns.push(col.iter().map(|(v, c)| (*v, -c)).collect());
                cost.push(int(row.rhs));
            }
            columns.push(col);
            cost.push(int(-row.rhs));
        }
        let mut rhs = vec![Rational::zero(); vars];
        for (v, c) in &self.objective {
            rhs[*v] += c;
        }
        let dual = StandardForm {
            rows: vars,
            columns,
            rhs,
            cost,
        };
        let sol = dual.solve().map_err(|e| match e {
            SimplexError::Infeasible => Error::Solver("entropy LP is unbounded".into()),
            SimplexError::Unbounded => Error::Solver("entropy LP is infeasible".into()),
        })?;

        let dual_values = self
            .rows
            .iter()
            .zip(&column_of_row)
            .map(|(row, &c)| match row.relation {
                Relation::AtLeast => sol.values[c].clone(),
                Relation::Equal => &sol.values[c + 1] - &sol.values[c],
            })
            .collect();
        let mut variable_values: Vec<Rational> = sol.multipliers.iter().map(|p| -p).collect();
        let aux_value = self.aux_variable().map(|_| variable_values.pop().expect("t"));
        let solution = RationalSolution {
            objective_value: -sol.objective,
            variable_values,
            aux_value,
            dual_values,
            pivots: sol.pivots,
        };
        self.verify(&solution)?;
        Ok(solution)
    }

    fn value<'a>(&self, sol: &'a RationalSolution, v: usize) -> &'a Rational {
        match self.aux_variable() {
            Some(t) if v == t => sol.aux_value.as_ref().expect("worst mode has t"),
            _ => &sol.variable_values[v],
        }
    }

    /// Exact primal feasibility, dual feasibility and zero duality gap.
    pub fn verify(&self, sol: &RationalSolution) -> Result<()> {
        let fail = |m: String| Err(Error::Internal(m));
        if sol.variable_values.len() != self.subset_variable_count()
            || sol.dual_values.len() != self.rows.len()
            || sol.aux_value.is_some() != self.aux_variable().is_some()
        {
            return fail("solution shape does not match the LP".into());
        }
        let mut combined = vec![Rational::zero(); self.variable_count()];
        let mut dual_objective = Rational::zero();
        for (row, y) in self.rows.iter().zip(&sol.dual_values) {
            let lhs: Rational = row.terms.iter().map(|&(v, c)| self.value(sol, v) * int(c)).sum();
            let ok = match row.relation {
                Relation::AtLeast => lhs >= int(row.rhs),
                Relation::Equal => lhs == int(row.rhs),
            };
            if !ok {
                return fail(format!("primal row {} violated", row.name()));
            }
            if row.relation == Relation::AtLeast && y.is_negative() {
                return fail(format!("negative dual on row {}", row.name()));
            }
            for &(v, c) in &row.terms {
                combined[v] += y * int(c);
            }
            dual_objective += y * int(row.rhs);
        }
        let mut c = vec![Rational::zero(); self.variable_count()];
        for (v, x) in &self.objective {
            c[*v] += x;
        }
        if combined != c {
            return fail("dual combination does not reproduce the objective".into());
        }
        let primal: Rational = self.objective.iter().map(|(v, x)| x * self.value(sol, *v)).sum();
        if primal != sol.objective_value || dual_objective != sol.objective_value {
            return fail("nonzero duality gap".into());
        }
        Ok(())
    }
}

/// Exact optimum with primal values and row duals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSolution {
    pub objective_value: Rational,
    /// `f(A)` indexed by bitmask.
    pub variable_values: Vec<Rational>,
    /// The worst-case bound variable `t`, when present.
    pub aux_value: Option<Rational>,
    /// One multiplier per LP row; nonnegative on inequality rows.
    pub dual_values: Vec<Rational>,
    pub pivots: usize,
}

#[derive(Serialize)]
struct SolutionFile {
    mode: Mode,
    #[serde(with = "rational::serde_str")]
    objective: Rational,
    variables: BTreeMap<String, String>,
    duals: Vec<DualRecord>,
}

#[derive(Serialize)]
struct DualRecord {
    row: String,
    value: String,
}

impl RationalSolution {
    /// JSON with rationals as `"p/q"`; only nonzero duals are listed.
    pub fn to_json(&self, lp: &EntropyLp) -> String {
        let mut variables: BTreeMap<String, String> = self
            .variable_values
            .iter()
            .enumerate()
            .map(|(v, x)| (lp.variable_name(v), rational::format(x)))
            .collect();
        if let Some(t) = &self.aux_value {
            variables.insert("t".into(), rational::format(t));
        }
        let file = SolutionFile {
            mode: lp.mode,
            objective: self.objective_value.clone(),
            variables,
            duals: lp
                .rows
                .iter()
                .zip(&self.dual_values)
                .filter(|(_, y)| !y.is_zero())
                .map(|(r, y)| DualRecord {
                    row: r.name(),
                    value: rational::format(y),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("solution serializes")
    }
}

pub fn build_lp(g: &LabeledGraph, mode: Mode) -> Result<EntropyLp> {
    build_lp_scaled(g, mode, 1)
}

/// [`build_lp`] with `f(s) = secret_entropy` and unqualified gaps of the same
/// size.
pub fn build_lp_scaled(g: &LabeledGraph, mode: Mode, secret_entropy: i64) -> Result<EntropyLp> {
    let n = g.vertex_count();
    if n > MAX_LP_VERTICES {
        return Err(Error::Size {
            what: "graph for the Shannon LP",
            actual: n,
            limit: MAX_LP_VERTICES,
        });
    }
    if n == 0 {
        return Err(Error::param("graph has no vertices"));
    }
    if g.edge_count() == 0 {
        return Err(Error::param("graph has no edges, so the secret is never recoverable"));
    }
    let ground = n + 1;
    let full = (1usize << ground) - 1;
    let secret = 1usize << n;
    let eq = |origin, terms, rhs| LpRow {
        origin,
        terms,
        relation: Relation::Equal,
        rhs,
    };
    let ge = |origin, terms| LpRow {
        origin,
        terms,
        relation: Relation::AtLeast,
        rhs: 0,
    };
    let mut rows = vec![
        eq(RowOrigin::EmptyZero, vec![(0, 1)], 0),
        eq(RowOrigin::SecretUnit, vec![(secret, 1)], secret_entropy),
    ];
    for element in 0..ground {
        rows.push(ge(
            RowOrigin::Monotone { element },
            vec![(full, 1), (full ^ (1 << element), -1)],
        ));
    }
    for i in 0..ground {
        for j in i + 1..ground {
            let pair = (1 << i) | (1 << j);
            for k in (0..=full).filter(|k| k & pair == 0) {
                rows.push(ge(
                    RowOrigin::Submodular { i, j, rest: k as u32 },
                    vec![(k | 1 << i, 1), (k | 1 << j, 1), (k | pair, -1), (k, -1)],
                ));
            }
        }
    }
    for (u, v) in g.edges() {
        let a = (1usize << u) | (1 << v);
        rows.push(eq(
            RowOrigin::Qualified { set: a as u32 },
            vec![(a | secret, 1), (a, -1)],
            0,
        ));
    }
    for m in g.maximal_independent_sets()? {
        let m = m.to_mask().expect("small graph") as usize;
        rows.push(eq(
            RowOrigin::Unqualified { set: m as u32 },
            vec![(m | secret, 1), (m, -1)],
            secret_entropy,
        ));
    }
    let objective = match mode {
        Mode::Worst => {
            let t = 1usize << ground;
            for vertex in 0..n {
                rows.push(ge(RowOrigin::WorstBound { vertex }, vec![(t, 1), (1 << vertex, -1)]));
            }
            vec![(t, Rational::one())]
        }
        Mode::Average => {
            let w = rational::ratio(1, n as i64);
            (0..n).map(|v| (1 << v, w.clone())).collect()
        }
    };
    Ok(EntropyLp {
        graph: g.clone(),
        mode,
        secret_entropy,
        rows,
        objective,
    })
}

/// Exact Shannon-LP lower bound on the worst or average information ratio.
pub fn shannon_bound(g: &LabeledGraph, mode: Mode) -> Result<Rational> {
    Ok(build_lp(g, mode)?.solve()?.objective_value)
}

fn split(y: &Rational) -> (Sign, Rational) {
    if y.is_negative() {
        (Sign::Minus, -y)
    } else {
        (Sign::Plus, y.clone())
    }
}

/// Re-expresses an optimal solution as a certificate whose target is a
/// singleton combination bounded by the optimum.
pub fn extract_dual_certificate(lp: &EntropyLp, sol: &RationalSolution) -> Result<Certificate> {
    if lp.secret_entropy != 1 {
        return Err(Error::param("certificates need the normalized LP"));
    }
    lp.verify(sol)?;
    let set = |mask: usize| VertexSet::from_mask(mask as u64);
    let full = (1usize << lp.ground_size()) - 1;
    let mut steps = Vec::new();
    let mut target = LinearExpr::zero();
    for (row, y) in lp.rows.iter().zip(&sol.dual_values) {
        if y.is_zero() {
            continue;
        }
        let (sign, coeff) = split(y);
        let instance = match row.origin {
            RowOrigin::EmptyZero => I::EmptyZero(sign),
            RowOrigin::SecretUnit => I::SecretUnit(sign),
            RowOrigin::Monotone { element } => I::Monotonicity {
                subset: set(full ^ (1 << element)),
                superset: set(full),
            },
            RowOrigin::Submodular { i, j, rest } => {
                let k = rest as usize;
                I::Submodularity(set(k | 1 << i), set(k | 1 << j))
            }
            RowOrigin::Qualified { set: a } => I::AccessQualified {
                set: set(a as usize),
                sign,
            },
            RowOrigin::Unqualified { set: m } => I::AccessUnqualified {
                set: set(m as usize),
                sign,
            },
            RowOrigin::WorstBound { vertex } => {
                target.add_term(VertexSet::singleton(vertex), coeff);
                continue;
            }
        };
        steps.push(Step { instance, coeff });
    }
    if lp.mode == Mode::Average {
        for (v, c) in &lp.objective {
            target.add_term(set(*v), c.clone());
        }
    }
    let cert = Certificate {
        graph: lp.graph.clone(),
        steps,
        target: Inequality {
            lhs: target,
            bound: sol.objective_value.clone(),
        },
    };
    let verdict = cert.check();
    if !verdict.is_valid() {
        return Err(Error::Internal(format!("dual certificate fails: {verdict}")));
    }
    Ok(cert)
}
