//! Two-phase primal simplex over exact rationals.
//!
//! Solves `min cost·y` subject to `A y = rhs`, `y >= 0` with a revised
//! simplex that keeps the basis inverse as sparse rows. Pricing is Dantzig's
//! rule, falling back to Bland's least-index rule after a run of degenerate
//! pivots, so it terminates and the result is deterministic.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// An LP in equality standard form with sparse columns.
#[derive(Clone, Debug, Default)]
pub struct StandardForm {
    pub rows: usize,
    /// `columns[j]` lists `(row, coefficient)` pairs.
    pub columns: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
    pub cost: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplexError {
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct SimplexSolution {
    pub objective: Rational,
    /// Optimal `y`.
    pub values: Vec<Rational>,
    /// Row multipliers `π` with `cost_j - π·A_j >= 0` for every column.
    pub multipliers: Vec<Rational>,
    pub pivots: usize,
}

type SparseRow = Vec<(u32, Rational)>;

fn entry(row: &SparseRow, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&(col as u32), |&(c, _)| c)
        .ok()
        .map(|i| &row[i].1)
}

/// `row - factor * pivot`, dropping cancelled entries.
fn axpy(row: &SparseRow, factor: &Rational, pivot: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(u32::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(factor * &pivot[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - factor * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Solves the square system with the given sparse rows exactly by Gaussian
/// elimination, always pivoting on the sparsest remaining row. `None` if
/// singular.
fn sparse_solve(mut rows: Vec<SparseRow>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let m = rows.len();
    let mut done = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for _ in 0..m {
        let p = (0..m).filter(|&i| !done[i]).min_by_key(|&i| rows[i].len())?;
        let (col, val) = rows[p].first()?.clone();
        done[p] = true;
        order.push((p, col as usize));
        let inv = val.recip();
        for i in 0..m {
            if done[i] {
                continue;
            }
            let Some(a) = entry(&rows[i], col as usize).cloned() else {
                continue;
            };
            let factor = &a * &inv;
            rows[i] = axpy(&rows[i], &factor, &rows[p]);
            let delta = &factor * &rhs[p];
            rhs[i] -= delta;
        }
    }
    let mut x = vec![Rational::zero(); m];
    for &(p, col) in order.iter().rev() {
        let mut acc = rhs[p].clone();
        let mut pivot = Rational::zero();
        for (c, v) in &rows[p] {
            if *c as usize == col {
                pivot = v.clone();
            } else {
                acc -= v * &x[*c as usize];
            }
        }
        x[col] = acc / pivot;
    }
    Some(x)
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const STALL_LIMIT: usize = 32;

/// Revised simplex state. Columns `n..n+m` are the artificial unit columns.
struct Revised {
    m: usize,
    n: usize,
    columns: Vec<Vec<(usize, Rational)>>,
    cost: Vec<Rational>,
    /// Rows of the basis inverse.
    binv: Vec<SparseRow>,
    xb: Vec<Rational>,
    basis: Vec<usize>,
    basic: Vec<bool>,
    /// Simplex multipliers `c_B B^-1`.
    pi: Vec<Rational>,
    objective: Rational,
    eligible: Vec<bool>,
    stall: usize,
    pivots: usize,
}

impl Revised {
    fn column(&self, j: usize) -> std::borrow::Cow<'_, [(usize, Rational)]> {
        if j < self.n {
            std::borrow::Cow::Borrowed(&self.columns[j])
        } else {
            std::borrow::Cow::Owned(vec![(j - self.n, Rational::one())])
        }
    }

    fn reduced_cost(&self, j: usize) -> Rational {
        let mut r = self.cost[j].clone();
        for (i, v) in self.column(j).iter() {
            if !self.pi[*i].is_zero() {
                r -= &self.pi[*i] * v;
            }
        }
        r
    }

    /// `B^-1 A_j`.
    fn ftran(&self, j: usize) -> Vec<Rational> {
        let col = self.column(j);
        self.binv
            .iter()
            .map(|row| {
                let mut s = Rational::zero();
                for (k, v) in col.iter() {
                    if let Some(b) = entry(row, *k) {
                        s += b * v;
                    }
                }
                s
            })
            .collect()
    }

    fn reset_objective(&mut self, cost: Vec<Rational>) {
        self.cost = cost;
        self.pi = vec![Rational::zero(); self.m];
        self.objective = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &self.cost[b];
            if cb.is_zero() {
                continue;
            }
            for (k, v) in &self.binv[i] {
                self.pi[*k as usize] += cb * v;
            }
            self.objective += cb * &self.xb[i];
        }
        self.stall = 0;
    }

    fn pivot(&mut self, r: usize, e: usize, d: &[Rational], reduced: &Rational) {
        let inv = d[r].recip();
        let prow: SparseRow = self.binv[r].iter().map(|(c, v)| (*c, v * &inv)).collect();
        let step = &self.xb[r] * &inv;
        for (i, di) in d.iter().enumerate() {
            if i == r || di.is_zero() {
                continue;
            }
            self.binv[i] = axpy(&self.binv[i], di, &prow);
            self.xb[i] -= di * &step;
        }
        if !reduced.is_zero() {
            for (k, v) in &prow {
                self.pi[*k as usize] += reduced * v;
            }
            self.objective += reduced * &step;
        }
        if step.is_zero() {
            self.stall += 1;
        } else {
            self.stall = 0;
        }
        self.binv[r] = prow;
        self.xb[r] = step;
        self.basic[self.basis[r]] = false;
        self.basic[e] = true;
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// Dantzig pricing, or Bland's least index while stalled; returns
    /// `Ok(true)` at optimality.
    fn step(&mut self) -> Result<bool, SimplexError> {
        let bland = self.stall >= STALL_LIMIT;
        let mut entering: Option<(usize, Rational)> = None;
        for j in 0..self.n + self.m {
            if self.basic[j] || !self.eligible[j] {
                continue;
            }
            let r = self.reduced_cost(j);
            if !r.is_negative() {
                continue;
            }
            if bland {
                entering = Some((j, r));
                break;
            }
            if entering.as_ref().is_none_or(|(_, best)| r < *best) {
                entering = Some((j, r));
            }
        }
        let Some((e, reduced)) = entering else {
            return Ok(true);
        };
        let d = self.ftran(e);
        let mut best: Option<(usize, Rational)> = None;
        for (i, a) in d.iter().enumerate() {
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.xb[i] / a;
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        let (r, _) = best.ok_or(SimplexError::Unbounded)?;
        self.pivot(r, e, &d, &reduced);
        Ok(false)
    }

    fn run(&mut self) -> Result<(), SimplexError> {
        while !self.step()? {}
        Ok(())
    }

    /// Basic variables outside their bounds; artificials are fixed at zero.
    fn infeasible(&self, i: usize) -> bool {
        if self.basis[i] >= self.n {
            !self.xb[i].is_zero()
        } else {
            self.xb[i].is_negative()
        }
    }

    /// Dual simplex with least-index choices, from a dual-feasible basis.
    /// Returns `false` if the basis turns out not to be dual feasible.
    fn dual_run(&mut self) -> Result<bool, SimplexError> {
        loop {
            let Some(r) = (0..self.m)
                .filter(|&i| self.infeasible(i))
                .min_by_key(|&i| self.basis[i])
            else {
                return Ok(true);
            };
            let down = self.xb[r].is_positive();
            let rho = self.binv[r].clone();
            let mut best: Option<(usize, Rational, Rational)> = None;
            for j in 0..self.n + self.m {
                if self.basic[j] || !self.eligible[j] {
                    continue;
                }
                let mut alpha = Rational::zero();
                for (k, v) in self.column(j).iter() {
                    if let Some(b) = entry(&rho, *k) {
                        alpha += b * v;
                    }
                }
                if (down && !alpha.is_positive()) || (!down && !alpha.is_negative()) {
                    continue;
                }
                let reduced = self.reduced_cost(j);
                if reduced.is_negative() {
                    return Ok(false);
                }
                let ratio = reduced / alpha.abs();
                if best.as_ref().is_none_or(|(_, br, _)| ratio < *br) {
                    best = Some((j, ratio, alpha));
                }
            }
            let (e, _, _) = best.ok_or(SimplexError::Infeasible)?;
            let d = self.ftran(e);
            let reduced = self.reduced_cost(e);
            self.pivot(r, e, &d, &reduced);
        }
    }
}

impl StandardForm {
    /// Rows flipped so the right-hand side is nonnegative, with the
    /// artificial columns as a feasible starting basis.
    fn start(&self) -> Revised {
        let n = self.columns.len();
        let m = self.rows;
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| (*i, if self.rhs[*i].is_negative() { -v } else { v.clone() }))
                    .collect()
            })
            .collect();
        let mut basic = vec![false; n + m];
        basic[n..].fill(true);
        Revised {
            m,
            n,
            columns,
            cost: vec![Rational::zero(); n + m],
            binv: (0..m).map(|i| vec![(i as u32, Rational::one())]).collect(),
            xb: self.rhs.iter().map(|b| b.abs()).collect(),
            basis: (n..n + m).collect(),
            basic,
            pi: vec![Rational::zero(); m],
            objective: Rational::zero(),
            eligible: vec![true; n + m],
            stall: 0,
            pivots: 0,
        }
    }

    /// Direct exact check of a guessed basis: primal values from `B x = b`,
    /// multipliers from `B^T π = c_B`, accepted only if both are feasible.
    fn check_basis(&self, guess: &[usize]) -> Option<SimplexSolution> {
        let n = self.columns.len();
        let m = self.rows;
        if guess.len() != m {
            return None;
        }
        let flip = |i: usize, v: &Rational| if self.rhs[i].is_negative() { -v } else { v.clone() };
        let column = |j: usize| -> SparseRow {
            if j < n {
                let mut c: SparseRow = self.columns[j]
                    .iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| (*i as u32, flip(*i, v)))
                    .collect();
                c.sort_unstable_by_key(|e| e.0);
                c
            } else {
                vec![((j - n) as u32, Rational::one())]
            }
        };
        let basis_columns: Vec<SparseRow> = guess.iter().map(|&j| column(j)).collect();
        let mut rows: Vec<SparseRow> = vec![Vec::new(); m];
        for (k, col) in basis_columns.iter().enumerate() {
            for (i, v) in col {
                rows[*i as usize].push((k as u32, v.clone()));
            }
        }
        let x = sparse_solve(rows, self.rhs.iter().map(|b| b.abs()).collect())?;
        let feasible = x
            .iter()
            .zip(guess)
            .all(|(v, &j)| if j >= n { v.is_zero() } else { !v.is_negative() });
        if !feasible {
            return None;
        }
        let cost = |j: usize| if j < n { self.cost[j].clone() } else { Rational::zero() };
        let pi = sparse_solve(basis_columns, guess.iter().map(|&j| cost(j)).collect())?;
        let in_basis: std::collections::HashSet<usize> = guess.iter().copied().collect();
        for j in (0..n).filter(|j| !in_basis.contains(j)) {
            let mut r = self.cost[j].clone();
            for (i, v) in &self.columns[j] {
                r -= &pi[*i] * flip(*i, v);
            }
            if r.is_negative() {
                return None;
            }
        }
        let mut values = vec![Rational::zero(); n];
        let mut objective = Rational::zero();
        for (v, &j) in x.into_iter().zip(guess) {
            if j < n {
                objective += &self.cost[j] * &v;
                values[j] = v;
            }
        }
        let multipliers = pi.iter().enumerate().map(|(i, p)| flip(i, p)).collect();
        Some(SimplexSolution {
            objective,
            values,
            multipliers,
            pivots: 0,
        })
    }

    /// Pivots the structural columns of `guess` into an artificial basis.
    fn install(&self, guess: &[usize]) -> Option<Revised> {
        let mut t = self.start();
        let n = t.n;
        for (pref, &e) in guess.iter().enumerate() {
            if e >= n {
                continue;
            }
            let d = t.ftran(e);
            let usable = |i: usize| t.basis[i] >= n && !d[i].is_zero();
            let r = if usable(pref) {
                pref
            } else {
                (0..t.m).find(|&i| usable(i))?
            };
            t.pivot(r, e, &d, &Rational::zero());
        }
        Some(t)
    }

    pub fn solve(&self) -> Result<SimplexSolution, SimplexError> {
        self.solve_with(true)
    }

    /// `warm = false` skips the floating-point basis guess.
    pub(crate) fn solve_with(&self, warm: bool) -> Result<SimplexSolution, SimplexError> {
        let n = self.columns.len();
        let m = self.rows;
        let mut cost = self.cost.clone();
        cost.resize(n + m, Rational::zero());
        let guess = if warm { super::float::guess_basis(self) } else { None };
        if let Some(done) = guess.as_deref().and_then(|g| self.check_basis(g)) {
            return Ok(done);
        }
        let warm = guess
            .and_then(|g| self.install(&g))
            .and_then(|mut t| {
                // The guess is usually optimal already; otherwise repair
                // primal feasibility exactly, then let phase two finish.
                t.eligible[n..].fill(false);
                t.reset_objective(cost.clone());
                match t.dual_run() {
                    Ok(true) => Some(Ok(t)),
                    Ok(false) => None,
                    Err(e) => Some(Err(e)),
                }
            });
        let mut t = match warm {
            Some(t) => t?,
            None => {
                let mut t = self.start();
                let mut phase1 = vec![Rational::zero(); n + m];
                phase1[n..].fill(Rational::one());
                t.reset_objective(phase1);
                t.run().expect("phase one is bounded below by zero");
                if t.objective.is_positive() {
                    return Err(SimplexError::Infeasible);
                }
                t
            }
        };

        // Drive zero-level artificials out where possible; rows with no
        // structural entry are redundant and keep their artificial at zero.
        for r in 0..m {
            if t.basis[r] < n {
                continue;
            }
            let found = (0..n).filter(|&j| !t.basic[j]).find(|&j| {
                let mut s = Rational::zero();
                for (k, v) in &t.columns[j] {
                    if let Some(b) = entry(&t.binv[r], *k) {
                        s += b * v;
                    }
                }
                !s.is_zero()
            });
            if let Some(j) = found {
                let d = t.ftran(j);
                t.pivot(r, j, &d, &Rational::zero());
            }
        }
        t.eligible[n..].fill(false);
        t.reset_objective(cost);
        t.run()?;

        let mut values = vec![Rational::zero(); n];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                values[b] = t.xb[i].clone();
            }
        }
        let multipliers = t
            .pi
            .iter()
            .zip(&self.rhs)
            .map(|(p, b)| if b.is_negative() { -p } else { p.clone() })
            .collect();
        Ok(SimplexSolution {
            objective: t.objective,
            values,
            multipliers,
            pivots: t.pivots,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    /// Solves with and without the float guess and insists they agree.
    fn both(p: &StandardForm) -> Result<SimplexSolution, SimplexError> {
        let warm = p.solve_with(true);
        let cold = p.solve_with(false);
        match (&warm, &cold) {
            (Ok(a), Ok(b)) => assert_eq!(a.objective, b.objective),
            (a, b) => assert_eq!(a.as_ref().err(), b.as_ref().err()),
        }
        warm
    }

    fn assert_optimal(p: &StandardForm, s: &SimplexSolution) {
        for (i, b) in p.rhs.iter().enumerate() {
            let lhs: Rational = p
                .columns
                .iter()
                .zip(&s.values)
                .flat_map(|(col, y)| col.iter().filter(move |e| e.0 == i).map(move |e| &e.1 * y))
                .sum();
            assert_eq!(&lhs, b);
        }
        assert!(s.values.iter().all(|y| !y.is_negative()));
        for (j, col) in p.columns.iter().enumerate() {
            let used: Rational = col.iter().map(|(i, v)| &s.multipliers[*i] * v).sum();
            assert!(&p.cost[j] - used >= Rational::zero());
        }
        let dual: Rational = s.multipliers.iter().zip(&p.rhs).map(|(a, b)| a * b).sum();
        assert_eq!(dual, s.objective);
    }

    fn small_lp() -> impl Strategy<Value = StandardForm> {
        (1usize..4, 1usize..7).prop_flat_map(|(m, n)| {
            (
                prop::collection::vec(prop::collection::vec(-3i64..4, m), n),
                prop::collection::vec(-2i64..5, m),
                prop::collection::vec(-3i64..4, n),
            )
                .prop_map(move |(cols, rhs, cost)| StandardForm {
                    rows: m,
                    columns: cols
                        .iter()
                        .map(|c| c.iter().enumerate().map(|(i, &v)| (i, int(v))).collect())
                        .collect(),
                    rhs: rhs.iter().map(|&v| int(v)).collect(),
                    cost: cost.iter().map(|&v| int(v)).collect(),
                })
        })
    }

    proptest! {
        #[test]
        fn warm_and_cold_solves_agree(p in small_lp()) {
            if let Ok(s) = both(&p) {
                assert_optimal(&p, &s);
            }
        }
    }

    fn lp(rows: usize, cols: &[&[(usize, i64)]], rhs: &[i64], cost: &[i64]) -> StandardForm {
        StandardForm {
            rows,
            columns: cols
                .iter()
                .map(|c| c.iter().map(|&(i, v)| (i, int(v))).collect())
                .collect(),
            rhs: rhs.iter().map(|&v| int(v)).collect(),
            cost: cost.iter().map(|&v| int(v)).collect(),
        }
    }

    #[test]
    fn small_optimum_with_duals() {
        // min -x1 - x2  s.t. x1 + 2x2 + s1 = 4, 3x1 + x2 + s2 = 6
        let p = lp(
            2,
            &[&[(0, 1), (1, 3)], &[(0, 2), (1, 1)], &[(0, 1)], &[(1, 1)]],
            &[4, 6],
            &[-1, -1, 0, 0],
        );
        let s = both(&p).unwrap();
        assert_eq!(s.objective, ratio(-14, 5));
        assert_eq!(s.values[0], ratio(8, 5));
        assert_eq!(s.values[1], ratio(6, 5));
        // strong duality: π·b equals the optimum, reduced costs nonnegative
        let dual: Rational = s.multipliers.iter().zip(&p.rhs).map(|(a, b)| a * b).sum();
        assert_eq!(dual, s.objective);
        for (j, col) in p.columns.iter().enumerate() {
            let used: Rational = col.iter().map(|(i, v)| &s.multipliers[*i] * v).sum();
            assert!(&p.cost[j] - used >= Rational::zero());
        }
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        // min x  s.t. -x + s = -3  (x >= 3)
        let p = lp(1, &[&[(0, -1)], &[(0, 1)]], &[-3], &[1, 0]);
        let s = both(&p).unwrap();
        assert_eq!(s.objective, int(3));
        assert_eq!(s.multipliers[0], int(-1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x = -1 with x >= 0
        assert_eq!(both(&lp(1, &[&[(0, 1)]], &[-1], &[0])).unwrap_err(), SimplexError::Infeasible);
        // min -x  s.t. x - s = 0
        assert_eq!(
            both(&lp(1, &[&[(0, 1)], &[(0, -1)]], &[0], &[-1, 0])).unwrap_err(),
            SimplexError::Unbounded
        );
    }

    #[test]
    fn redundant_rows() {
        // x + y = 2 stated twice
        let p = lp(2, &[&[(0, 1), (1, 1)], &[(0, 1), (1, 1)]], &[2, 2], &[1, 2]);
        let s = both(&p).unwrap();
        assert_eq!(s.objective, int(2));
        assert_eq!(s.values, vec![int(2), int(0)]);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the largest-coefficient rule.
        // min -3/4 x4 + 20 x5 - 1/2 x6 + 6 x7
        let p = StandardForm {
            rows: 3,
            columns: vec![
                vec![(0, int(1))],
                vec![(1, int(1))],
                vec![(2, int(1))],
                vec![(0, ratio(1, 4)), (1, ratio(1, 2))],
                vec![(0, int(-8)), (1, int(-12))],
                vec![(0, int(-1)), (1, ratio(-1, 2)), (2, int(1))],
                vec![(0, int(9)), (1, int(3))],
            ],
            rhs: vec![int(0), int(0), int(1)],
            cost: vec![int(0), int(0), int(0), ratio(-3, 4), int(20), ratio(-1, 2), int(6)],
        };
        assert_eq!(both(&p).unwrap().objective, ratio(-5, 4));
    }
}
