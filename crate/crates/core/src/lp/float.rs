//! Floating-point revised simplex used only to guess a starting basis for the
//! exact solver. Its answer is never trusted: the exact phase recomputes the
//! basis in rationals and keeps pivoting until exact optimality.

use num_traits::{Signed, ToPrimitive};

use super::simplex::StandardForm;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const STALL_LIMIT: usize = 64;

struct Dense {
    m: usize,
    n: usize,
    columns: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    /// Row-major basis inverse.
    binv: Vec<f64>,
    xb: Vec<f64>,
    basis: Vec<usize>,
    basic: Vec<bool>,
    eligible: Vec<bool>,
    stall: usize,
    budget: usize,
}

impl Dense {
    fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }

    fn multipliers(&self) -> Vec<f64> {
        let mut pi = vec![0.0; self.m];
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = self.cost[b];
            if cb != 0.0 {
                let row = &self.binv[i * self.m..(i + 1) * self.m];
                for (p, v) in pi.iter_mut().zip(row) {
                    *p += cb * v;
                }
            }
        }
        pi
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let col = self.column(j);
        (0..self.m)
            .map(|i| col.iter().map(|&(k, v)| self.binv[i * self.m + k] * v).sum())
            .collect()
    }

    fn pivot(&mut self, r: usize, e: usize, d: &[f64]) {
        let m = self.m;
        let inv = 1.0 / d[r];
        for v in &mut self.binv[r * m..(r + 1) * m] {
            *v *= inv;
        }
        self.xb[r] *= inv;
        let prow: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
        for (i, &di) in d.iter().enumerate() {
            if i == r || di.abs() < 1e-14 {
                continue;
            }
            for (v, p) in self.binv[i * m..(i + 1) * m].iter_mut().zip(&prow) {
                *v -= di * p;
            }
            self.xb[i] -= di * self.xb[r];
        }
        if self.xb[r].abs() < PIVOT_TOL {
            self.stall += 1;
        } else {
            self.stall = 0;
        }
        self.basic[self.basis[r]] = false;
        self.basic[e] = true;
        self.basis[r] = e;
    }

    /// `Some(true)` at optimality, `None` when unbounded or out of budget.
    fn step(&mut self) -> Option<bool> {
        if self.budget == 0 {
            return None;
        }
        self.budget -= 1;
        let pi = self.multipliers();
        let bland = self.stall >= STALL_LIMIT;
        let mut entering: Option<(usize, f64)> = None;
        for j in 0..self.n + self.m {
            if self.basic[j] || !self.eligible[j] {
                continue;
            }
            let r = self.cost[j] - self.column(j).iter().map(|&(i, v)| pi[i] * v).sum::<f64>();
            if r >= -COST_TOL {
                continue;
            }
            if bland {
                entering = Some((j, r));
                break;
            }
            if entering.is_none_or(|(_, best)| r < best) {
                entering = Some((j, r));
            }
        }
        let Some((e, _)) = entering else {
            return Some(true);
        };
        let d = self.ftran(e);
        let mut best: Option<(usize, f64)> = None;
        for (i, &a) in d.iter().enumerate() {
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = self.xb[i].max(0.0) / a;
            let better = match best {
                None => true,
                Some((bi, br)) => {
                    ratio < br - 1e-12 || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi])
                }
            };
            if better {
                best = Some((i, ratio));
            }
        }
        let (r, _) = best?;
        self.pivot(r, e, &d);
        Some(false)
    }

    fn run(&mut self) -> Option<()> {
        while !self.step()? {}
        Some(())
    }

    /// How far row `i` is outside its bounds; artificials are fixed at zero.
    fn infeasibility(&self, i: usize) -> f64 {
        if self.basis[i] >= self.n {
            self.xb[i].abs()
        } else {
            (-self.xb[i]).max(0.0)
        }
    }

    /// Dual simplex from a dual-feasible basis after the perturbation is
    /// removed.
    fn dual_cleanup(&mut self, rhs: &[f64]) -> Option<()> {
        let m = self.m;
        self.xb = (0..m)
            .map(|i| self.binv[i * m..(i + 1) * m].iter().zip(rhs).map(|(a, b)| a * b).sum())
            .collect();
        loop {
            if self.budget == 0 {
                return None;
            }
            self.budget -= 1;
            let (r, worst) = (0..m)
                .map(|i| (i, self.infeasibility(i)))
                .max_by(|a, b| a.1.total_cmp(&b.1))?;
            if worst < 1e-9 {
                return Some(());
            }
            let pi = self.multipliers();
            let rho = &self.binv[r * m..(r + 1) * m];
            let down = self.xb[r] > 0.0;
            let mut best: Option<(usize, f64, f64)> = None;
            for j in 0..self.n + m {
                if self.basic[j] || !self.eligible[j] {
                    continue;
                }
                let col = self.column(j);
                let alpha: f64 = col.iter().map(|&(k, v)| rho[k] * v).sum();
                if (down && alpha <= PIVOT_TOL) || (!down && alpha >= -PIVOT_TOL) {
                    continue;
                }
                let reduced = self.cost[j] - col.iter().map(|&(i, v)| pi[i] * v).sum::<f64>();
                let ratio = reduced.max(0.0) / alpha.abs();
                let better = match best {
                    None => true,
                    Some((_, br, ba)) => {
                        ratio < br - 1e-12 || (ratio <= br + 1e-12 && alpha.abs() > ba)
                    }
                };
                if better {
                    best = Some((j, ratio, alpha.abs()));
                }
            }
            let (e, _, _) = best?;
            let d = self.ftran(e);
            self.pivot(r, e, &d);
        }
    }
}

/// A basis (column per row, artificials numbered `n..n+m`) that is optimal
/// for a slightly perturbed right-hand side, or `None` if the float solve
/// gave up. Rows with negative right-hand side are flipped as in the exact
/// solver.
pub(super) fn guess_basis(lp: &StandardForm) -> Option<Vec<usize>> {
    let n = lp.columns.len();
    let m = lp.rows;
    let sign: Vec<f64> = lp
        .rhs
        .iter()
        .map(|b| if b < &num_traits::Zero::zero() { -1.0 } else { 1.0 })
        .collect();
    let mut columns: Vec<Vec<(usize, f64)>> = lp
        .columns
        .iter()
        .map(|c| c.iter().map(|(i, v)| (*i, sign[*i] * v.to_f64().unwrap_or(0.0))).collect())
        .collect();
    columns.extend((0..m).map(|i| vec![(i, 1.0)]));
    // Deterministic perturbation breaks the heavy degeneracy of entropy LPs.
    let exact_rhs: Vec<f64> = lp
        .rhs
        .iter()
        .map(|b| b.abs().to_f64().unwrap_or(0.0))
        .collect();
    let xb = lp
        .rhs
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let jitter = ((i as u64).wrapping_mul(2_654_435_761) % 1000) as f64 / 1000.0;
            sign[i] * b.to_f64().unwrap_or(0.0) + 1e-6 * (1.0 + jitter)
        })
        .collect();
    let mut binv = vec![0.0; m * m];
    for i in 0..m {
        binv[i * m + i] = 1.0;
    }
    let mut basic = vec![false; n + m];
    basic[n..].fill(true);
    let mut cost = vec![0.0; n + m];
    cost[n..].fill(1.0);
    let mut t = Dense {
        m,
        n,
        columns,
        cost,
        binv,
        xb,
        basis: (n..n + m).collect(),
        basic,
        eligible: vec![true; n + m],
        stall: 0,
        budget: 50 * (n + m),
    };
    t.run()?;
    for r in 0..m {
        if t.basis[r] < n {
            continue;
        }
        let row: Vec<f64> = t.binv[r * m..(r + 1) * m].to_vec();
        let found = (0..n).filter(|&j| !t.basic[j]).find(|&j| {
            t.columns[j].iter().map(|&(k, v)| row[k] * v).sum::<f64>().abs() > 1e-7
        });
        if let Some(j) = found {
            let d = t.ftran(j);
            t.pivot(r, j, &d);
        }
    }
    t.eligible[n..].fill(false);
    for (j, c) in lp.cost.iter().enumerate() {
        t.cost[j] = c.to_f64().unwrap_or(0.0);
    }
    t.cost[n..].fill(0.0);
    t.stall = 0;
    t.run()?;
    t.dual_cleanup(&exact_rhs)?;
    Some(t.basis)
}
