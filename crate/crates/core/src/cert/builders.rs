//! Certificates for the hypercube lemmas, built for any dimension.
//!
//! Everything is phrased on a canonical `C*_d` (cube vertex `c`, its pendant
//! `2^d + c`) and mapped into the host graph through a [`CubeStarFrame`], so
//! the same builders serve `C*_d` itself and each `C*_d` inside a `D_d`.

use num_traits::One;

use crate::cert::certificate::{Certificate, Inequality, Step};
use crate::cert::expr::{bracket, LinearExpr};
use crate::cert::instance::{InequalityInstance as I, Sign};
use crate::error::{Error, Result};
use crate::graph::{build_cube_star, induced_cube_star_views, CubeStarLayout, LabeledGraph};
use crate::rational::{int, Rational};
use crate::vertex_set::VertexSet;

/// Maximum dimension accepted by the certificate builders.
pub const MAX_CERT_DIMENSION: usize = 12;

/// Host vertex ids of a canonical `C*_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeStarFrame {
    pub d: usize,
    pub map: Vec<usize>,
}

/// Locates a `C*_d` in `g` from its construction labels.
pub fn cube_star_frame(g: &LabeledGraph, d: usize) -> Result<CubeStarFrame> {
    let layout = CubeStarLayout::of(g)?;
    if layout.d != d {
        return Err(Error::structure(format!(
            "graph is C*_{}, expected C*_{d}",
            layout.d
        )));
    }
    Ok(CubeStarFrame {
        d,
        map: layout.canonical_map(),
    })
}

/// A subcube of the frame: coordinates `base + low` for `low < 2^dims`.
#[derive(Clone, Copy)]
struct Subcube {
    dims: usize,
    base: usize,
}

impl Subcube {
    fn coords(self) -> impl Iterator<Item = usize> {
        (0..1usize << self.dims).map(move |low| self.base + low)
    }
}

fn even(c: usize) -> bool {
    c.count_ones().is_multiple_of(2)
}

impl CubeStarFrame {
    fn cube(&self, c: usize) -> usize {
        self.map[c]
    }

    fn pendant(&self, c: usize) -> usize {
        self.map[(1 << self.d) + c]
    }

    /// Even cube vertices and the pendants of odd ones; parity is global so
    /// the sides of the two halves of a subcube union to the whole side.
    fn x_side(&self, sub: Subcube) -> VertexSet {
        sub.coords()
            .map(|c| if even(c) { self.cube(c) } else { self.pendant(c) })
            .collect()
    }

    fn a_side(&self, sub: Subcube) -> VertexSet {
        sub.coords().filter(|&c| even(c)).map(|c| self.cube(c)).collect()
    }

    fn b_side(&self, sub: Subcube) -> VertexSet {
        sub.coords().filter(|&c| !even(c)).map(|c| self.cube(c)).collect()
    }

    fn cube_sum(&self, sub: Subcube) -> LinearExpr {
        sub.coords()
            .map(|c| (VertexSet::singleton(self.cube(c)), Rational::one()))
            .collect()
    }

    fn bracket(&self, sub: Subcube) -> LinearExpr {
        bracket(&self.x_side(sub), &self.b_side(sub), &self.a_side(sub))
            .expect("A side lies inside X side")
    }
}

fn whole(frame: &CubeStarFrame) -> Subcube {
    Subcube {
        dims: frame.d,
        base: 0,
    }
}

fn set(vs: &[usize]) -> VertexSet {
    vs.iter().copied().collect()
}

/// The four inequalities pairing `b` in one half with its match `m` in the
/// other half. `nb` is a neighbor of `b` inside its own half. Their sum is
/// `f(bX) − f(X) + f(X') − f(X'−m) ≥ f(bXX') − f(XX'−m) + 1`.
fn matching_edge_block(
    b: usize,
    nb: usize,
    m: usize,
    own: &VertexSet,
    other: &VertexSet,
    out: &mut Vec<Step>,
) {
    let both = own.union(other);
    let b_other = other.with(b);
    out.push(Step::new(I::Submodularity(own.with(b), both.without(m))));
    out.push(Step::new(I::StrongSubmodularity(
        b_other.clone(),
        b_other.with(nb).without(m),
    )));
    out.push(Step::new(I::Submodularity(other.clone(), b_other.without(m))));
    out.push(Step::new(I::Submodularity(b_other.with(nb), both.with(b).without(m))));
}

fn lemma1_steps(frame: &CubeStarFrame, sub: Subcube, out: &mut Vec<Step>) {
    if sub.dims == 1 {
        let (ca, cb) = if even(sub.base) {
            (sub.base, sub.base + 1)
        } else {
            (sub.base + 1, sub.base)
        };
        let (a, b, x) = (frame.cube(ca), frame.cube(cb), frame.pendant(cb));
        out.extend(base_case_instances(a, b, x).into_iter().map(Step::new));
        return;
    }
    let half = sub.dims - 1;
    let low = Subcube { dims: half, base: sub.base };
    let high = Subcube {
        dims: half,
        base: sub.base + (1 << half),
    };
    lemma1_steps(frame, low, out);
    lemma1_steps(frame, high, out);
    let (x_low, x_high) = (frame.x_side(low), frame.x_side(high));
    for (own, own_x, other_x) in [(low, &x_low, &x_high), (high, &x_high, &x_low)] {
        for c in own.coords().filter(|&c| !even(c)) {
            let b = frame.cube(c);
            let nb = frame.cube(c ^ 1);
            let m = frame.cube(c ^ (1 << half));
            matching_edge_block(b, nb, m, own_x, other_x, out);
        }
    }
}

/// Base case on the path `x − b − a − y`: strong submodularity on the two
/// edges `ab` and `bx` meeting in `b`, then splitting `f(ab)` and `f(bx)`.
/// Sums to `f(a) + f(b) + f(x) − f(abx) ≥ 1`.
fn base_case_instances(a: usize, b: usize, x: usize) -> [I; 5] {
    [
        I::StrongSubmodularity(set(&[a, b]), set(&[b, x])),
        I::Submodularity(set(&[a]), set(&[b])),
        I::Submodularity(set(&[b]), set(&[x])),
        I::EmptyZero(Sign::Plus),
        I::EmptyZero(Sign::Plus),
    ]
}

fn lemma2_steps(frame: &CubeStarFrame, out: &mut Vec<Step>) {
    let all = whole(frame);
    let x = frame.x_side(all);
    // The dimension-0 matching pairs each even a with b = a ^ 1.
    for c in all.coords().filter(|&c| even(c)) {
        let (a, b, y) = (frame.cube(c), frame.cube(c ^ 1), frame.pendant(c));
        let yx = x.with(y);
        out.push(Step::new(I::StrongMonotonicity {
            subset: x.clone(),
            superset: x.with(b),
        }));
        out.push(Step::new(I::StrongMonotonicity {
            subset: yx.without(a),
            superset: yx.clone(),
        }));
        out.push(Step::new(I::Submodularity(yx.without(a), x.clone())));
    }
}

fn certificate(g: &LabeledGraph, steps: Vec<Step>, lhs: LinearExpr, bound: Rational) -> Result<Certificate> {
    for (i, step) in steps.iter().enumerate() {
        step.instance
            .validate(g)
            .map_err(|e| Error::Internal(format!("builder emitted bad step {i}: {e}")))?;
    }
    Ok(Certificate {
        graph: g.clone(),
        steps,
        target: Inequality { lhs, bound },
    })
}

fn check_dimension(d: usize) -> Result<()> {
    if !(1..=MAX_CERT_DIMENSION).contains(&d) {
        return Err(Error::param(format!(
            "certificate dimension {d} outside 1..={MAX_CERT_DIMENSION}"
        )));
    }
    Ok(())
}


/// `Σ_{v∈C_d} f(v) − [[X_d, B_d, A_d]] ≥ d·2^(d−1)`, by induction on `d`.
pub fn build_lemma1(d: usize, g: &LabeledGraph) -> Result<Certificate> {
    check_dimension(d)?;
    let frame = cube_star_frame(g, d)?;
    let mut steps = Vec::new();
    lemma1_steps(&frame, whole(&frame), &mut steps);
    let mut lhs = frame.cube_sum(whole(&frame));
    lhs.add_scaled(&frame.bracket(whole(&frame)), &-Rational::one());
    certificate(g, steps, lhs, int((d << (d - 1)) as i64))
}

/// The `d = 1` instance of [`build_lemma1`]: five steps proving
/// `f(a) + f(b) − f(abx) + f(x) ≥ 1` on `C*_1`.
pub fn lemma1_base_case(g: &LabeledGraph) -> Result<Certificate> {
    build_lemma1(1, g)
}

/// `[[X_d, B_d, A_d]] ≥ 2^d`.
pub fn build_lemma2(d: usize, g: &LabeledGraph) -> Result<Certificate> {
    check_dimension(d)?;
    let frame = cube_star_frame(g, d)?;
    let mut steps = Vec::new();
    lemma2_steps(&frame, &mut steps);
    certificate(g, steps, frame.bracket(whole(&frame)), int(1 << d))
}

fn lemma3_steps(frame: &CubeStarFrame) -> Vec<Step> {
    let mut steps = Vec::new();
    lemma1_steps(frame, whole(frame), &mut steps);
    lemma2_steps(frame, &mut steps);
    steps
}

fn lemma3_bound(d: usize) -> Rational {
    int(((d + 2) << (d - 1)) as i64)
}

/// `Σ_{v∈C_d} f(v) ≥ (d+2)·2^(d−1)`: the steps of lemmas 1 and 2 together.
pub fn build_lemma3(d: usize, g: &LabeledGraph) -> Result<Certificate> {
    check_dimension(d)?;
    let frame = cube_star_frame(g, d)?;
    let lhs = frame.cube_sum(whole(&frame));
    certificate(g, lemma3_steps(&frame), lhs, lemma3_bound(d))
}

/// [`build_lemma3`] on the canonical `C*_d`, with the implied worst-case bound
/// `(d+2)/2` obtained by averaging over the `2^d` cube vertices.
pub fn build_theorem_worst(d: usize) -> Result<(Certificate, Rational)> {
    check_dimension(d)?;
    let g = build_cube_star(d)?;
    let cert = build_lemma3(d, &g)?;
    let bound = cert
        .worst_case_bound()
        .ok_or_else(|| Error::Internal("lemma 3 target is not a singleton sum".into()))?;
    Ok((cert, bound))
}

/// Three copies of [`build_lemma3`], one per induced `C*_d` of a `D_d`, giving
/// `Σ_v f(v) ≥ 3(d+2)·2^(d−1)` and the average-case bound `(d+2)/2`.
pub fn build_theorem_average(d: usize, g: &LabeledGraph) -> Result<(Certificate, Rational)> {
    check_dimension(d)?;
    let views = induced_cube_star_views(g)?;
    if g.vertex_count() != 3 << d {
        return Err(Error::structure(format!("graph is not a D_{d}")));
    }
    let mut steps = Vec::new();
    let mut lhs = LinearExpr::zero();
    for view in &views {
        let frame = CubeStarFrame {
            d,
            map: view.map.clone(),
        };
        steps.extend(lemma3_steps(&frame));
        lhs += &frame.cube_sum(whole(&frame));
    }
    let cert = certificate(g, steps, lhs, lemma3_bound(d) * int(3))?;
    let bound = cert
        .average_case_bound()
        .ok_or_else(|| Error::Internal("average target is not a singleton sum".into()))?;
    Ok((cert, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::certificate::{Reason, Verdict};
    use crate::graph::{build_delta, DeltaMatchings};
    use crate::rational::ratio;

    #[test]
    fn base_case_shape() {
        let g = build_cube_star(1).unwrap();
        let cert = lemma1_base_case(&g).unwrap();
        assert_eq!(cert.steps.len(), 5);
        assert_eq!(cert.check(), Verdict::Valid);
        // a=0, b=1, x=3: f(a) + f(b) − f(abx) + f(x) ≥ 1
        let want: LinearExpr = [
            (set(&[0]), int(1)),
            (set(&[1]), int(1)),
            (set(&[0, 1, 3]), int(-1)),
            (set(&[3]), int(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(cert.target.lhs, want);
        assert_eq!(cert.target.bound, int(1));
    }

    #[test]
    fn negative_coefficient_rejected() {
        let g = build_cube_star(1).unwrap();
        let mut cert = lemma1_base_case(&g).unwrap();
        cert.steps[2].coeff = int(-1);
        assert_eq!(cert.check(), Verdict::Invalid(Reason::NegativeCoefficient { step: 2 }));
    }

    #[test]
    fn dropping_a_step_is_caught() {
        let g = build_cube_star(2).unwrap();
        let mut cert = build_lemma1(2, &g).unwrap();
        cert.steps.remove(7);
        assert!(matches!(cert.check(), Verdict::Invalid(Reason::TermMismatch { .. })));
        let mut cert = build_lemma2(2, &g).unwrap();
        cert.target.bound = int(5);
        assert!(matches!(cert.check(), Verdict::Invalid(Reason::BoundNotMet { .. })));
    }

    #[test]
    fn lemma_bounds_small_dimensions() {
        for d in 1..=4 {
            let g = build_cube_star(d).unwrap();
            let l1 = build_lemma1(d, &g).unwrap();
            let l2 = build_lemma2(d, &g).unwrap();
            let l3 = build_lemma3(d, &g).unwrap();
            assert_eq!(l1.check(), Verdict::Valid, "build_lemma1, d={d}");
            assert_eq!(l2.check(), Verdict::Valid, "build_lemma2, d={d}");
            assert_eq!(l3.check(), Verdict::Valid, "build_lemma3, d={d}");
            assert_eq!(l1.target.bound, int((d << (d - 1)) as i64));
            assert_eq!(l2.target.bound, int(1 << d));
            assert_eq!(l2.steps.len(), 3 << (d - 1));
            assert_eq!(l3.target.bound, int(((d + 2) << (d - 1)) as i64));
        }
        let g = build_cube_star(1).unwrap();
        assert_eq!(build_lemma3(1, &g).unwrap().target.bound, int(3));
    }

    #[test]
    fn theorems_small() {
        let (cert, bound) = build_theorem_worst(2).unwrap();
        assert!(cert.check().is_valid());
        assert_eq!(bound, int(2));
        let d1 = build_delta(1, &DeltaMatchings::Seeded(0)).unwrap();
        let (cert, bound) = build_theorem_average(1, &d1).unwrap();
        assert!(cert.check().is_valid());
        assert_eq!(bound, ratio(3, 2));
    }

    #[test]
    fn wrong_family_is_a_structure_error() {
        let cube = crate::graph::build_hypercube(3).unwrap();
        assert!(matches!(build_lemma1(3, &cube), Err(Error::Structure(_))));
        let g = build_cube_star(2).unwrap();
        assert!(matches!(build_lemma2(3, &g), Err(Error::Structure(_))));
        assert!(matches!(build_theorem_average(2, &g), Err(Error::Structure(_))));
    }

    #[test]
    fn bracket_recursion_matches_edge_blocks() {
        // [[X,B,A]] + [[X',B',A']] − [[X_{d+1},B_{d+1},A_{d+1}]] equals the
        // summed matching-edge blocks minus 2^d.
        for d in 1..=6 {
            let g = build_cube_star(d + 1).unwrap();
            let frame = cube_star_frame(&g, d + 1).unwrap();
            let low = Subcube { dims: d, base: 0 };
            let high = Subcube { dims: d, base: 1 << d };
            let mut want = frame.bracket(low);
            want += &frame.bracket(high);
            want.add_scaled(&frame.bracket(whole(&frame)), &-Rational::one());

            let (x_low, x_high) = (frame.x_side(low), frame.x_side(high));
            let mut blocks = Vec::new();
            for (own, own_x, other_x) in [(low, &x_low, &x_high), (high, &x_high, &x_low)] {
                for c in own.coords().filter(|&c| !even(c)) {
                    matching_edge_block(c, c ^ 1, c ^ (1 << d), own_x, other_x, &mut blocks);
                }
            }
            let mut sum = LinearExpr::zero();
            let mut constant = Rational::from_integer(0.into());
            for step in &blocks {
                let (e, b) = step.instance.expr(&g).unwrap();
                sum += &e;
                constant += b;
            }
            assert!(sum.same_terms(&want), "d={d}");
            assert_eq!(constant, int(1 << d));
        }
    }
}
