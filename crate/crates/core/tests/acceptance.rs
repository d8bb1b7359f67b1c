//! Acceptance criteria, one line of output each.
//!
//! Run with `cargo test -p ssratio-core --test acceptance`.

use std::time::{Duration, Instant};

use ssratio_core::cert::{
    build_lemma1, build_lemma2, build_lemma3, build_theorem_average, build_theorem_worst,
    Certificate, Inequality, InequalityInstance as I, LinearExpr, Reason, Sign, Step, Verdict,
};
use ssratio_core::lp::{build_lp, extract_dual_certificate, shannon_bound};
use ssratio_core::rational::{int, ratio};
use ssratio_core::scheme::{
    build_star_scheme, build_star_scheme_with, exhaustive_entropies, information_ratios,
    verify_perfect_with, IndependentSets, LinearScheme, PointAssignment,
    PrimeField,
};
use ssratio_core::{build_cube_star, build_delta, DeltaMatchings, LabeledGraph, Mode, VertexSet};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

/// Criteria that cannot pass as stated. The runner still evaluates them and
/// insists that they keep failing, so a change in behaviour is noticed.
const EXPECTED_FAILURES: &[u32] = &[8];

const SEEDS: [u64; 3] = [0, 1, 7];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn path(n: usize) -> LabeledGraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    LabeledGraph::plain(n, &edges).unwrap()
}

fn delta(d: usize, seed: u64) -> LabeledGraph {
    build_delta(d, &DeltaMatchings::Seeded(seed)).unwrap()
}

fn scheme_for(g: &LabeledGraph) -> Result<LinearScheme, String> {
    let q = PrimeField::at_least(g.vertex_count() as u64).map_err(err)?.modulus();
    build_star_scheme(g, q).map_err(err)
}

fn lp_worst() -> Outcome {
    let (v1, t1) = timed(|| shannon_bound(&build_cube_star(1).unwrap(), Mode::Worst));
    let v1 = v1.map_err(err)?;
    ensure(v1 == ratio(3, 2), || format!("C*_1 gave {v1}"))?;
    ensure(t1 < Duration::from_secs(1), || format!("C*_1 took {t1:?}"))?;
    let (v2, t2) = timed(|| shannon_bound(&build_cube_star(2).unwrap(), Mode::Worst));
    let v2 = v2.map_err(err)?;
    ensure(v2 == int(2), || format!("C*_2 gave {v2}"))?;
    ensure(t2 < Duration::from_secs(120), || format!("C*_2 took {t2:?}"))?;
    Ok(format!("C*_1 = {v1} in {t1:.2?}, C*_2 = {v2} in {t2:.2?}"))
}

fn lp_average() -> Outcome {
    let (v, t) = timed(|| shannon_bound(&delta(1, 0), Mode::Average));
    let v = v.map_err(err)?;
    ensure(v == ratio(3, 2), || format!("D_1 gave {v}"))?;
    ensure(t < Duration::from_secs(10), || format!("D_1 took {t:?}"))?;
    Ok(format!("D_1 = {v} in {t:.2?}"))
}

fn checked(cert: &Certificate, what: &str, slowest: &mut Duration) -> Result<(), String> {
    let (verdict, t) = timed(|| cert.check());
    *slowest = (*slowest).max(t);
    ensure(verdict.is_valid(), || format!("{what}: {verdict}"))?;
    ensure(t < Duration::from_secs(10), || format!("{what}: check took {t:?}"))
}

fn certificate_suite() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for d in 1..=8usize {
        let g = build_cube_star(d).unwrap();
        let pow = 1i64 << (d - 1);
        let expected = [d as i64 * pow, 2 * pow, (d as i64 + 2) * pow];
        let certs = [
            build_lemma1(d, &g).map_err(err)?,
            build_lemma2(d, &g).map_err(err)?,
            build_lemma3(d, &g).map_err(err)?,
        ];
        for (k, (cert, bound)) in certs.iter().zip(expected).enumerate() {
            let what = format!("lemma {} at d={d}", k + 1);
            checked(cert, &what, &mut slowest)?;
            ensure(cert.target.bound == int(bound), || format!("{what}: bound {}", cert.target.bound))?;
            count += 1;
        }
        let (cert, bound) = build_theorem_worst(d).map_err(err)?;
        checked(&cert, &format!("worst theorem at d={d}"), &mut slowest)?;
        ensure(bound == ratio(d as i64 + 2, 2), || format!("worst theorem at d={d}: {bound}"))?;
        count += 1;
    }
    for d in 1..=6usize {
        for seed in SEEDS {
            let (cert, bound) = build_theorem_average(d, &delta(d, seed)).map_err(err)?;
            let what = format!("average theorem at d={d}, seed {seed}");
            checked(&cert, &what, &mut slowest)?;
            ensure(bound == ratio(d as i64 + 2, 2), || format!("{what}: {bound}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} certificates valid, slowest check {slowest:.2?}"))
}

fn sandwich() -> Outcome {
    for delta_ in 2..=8usize {
        let d = delta_ - 1;
        let target = ratio(delta_ as i64 + 1, 2);
        let g = build_cube_star(d).unwrap();
        ensure(g.max_degree() == delta_, || format!("C*_{d} has max degree {}", g.max_degree()))?;
        let upper = information_ratios(&scheme_for(&g)?).max;
        let (_, lower) = build_theorem_worst(d).map_err(err)?;
        ensure(upper == target && lower == target, || {
            format!("C*_{d}: scheme {upper}, certificate {lower}, expected {target}")
        })?;
    }
    for delta_ in 2..=6usize {
        let d = delta_ - 1;
        let target = ratio(delta_ as i64 + 1, 2);
        for seed in SEEDS {
            let g = delta(d, seed);
            let upper = information_ratios(&scheme_for(&g)?).average;
            let (_, lower) = build_theorem_average(d, &g).map_err(err)?;
            ensure(upper == target && lower == target, || {
                format!("D_{d} seed {seed}: scheme {upper}, certificate {lower}, expected {target}")
            })?;
        }
    }
    Ok("C*_1..C*_7 worst and D_1..D_5 average meet exactly".into())
}

fn perfectness() -> Outcome {
    let exhaustive = [
        ("K_2", path(2)),
        ("P_4", path(4)),
        ("C*_2", build_cube_star(2).unwrap()),
        ("C*_3", build_cube_star(3).unwrap()),
        ("D_1", delta(1, 0)),
        ("D_2", delta(2, 0)),
    ];
    let mut sets = 0;
    for (name, g) in &exhaustive {
        let r = verify_perfect_with(&scheme_for(g)?, g, IndependentSets::Exhaustive).map_err(err)?;
        ensure(r.is_perfect(), || format!("{name}: {r:?}"))?;
        sets += r.independent_sets_checked;
    }
    for d in [4usize, 5] {
        let g = build_cube_star(d).unwrap();
        let plan = IndependentSets::Sampled {
            samples: 10_000,
            seed: d as u64,
        };
        let r = verify_perfect_with(&scheme_for(&g)?, &g, plan).map_err(err)?;
        ensure(r.is_perfect() && r.independent_sets_checked >= 10_000, || format!("C*_{d}: {r:?}"))?;
        ensure(r.edges_checked == g.edge_count(), || format!("C*_{d}: not every edge checked"))?;
    }
    Ok(format!("{sets} maximal independent sets enumerated; C*_4, C*_5 sampled 10^4 each"))
}

fn oracle_equivalence() -> Outcome {
    let mut compared = 0;
    for (name, g) in [("K_2", path(2)), ("P_4", path(4))] {
        // four stars do not fit distinct points in GF(3); a proper colouring does
        let s = build_star_scheme_with(&g, 3, PointAssignment::Coloring).map_err(err)?;
        let mut subsets: Vec<VertexSet> = (0..g.vertex_count()).map(VertexSet::singleton).collect();
        subsets.extend(g.edges().map(|(u, v)| VertexSet::from_iter([u, v])));
        let h = exhaustive_entropies(&s, &subsets).map_err(err)?;
        for (a, e) in subsets.iter().zip(&h) {
            let rank = s.entropy_rank(a).map_err(err)? as u32;
            ensure(e.exact_units == Some(rank), || {
                format!("{name} {a:?}: enumeration {:?}, rank {rank}", e.exact_units)
            })?;
            compared += 1;
        }
    }
    Ok(format!("{compared} subsets agree"))
}

fn duality() -> Outcome {
    let mut parts = Vec::new();
    for (name, g) in [("K_2", path(2)), ("P_4", path(4)), ("C*_2", build_cube_star(2).unwrap())] {
        let lp = build_lp(&g, Mode::Worst).map_err(err)?;
        let sol = lp.solve().map_err(err)?;
        let cert = extract_dual_certificate(&lp, &sol).map_err(err)?;
        ensure(cert.check().is_valid(), || format!("{name}: dual certificate rejected"))?;
        let implied = cert.worst_case_bound();
        ensure(implied.as_ref() == Some(&sol.objective_value), || {
            format!("{name}: implied {implied:?}, optimum {}", sol.objective_value)
        })?;
        parts.push(format!("{name} = {}", sol.objective_value));
    }
    Ok(parts.join(", "))
}

/// The base-case derivation on the path x-b-a-y built from strong
/// submodularity on ({a,b},{a,x}) plus two plain submodularities.
fn printed_base_case(g: &LabeledGraph, a: usize, b: usize, x: usize) -> Certificate {
    let set = |vs: &[usize]| VertexSet::from_iter(vs.iter().copied());
    let mut lhs = LinearExpr::zero();
    for v in [a, b, x] {
        lhs.add_term(set(&[v]), int(1));
    }
    lhs.add_term(set(&[a, b, x]), int(-1));
    Certificate {
        graph: g.clone(),
        steps: vec![
            Step::new(I::StrongSubmodularity(set(&[a, b]), set(&[a, x]))),
            Step::new(I::Submodularity(set(&[a]), set(&[b]))),
            Step::new(I::Submodularity(set(&[a]), set(&[x]))),
            Step::new(I::EmptyZero(Sign::Plus)),
            Step::new(I::EmptyZero(Sign::Plus)),
        ],
        target: Inequality { lhs, bound: int(1) },
    }
}

fn base_case_regression() -> Outcome {
    let g = build_cube_star(1).unwrap();
    let (a, b, x) = (0, 1, 3);
    ensure(g.has_edge(x, b) && g.has_edge(b, a) && !g.has_edge(a, x), || "unexpected C*_1 layout".into())?;
    let verdict = printed_base_case(&g, a, b, x).check();
    let literal_rejects = matches!(verdict, Verdict::Invalid(Reason::SideCondition { step: 0, .. }));
    ensure(literal_rejects, || format!("literal precondition did not reject step 0: {verdict}"))?;
    Err(format!(
        "clause 2 holds (literal precondition rejects the instance: {verdict}); clause 1 cannot: \
         the generalized instance is not a valid inequality, since a perfect scheme on this path \
         has f(ab) + f(ax) - f(a) - f(abx) = 0, and the checker keeps the literal rule"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "LP exactness, worst case", lp_worst),
        (2, "LP exactness, average case", lp_average),
        (3, "certificate suite", certificate_suite),
        (4, "tightness sandwich", sandwich),
        (5, "perfectness", perfectness),
        (6, "oracle equivalence", oracle_equivalence),
        (7, "duality and cross-validation", duality),
        (8, "base-case regression", base_case_regression),
    ];
    let mut surprises = Vec::new();
    for (id, name, run) in criteria {
        let outcome = run();
        let expected_failure = EXPECTED_FAILURES.contains(&id);
        match &outcome {
            Ok(detail) => println!("criterion {id} ({name}): PASS - {detail}"),
            Err(detail) if expected_failure => {
                println!("criterion {id} ({name}): FAIL (known) - {detail}")
            }
            Err(detail) => println!("criterion {id} ({name}): FAIL - {detail}"),
        }
        if outcome.is_ok() == expected_failure {
            surprises.push(id);
        }
    }
    if !surprises.is_empty() {
        eprintln!("criteria with unexpected outcomes: {surprises:?}");
        std::process::exit(1);
    }
}
