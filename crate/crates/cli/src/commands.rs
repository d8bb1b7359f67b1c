use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};
use ssratio_core::cert::{build_lemma3, build_theorem_average, build_theorem_worst, Certificate};
use ssratio_core::lp::{shannon_bound, MAX_LP_VERTICES};
use ssratio_core::rational::format as fmt_q;
use ssratio_core::scheme::{
    build_star_scheme, information_ratios, verify_perfect, LinearScheme, PerfectReport, PrimeField, Ratios,
};
use ssratio_core::{
    build_cube_star, build_delta, build_hypercube, DeltaMatchings, Error, LabeledGraph, Mode, Rational,
};

use crate::output::{emit, pretty, Table};
use crate::{BoundArgs, CertArgs, Family, Format, GenArgs, GraphArgs, Method, ModeArg, ReportArgs, SchemeArgs};

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Hypercube => "hypercube",
        Family::CubeStar => "cube_star",
        Family::Delta => "delta",
        Family::File => "file",
    }
}

/// The seed only means something for the delta family.
fn seed_value(a: &GraphArgs) -> Value {
    if a.family == Family::Delta {
        json!(a.seed)
    } else {
        Value::Null
    }
}

fn need_d(a: &GraphArgs) -> Result<usize> {
    a.d.ok_or_else(|| anyhow!("--d is required for family {}", family_name(a.family)))
}

pub fn load_graph(a: &GraphArgs) -> Result<LabeledGraph> {
    Ok(match a.family {
        Family::Hypercube => build_hypercube(need_d(a)?)?,
        Family::CubeStar => build_cube_star(need_d(a)?)?,
        Family::Delta => build_delta(need_d(a)?, &DeltaMatchings::Seeded(a.seed))?,
        Family::File => {
            let path = a.graph.as_ref().ok_or_else(|| anyhow!("--graph is required for family file"))?;
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            LabeledGraph::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
        }
    })
}

/// `log2(n / parts)` when `n` is that many copies of a cube.
fn dimension_from_size(n: usize, parts: usize) -> Option<usize> {
    let half = n / parts;
    (n.is_multiple_of(parts) && half >= 2 && half.is_power_of_two()).then(|| half.trailing_zeros() as usize)
}

/// The certificate construction for a family and mode, with its implied
/// bound.
fn build_certificate(a: &GraphArgs, g: &LabeledGraph, mode: Mode) -> Result<(Certificate, Rational)> {
    let d = match (a.d, a.family, mode) {
        (Some(d), _, _) => d,
        (None, Family::File, Mode::Worst) => dimension_from_size(g.vertex_count(), 2)
            .ok_or_else(|| anyhow!("cannot infer d from {} vertices; pass --d", g.vertex_count()))?,
        (None, Family::File, Mode::Average) => dimension_from_size(g.vertex_count(), 3)
            .ok_or_else(|| anyhow!("cannot infer d from {} vertices; pass --d", g.vertex_count()))?,
        (None, _, _) => need_d(a)?,
    };
    match (a.family, mode) {
        (Family::CubeStar, Mode::Worst) => Ok(build_theorem_worst(d)?),
        (Family::File, Mode::Worst) => {
            let cert = build_lemma3(d, g)?;
            let bound = cert
                .worst_case_bound()
                .ok_or_else(|| anyhow!("certificate target is not a positive sum of singletons"))?;
            Ok((cert, bound))
        }
        (Family::Delta | Family::File, Mode::Average) => Ok(build_theorem_average(d, g)?),
        (family, mode) => bail!(
            "no {mode}-case certificate construction for family {}; use --method lp or --method scheme",
            family_name(family)
        ),
    }
}

fn lp_bound(g: &LabeledGraph, mode: Mode) -> Result<Rational> {
    shannon_bound(g, mode).map_err(|e| match e {
        Error::Size { .. } => anyhow!(
            "{e}: the exact LP handles at most {MAX_LP_VERTICES} vertices; use --method certificate"
        ),
        other => other.into(),
    })
}

fn field_for(g: &LabeledGraph, q: Option<u64>) -> Result<u64> {
    match q {
        Some(q) => Ok(PrimeField::new(q)?.modulus()),
        None => Ok(PrimeField::at_least(g.vertex_count() as u64)?.modulus()),
    }
}

fn ratio_for(r: &Ratios, mode: Mode) -> &Rational {
    match mode {
        Mode::Worst => &r.max,
        Mode::Average => &r.average,
    }
}

fn report_violations(report: &PerfectReport) {
    for (u, v) in &report.broken_edges {
        eprintln!("violation: edge ({u}, {v}) does not determine the secret");
    }
    for set in &report.leaking_sets {
        let members: Vec<String> = set.iter().map(|v| v.to_string()).collect();
        eprintln!("violation: independent set {{{}}} learns about the secret", members.join(", "));
    }
}

pub fn gen(a: &GenArgs) -> Result<bool> {
    let g = load_graph(&a.graph)?;
    emit(a.out.as_deref(), &(g.to_json() + "\n"))?;
    Ok(true)
}

const BOUND_HEADER: &[&str] = &["family", "d", "seed", "mode", "method", "vertices", "value", "verdict"];

pub fn bound(a: &BoundArgs) -> Result<bool> {
    let g = load_graph(&a.graph)?;
    let mode = Mode::from(a.mode);
    let (value, verdict) = match a.method {
        Method::Lp => (lp_bound(&g, mode)?, None),
        Method::Certificate => {
            let (cert, value) = build_certificate(&a.graph, &g, mode)?;
            let verdict = cert.check();
            if let Some(path) = &a.cert_out {
                emit(Some(path), &(cert.to_json() + "\n"))?;
            }
            (value, Some(verdict.is_valid()))
        }
        Method::Scheme => {
            let s = build_star_scheme(&g, field_for(&g, a.q)?)?;
            let report = verify_perfect(&s, &g)?;
            report_violations(&report);
            (ratio_for(&information_ratios(&s), mode).clone(), Some(report.is_perfect()))
        }
    };
    let verdict_text = verdict.map(|ok| match (a.method, ok) {
        (Method::Scheme, true) => "perfect",
        (Method::Scheme, false) => "not perfect",
        (_, true) => "valid",
        (_, false) => "invalid",
    });
    let method = match a.method {
        Method::Lp => "lp",
        Method::Certificate => "certificate",
        Method::Scheme => "scheme",
    };
    let body = match a.format {
        Format::Text => {
            let mut s = fmt_q(&value) + "\n";
            if let Some(v) = verdict_text {
                s += &format!("verdict: {v}\n");
            }
            s
        }
        Format::Json => pretty(&json!({
            "family": family_name(a.graph.family),
            "d": a.graph.d,
            "seed": seed_value(&a.graph),
            "mode": mode.to_string(),
            "method": method,
            "vertices": g.vertex_count(),
            "value": fmt_q(&value),
            "verdict": verdict_text,
            "certificate": a.cert_out.as_ref().map(|p| p.display().to_string()),
        })),
        Format::Csv => {
            let mut t = Table::new(BOUND_HEADER);
            t.push(vec![
                json!(family_name(a.graph.family)),
                json!(a.graph.d),
                seed_value(&a.graph),
                json!(mode.to_string()),
                json!(method),
                json!(g.vertex_count()),
                json!(fmt_q(&value)),
                json!(verdict_text),
            ]);
            t.to_csv()
        }
    };
    emit(a.out.as_deref(), &body)?;
    Ok(verdict != Some(false))
}

pub fn cert(a: &CertArgs) -> Result<bool> {
    let (cert, bound, built) = match &a.check {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cert = Certificate::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
            let bound = match Mode::from(a.mode) {
                Mode::Worst => cert.worst_case_bound(),
                Mode::Average => cert.average_case_bound(),
            };
            (cert, bound, false)
        }
        None => {
            let g = load_graph(&a.graph)?;
            let (cert, bound) = build_certificate(&a.graph, &g, a.mode.into())?;
            (cert, Some(bound), true)
        }
    };
    let verdict = cert.check();
    if built {
        match &a.out {
            Some(path) => emit(Some(path), &(cert.to_json() + "\n"))?,
            None => emit(None, &(cert.to_json() + "\n"))?,
        }
    }
    let summary = match a.format {
        Format::Json => pretty(&json!({
            "verdict": verdict.to_string(),
            "valid": verdict.is_valid(),
            "steps": cert.steps.len(),
            "mode": Mode::from(a.mode).to_string(),
            "bound": bound.as_ref().map(fmt_q),
        })),
        Format::Csv => format!(
            "verdict,steps,mode,bound\n{},{},{},{}\n",
            if verdict.is_valid() { "valid" } else { "invalid" },
            cert.steps.len(),
            Mode::from(a.mode),
            bound.as_ref().map(fmt_q).unwrap_or_default()
        ),
        Format::Text => {
            let mut s = format!("verdict: {verdict}\nsteps: {}\n", cert.steps.len());
            if let Some(b) = &bound {
                s += &format!("{} bound: {}\n", Mode::from(a.mode), fmt_q(b));
            }
            s
        }
    };
    // The certificate itself owns stdout when no --out is given.
    if built && a.out.is_none() {
        eprint!("{summary}");
    } else {
        emit(None, &summary)?;
    }
    Ok(verdict.is_valid())
}

const SCHEME_HEADER: &[&str] = &["vertex", "rows", "ratio"];

pub fn scheme(a: &SchemeArgs) -> Result<bool> {
    let g = load_graph(&a.graph)?;
    let s = match &a.scheme {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            LinearScheme::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => build_star_scheme(&g, field_for(&g, a.q)?)?,
    };
    let report = verify_perfect(&s, &g)?;
    report_violations(&report);
    let ratios = information_ratios(&s);
    if let Some(path) = &a.out {
        emit(Some(path), &(s.to_json() + "\n"))?;
    }
    let mut table = Table::new(SCHEME_HEADER);
    for (v, r) in ratios.per_vertex.iter().enumerate() {
        table.push(vec![json!(v), json!(s.rows_of(v).len()), json!(fmt_q(r))]);
    }
    let body = match a.format {
        Format::Json => pretty(&json!({
            "family": family_name(a.graph.family),
            "d": a.graph.d,
            "seed": seed_value(&a.graph),
            "q": s.field().modulus(),
            "vertices": g.vertex_count(),
            "verification": report.to_json_value(),
            "ratios": ratios.to_json_value(),
        })),
        Format::Csv => table.to_csv(),
        Format::Text => format!(
            "q: {}\nperfect: {}\nmax ratio: {}\naverage ratio: {}\n{}",
            s.field().modulus(),
            if report.is_perfect() { "yes" } else { "no" },
            fmt_q(&ratios.max),
            fmt_q(&ratios.average),
            table.to_text()
        ),
    };
    emit(None, &body)?;
    Ok(report.is_perfect())
}

pub const REPORT_HEADER: &[&str] = &[
    "family",
    "d",
    "seed",
    "mode",
    "vertices",
    "max_degree",
    "lower",
    "lower_method",
    "upper",
    "match",
];

struct Row {
    args: GraphArgs,
    mode: Mode,
}

struct RowResult {
    cells: Vec<Value>,
    ok: bool,
}

fn default_mode(f: Family) -> Mode {
    match f {
        Family::Delta => Mode::Average,
        _ => Mode::Worst,
    }
}

fn run_row(row: &Row, method: Method) -> Result<RowResult> {
    let g = load_graph(&row.args)?;
    let (lower, lower_ok, lower_method) = match method {
        Method::Lp => (lp_bound(&g, row.mode)?, true, "lp"),
        Method::Certificate => {
            let (cert, bound) = build_certificate(&row.args, &g, row.mode)?;
            (bound, cert.check().is_valid(), "certificate")
        }
        Method::Scheme => bail!("the scheme gives the upper bound; pick lp or certificate for the lower bound"),
    };
    let s = build_star_scheme(&g, field_for(&g, None)?)?;
    let report = verify_perfect(&s, &g)?;
    report_violations(&report);
    let upper = ratio_for(&information_ratios(&s), row.mode).clone();
    let ok = lower_ok && report.is_perfect() && lower <= upper;
    Ok(RowResult {
        cells: vec![
            json!(family_name(row.args.family)),
            json!(row.args.d),
            seed_value(&row.args),
            json!(row.mode.to_string()),
            json!(g.vertex_count()),
            json!(g.max_degree()),
            json!(fmt_q(&lower)),
            json!(lower_method),
            json!(fmt_q(&upper)),
            json!(lower == upper),
        ],
        ok,
    })
}

pub fn report(a: &ReportArgs) -> Result<bool> {
    let families = if a.family.is_empty() {
        vec![Family::CubeStar, Family::Delta]
    } else {
        a.family.clone()
    };
    if families.contains(&Family::File) {
        bail!("report tabulates generated families only");
    }
    let mut rows = Vec::new();
    for &family in &families {
        let modes: Vec<Mode> = if a.mode.is_empty() {
            vec![default_mode(family)]
        } else {
            a.mode.iter().map(|&m: &ModeArg| m.into()).collect()
        };
        for d in a.from..=a.to {
            let seeds: &[u64] = if family == Family::Delta { &a.seeds } else { &[0] };
            for &seed in seeds {
                for &mode in &modes {
                    let args = GraphArgs { family, d: Some(d), seed, graph: None };
                    rows.push(Row { args, mode });
                }
            }
        }
    }
    // Rows run concurrently; collect keeps them in key order.
    let results: Vec<RowResult> = rows.par_iter().map(|r| run_row(r, a.method)).collect::<Result<_>>()?;
    let mut table = Table::new(REPORT_HEADER);
    let mut ok = true;
    for r in results {
        ok &= r.ok;
        table.push(r.cells);
    }
    emit(a.out.as_deref(), &table.render(a.format))?;
    Ok(ok)
}
