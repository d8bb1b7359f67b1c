use proptest::prelude::*;
use ssratio_core::lp::shannon_bound;
use ssratio_core::scheme::{build_star_scheme, information_ratios, verify_perfect, PrimeField};
use ssratio_core::{LabeledGraph, Mode};

fn graph_from_mask(n: usize, mask: u32) -> Option<LabeledGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
    (!edges.is_empty()).then(|| LabeledGraph::plain(n, &edges).unwrap())
}

fn check(g: &LabeledGraph) {
    let q = PrimeField::at_least(g.vertex_count() as u64).unwrap().modulus();
    let s = build_star_scheme(g, q).unwrap();
    assert!(verify_perfect(&s, g).unwrap().is_perfect());
    let r = information_ratios(&s);
    let worst = shannon_bound(g, Mode::Worst).unwrap();
    let average = shannon_bound(g, Mode::Average).unwrap();
    assert!(worst <= r.max, "worst {worst} above scheme {}", r.max);
    assert!(average <= r.average, "average {average} above scheme {}", r.average);
    assert!(average <= worst);
}

#[test]
fn lp_never_exceeds_star_scheme_on_four_vertices() {
    for mask in 1..1u32 << 6 {
        check(&graph_from_mask(4, mask).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lp_never_exceeds_star_scheme_on_five_vertices(mask in 1u32..1 << 10) {
        check(&graph_from_mask(5, mask).unwrap());
    }
}
