//! Shared fixtures for the benchmarks.

use ssratio_core::{build_cube_star, build_delta, DeltaMatchings, LabeledGraph};

pub fn cube_star(d: usize) -> LabeledGraph {
    build_cube_star(d).expect("dimension in range")
}

pub fn delta(d: usize, seed: u64) -> LabeledGraph {
    build_delta(d, &DeltaMatchings::Seeded(seed)).expect("dimension in range")
}
