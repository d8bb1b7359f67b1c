//! Labeled graphs for the hypercube-based constructions.
//!
//! Every vertex carries the role it played at construction time, so later
//! stages can name the chessboard sides, pendants and cube copies directly
//! from labels instead of searching for isomorphisms.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

pub const MAX_DIMENSION: usize = 16;
/// Limit for exhaustive maximal independent set enumeration.
pub const MAX_ENUMERATION_VERTICES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Cube,
    Pendant,
    /// A vertex of a hand-entered graph with no construction role.
    Plain,
}

/// A hypercube coordinate: `dim` bits, rendered most significant bit first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coord {
    pub bits: u32,
    pub dim: u8,
}

impl Coord {
    pub fn parity(self) -> u32 {
        self.bits.count_ones() & 1
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > MAX_DIMENSION || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::Format(format!("bad coordinate {s:?}")));
        }
        let bits = u32::from_str_radix(s, 2).expect("checked binary digits");
        Ok(Coord {
            bits,
            dim: s.len() as u8,
        })
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.dim as usize)
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Construction role of one vertex. Pendants carry the coordinate of the
/// cube vertex they hang off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexLabel {
    pub kind: VertexKind,
    pub copy: Option<u8>,
    pub coord: Option<Coord>,
}

impl VertexLabel {
    pub const PLAIN: VertexLabel = VertexLabel {
        kind: VertexKind::Plain,
        copy: None,
        coord: None,
    };

    fn cube(copy: Option<u8>, bits: usize, d: usize) -> Self {
        VertexLabel {
            kind: VertexKind::Cube,
            copy,
            coord: Some(Coord {
                bits: bits as u32,
                dim: d as u8,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    labels: Vec<VertexLabel>,
}

impl LabeledGraph {
    /// Builds a graph, normalizing each edge to `(min, max)`.
    pub fn new(n: usize, edges: &[(usize, usize)], labels: Vec<VertexLabel>) -> Result<Self> {
        if labels.len() != n {
            return Err(Error::param(format!(
                "{} label records for {n} vertices",
                labels.len()
            )));
        }
        let mut set = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::param(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::param(format!("self-loop at {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::param(format!("duplicate edge ({u},{v})")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(LabeledGraph {
            n,
            edges: set,
            adjacency,
            labels,
        })
    }

    /// An unlabeled graph; every vertex gets the `plain` role.
    pub fn plain(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges, vec![VertexLabel::PLAIN; n])
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn label(&self, v: usize) -> &VertexLabel {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn vertices(&self) -> VertexSet {
        (0..self.n).collect()
    }

    pub fn check_vertices(&self, a: &VertexSet) -> Result<()> {
        if a.bound() > self.n {
            return Err(Error::param(format!(
                "vertex {} out of range for n={}",
                a.bound() - 1,
                self.n
            )));
        }
        Ok(())
    }

    /// True iff no edge has both endpoints in `a`.
    pub fn is_independent(&self, a: &VertexSet) -> Result<bool> {
        self.check_vertices(a)?;
        Ok(self.independent_unchecked(a))
    }

    pub(crate) fn independent_unchecked(&self, a: &VertexSet) -> bool {
        a.iter()
            .all(|v| self.adjacency[v].iter().all(|&u| u < v || !a.contains(u)))
    }

    /// Induced subgraph on `map` (new vertex `i` is old vertex `map[i]`), with
    /// the edge set reported in the new numbering.
    pub fn induced_edges(&self, map: &[usize]) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for i in 0..map.len() {
            for j in i + 1..map.len() {
                if self.has_edge(map[i], map[j]) {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    /// All inclusion-maximal independent sets, sorted by bitmask.
    pub fn maximal_independent_sets(&self) -> Result<Vec<VertexSet>> {
        if self.n > MAX_ENUMERATION_VERTICES {
            return Err(Error::Size {
                what: "graph for independent set enumeration",
                actual: self.n,
                limit: MAX_ENUMERATION_VERTICES,
            });
        }
        let full: u32 = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        // Maximal independent sets are maximal cliques of the complement.
        let compatible: Vec<u32> = (0..self.n)
            .map(|v| {
                let adj: u32 = self.adjacency[v].iter().fold(0, |m, &u| m | 1 << u);
                full & !adj & !(1 << v)
            })
            .collect();
        let mut found = Vec::new();
        bron_kerbosch(&compatible, 0, full, 0, &mut found);
        found.sort_unstable();
        Ok(found.into_iter().map(|m| VertexSet::from_mask(m as u64)).collect())
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            labels: self.labels.iter().map(LabelRecord::from).collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let edges: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        let labels = file
            .labels
            .iter()
            .map(VertexLabel::try_from)
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.n, &edges, labels)
    }

    /// Canonical JSON: edges sorted lexicographically.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }
}

fn bron_kerbosch(compatible: &[u32], r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut candidates = p & !compatible[pivot];
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        let bit = 1u32 << v;
        bron_kerbosch(compatible, r | bit, p & compatible[v], x & compatible[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// On-disk graph: `{"n", "edges", "labels"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub labels: Vec<LabelRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub kind: VertexKind,
    pub copy: Option<u8>,
    pub coord: Option<String>,
}

impl From<&VertexLabel> for LabelRecord {
    fn from(l: &VertexLabel) -> Self {
        LabelRecord {
            kind: l.kind,
            copy: l.copy,
            coord: l.coord.map(|c| c.to_string()),
        }
    }
}

impl TryFrom<&LabelRecord> for VertexLabel {
    type Error = Error;

    fn try_from(r: &LabelRecord) -> Result<Self> {
        if matches!(r.copy, Some(c) if c > 2) {
            return Err(Error::Format(format!("cube copy {:?} out of range", r.copy)));
        }
        Ok(VertexLabel {
            kind: r.kind,
            copy: r.copy,
            coord: r.coord.as_deref().map(Coord::parse).transpose()?,
        })
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if !(1..=MAX_DIMENSION).contains(&d) {
        return Err(Error::param(format!(
            "dimension {d} outside 1..={MAX_DIMENSION}"
        )));
    }
    Ok(())
}

fn cube_edges(d: usize, offset: usize, edges: &mut Vec<(usize, usize)>) {
    for c in 0..1usize << d {
        for bit in 0..d {
            let other = c ^ (1 << bit);
            if c < other {
                edges.push((offset + c, offset + other));
            }
        }
    }
}

/// The `d`-cube; vertex id equals its coordinate.
pub fn build_hypercube(d: usize) -> Result<LabeledGraph> {
    check_dimension(d)?;
    let n = 1 << d;
    let mut edges = Vec::with_capacity(d << (d - 1));
    cube_edges(d, 0, &mut edges);
    let labels = (0..n).map(|c| VertexLabel::cube(None, c, d)).collect();
    LabeledGraph::new(n, &edges, labels)
}

/// The `d`-cube with one pendant vertex attached to every cube vertex.
///
/// Cube vertex `c` has id `c`; its pendant has id `2^d + c`.
pub fn build_cube_star(d: usize) -> Result<LabeledGraph> {
    check_dimension(d)?;
    let half = 1 << d;
    let mut edges = Vec::with_capacity((d << (d - 1)) + half);
    cube_edges(d, 0, &mut edges);
    edges.extend((0..half).map(|c| (c, half + c)));
    let mut labels: Vec<_> = (0..half).map(|c| VertexLabel::cube(None, c, d)).collect();
    labels.extend((0..half).map(|c| VertexLabel {
        kind: VertexKind::Pendant,
        ..VertexLabel::cube(None, c, d)
    }));
    LabeledGraph::new(2 * half, &edges, labels)
}

/// How the three 1-factors of a `D_d` are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaMatchings {
    /// Seed 0 gives identity permutations; other seeds shuffle with ChaCha8.
    Seeded(u64),
    /// `perms[i][k] = j` joins the `k`-th even vertex of copy `i` to the
    /// `j`-th odd vertex of copy `i + 1 (mod 3)`, both in coordinate order.
    Explicit([Vec<usize>; 3]),
}

impl DeltaMatchings {
    pub fn permutations(&self, d: usize) -> Result<[Vec<usize>; 3]> {
        let size = 1usize << (d - 1);
        match self {
            DeltaMatchings::Seeded(0) => Ok(std::array::from_fn(|_| (0..size).collect())),
            DeltaMatchings::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok(std::array::from_fn(|_| {
                    let mut p: Vec<usize> = (0..size).collect();
                    p.shuffle(&mut rng);
                    p
                }))
            }
            DeltaMatchings::Explicit(perms) => {
                for (i, p) in perms.iter().enumerate() {
                    let mut seen = vec![false; size];
                    if p.len() != size {
                        return Err(Error::param(format!(
                            "permutation {i} has {} entries, expected {size}",
                            p.len()
                        )));
                    }
                    for &j in p {
                        if j >= size || std::mem::replace(&mut seen[j], true) {
                            return Err(Error::param(format!(
                                "permutation {i} is not a bijection on 0..{size}"
                            )));
                        }
                    }
                }
                Ok(perms.clone())
            }
        }
    }
}

fn parity_classes(d: usize) -> (Vec<usize>, Vec<usize>) {
    (0..1usize << d).partition(|c| c.count_ones() % 2 == 0)
}

/// A member of `Δ_d`: three `d`-cubes joined cyclically by 1-factors from the
/// even class of copy `i` to the odd class of copy `i + 1 (mod 3)`.
///
/// Vertex `(copy i, coordinate c)` has id `i * 2^d + c`.
pub fn build_delta(d: usize, matchings: &DeltaMatchings) -> Result<LabeledGraph> {
    check_dimension(d)?;
    let perms = matchings.permutations(d)?;
    let half = 1 << d;
    let (even, odd) = parity_classes(d);
    let mut edges = Vec::new();
    for copy in 0..3 {
        cube_edges(d, copy * half, &mut edges);
    }
    for (copy, perm) in perms.iter().enumerate() {
        let next = (copy + 1) % 3;
        for (k, &j) in perm.iter().enumerate() {
            edges.push((copy * half + even[k], next * half + odd[j]));
        }
    }
    let labels = (0..3)
        .flat_map(|copy| (0..half).map(move |c| VertexLabel::cube(Some(copy as u8), c, d)))
        .collect();
    LabeledGraph::new(3 * half, &edges, labels)
}

/// Cube and pendant vertex ids of a `C*_d`, recovered from labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeStarLayout {
    pub d: usize,
    /// `cube[c]` is the vertex with coordinate `c`.
    pub cube: Vec<usize>,
    /// `pendant[c]` is the pendant attached to `cube[c]`.
    pub pendant: Vec<usize>,
}

impl CubeStarLayout {
    pub fn of(g: &LabeledGraph) -> Result<Self> {
        let d = uniform_dimension(g)?;
        let size = 1usize << d;
        if g.vertex_count() != 2 * size {
            return Err(Error::structure(format!(
                "C*_{d} needs {} vertices, graph has {}",
                2 * size,
                g.vertex_count()
            )));
        }
        let mut cube = vec![usize::MAX; size];
        let mut pendant = vec![usize::MAX; size];
        for (v, label) in g.labels().iter().enumerate() {
            let c = label.coord.expect("checked by uniform_dimension").bits as usize;
            let slot = match (label.kind, label.copy) {
                (VertexKind::Cube, None) => &mut cube[c],
                (VertexKind::Pendant, None) => &mut pendant[c],
                _ => return Err(Error::structure(format!("vertex {v} is not a C*_d role"))),
            };
            if *slot != usize::MAX {
                return Err(Error::structure(format!("coordinate {c:b} used twice")));
            }
            *slot = v;
        }
        let layout = CubeStarLayout { d, cube, pendant };
        let expected = layout.canonical_map_edges();
        if g.induced_edges(&layout.canonical_map()) != expected || g.edge_count() != expected.len() {
            return Err(Error::structure("edges do not match C*_d labels"));
        }
        Ok(layout)
    }

    /// Vertex id in the host for each canonical `C*_d` id.
    pub fn canonical_map(&self) -> Vec<usize> {
        self.cube.iter().chain(&self.pendant).copied().collect()
    }

    fn canonical_map_edges(&self) -> BTreeSet<(usize, usize)> {
        build_cube_star(self.d)
            .expect("dimension validated")
            .edges
    }
}

/// Cube vertex ids of a `D_d`, recovered from labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaLayout {
    pub d: usize,
    /// `cube[i][c]`: copy `i`, coordinate `c`.
    pub cube: [Vec<usize>; 3],
    /// The unique neighbor of each vertex outside its own copy.
    pub partner: Vec<usize>,
}

impl DeltaLayout {
    pub fn of(g: &LabeledGraph) -> Result<Self> {
        let d = uniform_dimension(g)?;
        let size = 1usize << d;
        if g.vertex_count() != 3 * size {
            return Err(Error::structure(format!(
                "D_{d} needs {} vertices, graph has {}",
                3 * size,
                g.vertex_count()
            )));
        }
        let mut cube: [Vec<usize>; 3] = std::array::from_fn(|_| vec![usize::MAX; size]);
        for (v, label) in g.labels().iter().enumerate() {
            let (VertexKind::Cube, Some(copy)) = (label.kind, label.copy) else {
                return Err(Error::structure(format!("vertex {v} lacks a cube copy label")));
            };
            let c = label.coord.expect("checked by uniform_dimension").bits as usize;
            let slot = &mut cube[copy as usize][c];
            if *slot != usize::MAX {
                return Err(Error::structure(format!("copy {copy} coordinate {c:b} used twice")));
            }
            *slot = v;
        }
        let mut partner = vec![usize::MAX; g.vertex_count()];
        let mut inner = 0;
        for (u, v) in g.edges() {
            let (lu, lv) = (g.label(u), g.label(v));
            let (cu, cv) = (lu.coord.unwrap(), lv.coord.unwrap());
            if lu.copy == lv.copy {
                if (cu.bits ^ cv.bits).count_ones() != 1 {
                    return Err(Error::structure(format!("edge ({u},{v}) is not a cube edge")));
                }
                inner += 1;
                continue;
            }
            // Cross edges run from the even class of copy i to the odd class of i+1.
            let (a, b) = if cu.parity() == 0 { (u, v) } else { (v, u) };
            let (ca, cb) = (g.label(a).copy.unwrap(), g.label(b).copy.unwrap());
            if g.label(a).coord.unwrap().parity() != 0
                || g.label(b).coord.unwrap().parity() != 1
                || cb != (ca + 1) % 3
            {
                return Err(Error::structure(format!(
                    "edge ({u},{v}) does not join A^(i) to B^(i+1)"
                )));
            }
            for (x, y) in [(a, b), (b, a)] {
                if partner[x] != usize::MAX {
                    return Err(Error::structure(format!("vertex {x} has two cross edges")));
                }
                partner[x] = y;
            }
        }
        if inner != 3 * (d << (d - 1)) || partner.contains(&usize::MAX) {
            return Err(Error::structure("cross edges are not three 1-factors"));
        }
        Ok(DeltaLayout { d, cube, partner })
    }
}

fn uniform_dimension(g: &LabeledGraph) -> Result<usize> {
    let dims: BTreeSet<_> = g
        .labels()
        .iter()
        .map(|l| l.coord.map(|c| c.dim as usize))
        .collect();
    match dims.into_iter().collect::<Vec<_>>()[..] {
        [Some(d)] if d >= 1 => Ok(d),
        _ => Err(Error::structure("graph lacks uniform construction coordinates")),
    }
}

/// A bipartition of some scope into two independent sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChessboardSplit {
    pub side_x: VertexSet,
    pub side_y: VertexSet,
}

/// Splits a `C*_d`, a hypercube, or one cube copy of a `D_d` by coordinate
/// parity. For `C*_d`, `side_x` holds the even cube vertices and the
/// pendants of the odd ones.
pub fn chessboard_split(g: &LabeledGraph, scope: &VertexSet) -> Result<ChessboardSplit> {
    g.check_vertices(scope)?;
    let in_scope: Vec<usize> = scope.iter().collect();
    let labels: Vec<&VertexLabel> = in_scope.iter().map(|&v| g.label(v)).collect();
    let copies: BTreeSet<_> = labels.iter().map(|l| l.copy).collect();
    let whole = *scope == g.vertices();
    let known = match copies.into_iter().collect::<Vec<_>>()[..] {
        [None] => {
            whole
                && (CubeStarLayout::of(g).is_ok()
                    || labels.iter().all(|l| l.kind == VertexKind::Cube)
                        && build_hypercube(uniform_dimension(g)?)
                            .is_ok_and(|h| h.edges == g.edges))
        }
        [Some(copy)] => DeltaLayout::of(g).is_ok_and(|layout| {
            let mut cube: Vec<usize> = layout.cube[copy as usize].clone();
            cube.sort_unstable();
            cube == in_scope
        }),
        _ => false,
    };
    if !known {
        return Err(Error::structure(
            "scope is not a C*_d, a hypercube, or a cube copy of D_d",
        ));
    }
    let mut split = ChessboardSplit {
        side_x: VertexSet::new(),
        side_y: VertexSet::new(),
    };
    for (&v, label) in in_scope.iter().zip(&labels) {
        let parity = label.coord.expect("known construction").parity();
        let on_x = match label.kind {
            VertexKind::Pendant => parity == 1,
            _ => parity == 0,
        };
        if on_x {
            split.side_x.insert(v);
        } else {
            split.side_y.insert(v);
        }
    }
    if !g.independent_unchecked(&split.side_x) || !g.independent_unchecked(&split.side_y) {
        return Err(Error::structure("parity classes are not independent"));
    }
    Ok(split)
}

/// A `C*_d` embedded in a `D_d`: `map[k]` is the host vertex playing
/// canonical `C*_d` vertex `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeStarView {
    pub copy: usize,
    pub scope: VertexSet,
    pub map: Vec<usize>,
}

/// The three induced copies of `C*_d` inside a `D_d`: cube copy `i` together
/// with its cross-edge partners, which lie in `B^(i+1)` and `A^(i+2)`.
pub fn induced_cube_star_views(g: &LabeledGraph) -> Result<Vec<CubeStarView>> {
    let layout = DeltaLayout::of(g)?;
    let views = (0..3)
        .map(|copy| {
            let cube = &layout.cube[copy];
            let map: Vec<usize> = cube
                .iter()
                .copied()
                .chain(cube.iter().map(|&v| layout.partner[v]))
                .collect();
            CubeStarView {
                copy,
                scope: map.iter().copied().collect(),
                map,
            }
        })
        .collect();
    Ok(views)
}

/// A set of disjoint host-graph edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(g: &LabeledGraph, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut used = VertexSet::new();
        for &(u, v) in &pairs {
            if !g.has_edge(u, v) {
                return Err(Error::param(format!("({u},{v}) is not an edge")));
            }
            if used.contains(u) || used.contains(v) || u == v {
                return Err(Error::param(format!("vertex of ({u},{v}) matched twice")));
            }
            used.insert(u);
            used.insert(v);
        }
        Ok(Matching { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(g: &LabeledGraph) -> Vec<usize> {
        (0..g.vertex_count()).map(|v| g.degree(v)).collect()
    }

    fn brute_force_mis(g: &LabeledGraph) -> Vec<VertexSet> {
        let n = g.vertex_count();
        let independent = |m: u64| g.independent_unchecked(&VertexSet::from_mask(m));
        let mut out: Vec<u64> = (0..1u64 << n)
            .filter(|&m| independent(m) && (0..n).all(|v| m >> v & 1 == 1 || !independent(m | 1 << v)))
            .collect();
        out.sort_unstable();
        out.into_iter().map(VertexSet::from_mask).collect()
    }

    #[test]
    fn hypercube_small_cases() {
        let g = build_hypercube(1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        let g = build_hypercube(2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));
        assert_eq!(degrees(&g), vec![2; 4]);
        let g = build_hypercube(3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (8, 12));
        let split = chessboard_split(&g, &g.vertices()).unwrap();
        assert_eq!((split.side_x.len(), split.side_y.len()), (4, 4));
    }

    #[test]
    fn dimension_range() {
        assert!(matches!(build_hypercube(0), Err(Error::Parameter(_))));
        assert!(matches!(build_cube_star(17), Err(Error::Parameter(_))));
        assert!(matches!(build_delta(0, &DeltaMatchings::Seeded(0)), Err(Error::Parameter(_))));
    }

    #[test]
    fn cube_star_one_is_a_path() {
        let g = build_cube_star(1).unwrap();
        // cube 0 = a, cube 1 = b, pendant 2 = y (of a), pendant 3 = x (of b)
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3)]);
        let split = chessboard_split(&g, &g.vertices()).unwrap();
        assert_eq!(split.side_x, VertexSet::from_iter([0, 3]));
        assert_eq!(split.side_y, VertexSet::from_iter([1, 2]));
    }

    #[test]
    fn cube_star_two() {
        let g = build_cube_star(2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (8, 8));
        assert_eq!(degrees(&g), vec![3, 3, 3, 3, 1, 1, 1, 1]);
        let split = chessboard_split(&g, &g.vertices()).unwrap();
        assert_eq!((split.side_x.len(), split.side_y.len()), (4, 4));
    }

    #[test]
    fn cube_star_edge_count_formula() {
        for d in 1..=10 {
            let g = build_cube_star(d).unwrap();
            assert_eq!(g.vertex_count(), 1 << (d + 1));
            assert_eq!(g.edge_count(), (d << (d - 1)) + (1 << d));
            assert_eq!(g.max_degree(), d + 1);
            let pendants: VertexSet = (1 << d..2 << d).collect();
            assert!(g.is_independent(&pendants).unwrap());
            let split = chessboard_split(&g, &g.vertices()).unwrap();
            assert!(split.side_x.intersection(&split.side_y).is_empty());
            assert_eq!(split.side_x.union(&split.side_y), g.vertices());
        }
    }

    #[test]
    fn delta_one_is_a_six_cycle() {
        let g = build_delta(1, &DeltaMatchings::Seeded(0)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 6));
        assert_eq!(degrees(&g), vec![2; 6]);
        // walk the cycle from vertex 0
        let (mut prev, mut cur, mut len) = (0, g.neighbors(0)[0], 1);
        while cur != 0 {
            let next = *g.neighbors(cur).iter().find(|&&u| u != prev).unwrap();
            (prev, cur, len) = (cur, next, len + 1);
        }
        assert_eq!(len, 6);
    }

    #[test]
    fn delta_is_regular_for_any_seed() {
        for d in 1..=6 {
            for seed in [0, 1, 7, 42] {
                let g = build_delta(d, &DeltaMatchings::Seeded(seed)).unwrap();
                assert_eq!(g.vertex_count(), 3 << d);
                assert!(degrees(&g).iter().all(|&k| k == d + 1));
            }
        }
    }

    #[test]
    fn delta_seed_is_deterministic() {
        let a = build_delta(4, &DeltaMatchings::Seeded(9)).unwrap();
        let b = build_delta(4, &DeltaMatchings::Seeded(9)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, build_delta(4, &DeltaMatchings::Seeded(0)).unwrap());
    }

    #[test]
    fn explicit_permutations_validated() {
        let ok = DeltaMatchings::Explicit([vec![1, 0], vec![0, 1], vec![1, 0]]);
        assert!(build_delta(2, &ok).is_ok());
        let dup = DeltaMatchings::Explicit([vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert!(matches!(build_delta(2, &dup), Err(Error::Parameter(_))));
        let short = DeltaMatchings::Explicit([vec![0], vec![0, 1], vec![1, 0]]);
        assert!(matches!(build_delta(2, &short), Err(Error::Parameter(_))));
    }

    #[test]
    fn views_are_canonical_cube_stars() {
        for d in 1..=5 {
            for seed in [0, 3, 11] {
                let g = build_delta(d, &DeltaMatchings::Seeded(seed)).unwrap();
                let canonical: BTreeSet<_> = build_cube_star(d).unwrap().edges().collect();
                let views = induced_cube_star_views(&g).unwrap();
                assert_eq!(views.len(), 3);
                for view in &views {
                    assert_eq!(view.map.len(), 2 << d);
                    assert_eq!(g.induced_edges(&view.map), canonical);
                    let cube: VertexSet = g.vertices().iter().filter(|&v| g.label(v).copy == Some(view.copy as u8)).collect();
                    assert!(cube.is_subset(&view.scope));
                }
            }
        }
        let d1 = build_delta(1, &DeltaMatchings::Seeded(0)).unwrap();
        for view in induced_cube_star_views(&d1).unwrap() {
            assert_eq!(d1.induced_edges(&view.map).len(), 3);
        }
    }

    #[test]
    fn views_need_labels() {
        let g = LabeledGraph::plain(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert!(matches!(induced_cube_star_views(&g), Err(Error::Structure(_))));
    }

    #[test]
    fn delta_copy_split() {
        let g = build_delta(3, &DeltaMatchings::Seeded(5)).unwrap();
        let copy1: VertexSet = (8..16).collect();
        let split = chessboard_split(&g, &copy1).unwrap();
        assert_eq!(split.side_x.len(), 4);
        assert!(matches!(chessboard_split(&g, &g.vertices()), Err(Error::Structure(_))));
    }

    #[test]
    fn independence() {
        let k2 = LabeledGraph::plain(2, &[(0, 1)]).unwrap();
        assert!(k2.is_independent(&VertexSet::new()).unwrap());
        assert!(!k2.is_independent(&VertexSet::from_iter([0, 1])).unwrap());
        assert!(k2.is_independent(&VertexSet::singleton(2)).is_err());
    }

    #[test]
    fn maximal_independent_sets_small() {
        let k2 = LabeledGraph::plain(2, &[(0, 1)]).unwrap();
        assert_eq!(
            k2.maximal_independent_sets().unwrap(),
            vec![VertexSet::singleton(0), VertexSet::singleton(1)]
        );
        // path x(3)-b(1)-a(0)-y(2)
        let p4 = build_cube_star(1).unwrap();
        assert_eq!(
            p4.maximal_independent_sets().unwrap(),
            vec![VertexSet::from_iter([1, 2]), VertexSet::from_iter([0, 3]), VertexSet::from_iter([2, 3])]
        );
        let c4 = build_hypercube(2).unwrap();
        assert_eq!(
            c4.maximal_independent_sets().unwrap(),
            vec![VertexSet::from_iter([1, 2]), VertexSet::from_iter([0, 3])]
        );
    }

    #[test]
    fn maximal_independent_sets_match_brute_force() {
        let mut graphs = vec![
            build_cube_star(2).unwrap(),
            build_hypercube(3).unwrap(),
            build_delta(1, &DeltaMatchings::Seeded(0)).unwrap(),
            build_delta(2, &DeltaMatchings::Seeded(4)).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 3..=12 {
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rand::Rng::random_bool(&mut rng, 0.3))
                .collect();
            graphs.push(LabeledGraph::plain(n, &edges).unwrap());
        }
        for g in &graphs {
            assert_eq!(g.maximal_independent_sets().unwrap(), brute_force_mis(g));
        }
        let big = build_cube_star(4).unwrap();
        assert!(matches!(big.maximal_independent_sets(), Err(Error::Size { .. })));
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let g = build_delta(2, &DeltaMatchings::Seeded(3)).unwrap();
        let text = g.to_json();
        let back = LabeledGraph::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_rejects_bad_graphs() {
        let dup = r#"{"n":2,"edges":[[0,1],[1,0]],"labels":[{"kind":"plain","copy":null,"coord":null},{"kind":"plain","copy":null,"coord":null}]}"#;
        assert!(LabeledGraph::from_json(dup).is_err());
        let missing = r#"{"n":2,"edges":[[0,1]],"labels":[{"kind":"plain","copy":null,"coord":null}]}"#;
        assert!(LabeledGraph::from_json(missing).is_err());
        let loop_ = r#"{"n":1,"edges":[[0,0]],"labels":[{"kind":"plain","copy":null,"coord":null}]}"#;
        assert!(LabeledGraph::from_json(loop_).is_err());
    }

    #[test]
    fn matching_validation() {
        let g = build_hypercube(2).unwrap();
        assert!(Matching::new(&g, vec![(0, 1), (2, 3)]).is_ok());
        assert!(Matching::new(&g, vec![(0, 1), (1, 3)]).is_err());
        assert!(Matching::new(&g, vec![(0, 3)]).is_err());
    }
}
