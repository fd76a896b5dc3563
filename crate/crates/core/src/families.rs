//! Named spanning-tree families of the grid and random tree samplers.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::seeded;
use crate::tree::SpanningTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Centipede,
    DoubleSpiral,
    Fractal,
    Kruskal,
    Wilson,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Centipede,
        FamilyKind::DoubleSpiral,
        FamilyKind::Fractal,
        FamilyKind::Kruskal,
        FamilyKind::Wilson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Centipede => "centipede",
            FamilyKind::DoubleSpiral => "double-spiral",
            FamilyKind::Fractal => "fractal",
            FamilyKind::Kruskal => "kruskal",
            FamilyKind::Wilson => "wilson",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, FamilyKind::Kruskal | FamilyKind::Wilson)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s || (s == "double_spiral" && *k == FamilyKind::DoubleSpiral))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// A family member: `size` is the grid side `n`, except for the fractal
/// family where it is the level `k` (side `2^k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, size: usize) -> Self {
        FamilySpec {
            kind,
            size,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Side length of the host grid.
    pub fn side(&self) -> Result<usize> {
        match self.kind {
            FamilyKind::Fractal => {
                if self.size == 0 || self.size > 16 {
                    return Err(Error::InvalidFamily(format!(
                        "fractal level k must be in 1..=16, got {}",
                        self.size
                    )));
                }
                Ok(1 << self.size)
            }
            _ => Ok(self.size),
        }
    }

    pub fn generate(&self) -> Result<SpanningTree> {
        let seed = || {
            self.seed
                .ok_or_else(|| Error::InvalidFamily(format!("family `{}` needs a seed", self.kind)))
        };
        match self.kind {
            FamilyKind::Centipede => centipede(self.size),
            FamilyKind::DoubleSpiral => double_spiral(self.size),
            FamilyKind::Fractal => fractal(self.size),
            FamilyKind::Kruskal => sample_kruskal(&Arc::new(Graph::grid(self.size)?), seed()?),
            FamilyKind::Wilson => sample_wilson(&Arc::new(Graph::grid(self.size)?), seed()?),
        }
    }
}

fn grid_at_least(n: usize, min: usize) -> Result<Arc<Graph>> {
    if n < min {
        return Err(Error::GridTooSmall { min, got: n });
    }
    Ok(Arc::new(Graph::grid(n)?))
}

type CellPair = ((usize, usize), (usize, usize));

fn tree_from_cells(
    graph: Arc<Graph>,
    pairs: impl IntoIterator<Item = CellPair>,
) -> Result<SpanningTree> {
    let g = &*graph;
    let edges = pairs
        .into_iter()
        .map(|((r1, c1), (r2, c2))| {
            g.edge_between(g.vertex_at(r1, c1), g.vertex_at(r2, c2))
                .ok_or_else(|| {
                    Error::Invariant(format!("({r1},{c1})-({r2},{c2}) is not a grid edge"))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    SpanningTree::from_edges(graph, edges)
}

/// The centipede: the whole top row as a spine, every column as a leg.
///
/// Its chords are the horizontal edges of rows `1..n`; a chord in row `r`
/// has degree `2r + 1`.
pub fn centipede(n: usize) -> Result<SpanningTree> {
    let graph = grid_at_least(n, 2)?;
    let spine = (0..n - 1).map(|c| ((0, c), (0, c + 1)));
    let legs = (0..n - 1).flat_map(|r| (0..n).map(move |c| ((r, c), (r + 1, c))));
    tree_from_cells(graph, spine.chain(legs))
}

/// The double spiral.
///
/// Two square spiral arms start at the anchor cells `a = (c, c)` and
/// `b = (c, c + 1)`, `c = ceil(n/2) - 1`, joined by the edge `a-b`. Arm A
/// leaves `a` upward and turns clockwise with straight runs of length
/// 1, 2, 3, ...; arm B is the image of arm A under the half turn about the
/// midpoint of `a-b`. On the infinite lattice the two arms cover every cell
/// exactly once. On the `n`-by-`n` grid the arms are clipped: steps with
/// both cells inside the grid are kept, and the pieces left by clipping are
/// joined by the first connecting edges in canonical order.
pub fn double_spiral(n: usize) -> Result<SpanningTree> {
    let graph = grid_at_least(n, 2)?;
    let c = (n as i64 + 1) / 2 - 1;
    let side = n as i64;
    let inside = |(r, col): (i64, i64)| (0..side).contains(&r) && (0..side).contains(&col);

    // Arm A in lattice offsets (x right, y up) from the anchor a.
    let mut arm = vec![(0i64, 0i64)];
    let (mut x, mut y) = (0i64, 0i64);
    let dirs = [(0, 1), (1, 0), (0, -1), (-1, 0)];
    for run in 1..=2 * side + 4 {
        let (dx, dy) = dirs[((run - 1) % 4) as usize];
        for _ in 0..run {
            x += dx;
            y += dy;
            arm.push((x, y));
        }
    }
    let arm_a: Vec<(i64, i64)> = arm.iter().map(|&(x, y)| (c - y, c + x)).collect();
    let arm_b: Vec<(i64, i64)> = arm.iter().map(|&(x, y)| (c + y, c + 1 - x)).collect();

    let g = &*graph;
    let id = |(r, col): (i64, i64)| g.vertex_at(r as usize, col as usize);
    let mut uf = UnionFind::<usize>::new(g.vertex_count());
    let mut edges = Vec::with_capacity(g.vertex_count() - 1);
    let mut add = |u: usize, v: usize| -> Result<()> {
        let e = g
            .edge_between(u, v)
            .ok_or_else(|| Error::Invariant("spiral step is not a grid edge".into()))?;
        if !uf.union(u, v) {
            return Err(Error::Invariant("double spiral revisits a cell".into()));
        }
        edges.push(e);
        Ok(())
    };
    add(id(arm_a[0]), id(arm_b[0]))?;
    for path in [&arm_a, &arm_b] {
        for w in path.windows(2) {
            if inside(w[0]) && inside(w[1]) {
                add(id(w[0]), id(w[1]))?;
            }
        }
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if uf.union(u, v) {
            edges.push(e);
        }
    }
    SpanningTree::from_edges(graph, edges)
}

/// An element of the symmetry group of the square, acting on an `m`-by-`m`
/// block: optional mirror (column reversal) followed by clockwise quarter turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Dihedral {
    pub mirrored: bool,
    pub quarter_turns: u8,
}

impl Dihedral {
    pub const IDENTITY: Dihedral = Dihedral {
        mirrored: false,
        quarter_turns: 0,
    };
    pub const HALF_TURN: Dihedral = Dihedral {
        mirrored: false,
        quarter_turns: 2,
    };

    pub fn all() -> impl Iterator<Item = Dihedral> {
        (0..8u8).map(|i| Dihedral {
            mirrored: i >= 4,
            quarter_turns: i % 4,
        })
    }

    fn apply(self, m: usize, (r, c): (usize, usize)) -> (usize, usize) {
        let mut p = if self.mirrored {
            (r, m - 1 - c)
        } else {
            (r, c)
        };
        for _ in 0..self.quarter_turns % 4 {
            p = (p.1, m - 1 - p.0);
        }
        p
    }
}

/// Side of a 2-by-2 block left open by a three-edge "U".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpenSide {
    Top,
    Right,
    Bottom,
    Left,
}

/// How the fractal places its four quadrant copies and central connector.
///
/// Quadrants are listed top-left, top-right, bottom-left, bottom-right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FractalLayout {
    pub quadrants: [Dihedral; 4],
    pub connector: OpenSide,
}

impl FractalLayout {
    /// Plain copies in every quadrant, connector open at the top.
    pub const TRANSLATED: FractalLayout = FractalLayout {
        quadrants: [Dihedral::IDENTITY; 4],
        connector: OpenSide::Top,
    };

    /// Left-hand quadrants turned half way round, connector open at the top.
    pub const HALF_TURN_LEFT: FractalLayout = FractalLayout {
        quadrants: [
            Dihedral::HALF_TURN,
            Dihedral::IDENTITY,
            Dihedral::HALF_TURN,
            Dihedral::IDENTITY,
        ],
        connector: OpenSide::Top,
    };
}

impl Default for FractalLayout {
    fn default() -> Self {
        FractalLayout::TRANSLATED
    }
}

fn u_shape(open: OpenSide) -> impl Iterator<Item = CellPair> {
    // corners of a 2x2 block clockwise from top-left; side i joins corners i and i+1
    let corners = [(0, 0), (0, 1), (1, 1), (1, 0)];
    let skip = match open {
        OpenSide::Top => 0,
        OpenSide::Right => 1,
        OpenSide::Bottom => 2,
        OpenSide::Left => 3,
    };
    (0..4)
        .filter(move |&i| i != skip)
        .map(move |i| (corners[i], corners[(i + 1) % 4]))
}

/// Cell pairs of the level-`k` fractal on the `2^k`-by-`2^k` grid.
fn fractal_cells(k: usize, layout: &FractalLayout) -> Vec<CellPair> {
    let mut cells: Vec<_> = u_shape(OpenSide::Top).collect();
    let mut m = 2;
    for _ in 1..k {
        let offsets = [(0, 0), (0, m), (m, 0), (m, m)];
        let mut next = Vec::with_capacity(4 * cells.len() + 3);
        for (q, &(dr, dc)) in offsets.iter().enumerate() {
            let t = layout.quadrants[q];
            for &(a, b) in &cells {
                let (a, b) = (t.apply(m, a), t.apply(m, b));
                next.push(((a.0 + dr, a.1 + dc), (b.0 + dr, b.1 + dc)));
            }
        }
        let shift = |(r, c): (usize, usize)| (r + m - 1, c + m - 1);
        next.extend(u_shape(layout.connector).map(|(a, b)| (shift(a), shift(b))));
        cells = next;
        m *= 2;
    }
    cells
}

/// The level-`k` fractal tree on `G(2^k)` with the default layout.
pub fn fractal(k: usize) -> Result<SpanningTree> {
    fractal_with_layout(k, &FractalLayout::default())
}

/// Level `k >= 1`: `F_1` is the "U" of `G(2)` open at the top; `F_{k+1}`
/// is four copies of `F_k` placed in the quadrants per `layout`, joined by
/// three central edges forming a copy of `F_1`.
pub fn fractal_with_layout(k: usize, layout: &FractalLayout) -> Result<SpanningTree> {
    let side = FamilySpec::new(FamilyKind::Fractal, k).side()?;
    let graph = Arc::new(Graph::grid(side)?);
    tree_from_cells(graph, fractal_cells(k, layout))
}

/// A tree from the MST distribution: Kruskal's algorithm on a uniformly
/// random edge order (equivalently i.i.d. uniform weights).
pub fn sample_kruskal(graph: &Arc<Graph>, seed: u64) -> Result<SpanningTree> {
    if !graph.is_connected() {
        return Err(Error::NotConnected);
    }
    let mut rng = seeded(seed);
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.shuffle(&mut rng);
    let mut uf = UnionFind::<usize>::new(graph.vertex_count());
    let need = graph.vertex_count().saturating_sub(1);
    let mut branches = Vec::with_capacity(need);
    for e in order {
        let (u, v) = graph.edge(e);
        if uf.union(u, v) {
            branches.push(e);
            if branches.len() == need {
                break;
            }
        }
    }
    SpanningTree::from_edges(Arc::clone(graph), branches)
}

/// A uniformly random spanning tree by Wilson's algorithm (loop-erased
/// random walks into the growing tree, rooted at vertex 0).
pub fn sample_wilson(graph: &Arc<Graph>, seed: u64) -> Result<SpanningTree> {
    if !graph.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = graph.vertex_count();
    let mut rng = seeded(seed);
    let mut in_tree = vec![false; n];
    let mut next_edge = vec![usize::MAX; n];
    let mut next_vertex = vec![usize::MAX; n];
    if n > 0 {
        in_tree[0] = true;
    }
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            let nbrs = graph.neighbors(u);
            let (v, e) = nbrs[rng.gen_range(0..nbrs.len())];
            next_vertex[u] = v;
            next_edge[u] = e;
            u = v;
        }
        u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next_vertex[u];
        }
    }
    let branches = next_edge.into_iter().filter(|&e| e != usize::MAX);
    SpanningTree::from_edges(Arc::clone(graph), branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::BipartiteCompanion;

    fn chord_degrees(t: &SpanningTree) -> Vec<usize> {
        let b = BipartiteCompanion::from_tree(t);
        let mut d: Vec<usize> = (0..b.chord_count()).map(|v| b.chord_degree(v)).collect();
        d.sort_unstable();
        d
    }

    #[test]
    fn centipede_small() {
        let t = centipede(3).unwrap();
        assert_eq!((t.branch_count(), t.chord_count()), (8, 4));
        assert_eq!(chord_degrees(&t), vec![3, 3, 5, 5]);
        assert!(matches!(centipede(1), Err(Error::GridTooSmall { .. })));
    }

    #[test]
    fn centipede_seven_degrees() {
        let d = chord_degrees(&centipede(7).unwrap());
        let mut expected = Vec::new();
        for deg in (3..=13).step_by(2) {
            expected.extend(std::iter::repeat_n(deg, 6));
        }
        assert_eq!(d, expected);
    }

    #[test]
    fn fractal_levels() {
        let f1 = fractal(1).unwrap();
        assert_eq!((f1.branch_count(), f1.chord_count()), (3, 1));
        assert_eq!(chord_degrees(&f1), vec![3]);
        assert_eq!(fractal(2).unwrap().branch_count(), 15);
        assert!(fractal(0).is_err());
    }

    #[test]
    fn double_spiral_is_a_tree_for_all_small_sizes() {
        for n in 2..=20 {
            let t = double_spiral(n).unwrap();
            assert_eq!(t.branch_count(), n * n - 1, "n = {n}");
        }
        assert!(double_spiral(1).is_err());
    }

    #[test]
    fn samplers_reject_disconnected_hosts() {
        let g = Arc::new(Graph::new(4, vec![(0, 1), (2, 3)]).unwrap());
        assert!(matches!(sample_kruskal(&g, 1), Err(Error::NotConnected)));
        assert!(matches!(sample_wilson(&g, 1), Err(Error::NotConnected)));
    }

    #[test]
    fn samplers_are_deterministic() {
        let g = Arc::new(Graph::grid(6).unwrap());
        for seed in [0, 1, 99] {
            assert_eq!(
                sample_kruskal(&g, seed).unwrap().branches(),
                sample_kruskal(&g, seed).unwrap().branches()
            );
            assert_eq!(
                sample_wilson(&g, seed).unwrap().branches(),
                sample_wilson(&g, seed).unwrap().branches()
            );
        }
    }

    #[test]
    fn family_names_round_trip() {
        for kind in FamilyKind::ALL {
            assert_eq!(kind.name().parse::<FamilyKind>().unwrap(), kind);
        }
        assert!("spiral".parse::<FamilyKind>().is_err());
        let spec = FamilySpec::new(FamilyKind::Wilson, 4);
        assert!(spec.generate().is_err());
        assert_eq!(spec.with_seed(3).generate().unwrap().branch_count(), 15);
    }
}
