//! Host graphs: the `n`-by-`n` grid and general simple graphs.
//!
//! Edges carry stable integer identities. For grids the order is fixed:
//! rows are swept top to bottom, and within each row the horizontal edges
//! `(r, c)-(r, c+1)` come first (left to right), followed by the vertical
//! edges `(r, c)-(r+1, c)` hanging below that row. Seeded samplers rely on
//! this order for reproducibility.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Catalan's constant `G = 1 - 1/9 + 1/25 - ...`.
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

/// Largest vertex count accepted by [`count_spanning_trees`].
pub const MAX_COUNT_VERTICES: usize = 400;

/// A connected or disconnected simple undirected graph with indexed edges.
///
/// Grids remember their side length so grid-only statistics can be computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
    side: Option<usize>,
}

impl Graph {
    /// The `n`-by-`n` grid, vertices numbered row-major with row 0 on top.
    pub fn grid(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::GridTooSmall { min: 1, got: 0 });
        }
        let mut edges = Vec::with_capacity(2 * n * (n - 1));
        for r in 0..n {
            for c in 0..n - 1 {
                edges.push((r * n + c, r * n + c + 1));
            }
            if r + 1 < n {
                for c in 0..n {
                    edges.push((r * n + c, (r + 1) * n + c));
                }
            }
        }
        let mut g = Self::build(n * n, edges);
        g.side = Some(n);
        Ok(g)
    }

    /// A general simple graph. Loops and repeated edges are rejected.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("repeated edge ({u}, {v})")));
            }
        }
        Ok(Self::build(vertex_count, edges))
    }

    fn build(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
        }
        Graph {
            vertex_count,
            edges,
            adjacency,
            side: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Side length when the graph is a grid.
    pub fn side(&self) -> Option<usize> {
        self.side
    }

    /// Vertex id of grid cell `(row, col)`.
    ///
    /// # Panics
    /// Panics if the graph is not a grid.
    pub fn vertex_at(&self, row: usize, col: usize) -> usize {
        let n = self.side.expect("vertex_at on a non-grid graph");
        debug_assert!(row < n && col < n);
        row * n + col
    }

    /// `(row, col)` of a grid vertex.
    pub fn coords(&self, v: usize) -> (usize, usize) {
        let n = self.side.expect("coords on a non-grid graph");
        (v / n, v % n)
    }

    /// Edge id joining `u` and `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adjacency[u]
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, id)| id)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == self.vertex_count
    }

    pub fn to_spec(&self) -> GraphSpec {
        match self.side {
            Some(n) => GraphSpec::Grid { n },
            None => GraphSpec::General {
                vertices: self.vertex_count,
                edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            },
        }
    }
}

/// JSON form of a graph: `{"n": 5}` for grids, `{"vertices": 4, "edges": [[0,1],...]}` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GraphSpec {
    Grid {
        n: usize,
    },
    General {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Grid { n } => Graph::grid(*n),
            GraphSpec::General { vertices, edges } => {
                Graph::new(*vertices, edges.iter().map(|e| (e[0], e[1])).collect())
            }
        }
    }
}

/// Exact number of spanning trees via the matrix-tree theorem.
///
/// The reduced Laplacian determinant is taken with Bareiss fraction-free
/// elimination over big integers, so the result is exact.
pub fn count_spanning_trees(g: &Graph) -> Result<BigUint> {
    let n = g.vertex_count();
    if n > MAX_COUNT_VERTICES {
        return Err(Error::GuardExceeded {
            what: "vertex count",
            size: n,
            limit: MAX_COUNT_VERTICES,
        });
    }
    if n == 0 || !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let size = n - 1;
    if size == 0 {
        return Ok(BigUint::one());
    }
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for &(u, v) in g.edges() {
        for (x, y) in [(u, v), (v, u)] {
            if x < size {
                a[x][x] += 1;
                if y < size {
                    a[x][y] -= 1;
                }
            }
        }
    }

    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..size {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..size).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigUint::zero());
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = if negate { -prev } else { prev };
    det.abs()
        .to_biguint()
        .ok_or_else(|| Error::Invariant("negative spanning tree count".into()))
}

/// Growth base `exp(4G/pi)` of the number of spanning trees of the `n`-by-`n` grid.
pub fn tree_growth_base() -> f64 {
    (4.0 * CATALAN / std::f64::consts::PI).exp()
}
