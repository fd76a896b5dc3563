//! Spanning trees of a host graph: validation, tree paths, fundamental
//! cycles and cuts, and exhaustive enumeration for small hosts.

use std::sync::Arc;

use num_traits::ToPrimitive;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{count_spanning_trees, Graph, GraphSpec};

/// Largest number of trees [`all_spanning_trees`] will materialize.
pub const MAX_ENUMERATED_TREES: usize = 1_000_000;

/// A spanning tree, stored as its branch set plus a rooted parent structure.
///
/// The tree is rooted at vertex 0. Branches and chords are kept sorted by
/// edge id; the position of a branch in [`SpanningTree::branches`] is its
/// index as a branch node everywhere else in the crate.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    graph: Arc<Graph>,
    is_branch: Vec<bool>,
    branches: Vec<usize>,
    chords: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    // Preorder entry/exit stamps, for subtree membership tests.
    enter: Vec<usize>,
    exit: Vec<usize>,
}

impl SpanningTree {
    /// Validates `edges` as a spanning tree of `graph`.
    ///
    /// Checks run in a fixed order: edge ids, duplicates, vertex coverage
    /// ([`Error::NotSpanning`]), acyclicity ([`Error::Cycle`]), then the
    /// branch count ([`Error::WrongCardinality`]).
    pub fn from_edges(graph: Arc<Graph>, edges: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = graph.vertex_count();
        let mut is_branch = vec![false; graph.edge_count()];
        let mut branches = Vec::new();
        for e in edges {
            if e >= graph.edge_count() {
                return Err(Error::EdgeOutOfRange(e));
            }
            if is_branch[e] {
                return Err(Error::DuplicateEdge(e));
            }
            is_branch[e] = true;
            branches.push(e);
        }
        branches.sort_unstable();

        if n > 1 {
            let mut touched = vec![false; n];
            for &e in &branches {
                let (u, v) = graph.edge(e);
                touched[u] = true;
                touched[v] = true;
            }
            if touched.iter().any(|&t| !t) {
                return Err(Error::NotSpanning);
            }
        }
        let mut uf = UnionFind::<usize>::new(n);
        for &e in &branches {
            let (u, v) = graph.edge(e);
            if !uf.union(u, v) {
                return Err(Error::Cycle);
            }
        }
        if branches.len() + 1 != n {
            return Err(Error::WrongCardinality {
                expected: n.saturating_sub(1),
                got: branches.len(),
            });
        }

        let chords = (0..graph.edge_count()).filter(|&e| !is_branch[e]).collect();
        let mut tree = SpanningTree {
            graph,
            is_branch,
            branches,
            chords,
            parent: vec![None; n],
            depth: vec![0; n],
            enter: vec![0; n],
            exit: vec![0; n],
        };
        tree.root();
        Ok(tree)
    }

    fn root(&mut self) {
        let n = self.graph.vertex_count();
        if n == 0 {
            return;
        }
        let mut clock = 0;
        let mut visited = vec![false; n];
        // (vertex, next neighbor slot)
        let mut stack = vec![(0usize, 0usize)];
        visited[0] = true;
        self.enter[0] = clock;
        clock += 1;
        while let Some(&mut (u, ref mut slot)) = stack.last_mut() {
            let nbrs = self.graph.neighbors(u);
            if *slot < nbrs.len() {
                let (v, e) = nbrs[*slot];
                *slot += 1;
                if self.is_branch[e] && !visited[v] {
                    visited[v] = true;
                    self.parent[v] = Some((u, e));
                    self.depth[v] = self.depth[u] + 1;
                    self.enter[v] = clock;
                    clock += 1;
                    stack.push((v, 0));
                }
            } else {
                self.exit[u] = clock;
                stack.pop();
            }
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    /// Branch edge ids, sorted.
    pub fn branches(&self) -> &[usize] {
        &self.branches
    }

    /// Chord edge ids, sorted.
    pub fn chords(&self) -> &[usize] {
        &self.chords
    }

    pub fn is_branch(&self, edge: usize) -> bool {
        self.is_branch[edge]
    }

    /// Number of branches `M`.
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    /// Number of chords `N`.
    pub fn chord_count(&self) -> usize {
        self.chords.len()
    }

    /// Branch edge ids on the tree path from `u` to `v`.
    pub fn path_edges(&self, mut u: usize, mut v: usize) -> Vec<usize> {
        let mut up = Vec::new();
        let mut down = Vec::new();
        while u != v {
            if self.depth[u] >= self.depth[v] {
                let (p, e) = self.parent[u].expect("non-root vertex has a parent");
                up.push(e);
                u = p;
            } else {
                let (p, e) = self.parent[v].expect("non-root vertex has a parent");
                down.push(e);
                v = p;
            }
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// Length of the tree path between `u` and `v`.
    pub fn tree_distance(&self, mut u: usize, mut v: usize) -> usize {
        let mut d = 0;
        while u != v {
            if self.depth[u] >= self.depth[v] {
                u = self.parent[u].expect("non-root vertex has a parent").0;
            } else {
                v = self.parent[v].expect("non-root vertex has a parent").0;
            }
            d += 1;
        }
        d
    }

    /// The cycle closed by adding `chord`: the chord first, then the tree path.
    pub fn fundamental_cycle(&self, chord: usize) -> Result<Vec<usize>> {
        self.check_edge(chord)?;
        if self.is_branch[chord] {
            return Err(Error::NotAChord(chord));
        }
        let (u, v) = self.graph.edge(chord);
        let mut cycle = vec![chord];
        cycle.extend(self.path_edges(u, v));
        Ok(cycle)
    }

    /// `branch` together with every chord joining the two components of the
    /// tree with `branch` removed.
    pub fn fundamental_cut(&self, branch: usize) -> Result<Vec<usize>> {
        self.check_edge(branch)?;
        if !self.is_branch[branch] {
            return Err(Error::NotABranch(branch));
        }
        let (a, b) = self.graph.edge(branch);
        let child = if self.depth[a] > self.depth[b] { a } else { b };
        let inside =
            |x: usize| self.enter[child] <= self.enter[x] && self.enter[x] < self.exit[child];
        let mut cut = vec![branch];
        cut.extend(self.chords.iter().copied().filter(|&c| {
            let (u, v) = self.graph.edge(c);
            inside(u) != inside(v)
        }));
        Ok(cut)
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.graph.edge_count() {
            Err(Error::EdgeOutOfRange(e))
        } else {
            Ok(())
        }
    }

    /// Branch set as a bit mask; only meaningful for hosts with at most 64 edges.
    pub fn branch_mask(&self) -> u64 {
        debug_assert!(self.graph.edge_count() <= 64);
        self.branches.iter().fold(0, |m, &e| m | 1 << e)
    }

    pub fn to_spec(&self) -> TreeSpec {
        TreeSpec {
            graph: self.graph.to_spec(),
            branches: self.branches.clone(),
        }
    }

    /// Text picture of a grid tree: `o` vertices, `-` and `|` branches.
    pub fn render_ascii(&self) -> Option<String> {
        let n = self.graph.side()?;
        let g = &*self.graph;
        let mut out = String::new();
        for r in 0..n {
            for c in 0..n {
                out.push('o');
                if c + 1 < n {
                    let e = g.edge_between(g.vertex_at(r, c), g.vertex_at(r, c + 1))?;
                    out.push_str(if self.is_branch[e] { "---" } else { "   " });
                }
            }
            out.push('\n');
            if r + 1 < n {
                for c in 0..n {
                    let e = g.edge_between(g.vertex_at(r, c), g.vertex_at(r + 1, c))?;
                    out.push(if self.is_branch[e] { '|' } else { ' ' });
                    if c + 1 < n {
                        out.push_str("   ");
                    }
                }
                out.push('\n');
            }
        }
        Some(out)
    }
}

/// JSON form of a tree: the host graph fields plus `branches` (edge ids in
/// the host's canonical order), e.g. `{"n": 3, "branches": [0, 1, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    #[serde(flatten)]
    pub graph: GraphSpec,
    pub branches: Vec<usize>,
}

impl TreeSpec {
    pub fn build(&self) -> Result<SpanningTree> {
        let graph = Arc::new(self.graph.build()?);
        SpanningTree::from_edges(graph, self.branches.iter().copied())
    }
}

/// Every spanning tree of `graph`, by recursive include/exclude over edges.
pub fn all_spanning_trees(graph: &Arc<Graph>) -> Result<Vec<SpanningTree>> {
    let count = count_spanning_trees(graph)?;
    let count = count
        .to_usize()
        .filter(|&c| c <= MAX_ENUMERATED_TREES)
        .ok_or(Error::GuardExceeded {
            what: "spanning tree count",
            size: count.to_usize().unwrap_or(usize::MAX),
            limit: MAX_ENUMERATED_TREES,
        })?;

    let need = graph.vertex_count().saturating_sub(1);
    let mut found = Vec::with_capacity(count);
    let mut chosen = Vec::with_capacity(need);
    let labels: Vec<usize> = (0..graph.vertex_count()).collect();
    enumerate(graph, 0, need, &labels, &mut chosen, &mut found);
    found
        .into_iter()
        .map(|edges| SpanningTree::from_edges(Arc::clone(graph), edges))
        .collect()
}

fn enumerate(
    graph: &Graph,
    next: usize,
    need: usize,
    labels: &[usize],
    chosen: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == need {
        found.push(chosen.clone());
        return;
    }
    if next == graph.edge_count() || chosen.len() + (graph.edge_count() - next) < need {
        return;
    }
    let (u, v) = graph.edge(next);
    let (lu, lv) = (labels[u], labels[v]);
    if lu != lv {
        let merged: Vec<usize> = labels
            .iter()
            .map(|&l| if l == lv { lu } else { l })
            .collect();
        chosen.push(next);
        enumerate(graph, next + 1, need, &merged, chosen, found);
        chosen.pop();
    }
    enumerate(graph, next + 1, need, labels, chosen, found);
}
