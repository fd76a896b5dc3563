//! The bipartite companion of a spanning tree and the statistics read off it.
//!
//! Branch nodes and chord nodes are linked when the branch lies on the
//! chord's fundamental cycle. Equivalently, a branch is linked to every
//! chord of its fundamental cut. Everything here is exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::ratio;
use crate::tree::SpanningTree;

/// Chord-to-branch incidence of a spanning tree.
///
/// Node indices follow [`SpanningTree::branches`] and [`SpanningTree::chords`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteCompanion {
    chord_links: Vec<Vec<usize>>,
    branch_links: Vec<Vec<usize>>,
}

impl BipartiteCompanion {
    pub fn from_tree(tree: &SpanningTree) -> Self {
        let mut branch_index = vec![usize::MAX; tree.graph().edge_count()];
        for (i, &e) in tree.branches().iter().enumerate() {
            branch_index[e] = i;
        }
        let chord_links = tree
            .chords()
            .iter()
            .map(|&c| {
                let (u, v) = tree.graph().edge(c);
                let mut links: Vec<usize> = tree
                    .path_edges(u, v)
                    .into_iter()
                    .map(|e| branch_index[e])
                    .collect();
                links.sort_unstable();
                links
            })
            .collect();
        Self::assemble(tree.branch_count(), chord_links)
    }

    /// Builds a companion from explicit chord adjacency lists.
    pub fn from_chord_links(branch_count: usize, chord_links: Vec<Vec<usize>>) -> Result<Self> {
        for (v, links) in chord_links.iter().enumerate() {
            let mut sorted = links.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != links.len() || sorted.last().is_some_and(|&b| b >= branch_count) {
                return Err(Error::InvalidGraph(format!(
                    "chord node {v} has repeated or out-of-range branch links"
                )));
            }
        }
        Ok(Self::assemble(branch_count, chord_links))
    }

    fn assemble(branch_count: usize, chord_links: Vec<Vec<usize>>) -> Self {
        let mut branch_links = vec![Vec::new(); branch_count];
        for (v, links) in chord_links.iter().enumerate() {
            for &b in links {
                branch_links[b].push(v);
            }
        }
        BipartiteCompanion {
            chord_links,
            branch_links,
        }
    }

    /// `M`, the number of branch nodes.
    pub fn branch_count(&self) -> usize {
        self.branch_links.len()
    }

    /// `N`, the number of chord nodes.
    pub fn chord_count(&self) -> usize {
        self.chord_links.len()
    }

    pub fn link_count(&self) -> usize {
        self.chord_links.iter().map(Vec::len).sum()
    }

    /// Branch nodes on the fundamental cycle of chord node `v`.
    pub fn chord_links(&self, v: usize) -> &[usize] {
        &self.chord_links[v]
    }

    /// Chord nodes whose fundamental cycle passes through branch node `e`.
    pub fn branch_links(&self, e: usize) -> &[usize] {
        &self.branch_links[e]
    }

    pub fn chord_degree(&self, v: usize) -> usize {
        self.chord_links[v].len()
    }

    pub fn branch_degree(&self, e: usize) -> usize {
        self.branch_links[e].len()
    }

    /// Mean branch-node degree `d1`.
    pub fn mean_branch_degree(&self) -> BigRational {
        ratio(self.link_count(), self.branch_count().max(1))
    }

    /// Mean chord-node degree `d2`.
    pub fn mean_chord_degree(&self) -> BigRational {
        ratio(self.link_count(), self.chord_count().max(1))
    }

    /// Mean degree over all nodes of both sides.
    pub fn mean_node_degree(&self) -> BigRational {
        let nodes = self.branch_count() + self.chord_count();
        ratio(2 * self.link_count(), nodes.max(1))
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, u64> {
        let mut hist = BTreeMap::new();
        for links in &self.chord_links {
            *hist.entry(links.len()).or_insert(0) += 1;
        }
        hist
    }

    pub fn degree_mass(&self) -> Result<DegreeMass> {
        if self.chord_count() == 0 {
            return Err(Error::NoChords);
        }
        Ok(DegreeMass {
            counts: self.degree_histogram(),
            total: self.chord_count() as u64,
        })
    }

    /// Fraction of ordered pairs of distinct chord nodes that share at least
    /// one branch neighbor. Zero when there are fewer than two chords.
    pub fn neighbor_overlap_ratio(&self) -> BigRational {
        let n = self.chord_count();
        if n < 2 {
            return BigRational::zero();
        }
        let mut stamp = vec![usize::MAX; n];
        let mut sharing: u64 = 0;
        for v in 0..n {
            stamp[v] = v;
            for &b in &self.chord_links[v] {
                for &w in &self.branch_links[b] {
                    if stamp[w] != v {
                        stamp[w] = v;
                        sharing += 1;
                    }
                }
            }
        }
        ratio(sharing, (n as u64) * (n as u64 - 1))
    }
}

/// Fraction of chord nodes having each degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeMass {
    counts: BTreeMap<usize, u64>,
    total: u64,
}

impl DegreeMass {
    /// Builds a mass function from raw degree counts.
    pub fn from_counts(counts: BTreeMap<usize, u64>) -> Result<Self> {
        let total = counts.values().sum();
        if total == 0 {
            return Err(Error::NoChords);
        }
        Ok(DegreeMass { counts, total })
    }

    pub fn chord_count(&self) -> u64 {
        self.total
    }

    pub fn count(&self, degree: usize) -> u64 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    pub fn mass(&self, degree: usize) -> BigRational {
        ratio(self.count(degree), self.total)
    }

    /// `(degree, count)` pairs in increasing degree, zero counts omitted.
    pub fn counts(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&d, &c)| (d, c))
    }

    /// `(degree, mass)` pairs in increasing degree.
    pub fn masses(&self) -> impl Iterator<Item = (usize, BigRational)> + '_ {
        self.counts().map(|(d, c)| (d, ratio(c, self.total)))
    }

    pub fn total_mass(&self) -> BigRational {
        self.masses()
            .fold(BigRational::zero(), |acc, (_, m)| acc + m)
    }

    /// CSV with columns `d,count,mass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,count,mass\n");
        for (d, c) in self.counts() {
            out.push_str(&format!("{d},{c},{}\n", ratio(c, self.total)));
        }
        out
    }
}

/// Average over all host edges of the tree distance between the endpoints,
/// computed edge by edge.
pub fn avg_stretch(tree: &SpanningTree) -> BigRational {
    let g = tree.graph();
    let total: usize = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            if tree.is_branch(e) {
                1
            } else {
                tree.tree_distance(u, v)
            }
        })
        .sum();
    ratio(total, g.edge_count().max(1))
}

/// `(M + N*d2) / (M + N)`, the companion-side form of the average stretch.
pub fn avg_stretch_from_companion(b: &BipartiteCompanion) -> BigRational {
    let m = b.branch_count();
    ratio(m + b.link_count(), (m + b.chord_count()).max(1))
}

/// Mean size of the fundamental cut over branches, i.e. `d1 + 1`.
pub fn expected_cut_edges(b: &BipartiteCompanion) -> BigRational {
    b.mean_branch_degree() + BigRational::from_integer(BigInt::from(1))
}

/// Mean companion node degree divided by `n^2`.
pub fn boundedness_statistic(b: &BipartiteCompanion, side: usize) -> BigRational {
    b.mean_node_degree() / BigRational::from_integer(BigInt::from(side * side))
}

/// Summary statistics of one tree.
#[derive(Debug, Clone, Serialize)]
pub struct TreeStats {
    #[serde(rename = "M")]
    pub branches: usize,
    #[serde(rename = "N")]
    pub chords: usize,
    #[serde(with = "crate::rational")]
    pub d1: BigRational,
    #[serde(with = "crate::rational")]
    pub d2: BigRational,
    #[serde(with = "crate::rational")]
    pub avg_stretch: BigRational,
    #[serde(with = "crate::rational")]
    pub expected_cut_edges: BigRational,
    #[serde(with = "crate::rational")]
    pub neighbor_overlap: BigRational,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_ratio")]
    pub boundedness: Option<BigRational>,
}

fn opt_ratio<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

impl TreeStats {
    pub fn compute(tree: &SpanningTree, companion: &BipartiteCompanion) -> Self {
        TreeStats {
            branches: companion.branch_count(),
            chords: companion.chord_count(),
            d1: companion.mean_branch_degree(),
            d2: companion.mean_chord_degree(),
            avg_stretch: avg_stretch(tree),
            expected_cut_edges: expected_cut_edges(companion),
            neighbor_overlap: companion.neighbor_overlap_ratio(),
            boundedness: tree
                .graph()
                .side()
                .map(|n| boundedness_statistic(companion, n)),
        }
    }
}
