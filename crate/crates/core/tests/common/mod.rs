#![allow(dead_code)]

use std::sync::Arc;

use mstgrid::{sample_kruskal, sample_wilson, Graph, SpanningTree};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
        a != b
    }
}

/// Spanning trees counted by trying every edge subset of size `V - 1`.
pub fn brute_force_tree_count(vertices: usize, edges: &[(usize, usize)]) -> u64 {
    let need = vertices - 1;
    (0u32..1 << edges.len())
        .filter(|s| s.count_ones() as usize == need)
        .filter(|&s| {
            let mut d = Dsu::new(vertices);
            (0..edges.len())
                .filter(|i| s >> i & 1 == 1)
                .all(|i| d.union(edges[i].0, edges[i].1))
        })
        .count() as u64
}

/// `P_i` as the number of host edges between components of `{e_(i+1), ..., e_M}`,
/// where `order` holds host edge ids of the branches.
pub fn forest_passing_times(g: &Graph, order_edges: &[usize]) -> Vec<usize> {
    (1..=order_edges.len())
        .map(|i| {
            let mut d = Dsu::new(g.vertex_count());
            for &e in &order_edges[i..] {
                let (u, v) = g.edge(e);
                d.union(u, v);
            }
            g.edges()
                .iter()
                .filter(|&&(u, v)| d.find(u) != d.find(v))
                .count()
        })
        .collect()
}

/// All permutations of `0..k` (Heap's algorithm).
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..k).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0; k];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `sum over all branch orders of 1 / prod P_i`, one order at a time.
pub fn brute_force_prob(t: &SpanningTree) -> BigRational {
    let g = t.graph();
    let mut total = BigRational::zero();
    for perm in permutations(t.branch_count()) {
        let edges: Vec<usize> = perm.iter().map(|&i| t.branches()[i]).collect();
        let prod: BigInt = forest_passing_times(g, &edges)
            .into_iter()
            .map(BigInt::from)
            .product();
        total += BigRational::new(BigInt::from(1), prod);
    }
    total
}

/// Catalan's constant from Ramanujan's series
/// `G = (π/8) ln(2 + √3) + (3/8) Σ (n!)² / ((2n)! (2n + 1)²)`.
pub fn ramanujan_catalan() -> f64 {
    let mut sum = 0.0;
    let mut ratio = 1.0; // (n!)^2 / (2n)!
    for n in 0..60 {
        if n > 0 {
            ratio *= (n * n) as f64 / ((2 * n) * (2 * n - 1)) as f64;
        }
        sum += ratio / ((2 * n + 1) as f64).powi(2);
    }
    std::f64::consts::PI / 8.0 * (2.0 + 3f64.sqrt()).ln() + 3.0 / 8.0 * sum
}

pub fn grid(n: usize) -> Arc<Graph> {
    Arc::new(Graph::grid(n).unwrap())
}

/// Kruskal for even seeds, Wilson for odd ones.
pub fn random_tree(g: &Arc<Graph>, seed: u64) -> SpanningTree {
    if seed.is_multiple_of(2) {
        sample_kruskal(g, seed).unwrap()
    } else {
        sample_wilson(g, seed).unwrap()
    }
}

pub fn random_order(m: usize, seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..m).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    v
}
