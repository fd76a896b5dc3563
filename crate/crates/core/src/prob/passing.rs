//! Passing times of a branch order.
//!
//! Visiting the branches in a given order, `P_i` is `i` plus the number of
//! chords linked to at least one of the first `i` branches.

use num_bigint::BigUint;
use num_traits::One;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::bipartite::BipartiteCompanion;
use crate::error::{Error, Result};
use crate::tree::SpanningTree;

/// The passing-time sequence `P_1..P_M` of one order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassingTimes {
    times: Vec<usize>,
    branches: usize,
    chords: usize,
}

impl PassingTimes {
    /// Wraps a raw sequence (for example one read from a file) without checks;
    /// use [`bound_check`] to validate it.
    pub fn from_raw(times: Vec<usize>, branches: usize, chords: usize) -> Self {
        PassingTimes {
            times,
            branches,
            chords,
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.times
    }

    pub fn branches(&self) -> usize {
        self.branches
    }

    pub fn chords(&self) -> usize {
        self.chords
    }

    /// `P_i` for `1 <= i <= M`.
    pub fn get(&self, i: usize) -> usize {
        self.times[i - 1]
    }

    /// `sum ln P_i`.
    pub fn log_product(&self) -> f64 {
        self.times.iter().map(|&p| (p as f64).ln()).sum()
    }
}

pub(crate) fn check_order(order: &[usize], len: usize) -> Result<()> {
    if order.len() != len {
        return Err(Error::InvalidOrder(format!(
            "expected {len} entries, got {}",
            order.len()
        )));
    }
    let mut seen = vec![false; len];
    for &x in order {
        if x >= len || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidOrder(format!(
                "entry {x} is out of range or repeated"
            )));
        }
    }
    Ok(())
}

/// Reusable buffer for evaluating many orders against one companion.
#[derive(Debug, Clone, Default)]
pub struct PassingScratch {
    lit: Vec<bool>,
}

impl PassingScratch {
    /// Writes the passing times of `order` (a permutation of branch nodes)
    /// into `out`. The order is not validated.
    pub fn fill(&mut self, companion: &BipartiteCompanion, order: &[usize], out: &mut Vec<usize>) {
        self.lit.clear();
        self.lit.resize(companion.chord_count(), false);
        out.clear();
        let mut lit = 0;
        for (i, &b) in order.iter().enumerate() {
            for &v in companion.branch_links(b) {
                if !self.lit[v] {
                    self.lit[v] = true;
                    lit += 1;
                }
            }
            out.push(i + 1 + lit);
        }
    }

    /// `sum ln P_i` for `order`, without materializing the sequence.
    pub fn log_product(&mut self, companion: &BipartiteCompanion, order: &[usize]) -> f64 {
        self.lit.clear();
        self.lit.resize(companion.chord_count(), false);
        let mut lit = 0;
        let mut acc = 0.0;
        for (i, &b) in order.iter().enumerate() {
            for &v in companion.branch_links(b) {
                if !self.lit[v] {
                    self.lit[v] = true;
                    lit += 1;
                }
            }
            acc += ((i + 1 + lit) as f64).ln();
        }
        acc
    }
}

/// Passing times of a branch order, computed incrementally on the companion.
pub fn passing_times(companion: &BipartiteCompanion, order: &[usize]) -> Result<PassingTimes> {
    check_order(order, companion.branch_count())?;
    let mut times = Vec::with_capacity(order.len());
    PassingScratch::default().fill(companion, order, &mut times);
    Ok(PassingTimes {
        times,
        branches: companion.branch_count(),
        chords: companion.chord_count(),
    })
}

/// Dual passing times: chords take turns and light branches.
pub fn dual_passing_times(
    companion: &BipartiteCompanion,
    chord_order: &[usize],
) -> Result<Vec<usize>> {
    check_order(chord_order, companion.chord_count())?;
    let mut lit = vec![false; companion.branch_count()];
    let mut count = 0;
    Ok(chord_order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            for &b in companion.chord_links(v) {
                if !lit[b] {
                    lit[b] = true;
                    count += 1;
                }
            }
            i + 1 + count
        })
        .collect())
}

/// Passing times from the host graph alone: `P_i` is the number of host
/// edges joining different components of the forest made of the branches
/// after position `i` in `order`.
///
/// Order entries index [`SpanningTree::branches`]. Each `P_i` is recounted
/// from scratch; this is a cross-check, not a fast path.
pub fn passing_times_via_forest(tree: &SpanningTree, order: &[usize]) -> Result<PassingTimes> {
    check_order(order, tree.branch_count())?;
    let g = tree.graph();
    let times = (1..=order.len())
        .map(|i| {
            let mut uf = UnionFind::<usize>::new(g.vertex_count());
            for &b in &order[i..] {
                let (u, v) = g.edge(tree.branches()[b]);
                uf.union(u, v);
            }
            g.edges().iter().filter(|&&(u, v)| !uf.equiv(u, v)).count()
        })
        .collect();
    Ok(PassingTimes {
        times,
        branches: tree.branch_count(),
        chords: tree.chord_count(),
    })
}

/// Outcome of [`bound_check`]: `violation` names the first failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub passed: bool,
    pub violation: Option<String>,
}

/// Checks a grid passing-time sequence against the structural bounds:
/// strictly increasing within `1..=M+N`, `P_i <= N + i`,
/// `P_i >= 2(i+1) - 2n`, and `prod P_i / M! <= C(M+N, M)` (checked exactly).
pub fn bound_check(pt: &PassingTimes, side: usize) -> BoundReport {
    let fail = |msg: String| BoundReport {
        passed: false,
        violation: Some(msg),
    };
    let (m, n_chords) = (pt.branches, pt.chords);
    let p = &pt.times;
    if p.len() != m {
        return fail(format!("expected {m} passing times, got {}", p.len()));
    }
    if let Some(i) = (1..p.len()).find(|&i| p[i] <= p[i - 1]) {
        return fail(format!("not strictly increasing at i = {}", i + 1));
    }
    for (idx, &pi) in p.iter().enumerate() {
        let i = idx + 1;
        if pi < 1 || pi > m + n_chords {
            return fail(format!("P_{i} = {pi} outside 1..={}", m + n_chords));
        }
        if pi > n_chords + i {
            return fail(format!("P_{i} = {pi} exceeds N + i = {}", n_chords + i));
        }
        if (pi as i64) < 2 * (i as i64 + 1) - 2 * side as i64 {
            return fail(format!("P_{i} = {pi} below 2(i+1) - 2n"));
        }
    }
    // prod P_i * N! <= (M+N)!
    let prod = p.iter().fold(BigUint::one(), |acc, &x| acc * x);
    let lhs = prod * factorial(n_chords);
    if lhs > factorial(m + n_chords) {
        return fail("prod P_i / M! exceeds C(M+N, M)".into());
    }
    BoundReport {
        passed: true,
        violation: None,
    }
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, x| acc * x)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::families::centipede;
    use crate::graph::Graph;

    fn g2() -> (SpanningTree, BipartiteCompanion) {
        let t = SpanningTree::from_edges(Arc::new(Graph::grid(2).unwrap()), [1, 2, 3]).unwrap();
        let b = BipartiteCompanion::from_tree(&t);
        (t, b)
    }

    #[test]
    fn four_cycle_times_are_order_independent() {
        let (t, b) = g2();
        for order in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
            assert_eq!(passing_times(&b, &order).unwrap().as_slice(), &[2, 3, 4]);
            assert_eq!(
                passing_times_via_forest(&t, &order).unwrap().as_slice(),
                &[2, 3, 4]
            );
        }
        assert_eq!(dual_passing_times(&b, &[0]).unwrap(), vec![4]);
    }

    #[test]
    fn malformed_orders() {
        let (_, b) = g2();
        assert!(passing_times(&b, &[0, 1]).is_err());
        assert!(passing_times(&b, &[0, 1, 1]).is_err());
        assert!(passing_times(&b, &[0, 1, 3]).is_err());
    }

    #[test]
    fn centipede_spine_first() {
        let t = centipede(3).unwrap();
        let b = BipartiteCompanion::from_tree(&t);
        // branches sorted by edge id: spine (0,1) then legs row by row
        let order: Vec<usize> = (0..8).collect();
        let p = passing_times(&b, &order).unwrap();
        assert_eq!(p, passing_times_via_forest(&t, &order).unwrap());
        // the first spine edge lies on both chords of its column gap
        assert_eq!(p.get(1), 3);
        assert_eq!(p.get(8), 12);
    }

    #[test]
    fn bound_check_cases() {
        let ok = PassingTimes::from_raw(vec![2, 3, 4], 3, 1);
        assert!(bound_check(&ok, 2).passed);
        let bad = bound_check(&PassingTimes::from_raw(vec![3, 3, 4], 3, 1), 2);
        assert!(!bad.passed);
        assert!(bad.violation.unwrap().contains("not strictly increasing"));
        let too_high = bound_check(&PassingTimes::from_raw(vec![3, 4, 5], 3, 1), 2);
        assert!(!too_high.passed);
    }
}
