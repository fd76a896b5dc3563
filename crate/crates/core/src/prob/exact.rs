//! Exact MST probabilities.
//!
//! `Prob(T)` is the sum over all orders of the branches of `1 / prod P_i`.
//! The sum depends on an order only through its chain of prefixes, so it is
//! accumulated over prefix sets instead of orders:
//!
//! ```text
//! g({}) = 1,    g(S) = (sum over p in S of g(S - p)) / (|S| + |N(S)|)
//! ```
//!
//! where `N(S)` is the set of chords linked to some branch of `S`. Then
//! `Prob(T) = g(all branches)`. This costs `2^M` rational steps instead of
//! `M!`. The dual form swaps the roles of branches and chords.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bipartite::BipartiteCompanion;
use crate::error::{Error, Result};
use crate::tree::SpanningTree;

/// Default cap on `M` for [`prob_exact`] and on `N` for [`prob_exact_dual`].
pub const DEFAULT_EXACT_LIMIT: usize = 12;
/// Hard cap on either guard, bounding the `2^size` table.
pub const MAX_EXACT_LIMIT: usize = 24;

/// Size limits for the exact sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactGuards {
    pub max_branches: usize,
    pub max_chords: usize,
}

impl Default for ExactGuards {
    fn default() -> Self {
        ExactGuards {
            max_branches: DEFAULT_EXACT_LIMIT,
            max_chords: DEFAULT_EXACT_LIMIT,
        }
    }
}

/// `Prob(T)` summed over branch orders, with the default guard. Larger
/// trees need [`prob_estimate`](crate::prob::prob_estimate).
pub fn prob_exact(tree: &SpanningTree) -> Result<BigRational> {
    prob_exact_with(tree, &ExactGuards::default())
}

/// `Prob(T)` summed over chord orders, with the default guard.
pub fn prob_exact_dual(tree: &SpanningTree) -> Result<BigRational> {
    prob_exact_dual_with(tree, &ExactGuards::default())
}

pub fn prob_exact_with(tree: &SpanningTree, guards: &ExactGuards) -> Result<BigRational> {
    let m = tree.branch_count();
    check_guard("branch count M", m, guards.max_branches)?;
    let b = BipartiteCompanion::from_tree(tree);
    let links: Vec<&[usize]> = (0..m).map(|e| b.branch_links(e)).collect();
    Ok(prefix_sum(&links, b.chord_count()))
}

pub fn prob_exact_dual_with(tree: &SpanningTree, guards: &ExactGuards) -> Result<BigRational> {
    let n = tree.chord_count();
    check_guard("chord count N", n, guards.max_chords)?;
    let b = BipartiteCompanion::from_tree(tree);
    let links: Vec<&[usize]> = (0..n).map(|v| b.chord_links(v)).collect();
    Ok(prefix_sum(&links, b.branch_count()))
}

fn check_guard(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if limit > MAX_EXACT_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "exact-enumeration limit {limit} exceeds the hard cap {MAX_EXACT_LIMIT}"
        )));
    }
    if size > limit {
        return Err(Error::GuardExceeded { what, size, limit });
    }
    Ok(())
}

/// `g(all movers)` for movers that light the given sets of `others` targets.
fn prefix_sum(links: &[&[usize]], others: usize) -> BigRational {
    let k = links.len();
    let words = others.div_ceil(64).max(1);
    let own: Vec<Vec<u64>> = links
        .iter()
        .map(|ls| {
            let mut bits = vec![0u64; words];
            for &t in *ls {
                bits[t / 64] |= 1 << (t % 64);
            }
            bits
        })
        .collect();

    let full = 1usize << k;
    let mut lit = vec![0u64; full * words];
    let mut g: Vec<BigRational> = Vec::with_capacity(full);
    g.push(BigRational::one());
    for s in 1..full {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let mut count = 0u32;
        for w in 0..words {
            let x = lit[rest * words + w] | own[low][w];
            lit[s * words + w] = x;
            count += x.count_ones();
        }
        let mut acc = BigRational::zero();
        let mut bits = s;
        while bits != 0 {
            let p = bits.trailing_zeros();
            acc += &g[s ^ (1 << p)];
            bits &= bits - 1;
        }
        let time = s.count_ones() + count;
        g.push(acc / BigRational::from_integer(BigInt::from(time)));
    }
    g.pop().expect("table is nonempty")
}
