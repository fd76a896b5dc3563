//! Spanning trees of the square grid under the minimum-spanning-tree law.
//!
//! A spanning tree of `G(n)` is the MST for i.i.d. uniform edge weights with
//! some probability `Prob(T)`. This crate computes that probability exactly
//! for small trees, estimates it by sampling branch orders for large ones,
//! and evaluates the asymptotic lower bounds on its decay for named tree
//! families.
//!
//! ```
//! use std::sync::Arc;
//! use mstgrid::{Graph, SpanningTree, prob_exact, rational::ratio};
//!
//! let g = Arc::new(Graph::grid(2)?);
//! let t = SpanningTree::from_edges(g, [1, 2, 3])?;
//! assert_eq!(prob_exact(&t)?, ratio(1, 4));
//! # Ok::<(), mstgrid::Error>(())
//! ```
//!
//! The guide in `book/` walks through each part with runnable examples.

pub mod asymptotics;
pub mod bipartite;
pub mod error;
pub mod families;
pub mod graph;
pub mod prob;
pub mod quadrature;
pub mod rational;
pub mod rng;
pub mod tree;

pub use asymptotics::{
    approx_passing_time, decay_lower_bound, expected_passing_time, family_power_series,
    fractal_p_infinity, geometric_mean, passing_profile_vs_f, uniform_family_series, DecayBound,
    PowerSeries, ProfileReport, SeriesFamily,
};
pub use bipartite::{BipartiteCompanion, DegreeMass, TreeStats};
pub use error::{Error, Result};
pub use families::{
    centipede, double_spiral, fractal, sample_kruskal, sample_wilson, FamilyKind, FamilySpec,
};
pub use graph::{count_spanning_trees, tree_growth_base, Graph, GraphSpec};
pub use prob::{
    a_statistic, bound_check, passing_times, passing_times_via_forest, prob_estimate, prob_exact,
    prob_exact_dual, AStatistic, ExactGuards, PassingTimes, ProbEstimate,
};
pub use tree::{all_spanning_trees, SpanningTree, TreeSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/grids.md")]
    mod grids {}
    #[doc = include_str!("../../../book/src/companion.md")]
    mod companion {}
    #[doc = include_str!("../../../book/src/probability.md")]
    mod probability {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/decay.md")]
    mod decay {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
