//! Passing times and MST probabilities.

mod exact;
mod passing;
mod sampling;

pub use exact::{
    prob_exact, prob_exact_dual, prob_exact_dual_with, prob_exact_with, ExactGuards,
    DEFAULT_EXACT_LIMIT, MAX_EXACT_LIMIT,
};
pub use passing::{
    bound_check, dual_passing_times, passing_times, passing_times_via_forest, BoundReport,
    PassingScratch, PassingTimes,
};
pub use sampling::{
    a_statistic, log_a, log_factorial, mean_passing_profile, prob_estimate, profile_csv,
    sample_log_products, AStatistic, ProbEstimate,
};
