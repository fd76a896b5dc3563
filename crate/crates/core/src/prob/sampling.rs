//! Monte Carlo estimates over uniformly random branch orders.
//!
//! Sample `i` shuffles the branches with a generator seeded by
//! [`derive_seed`]`(seed, i)`. Results are gathered in sample order, so they
//! do not depend on the number of worker threads.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipartite::BipartiteCompanion;
use crate::error::{Error, Result};
use crate::prob::passing::{PassingScratch, PassingTimes};
use crate::rational;
use crate::rng::{derive_seed, seeded};

/// `ln k!`.
pub fn log_factorial(k: usize) -> f64 {
    (2..=k).map(|x| (x as f64).ln()).sum()
}

/// An estimate of `ln Prob(T)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbEstimate {
    #[serde(rename = "log_prob")]
    pub log_value: f64,
    pub samples: u64,
    /// Delta-method standard error of `log_value`; zero when `exact`.
    pub log_std_err: f64,
    pub exact: bool,
    pub seed: Option<u64>,
}

impl ProbEstimate {
    /// Wraps an exactly computed probability.
    pub fn from_exact(p: &BigRational) -> Self {
        ProbEstimate {
            log_value: rational::to_f64(p).ln(),
            samples: 1,
            log_std_err: 0.0,
            exact: true,
            seed: None,
        }
    }

    pub fn probability(&self) -> f64 {
        self.log_value.exp()
    }
}

fn require_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    Ok(())
}

/// `sum ln P_i` for each of `samples` random orders, in sample order.
pub fn sample_log_products(companion: &BipartiteCompanion, samples: u64, seed: u64) -> Vec<f64> {
    let m = companion.branch_count();
    (0..samples)
        .into_par_iter()
        .map_init(
            || (PassingScratch::default(), Vec::with_capacity(m)),
            |(scratch, order), i| {
                random_order(order, m, seed, i);
                scratch.log_product(companion, order)
            },
        )
        .collect()
}

fn random_order(order: &mut Vec<usize>, m: usize, seed: u64, index: u64) {
    order.clear();
    order.extend(0..m);
    order.shuffle(&mut seeded(derive_seed(seed, index)));
}

/// Estimates `Prob(T) = M! * E[1 / prod P_i]` in log space.
pub fn prob_estimate(
    companion: &BipartiteCompanion,
    samples: u64,
    seed: u64,
) -> Result<ProbEstimate> {
    require_samples(samples)?;
    let s: Vec<f64> = sample_log_products(companion, samples, seed)
        .into_iter()
        .map(|x| -x)
        .collect();
    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = s.iter().map(|x| (x - max).exp()).collect();
    let k = w.len() as f64;
    let mean = w.iter().sum::<f64>() / k;
    let log_std_err = if w.len() > 1 {
        let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt() / mean
    } else {
        0.0
    };
    Ok(ProbEstimate {
        log_value: log_factorial(companion.branch_count()) + max + mean.ln(),
        samples,
        log_std_err,
        exact: false,
        seed: Some(seed),
    })
}

/// Samples of `A(T) = (prod P_i)^(1/M) / M` over random orders.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AStatistic {
    #[serde(skip)]
    pub values: Vec<f64>,
    pub samples: u64,
    pub mean: f64,
    pub variance: f64,
    /// Variance of `ln A`.
    pub log_variance: f64,
    pub mean_log: f64,
    pub seed: u64,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// `ln A` for the given passing times.
pub fn log_a(pt: &PassingTimes) -> f64 {
    let m = pt.branches() as f64;
    pt.log_product() / m - m.ln()
}

pub fn a_statistic(companion: &BipartiteCompanion, samples: u64, seed: u64) -> Result<AStatistic> {
    require_samples(samples)?;
    let m = companion.branch_count();
    if m == 0 {
        return Err(Error::InvalidArgument("tree has no branches".into()));
    }
    let mf = m as f64;
    let logs: Vec<f64> = sample_log_products(companion, samples, seed)
        .into_iter()
        .map(|x| x / mf - mf.ln())
        .collect();
    let values: Vec<f64> = logs.iter().map(|x| x.exp()).collect();
    let (mean, variance) = mean_var(&values);
    let (mean_log, log_variance) = mean_var(&logs);
    Ok(AStatistic {
        values,
        samples,
        mean,
        variance,
        log_variance,
        mean_log,
        seed,
    })
}

/// Mean of `P_i` over `samples` random orders, for `i = 1..=M`.
pub fn mean_passing_profile(
    companion: &BipartiteCompanion,
    samples: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    require_samples(samples)?;
    let m = companion.branch_count();
    let sums = (0..samples)
        .into_par_iter()
        .fold(
            || {
                (
                    PassingScratch::default(),
                    Vec::new(),
                    Vec::new(),
                    vec![0u64; m],
                )
            },
            |(mut scratch, mut order, mut times, mut acc), i| {
                random_order(&mut order, m, seed, i);
                scratch.fill(companion, &order, &mut times);
                for (a, &p) in acc.iter_mut().zip(&times) {
                    *a += p as u64;
                }
                (scratch, order, times, acc)
            },
        )
        .map(|(_, _, _, acc)| acc)
        .reduce(
            || vec![0u64; m],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(sums
        .into_iter()
        .map(|s| s as f64 / samples as f64)
        .collect())
}

/// CSV of one profile: header `i_over_m,p_over_m`, one row per `i`.
pub fn profile_csv(pt: &PassingTimes) -> String {
    let m = pt.branches() as f64;
    let mut out = String::from("i_over_m,p_over_m\n");
    for (idx, &p) in pt.as_slice().iter().enumerate() {
        out.push_str(&format!("{},{}\n", (idx + 1) as f64 / m, p as f64 / m));
    }
    out
}
