//! Expected passing times, power series and decay-base lower bounds.

mod fractal_limit;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub use fractal_limit::{
    fractal_histograms, fractal_p_infinity, fractal_p_infinity_with, p_infinity_from_histograms,
    FRACTAL_K_MAX,
};

use crate::bipartite::{BipartiteCompanion, DegreeMass};
use crate::error::{Error, Result};
use crate::prob::mean_passing_profile;
use crate::quadrature::{integrate, DEFAULT_TOLERANCE};
use crate::rational;
use crate::tree::SpanningTree;

fn check_index(i: usize, m: usize) -> Result<()> {
    if i == 0 || i > m {
        return Err(Error::IndexOutOfRange { index: i, max: m });
    }
    Ok(())
}

/// `C(M-d, i) / C(M, i)`, zero when `i > M - d`.
fn binomial_ratio(m: usize, d: usize, i: usize) -> BigRational {
    if d > m || i > m - d {
        return BigRational::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..i {
        num *= m - d - j;
        den *= m - j;
    }
    BigRational::new(num, den)
}

/// Exact mean of `P_i` over uniformly random branch orders:
/// `i + N (1 - sum_d p(d) C(M-d, i) / C(M, i))`.
pub fn expected_passing_time(dm: &DegreeMass, m: usize, n: usize, i: usize) -> Result<BigRational> {
    check_index(i, m)?;
    let unlit: BigRational = dm
        .masses()
        .map(|(d, p)| p * binomial_ratio(m, d, i))
        .fold(BigRational::zero(), |a, b| a + b);
    Ok(BigRational::from_integer(BigInt::from(i))
        + BigRational::from_integer(BigInt::from(n)) * (BigRational::one() - unlit))
}

/// `i + N (1 - sum_d p(d) ((M - i) / M)^d)`, a lower bound for
/// [`expected_passing_time`].
pub fn approx_passing_time(dm: &DegreeMass, m: usize, n: usize, i: usize) -> Result<f64> {
    check_index(i, m)?;
    let y = (m - i) as f64 / m as f64;
    let unlit: f64 = dm
        .masses()
        .map(|(d, p)| rational::to_f64(&p) * y.powi(d as i32))
        .sum();
    Ok(i as f64 + n as f64 * (1.0 - unlit))
}

/// `f(x) = 1 + x - sum_d p(d) (1 - x)^d` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSeries {
    coefficients: BTreeMap<usize, f64>,
    /// Mass the model assigns beyond the stored coefficients.
    omitted_mass: f64,
}

/// Masses within this distance of 1 are treated as exactly 1.
const UNIT_MASS_SLACK: f64 = 1e-12;

impl PowerSeries {
    /// `f(x) = 1 + x`.
    pub fn linear() -> Self {
        PowerSeries {
            coefficients: BTreeMap::new(),
            omitted_mass: 0.0,
        }
    }

    pub fn new(coefficients: BTreeMap<usize, f64>) -> Result<Self> {
        Self::with_omitted_mass(coefficients, 0.0)
    }

    pub fn with_omitted_mass(
        coefficients: BTreeMap<usize, f64>,
        omitted_mass: f64,
    ) -> Result<Self> {
        if let Some((&d, &p)) = coefficients
            .iter()
            .find(|(&d, &p)| d < 1 || p.is_nan() || p < 0.0)
        {
            return Err(Error::InvalidArgument(format!(
                "bad coefficient p({d}) = {p}"
            )));
        }
        if omitted_mass.is_nan() || omitted_mass < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "bad omitted mass {omitted_mass}"
            )));
        }
        let ps = PowerSeries {
            coefficients,
            omitted_mass,
        };
        if ps.mass_total() + ps.omitted_mass > 1.0 + UNIT_MASS_SLACK {
            return Err(Error::NonPositiveSeries(1.0 - ps.mass_total()));
        }
        Ok(ps)
    }

    pub fn from_exact(coefficients: &BTreeMap<usize, BigRational>) -> Result<Self> {
        Self::new(
            coefficients
                .iter()
                .map(|(&d, p)| (d, rational::to_f64(p)))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &BTreeMap<usize, f64> {
        &self.coefficients
    }

    pub fn coefficient(&self, d: usize) -> f64 {
        self.coefficients.get(&d).copied().unwrap_or(0.0)
    }

    /// Sum of the stored coefficients.
    pub fn mass_total(&self) -> f64 {
        self.coefficients.values().sum()
    }

    pub fn omitted_mass(&self) -> f64 {
        self.omitted_mass
    }

    /// Stored plus omitted mass.
    pub fn model_mass(&self) -> f64 {
        self.mass_total() + self.omitted_mass
    }

    fn vanishes_at_zero(&self) -> bool {
        (1.0 - self.mass_total()).abs() <= UNIT_MASS_SLACK
    }

    /// `sum_d p(d) (1 - (1 - x)^d)`.
    fn lit_part(&self, x: f64) -> f64 {
        let l = (-x).ln_1p();
        self.coefficients
            .iter()
            .map(|(&d, &p)| -p * (d as f64 * l).exp_m1())
            .sum()
    }

    /// `f(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let base = if self.vanishes_at_zero() {
            0.0
        } else {
            1.0 - self.mass_total()
        };
        base + x + self.lit_part(x)
    }

    /// `f(x) / x` for `x > 0`, finite as `x -> 0` when `f(0) = 0`.
    fn eval_over_x(&self, x: f64) -> f64 {
        let base = if self.vanishes_at_zero() {
            0.0
        } else {
            (1.0 - self.mass_total()) / x
        };
        base + 1.0 + self.lit_part(x) / x
    }

    /// Geometric mean `exp(∫_0^1 ln f)`.
    pub fn geometric_mean(&self) -> Result<f64> {
        let f0 = self.eval(0.0);
        if f0 < 0.0 {
            return Err(Error::NonPositiveSeries(f0));
        }
        if self.vanishes_at_zero() {
            // ln f = ln(f/x) + ln x and ∫_0^1 ln x = -1
            log_integral(|x| self.eval_over_x(x)).map(|v| (v - 1.0).exp())
        } else {
            log_integral(|x| self.eval(x)).map(f64::exp)
        }
    }

    /// Rows `x,f` at `points + 1` equally spaced abscissae.
    pub fn to_csv(&self, points: usize) -> String {
        let points = points.max(1);
        let mut out = String::from("x,f\n");
        for j in 0..=points {
            let x = j as f64 / points as f64;
            out.push_str(&format!("{x},{}\n", self.eval(x)));
        }
        out
    }
}

fn log_integral<F: Fn(f64) -> f64>(g: F) -> Result<f64> {
    let bad = std::cell::Cell::new(None);
    let q = integrate(
        |x| {
            let v = g(x);
            if v.is_nan() || v <= 0.0 {
                bad.set(Some(v));
                return 0.0;
            }
            v.ln()
        },
        0.0,
        1.0,
        DEFAULT_TOLERANCE,
    );
    if let Some(v) = bad.get() {
        return Err(Error::NonPositiveSeries(v));
    }
    Ok(q?.value)
}

/// Geometric mean of an arbitrary positive `f` on `(0, 1]`.
///
/// With `vanishes_at_zero`, `f(x) / x` is integrated instead and the
/// `∫ ln x = -1` part is added in closed form.
pub fn geometric_mean_fn<F: Fn(f64) -> f64>(f: F, vanishes_at_zero: bool) -> Result<f64> {
    if vanishes_at_zero {
        log_integral(|x| f(x) / x).map(|v| (v - 1.0).exp())
    } else {
        log_integral(f).map(f64::exp)
    }
}

/// Geometric mean of `ps`; see [`PowerSeries::geometric_mean`].
pub fn geometric_mean(ps: &PowerSeries) -> Result<f64> {
    ps.geometric_mean()
}

/// The decay-base lower bound `1 / (e f̄)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayBound {
    pub f_bar: f64,
    pub e_f_bar: f64,
    pub q_lower: f64,
}

pub fn decay_lower_bound(ps: &PowerSeries) -> Result<DecayBound> {
    let f_bar = ps.geometric_mean()?;
    let e_f_bar = std::f64::consts::E * f_bar;
    Ok(DecayBound {
        f_bar,
        e_f_bar,
        q_lower: 1.0 / e_f_bar,
    })
}

/// Leading masses of the uniform-family model.
pub const UNIFORM_P3: f64 = 0.29454;
pub const UNIFORM_P5: f64 = 0.12409;
/// Tail exponent: `p(d) ~ C d^(-8/5)`.
pub const UNIFORM_TAIL_EXPONENT: f64 = 1.6;
/// Default cutoff for [`uniform_family_series`].
pub const UNIFORM_D_MAX: usize = 10_001;
const UNIFORM_TAIL_TERMS: usize = 1_000_000;

/// `sum d^(-8/5)` over odd `d >= 7`: explicit to 10^6, then the integral
/// comparison `D^(-3/5) / 1.2` for the odd terms beyond `D`.
fn uniform_tail_sum() -> f64 {
    let explicit: f64 = (7..=UNIFORM_TAIL_TERMS)
        .step_by(2)
        .map(|d| (d as f64).powf(-UNIFORM_TAIL_EXPONENT))
        .sum();
    explicit
        + (UNIFORM_TAIL_TERMS as f64).powf(1.0 - UNIFORM_TAIL_EXPONENT)
            / (2.0 * (UNIFORM_TAIL_EXPONENT - 1.0))
}

/// The uniform-family model: `p(3)`, `p(5)` fixed, `p(d) = C d^(-8/5)` for
/// odd `7 <= d <= d_max`, with `C` normalizing the infinite odd tail.
/// Tail mass past `d_max` is recorded as omitted.
pub fn uniform_family_series(d_max: usize) -> Result<PowerSeries> {
    if d_max < 7 {
        return Err(Error::InvalidArgument(format!(
            "d_max must be at least 7, got {d_max}"
        )));
    }
    let tail = uniform_tail_sum();
    let c = (1.0 - UNIFORM_P3 - UNIFORM_P5) / tail;
    let mut coefficients = BTreeMap::from([(3, UNIFORM_P3), (5, UNIFORM_P5)]);
    let mut kept = 0.0;
    for d in (7..=d_max).step_by(2) {
        let w = (d as f64).powf(-UNIFORM_TAIL_EXPONENT);
        kept += w;
        coefficients.insert(d, c * w);
    }
    PowerSeries::with_omitted_mass(coefficients, (c * (tail - kept)).max(0.0))
}

/// Families with a known limiting power series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesFamily {
    Centipede,
    DoubleSpiral,
    Fractal,
    Uniform,
}

impl SeriesFamily {
    pub const ALL: [SeriesFamily; 4] = [
        SeriesFamily::Centipede,
        SeriesFamily::DoubleSpiral,
        SeriesFamily::Fractal,
        SeriesFamily::Uniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesFamily::Centipede => "centipede",
            SeriesFamily::DoubleSpiral => "double-spiral",
            SeriesFamily::Fractal => "fractal",
            SeriesFamily::Uniform => "uniform",
        }
    }
}

impl fmt::Display for SeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('_', "-");
        SeriesFamily::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or(Error::UnknownFamily(s))
    }
}

/// The limiting power series of `kind`, truncated at degree `d_max`.
pub fn family_power_series(kind: SeriesFamily, d_max: usize) -> Result<PowerSeries> {
    if d_max < 3 {
        return Err(Error::InvalidArgument(format!(
            "d_max must be at least 3, got {d_max}"
        )));
    }
    match kind {
        SeriesFamily::Centipede | SeriesFamily::DoubleSpiral => Ok(PowerSeries::linear()),
        SeriesFamily::Fractal => PowerSeries::from_exact(&fractal_p_infinity(d_max)?),
        SeriesFamily::Uniform => uniform_family_series(d_max),
    }
}

/// One abscissa of a [`ProfileReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub x: f64,
    pub mean_p_over_m: f64,
    pub f: f64,
    pub approx_over_m: f64,
}

/// Sampled mean passing-time profile of a tree next to a power series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileReport {
    pub rows: Vec<ProfileRow>,
    /// Largest `|mean P_i / M - f(i / M)|` over `i / M` in `[0.1, 1]`.
    pub sup_deviation: f64,
    pub samples: u64,
    pub seed: u64,
}

impl ProfileReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,mean_p_over_m,f,approx_over_m\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.x, r.mean_p_over_m, r.f, r.approx_over_m
            ));
        }
        out
    }
}

pub fn passing_profile_vs_f(
    tree: &SpanningTree,
    ps: &PowerSeries,
    samples: u64,
    seed: u64,
) -> Result<ProfileReport> {
    let b = BipartiteCompanion::from_tree(tree);
    let (m, n) = (b.branch_count(), b.chord_count());
    let dm = if n == 0 { None } else { Some(b.degree_mass()?) };
    let means = mean_passing_profile(&b, samples, seed)?;
    let mf = m as f64;
    let mut sup: f64 = 0.0;
    let mut rows = Vec::with_capacity(m);
    for (idx, &mean) in means.iter().enumerate() {
        let i = idx + 1;
        let x = i as f64 / mf;
        let approx = match &dm {
            Some(dm) => approx_passing_time(dm, m, n, i)?,
            None => i as f64,
        };
        let row = ProfileRow {
            x,
            mean_p_over_m: mean / mf,
            f: ps.eval(x),
            approx_over_m: approx / mf,
        };
        if x >= 0.1 {
            sup = sup.max((row.mean_p_over_m - row.f).abs());
        }
        rows.push(row);
    }
    Ok(ProfileReport {
        rows,
        sup_deviation: sup,
        samples,
        seed,
    })
}
