//! Limiting degree masses of the fractal family.
//!
//! A chord inside one quadrant of `F_{k+1}` keeps its tree path, so the
//! number `q_k(d)` of degree-`d` chords obeys `q_{k+1}(d) = 4 q_k(d) + X_{k+1}(d)`
//! where `X_{k+1}` counts chords crossing between quadrants. Once `X(d)` is
//! constant `C` from level `k0 + 1` on, `q_k(d) / 4^k` tends to
//! `(q_{k0}(d) + C/3) / 4^{k0}`, and `F_k` has `(2^k - 1)^2 ~ 4^k` chords.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::families::{fractal_with_layout, FractalLayout};

/// Deepest level built when extrapolating.
pub const FRACTAL_K_MAX: usize = 8;

/// Chord-degree histograms of `F_1..=F_k_max`; entry `k - 1` is level `k`.
pub fn fractal_histograms(
    layout: &FractalLayout,
    k_max: usize,
) -> Result<Vec<BTreeMap<usize, u64>>> {
    (1..=k_max)
        .map(|k| {
            let t = fractal_with_layout(k, layout)?;
            let g = t.graph();
            let mut h = BTreeMap::new();
            for &c in t.chords() {
                let (u, v) = g.edge(c);
                *h.entry(t.tree_distance(u, v)).or_insert(0u64) += 1;
            }
            Ok(h)
        })
        .collect()
}

fn default_histograms() -> Result<&'static [BTreeMap<usize, u64>]> {
    static CACHE: OnceLock<Vec<BTreeMap<usize, u64>>> = OnceLock::new();
    if let Some(h) = CACHE.get() {
        return Ok(h);
    }
    let h = fractal_histograms(&FractalLayout::default(), FRACTAL_K_MAX)?;
    Ok(CACHE.get_or_init(|| h))
}

/// Exact `p∞(d)` for every odd `3 <= d <= d_max` with a nonzero limit,
/// default layout, levels up to [`FRACTAL_K_MAX`].
pub fn fractal_p_infinity(d_max: usize) -> Result<BTreeMap<usize, BigRational>> {
    p_infinity_from_histograms(default_histograms()?, d_max)
}

pub fn fractal_p_infinity_with(
    layout: &FractalLayout,
    d_max: usize,
    k_max: usize,
) -> Result<BTreeMap<usize, BigRational>> {
    p_infinity_from_histograms(&fractal_histograms(layout, k_max)?, d_max)
}

/// Extrapolates from per-level histograms (`hist[k - 1]` for level `k`).
///
/// A degree is certified when its crossing count agrees over at least two
/// consecutive level transitions up to the last one, and it is smaller than
/// every degree whose crossing count still grows at the last transition.
pub fn p_infinity_from_histograms(
    hist: &[BTreeMap<usize, u64>],
    d_max: usize,
) -> Result<BTreeMap<usize, BigRational>> {
    if d_max < 3 {
        return Err(Error::InvalidArgument(format!(
            "d_max must be at least 3, got {d_max}"
        )));
    }
    let k_max = hist.len();
    if k_max < 3 {
        return Err(Error::InvalidArgument(
            "at least three levels are needed".into(),
        ));
    }
    let q = |k: usize, d: usize| -> u64 { hist[k - 1].get(&d).copied().unwrap_or(0) };
    // crossing[k] = X_k for 2 <= k <= k_max
    let crossing = |k: usize, d: usize| -> u64 { q(k, d) - 4 * q(k - 1, d) };
    let frontier = hist[k_max - 1]
        .keys()
        .copied()
        .filter(|&d| crossing(k_max, d) > crossing(k_max - 1, d))
        .min()
        .unwrap_or(usize::MAX);

    let mut out = BTreeMap::new();
    for d in (3..=d_max).step_by(2) {
        let c = crossing(k_max, d);
        // smallest k0 with X_j(d) = c for all k0 < j <= k_max
        let mut k0 = k_max - 1;
        while k0 >= 2 && crossing(k0, d) == c {
            k0 -= 1;
        }
        if d >= frontier || k0 + 2 > k_max {
            return Err(Error::NotStabilized { degree: d, k_max });
        }
        let a = q(k0, d);
        if a == 0 && c == 0 {
            continue;
        }
        let num = BigInt::from(3 * a + c);
        let den = BigInt::from(3u64) * BigInt::from(4u64).pow(k0 as u32);
        out.insert(d, BigRational::new(num, den));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn leading_entries() {
        let p = fractal_p_infinity(13).unwrap();
        assert_eq!(p[&3], ratio(5, 12));
        assert_eq!(p[&5], ratio(1, 4));
        assert_eq!(p[&11], ratio(1, 12));
        assert_eq!(p[&13], ratio(1, 12));
    }

    #[test]
    fn rejects_tiny_inputs() {
        assert!(fractal_p_infinity(2).is_err());
        let h = fractal_histograms(&FractalLayout::default(), 2).unwrap();
        assert!(p_infinity_from_histograms(&h, 5).is_err());
    }

    #[test]
    fn unstable_degrees_are_reported() {
        let h = fractal_histograms(&FractalLayout::default(), 4).unwrap();
        assert!(matches!(
            p_infinity_from_histograms(&h, 125),
            Err(Error::NotStabilized { k_max: 4, .. })
        ));
    }
}
