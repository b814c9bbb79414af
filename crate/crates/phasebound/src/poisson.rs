//! Poisson distribution support: log-probabilities, tail truncation, and
//! exact sampling.
//!
//! Detector clicks in a coherent-light interferometer are Poisson
//! distributed, so both the Fisher-information sums and the Monte-Carlo
//! machinery live on this distribution. Sampling is exact across the whole
//! mean range — CDF inversion for small means, transformed rejection for
//! large ones — rather than a normal approximation, because the validation
//! suite compares empirical spreads against analytic bounds at the percent
//! level.

use rand::Rng;
use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::error::{Error, Result};

/// Mean below which sampling uses sequential CDF inversion. Inversion costs
/// O(mean) per draw and stays exact; above this the rejection sampler wins.
const INVERSION_CUTOFF: f64 = 30.0;

/// ln(√(2π)), used by the Stirling bound inside the rejection sampler.
const LN_SQRT_TAU: f64 = 0.918_938_533_204_672_7;

/// Natural log of the Poisson probability mass `P[N = n]` at the given mean.
///
/// A zero mean is the degenerate point mass at zero: `ln 1 = 0` for `n = 0`
/// and `-∞` otherwise.
pub fn ln_pmf(n: u64, mean: f64) -> f64 {
    debug_assert!(mean >= 0.0);
    if mean == 0.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    n as f64 * mean.ln() - mean - ln_gamma(n as f64 + 1.0)
}

/// Smallest count `N` such that the Poisson upper tail `P[X > N]` is below
/// `tail_mass`.
///
/// The tail is evaluated through the regularized lower incomplete gamma
/// function (`P[X > N] = P(N+1, mean)`), and the cutoff located by binary
/// search, so the cost is logarithmic in the answer.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] when `tail_mass` leaves `(0, 1e-6]`
/// or `mean` is negative.
pub fn truncation_bound(mean: f64, tail_mass: f64) -> Result<u64> {
    if !tail_mass.is_finite() || tail_mass <= 0.0 || tail_mass > 1e-6 {
        return Err(Error::InvalidParameter {
            name: "tail_mass",
            message: "must lie in (0, 1e-6]",
            value: tail_mass,
        });
    }
    if !mean.is_finite() || mean < 0.0 {
        return Err(Error::InvalidParameter {
            name: "mean",
            message: "must be nonnegative",
            value: mean,
        });
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let tail = |n: u64| gamma_lr(n as f64 + 1.0, mean);
    // Grow an upper bracket first; the Gaussian-scale guess is nearly always
    // enough, but doubling keeps the search correct for extreme tails.
    let mut hi = (mean + 12.0 * mean.sqrt() + 30.0).ceil() as u64;
    while tail(hi) >= tail_mass {
        hi *= 2;
    }
    let mut lo = 0u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if tail(mid) < tail_mass {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Draws one Poisson count at the given mean.
///
/// Exact for every mean: sequential CDF inversion below a mean of 30,
/// transformed rejection with squeeze above. A zero mean returns zero.
pub fn sample<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    debug_assert!(mean.is_finite() && mean >= 0.0);
    if mean == 0.0 {
        0
    } else if mean < INVERSION_CUTOFF {
        sample_inversion(rng, mean)
    } else {
        sample_rejection(rng, mean)
    }
}

/// Sequential search through the CDF: exact and branch-free enough for
/// small means, where at most a few dozen terms are visited.
fn sample_inversion<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    let u: f64 = rng.gen();
    let mut term = (-mean).exp();
    let mut cumulative = term;
    let mut n = 0u64;
    while u > cumulative {
        n += 1;
        term *= mean / n as f64;
        cumulative += term;
        // Past ~mean + 40√mean the remaining mass is below 1e-300; breaking
        // here only matters if u landed on the roundoff-starved far tail.
        if n > (mean + 40.0 * mean.sqrt() + 50.0) as u64 {
            break;
        }
    }
    n
}

/// Transformed-rejection sampler for large means.
///
/// A piecewise-linear proposal in a transformed variable dominates the
/// Poisson mass; most draws are accepted immediately through the squeeze
/// region without evaluating the exact density, and the acceptance test
/// compares against a Stirling-corrected log-mass for counts of 10 and up.
fn sample_rejection<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    let slope = 0.931 + 2.53 * mean.sqrt();
    let shift = -0.059 + 0.024_83 * slope;
    let inv_alpha = 1.123_9 + 1.132_8 / (slope - 3.4);
    let v_ratio = 0.927_7 - 3.622_4 / (slope - 2.0);

    loop {
        let mut v: f64 = rng.gen();
        // Fast path: the squeeze region accepts without a density check.
        if v <= 0.86 * v_ratio {
            let u = v / v_ratio - 0.43;
            let k = ((2.0 * shift / (0.5 - u.abs()) + slope) * u + mean + 0.445).floor();
            return k as u64;
        }
        let u: f64 = if v >= v_ratio {
            rng.gen::<f64>() - 0.5
        } else {
            let mut w = v / v_ratio - 0.93;
            w = 0.5f64.copysign(w) - w;
            v = rng.gen::<f64>() * v_ratio;
            w
        };
        let us = 0.5 - u.abs();
        if us < 0.013 && v > us {
            continue;
        }
        let k = ((2.0 * shift / us + slope) * u + mean + 0.445).floor();
        if k < 0.0 {
            continue;
        }
        let v_transformed = v * inv_alpha / (shift / (us * us) + slope);
        if k >= 10.0 {
            // Stirling expansion of ln k! keeps the comparison accurate
            // without a gamma call on the hot path. The √mean factor folds
            // the proposal normalization into the transformed variable; the
            // exact branch below absorbs it into the un-Stirlinged mass
            // instead.
            let bound = (k + 0.5) * (mean / k).ln() - mean - LN_SQRT_TAU + k
                - (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k;
            if (v_transformed * mean.sqrt()).ln() <= bound {
                return k as u64;
            }
        } else if v_transformed.ln() <= k * mean.ln() - mean - ln_gamma(k + 1.0) {
            return k as u64;
        }
    }
}
