//! Monte-Carlo validation of the classical precision bounds: simulate the
//! lossy interferometer's Poisson click statistics, estimate the phase per
//! trial by maximum likelihood, and compare the empirical spread against
//! the Cramér–Rao bound `δφ = 1/√F`.
//!
//! Multi-pass operation reuses the single-pass machinery through the
//! parameter mapping `φ → kφ`, `η → η^k`: the phase accumulates and the
//! arm loss compounds once per pass. The estimation window is local — a
//! half-width of at most `π/(2k)` around the true phase, so the likelihood
//! stays on one monotone fringe branch — because the bound itself is a
//! local one and the optimal-splitter strategy only attains it near
//! quadrature. Resolving global fringe ambiguity is a different problem
//! and out of scope.
//!
//! Every trial draws from its own counter-based random substream keyed by
//! `(seed, trial index)`, so results are bit-reproducible and trials could
//! be fanned out across threads without changing a single sample.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classical::{fisher_analytic, output_means};
use crate::error::{Error, Result};
use crate::model::InterferometerParams;
use crate::numeric::golden_max;
use crate::poisson;

/// Abscissa tolerance of the per-trial golden-section likelihood search:
/// far below any statistical spread the estimates can have, far above the
/// comparison-resolution floor of the likelihood.
const ESTIMATE_XTOL: f64 = 1e-10;

/// Salt mixed into every trial's substream key so batches keyed by small
/// seeds and trial indices do not sit in a low-entropy corner of the
/// stream space.
const STREAM_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Fraction of edge-hitting trials above which a [`CrbReport`] is flagged
/// unreliable: estimates pinned to the window boundary mean the window was
/// configured too tight (or the noise too large) for a clean comparison.
const DISCARD_ALARM_FRACTION: f64 = 0.01;

/// One batch of simulated interferometer trials.
///
/// `params` holds the physical single-pass configuration; the `passes`
/// mapping is applied internally wherever click statistics are computed.
/// Regenerating a batch with equal `seed` reproduces `samples` bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialBatch {
    /// Single-pass interferometer configuration (true phase included).
    pub params: InterferometerParams,
    /// Number of passes through the lossy arm, at least 1.
    pub passes: u64,
    /// Number of independent trials in the batch.
    pub trials: u64,
    /// Seed from which every trial's substream is derived.
    pub seed: u64,
    /// Per-trial detector click pairs `(n₁, n₂)`.
    pub samples: Vec<(u64, u64)>,
}

/// One trial's maximum-likelihood phase estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimate {
    /// Maximizer of the log-likelihood inside the search window.
    pub phi_hat: f64,
    /// Whether the likelihood kept rising into a window edge, making the
    /// estimate a censored value rather than an interior maximum.
    pub edge_hit: bool,
}

/// Comparison of an estimator's empirical spread against the Cramér–Rao
/// bound at the true phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrbReport {
    /// Root-mean-square error of the kept (non-edge) estimates.
    pub rmse: f64,
    /// Cramér–Rao bound `1/(k√F)` at the true phase, `F` evaluated at the
    /// pass-mapped parameters.
    pub crb: f64,
    /// `rmse / crb`; hovers just above 1 for an efficient estimator.
    pub ratio: f64,
    /// Trials simulated.
    pub trials: u64,
    /// Trials discarded because their estimate hit the window edge.
    pub discarded: u64,
    /// Set when more than 1% of trials were discarded; the RMSE of a
    /// censored sample no longer measures estimator spread.
    pub unreliable: bool,
}

/// Single-pass parameters mapped to their `k`-pass equivalents: the probe
/// acquires `kφ` and survives with probability `η^k`; splitter and photon
/// budget are untouched.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] when `passes` is zero or so large
/// that the compounded transmission underflows to zero.
pub fn effective_params(p: InterferometerParams, passes: u64) -> Result<InterferometerParams> {
    if passes == 0 {
        return Err(Error::InvalidParameter {
            name: "passes",
            message: "pass count must be at least 1",
            value: 0.0,
        });
    }
    let k = passes as f64;
    let compounded = (k * p.loss_transmission.ln()).exp();
    if compounded <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "passes",
            message: "so many passes that the survival probability underflows to zero",
            value: k,
        });
    }
    InterferometerParams::new(p.transmission, compounded, k * p.phase, p.photon_budget)
}

/// Default half-width of the likelihood search window, `π/(4k)`: half the
/// widest window that stays on one fringe branch, leaving the estimator
/// room to breathe before edge effects start censoring trials.
pub fn default_window_halfwidth(passes: u64) -> f64 {
    PI / (4.0 * passes as f64)
}

/// Independent random stream for one trial, keyed by `(seed, trial)`.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&STREAM_SALT.to_le_bytes());
    key[24..32].copy_from_slice(&STREAM_SALT.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Simulates `trials` independent shots of the `k`-pass interferometer,
/// drawing detector clicks from the exact product-Poisson model.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] for a zero trial count or an
/// invalid pass count (see [`effective_params`]).
pub fn simulate_clicks(
    p: InterferometerParams,
    passes: u64,
    trials: u64,
    seed: u64,
) -> Result<TrialBatch> {
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            message: "at least one trial is required",
            value: 0.0,
        });
    }
    let means = output_means(effective_params(p, passes)?);
    let mut samples = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let n1 = poisson::sample(&mut rng, means.mean_n1);
        let n2 = poisson::sample(&mut rng, means.mean_n2);
        samples.push((n1, n2));
    }
    Ok(TrialBatch {
        params: p,
        passes,
        trials,
        seed,
        samples,
    })
}

/// Per-trial log-likelihood of the click pair as a function of the phase.
///
/// `amplitude` and `visibility` are fringe parameters of the pass-mapped
/// configuration, which depend only on splitter and transmission; the
/// phase enters through `cos(kφ)` alone.
fn log_likelihood(
    clicks: (u64, u64),
    phi: f64,
    passes: f64,
    amplitude: f64,
    visibility: f64,
    photon_budget: f64,
) -> f64 {
    let fringe = visibility * (passes * phi).cos();
    let mean1 = amplitude * photon_budget * (1.0 - fringe);
    let mean2 = amplitude * photon_budget * (1.0 + fringe);
    poisson::ln_pmf(clicks.0, mean1.max(0.0)) + poisson::ln_pmf(clicks.1, mean2.max(0.0))
}

/// Maximum-likelihood phase estimates for every trial in the batch.
///
/// Each trial's exact product-Poisson log-likelihood is maximized over
/// `[φ − w, φ + w]` around the true phase by golden-section search; the
/// likelihood restricted to one monotone fringe branch is unimodal (it is
/// concave in `cos kφ`), which the window precondition guarantees. Trials
/// whose likelihood is highest at a window edge are flagged rather than
/// silently kept: an edge value is a censored estimate.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] when the half-width is not in
/// `(0, π/(2k)]` — wider windows leave the monotone branch and make the
/// likelihood multimodal.
pub fn mle_estimate(batch: &TrialBatch, window_halfwidth: f64) -> Result<Vec<PhaseEstimate>> {
    let k = batch.passes as f64;
    let branch_limit = PI / (2.0 * k);
    if !window_halfwidth.is_finite() || window_halfwidth <= 0.0 || window_halfwidth > branch_limit
    {
        return Err(Error::InvalidParameter {
            name: "window_halfwidth",
            message: "must lie in (0, pi/(2k)] to stay on one fringe branch",
            value: window_halfwidth,
        });
    }
    let mapped = effective_params(batch.params, batch.passes)?;
    let means = output_means(mapped);
    let (lo, hi) = (
        batch.params.phase - window_halfwidth,
        batch.params.phase + window_halfwidth,
    );

    let mut estimates = Vec::with_capacity(batch.samples.len());
    for &clicks in &batch.samples {
        let ll = |phi: f64| {
            log_likelihood(
                clicks,
                phi,
                k,
                means.amplitude,
                means.visibility,
                batch.params.photon_budget,
            )
        };
        let (phi_hat, ll_hat) = golden_max(ll, lo, hi, ESTIMATE_XTOL)?;
        // If either window edge is at least as likely as the interior
        // candidate, the true maximizer sits on (or beyond) the boundary.
        let edge_hit = ll(lo) >= ll_hat || ll(hi) >= ll_hat;
        estimates.push(PhaseEstimate { phi_hat, edge_hit });
    }
    Ok(estimates)
}

/// Runs the full validation loop: simulate, estimate, and compare the
/// empirical RMSE against the Cramér–Rao bound at the true phase.
///
/// The bound is `1/(k√F)` with `F` the closed-form Fisher information at
/// the pass-mapped parameters: `k` passes multiply the phase information
/// by `k²`. Edge-hitting trials are excluded from the RMSE and counted in
/// `discarded`; more than 1% of them flags the report unreliable. The
/// estimation window is the default `π/(4k)`.
///
/// # Errors
///
/// Propagates the parameter errors of [`simulate_clicks`].
pub fn rmse_vs_crb(
    p: InterferometerParams,
    passes: u64,
    trials: u64,
    seed: u64,
) -> Result<CrbReport> {
    let batch = simulate_clicks(p, passes, trials, seed)?;
    let estimates = mle_estimate(&batch, default_window_halfwidth(passes))?;

    // Fixed accumulation order (trial index) keeps the report
    // bit-reproducible even if estimation ever fans out across threads.
    let mut kept = 0u64;
    let mut sum_squares = 0.0;
    for estimate in &estimates {
        if estimate.edge_hit {
            continue;
        }
        let err = estimate.phi_hat - p.phase;
        sum_squares += err * err;
        kept += 1;
    }
    let discarded = trials - kept;
    let rmse = if kept > 0 {
        (sum_squares / kept as f64).sqrt()
    } else {
        f64::NAN
    };

    let fisher = fisher_analytic(effective_params(p, passes)?);
    let crb = 1.0 / (passes as f64 * fisher.sqrt());
    Ok(CrbReport {
        rmse,
        crb,
        ratio: rmse / crb,
        trials,
        discarded,
        unreliable: discarded as f64 > DISCARD_ALARM_FRACTION * trials as f64,
    })
}

/// Empirical Fisher information about the phase, estimated as the sample
/// variance of the per-trial score `∂/∂φ ln L` evaluated at the true
/// phase.
///
/// For `k` passes this converges to `k²` times the single-pass Fisher
/// information at the pass-mapped parameters — the information-side
/// statement of the multi-pass enhancement. A detector with zero mean is
/// skipped: its fringe sits on an extremum there, so its mean derivative
/// vanishes and it carries no score.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] when the batch holds fewer than
/// two samples, leaving the variance undefined.
pub fn empirical_fisher(batch: &TrialBatch) -> Result<f64> {
    if batch.samples.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "trials",
            message: "score variance needs at least two trials",
            value: batch.samples.len() as f64,
        });
    }
    let k = batch.passes as f64;
    let mapped = effective_params(batch.params, batch.passes)?;
    let means = output_means(mapped);
    // d⟨n₁,₂⟩/dφ = ∓ A·n̄·v·k·sin(kφ), through the chain rule on cos(kφ).
    let slope =
        means.amplitude * batch.params.photon_budget * means.visibility * k * mapped.phase.sin();

    let mut scores = Vec::with_capacity(batch.samples.len());
    for &(n1, n2) in &batch.samples {
        let mut score = 0.0;
        if means.mean_n1 > 0.0 {
            score += (n1 as f64 / means.mean_n1 - 1.0) * -slope;
        }
        if means.mean_n2 > 0.0 {
            score += (n2 as f64 / means.mean_n2 - 1.0) * slope;
        }
        scores.push(score);
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    let variance = scores
        .iter()
        .map(|s| (s - mean) * (s - mean))
        .sum::<f64>()
        / (scores.len() - 1) as f64;
    Ok(variance)
}
