//! Validated domain types shared by every other module, plus the
//! numerically safe combinatorial primitives they rest on.
//!
//! The two workhorse types are [`InterferometerParams`] (the classical
//! experiment configuration: splitter transmission, sample transmission,
//! phase, photon budget) and [`WeightVector`] (the photon-number profile of
//! a quantum probe state). Both validate on construction so downstream
//! numerics never have to re-check ranges.
//!
//! Binomial coefficients are only ever handled in log space: the loss model
//! multiplies `C(s,l)` by powers of the transmission, and those powers
//! underflow long before the coefficients overflow, so everything is summed
//! as `exp(ln C + (s-l)·ln η + l·ln(1-η))`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Uncertainties above this value are flagged as saturated in curve output
/// so log-scale plots can clip them cleanly instead of chasing overflow.
pub const SATURATION_THRESHOLD: f64 = 1e12;

// ---------------------------------------------------------------------------
// Interferometer configuration
// ---------------------------------------------------------------------------

/// Configuration of a two-arm interferometer with a lossy phase arm.
///
/// The probe beam is split with power transmission `transmission` into the
/// phase arm, acquires the phase `phase` there, and survives the arm with
/// probability `loss_transmission` per pass; the mean photon number entering
/// the interferometer is `photon_budget`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerParams {
    /// Splitter power transmission into the phase arm, in `[0, 1]`.
    pub transmission: f64,
    /// Power transmission of the lossy arm, in `(0, 1]`.
    pub loss_transmission: f64,
    /// Interferometric phase in radians, normalized into `[0, 2π)`.
    pub phase: f64,
    /// Mean photon number of the probe, strictly positive.
    pub photon_budget: f64,
}

impl InterferometerParams {
    /// Validates and normalizes a parameter set.
    ///
    /// The phase may be any finite real and is reduced into `[0, 2π)`; the
    /// remaining fields must already lie in their physical ranges.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidParameter`] when `transmission` leaves
    /// `[0, 1]`, `loss_transmission` leaves `(0, 1]`, `photon_budget` is not
    /// strictly positive, or any field is non-finite.
    pub fn new(
        transmission: f64,
        loss_transmission: f64,
        phase: f64,
        photon_budget: f64,
    ) -> Result<Self> {
        if !transmission.is_finite() || !(0.0..=1.0).contains(&transmission) {
            return Err(Error::InvalidParameter {
                name: "transmission",
                message: "must lie in [0, 1]",
                value: transmission,
            });
        }
        if !loss_transmission.is_finite() || loss_transmission <= 0.0 || loss_transmission > 1.0 {
            return Err(Error::InvalidParameter {
                name: "loss_transmission",
                message: "must lie in (0, 1]",
                value: loss_transmission,
            });
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phase",
                message: "must be finite",
                value: phase,
            });
        }
        if !photon_budget.is_finite() || photon_budget <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "photon_budget",
                message: "must be strictly positive",
                value: photon_budget,
            });
        }
        let mut reduced = phase.rem_euclid(TAU);
        // rem_euclid can round up to the modulus itself for tiny negatives.
        if reduced >= TAU {
            reduced = 0.0;
        }
        Ok(Self {
            transmission,
            loss_transmission,
            phase: reduced,
            photon_budget,
        })
    }
}

// ---------------------------------------------------------------------------
// Probe-state weights
// ---------------------------------------------------------------------------

/// Photon-number weight profile of an `n`-photon probe state.
///
/// Holds nonnegative weights `x_0..x_n` over the number of photons sent into
/// the lossy arm, normalized so they sum to one. Only the weights enter the
/// precision functional; relative phases of the underlying amplitudes do not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    /// Builds a weight vector from raw entries `x_0..x_n`, normalizing the
    /// total to one.
    ///
    /// Normalization (rather than rejection) of near-unit sums is deliberate:
    /// optimizer iterates accumulate `1e-15`-level drift that would otherwise
    /// make round-tripping weights through this constructor flaky. Entries
    /// within `1e-12` below zero are clamped to zero for the same reason.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidParameter`] when fewer than two entries are
    /// given (the probe must hold at least one photon), when any entry is
    /// materially negative or non-finite, or when all entries are zero.
    pub fn new(entries: &[f64]) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "weights",
                message: "need at least two entries (one photon)",
                value: entries.len() as f64,
            });
        }
        let mut weights = Vec::with_capacity(entries.len());
        for &w in entries {
            if !w.is_finite() || w < -1e-12 {
                return Err(Error::InvalidParameter {
                    name: "weights",
                    message: "entries must be nonnegative and finite",
                    value: w,
                });
            }
            weights.push(w.max(0.0));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "weights",
                message: "at least one entry must be positive",
                value: total,
            });
        }
        for w in &mut weights {
            *w /= total;
        }
        Ok(Self { weights })
    }

    /// Weight vector concentrated on photon numbers `0` and `n`: the
    /// two-component superposition profile with `x_n = weight_n`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidParameter`] for `n = 0` or `weight_n`
    /// outside `[0, 1]`.
    pub fn two_point(n: usize, weight_n: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                message: "photon number must be at least 1",
                value: n as f64,
            });
        }
        if !weight_n.is_finite() || !(0.0..=1.0).contains(&weight_n) {
            return Err(Error::InvalidParameter {
                name: "weight_n",
                message: "must lie in [0, 1]",
                value: weight_n,
            });
        }
        let mut weights = vec![0.0; n + 1];
        weights[0] = 1.0 - weight_n;
        weights[n] = weight_n;
        Ok(Self { weights })
    }

    /// Uniform weights over `0..=n`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidParameter`] for `n = 0`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                message: "photon number must be at least 1",
                value: n as f64,
            });
        }
        Ok(Self {
            weights: vec![1.0 / (n + 1) as f64; n + 1],
        })
    }

    /// Photon number `n` (one less than the number of weights).
    pub fn photon_number(&self) -> usize {
        self.weights.len() - 1
    }

    /// The normalized weights `x_0..x_n`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

// ---------------------------------------------------------------------------
// Loss kernel
// ---------------------------------------------------------------------------

/// Probabilities of losing `l` of `s` photons in an arm with power
/// transmission `eta`: one row of the binomial loss kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct LossKernelRow {
    /// Photon number entering the lossy arm.
    pub s: usize,
    /// Power transmission of the arm.
    pub eta: f64,
    /// `probabilities[l]` is the chance that exactly `l` photons are lost.
    pub probabilities: Vec<f64>,
}

/// Natural log of the binomial coefficient `C(s, l)`, via log-gamma.
///
/// Exact `0.0` is returned at the boundaries `l = 0` and `l = s`; interior
/// values are accurate to better than `1e-10` absolute for `s` up to `10⁴`.
/// Factorial products are never formed, so there is no overflow cliff.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] when `l > s`.
pub fn log_binomial(s: u64, l: u64) -> Result<f64> {
    if l > s {
        return Err(Error::InvalidParameter {
            name: "l",
            message: "must satisfy l <= s",
            value: l as f64,
        });
    }
    if l == 0 || l == s {
        return Ok(0.0);
    }
    Ok(ln_gamma(s as f64 + 1.0) - ln_gamma(l as f64 + 1.0) - ln_gamma((s - l) as f64 + 1.0))
}

/// Binomial loss probabilities for `s` photons at transmission `eta`.
///
/// Each entry is evaluated as `exp(ln C(s,l) + (s-l)·ln η + l·ln(1-η))` so
/// the row stays meaningful for photon numbers far beyond where direct
/// powers of `η` underflow. A lossless arm (`eta = 1`) short-circuits to the
/// point mass at `l = 0`, avoiding `ln(0)` in the general path.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] when `eta` leaves `(0, 1]`.
pub fn loss_kernel_row(s: usize, eta: f64) -> Result<LossKernelRow> {
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1]",
            value: eta,
        });
    }
    let mut probabilities = vec![0.0; s + 1];
    if eta == 1.0 {
        probabilities[0] = 1.0;
        return Ok(LossKernelRow {
            s,
            eta,
            probabilities,
        });
    }
    let ln_eta = eta.ln();
    let ln_loss = (1.0 - eta).ln();
    for (l, slot) in probabilities.iter_mut().enumerate() {
        let ln_choose = log_binomial(s as u64, l as u64).expect("l ranges over 0..=s");
        *slot = (ln_choose + (s - l) as f64 * ln_eta + l as f64 * ln_loss).exp();
    }
    Ok(LossKernelRow {
        s,
        eta,
        probabilities,
    })
}

// ---------------------------------------------------------------------------
// Strategy curve points
// ---------------------------------------------------------------------------

/// Named estimation strategies whose uncertainty curves the crate produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StrategyTag {
    /// Standard interferometric limit: classical light, loss-optimal splitter.
    #[serde(rename = "SIL")]
    Sil,
    /// Classical light with the full-visibility splitter choice.
    #[serde(rename = "MAXVIS")]
    MaxVis,
    /// Heisenberg limit `1/n`.
    #[serde(rename = "HL")]
    Hl,
    /// Single n-photon two-component superposition probe under loss.
    #[serde(rename = "NOON")]
    Noon,
    /// Resources chopped into repeated smaller superposition probes.
    #[serde(rename = "CHOP")]
    Chop,
    /// Classical multi-pass with passes charged against the resource budget.
    #[serde(rename = "MP-resource")]
    MpResource,
    /// Classical multi-pass with passes free of charge.
    #[serde(rename = "MP-free")]
    MpFree,
    /// Optimal single-pass quantum probe.
    #[serde(rename = "Q")]
    Quantum,
    /// Optimal multi-pass quantum probe (passes free of charge).
    #[serde(rename = "QMP")]
    QuantumMultipass,
    /// Shot-noise reference `1/√n` (no loss, classical scaling).
    #[serde(rename = "SHOT")]
    ShotNoise,
}

impl StrategyTag {
    /// Canonical short name used in CSV output and CLI arguments.
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyTag::Sil => "SIL",
            StrategyTag::MaxVis => "MAXVIS",
            StrategyTag::Hl => "HL",
            StrategyTag::Noon => "NOON",
            StrategyTag::Chop => "CHOP",
            StrategyTag::MpResource => "MP-resource",
            StrategyTag::MpFree => "MP-free",
            StrategyTag::Quantum => "Q",
            StrategyTag::QuantumMultipass => "QMP",
            StrategyTag::ShotNoise => "SHOT",
        }
    }
}

impl fmt::Display for StrategyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One point of a strategy comparison curve.
///
/// `n` is the abscissa (total resource count for comparison curves, phase in
/// radians for phase scans — see the owning table's metadata), `k` the pass
/// or chop count (`1` when the strategy has no such notion), and `aux`
/// carries named per-strategy extras such as the splitter transmission or a
/// digest of the optimal weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyPoint {
    /// Which strategy this point belongs to.
    pub strategy: StrategyTag,
    /// Abscissa: resource count, or phase for phase scans.
    pub n: f64,
    /// Pass / chop count; `1.0` when unused.
    pub k: f64,
    /// Phase uncertainty in radians; `None` when infinite or overflowed.
    pub delta_phi: Option<f64>,
    /// True when `delta_phi` is infinite or exceeds [`SATURATION_THRESHOLD`].
    pub saturated: bool,
    /// Named auxiliary values (optimal transmission, weight digest, …).
    pub aux: BTreeMap<String, f64>,
}

impl StrategyPoint {
    /// Builds a point, deriving the saturation flag from the uncertainty.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidParameter`] when `n` is negative (zero is
    /// allowed: phase scans start at phase 0), `k < 1`, or `delta_phi` is
    /// negative or NaN (infinite is allowed and recorded as saturated).
    pub fn new(
        strategy: StrategyTag,
        n: f64,
        k: f64,
        delta_phi: f64,
        aux: BTreeMap<String, f64>,
    ) -> Result<Self> {
        if !n.is_finite() || n < 0.0 {
            return Err(Error::InvalidParameter {
                name: "n",
                message: "must be non-negative",
                value: n,
            });
        }
        if !k.is_finite() || k < 1.0 {
            return Err(Error::InvalidParameter {
                name: "k",
                message: "must be at least 1",
                value: k,
            });
        }
        if delta_phi.is_nan() || delta_phi <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "delta_phi",
                message: "must be positive (possibly infinite)",
                value: delta_phi,
            });
        }
        let saturated = !delta_phi.is_finite() || delta_phi > SATURATION_THRESHOLD;
        Ok(Self {
            strategy,
            n,
            k,
            delta_phi: delta_phi.is_finite().then_some(delta_phi),
            saturated,
            aux,
        })
    }

    /// Abscissa for phase-scan tables, under its proper name.
    pub fn phase(&self) -> f64 {
        self.n
    }
}
