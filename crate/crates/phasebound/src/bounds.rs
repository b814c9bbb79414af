//! Closed-form phase-uncertainty bounds and their internal optimizations:
//! the Heisenberg limit, lossy two-component superposition probes, resource
//! chopping with its piecewise-optimal chop size, and classical multi-pass
//! strategies with passes either charged against the budget or free.
//!
//! Two transcendental constants govern the piecewise structure and are
//! root-solved once, then cached:
//!
//! * `η₀`, the loss level below which chopping degenerates to single
//!   photons — the root of `1 + √η₀ + ln η₀ = 0`, about `0.2282`;
//! * `ξ`, the optimal per-pass survival of the free-pass strategy — the
//!   root of `ξ·e^{ξ+1} = 1`, about `0.2785`.
//!
//! All `η^{k/2}`-type powers are taken through `exp(k/2 · ln η)` so large
//! photon numbers degrade to an infinity marker instead of NaN.

use std::sync::OnceLock;

use crate::classical::sil_uncertainty;
use crate::error::{Error, Result};
use crate::numeric::bisect_root;

// ---------------------------------------------------------------------------
// Cached constants
// ---------------------------------------------------------------------------

/// Loss threshold `η₀ ≈ 0.2282` below which the optimal chop size is a
/// single photon: the root of `1 + √η₀ + ln η₀ = 0`.
pub fn eta_zero() -> f64 {
    static ETA_ZERO: OnceLock<f64> = OnceLock::new();
    *ETA_ZERO.get_or_init(|| {
        bisect_root(|e| 1.0 + e.sqrt() + e.ln(), 0.05, 0.5, 1e-12)
            .expect("the bracket [0.05, 0.5] straddles the root")
    })
}

/// Coefficient `c ≈ 1.4777` of the interior optimal chop size
/// `k = c/|ln η|`: the root of `1 + e^{-c/2} - c = 0`.
///
/// Algebraically tied to [`eta_zero`] by `η₀ = e^{-c}` and `√η₀ = c - 1`.
pub fn interior_chop_coefficient() -> f64 {
    static COEFFICIENT: OnceLock<f64> = OnceLock::new();
    *COEFFICIENT.get_or_init(|| {
        bisect_root(|c| 1.0 + (-c / 2.0).exp() - c, 1.0, 2.0, 1e-12)
            .expect("the bracket [1, 2] straddles the root")
    })
}

/// Per-pass survival `ξ ≈ 0.2785` at the free-pass optimum: the root of
/// `ξ·e^{ξ+1} = 1`.
pub fn xi_constant() -> f64 {
    static XI: OnceLock<f64> = OnceLock::new();
    *XI.get_or_init(|| {
        bisect_root(|x| x * (x + 1.0).exp() - 1.0, 0.05, 0.9, 1e-14)
            .expect("the bracket [0.05, 0.9] straddles the root")
    })
}

// ---------------------------------------------------------------------------
// Simple limits
// ---------------------------------------------------------------------------

/// Heisenberg limit `δφ = 1/n`: the lossless floor for `n` photons.
pub fn heisenberg_limit(n: u64) -> f64 {
    debug_assert!(n >= 1);
    1.0 / n as f64
}

/// Uncertainty of a two-component superposition probe of `m` photons (real
/// valued) at loss `eta`: `(1 + η^{m/2}) / (2m·η^{m/2})`.
///
/// Evaluated as `(η^{-m/2} + 1)/(2m)` with the power in log space, so deep
/// loss overflows cleanly to infinity instead of producing NaN.
fn two_point_uncertainty(m: f64, eta: f64) -> f64 {
    debug_assert!(m > 0.0 && eta > 0.0 && eta <= 1.0);
    let ln_h = 0.5 * m * eta.ln();
    ((-ln_h).exp() + 1.0) / (2.0 * m)
}

/// Uncertainty of the weight-optimized `n`-photon two-component probe under
/// loss: `δφ = (1 + η^{n/2})/(2n·η^{n/2})`.
///
/// Reduces to the Heisenberg limit at `η = 1` and grows exponentially in
/// `n` for any `η < 1`; overflow is reported as `f64::INFINITY`.
pub fn noon_uncertainty(n: u64, eta: f64) -> f64 {
    debug_assert!(n >= 1);
    two_point_uncertainty(n as f64, eta)
}

// ---------------------------------------------------------------------------
// Chopping
// ---------------------------------------------------------------------------

/// Which branch of the piecewise-optimal chopping formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChopRegimeKind {
    /// Harsh loss (`η ≤ η₀`): single photons win; the strategy is the
    /// standard interferometric limit.
    KEqualsOne,
    /// Intermediate loss: the optimal chop size `k = c/|ln η|` lies strictly
    /// inside `(1, n)`.
    Interior,
    /// Mild loss (`η > η₀^{1/n}`): no chopping at all; the whole budget goes
    /// into one probe.
    KEqualsN,
}

/// Result of optimizing the chop size: regime, boundary constant, optimal
/// `k`, and the uncertainty there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChopRegime {
    /// Which branch the loss level selects.
    pub regime: ChopRegimeKind,
    /// The boundary constant `η₀` used for the selection.
    pub eta_zero: f64,
    /// Optimal chop size (real valued; `1` or `n` on the outer branches).
    pub k_opt: f64,
    /// Uncertainty at the optimal chop size.
    pub delta_phi: f64,
}

/// Uncertainty of chopping `n` photons into probes of `k` photons each
/// (`m = n/k` repetitions, both relaxed to reals):
/// `δφ = (1 + η^{k/2})/(2k·η^{k/2}·√(n/k))`.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] when `k` leaves `[1, n]`, `n` is not
/// positive, or `eta` leaves `(0, 1]`.
pub fn chop_uncertainty(n: f64, k: f64, eta: f64) -> Result<f64> {
    if !n.is_finite() || n <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "n",
            message: "must be strictly positive",
            value: n,
        });
    }
    if !k.is_finite() || k < 1.0 || k > n {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "must lie in [1, n]",
            value: k,
        });
    }
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1]",
            value: eta,
        });
    }
    Ok(two_point_uncertainty(k, eta) / (n / k).sqrt())
}

/// Optimal chopping of `n` photons at loss `eta`: the piecewise formula
///
/// * `η ≤ η₀` — single photons, `δφ` = standard interferometric limit;
/// * `η₀ < η ≤ η₀^{1/n}` — interior `k` solving `1 + η^{k/2} + k·ln η = 0`;
/// * `η > η₀^{1/n}` — one undivided probe.
///
/// The interior chop size is found by bisection on `[1, n]` (the regime
/// test guarantees the sign change); `η = 1` belongs to the undivided
/// branch with `δφ = 1/n`.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] for `n < 1` or `eta` outside
/// `(0, 1]`, and propagates the (unreachable with a verified bracket)
/// bisection errors.
pub fn chop_optimal(n: f64, eta: f64) -> Result<ChopRegime> {
    if !n.is_finite() || n < 1.0 {
        return Err(Error::InvalidParameter {
            name: "n",
            message: "must be at least 1",
            value: n,
        });
    }
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1]",
            value: eta,
        });
    }
    let boundary = eta_zero();
    if eta == 1.0 {
        return Ok(ChopRegime {
            regime: ChopRegimeKind::KEqualsN,
            eta_zero: boundary,
            k_opt: n,
            delta_phi: 1.0 / n,
        });
    }
    if eta <= boundary {
        // Delegating to the closed form keeps this branch bit-identical to
        // the standard interferometric limit, as the k = 1 reduction is.
        return Ok(ChopRegime {
            regime: ChopRegimeKind::KEqualsOne,
            eta_zero: boundary,
            k_opt: 1.0,
            delta_phi: sil_uncertainty(eta, n),
        });
    }
    if eta > boundary.powf(1.0 / n) {
        return Ok(ChopRegime {
            regime: ChopRegimeKind::KEqualsN,
            eta_zero: boundary,
            k_opt: n,
            delta_phi: two_point_uncertainty(n, eta),
        });
    }
    let ln_eta = eta.ln();
    let stationarity = |k: f64| 1.0 + (0.5 * k * ln_eta).exp() + k * ln_eta;
    // The stationarity function vanishes at k = 1 when η sits exactly on
    // the regime boundary (that identity *defines* the boundary), and at
    // k = n on the mild-loss edge. Within a few ulps of either seam the
    // classifier above and the sign of the endpoint evaluation can
    // disagree, so a degenerate bracket means the optimum is the adjacent
    // endpoint, not a solver failure.
    if stationarity(1.0) <= 0.0 {
        return Ok(ChopRegime {
            regime: ChopRegimeKind::KEqualsOne,
            eta_zero: boundary,
            k_opt: 1.0,
            delta_phi: sil_uncertainty(eta, n),
        });
    }
    if stationarity(n) >= 0.0 {
        return Ok(ChopRegime {
            regime: ChopRegimeKind::KEqualsN,
            eta_zero: boundary,
            k_opt: n,
            delta_phi: two_point_uncertainty(n, eta),
        });
    }
    let k_opt = bisect_root(stationarity, 1.0, n, 1e-12)?;
    Ok(ChopRegime {
        regime: ChopRegimeKind::Interior,
        eta_zero: boundary,
        k_opt,
        delta_phi: chop_uncertainty(n, k_opt, eta)?,
    })
}

/// Optimal chopping restricted to an integer chop size: evaluates the floor
/// and ceiling neighbors of the real optimum and keeps the better (ties go
/// to the smaller `k`).
///
/// # Errors
///
/// As [`chop_optimal`].
pub fn chop_optimal_integer(n: f64, eta: f64) -> Result<(u64, f64)> {
    let relaxed = chop_optimal(n, eta)?;
    let k_max = n.floor().max(1.0);
    let lo = relaxed.k_opt.floor().clamp(1.0, k_max);
    let hi = relaxed.k_opt.ceil().clamp(1.0, k_max);
    let d_lo = chop_uncertainty(n, lo, eta)?;
    let d_hi = chop_uncertainty(n, hi, eta)?;
    if d_lo <= d_hi || lo == hi {
        Ok((lo as u64, d_lo))
    } else {
        Ok((hi as u64, d_hi))
    }
}

/// Classical multi-pass with passes charged against the resource budget.
///
/// Sending a `k`-photon probe through the sample `k` times costs `k²`-worth
/// of budget while squaring the loss per photon — exactly the accounting of
/// chopping, so this strategy *is* [`chop_optimal`] under another name. It
/// exists so curve output can carry its own tag; outputs are bit-identical
/// to `chop_optimal` by construction.
///
/// # Errors
///
/// As [`chop_optimal`].
pub fn multipass_as_resource(n: f64, eta: f64) -> Result<ChopRegime> {
    chop_optimal(n, eta)
}

// ---------------------------------------------------------------------------
// Free-pass multi-pass
// ---------------------------------------------------------------------------

/// Result of optimizing the free-pass strategy: the constant `ξ`, the
/// optimal pass count, and the uncertainty there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipassOptimum {
    /// The survival constant `ξ` (root of `ξ·e^{ξ+1} = 1`).
    pub xi: f64,
    /// Optimal real-valued pass count `k = 2(1+ξ)/|ln η|`.
    pub k_opt: f64,
    /// Uncertainty at the optimum, `|ln η|/(4√n̄·ξ)`.
    pub delta_phi: f64,
}

/// Uncertainty of classical light making `k` passes through the sample,
/// with passes free of charge: `δφ = (1 + η^{k/2})/(2k·√(n̄·η^k))`.
///
/// Each pass multiplies the acquired phase by `k` but squares up the loss;
/// at `η = 1` the expression is `1/(k√n̄)`, strictly decreasing in `k`.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] when `nbar` is not positive,
/// `k < 1`, or `eta` leaves `(0, 1]`.
pub fn multipass_uncertainty(nbar: f64, k: f64, eta: f64) -> Result<f64> {
    if !nbar.is_finite() || nbar <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "nbar",
            message: "must be strictly positive",
            value: nbar,
        });
    }
    if !k.is_finite() || k < 1.0 {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "must be at least 1",
            value: k,
        });
    }
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1]",
            value: eta,
        });
    }
    Ok(free_pass_uncertainty(nbar, k, eta))
}

/// The free-pass formula without the `k ≥ 1` gate, shared with the
/// consistency check at the (possibly sub-unit) stationary point.
fn free_pass_uncertainty(nbar: f64, k: f64, eta: f64) -> f64 {
    let h = (0.5 * k * eta.ln()).exp();
    (1.0 + h) / (2.0 * k * h * nbar.sqrt())
}

/// Optimal free-pass strategy at loss `eta`: `k = 2(1+ξ)/|ln η|` passes and
/// `δφ = |ln η|/(4√n̄·ξ)`.
///
/// The closed form follows from the stationarity of
/// [`multipass_uncertainty`] in `k`: at the optimum the per-probe survival
/// is `η^{k/2} = ξ`, the defining relation of [`xi_constant`]. Both routes
/// are evaluated and must agree to `1e-10` relative — a safeguard, since
/// they are algebraically identical.
///
/// # Errors
///
/// Returns [`Error::UnboundedImprovement`] at `η = 1` (precision then grows
/// without bound in `k`; cap the pass count explicitly instead), and
/// [`Error::InvalidParameter`] for out-of-range inputs.
pub fn multipass_optimal(nbar: f64, eta: f64) -> Result<MultipassOptimum> {
    if !nbar.is_finite() || nbar <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "nbar",
            message: "must be strictly positive",
            value: nbar,
        });
    }
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1)",
            value: eta,
        });
    }
    if eta == 1.0 {
        return Err(Error::UnboundedImprovement);
    }
    let xi = xi_constant();
    let log_loss = -eta.ln(); // |ln η|
    let k_opt = 2.0 * (1.0 + xi) / log_loss;
    let delta_phi = log_loss / (4.0 * nbar.sqrt() * xi);
    let direct = free_pass_uncertainty(nbar, k_opt, eta);
    let discrepancy = (direct - delta_phi).abs() / delta_phi;
    if discrepancy > 1e-10 {
        return Err(Error::Inconsistency {
            message: "free-pass optimum disagrees with its closed form",
            discrepancy,
        });
    }
    Ok(MultipassOptimum {
        xi,
        k_opt,
        delta_phi,
    })
}

/// Free-pass optimum restricted to an integer pass count: evaluates the
/// floor and ceiling neighbors of the real optimum (floored at one pass)
/// and keeps the better.
///
/// # Errors
///
/// As [`multipass_optimal`].
pub fn multipass_optimal_integer(nbar: f64, eta: f64) -> Result<(u64, f64)> {
    let relaxed = multipass_optimal(nbar, eta)?;
    let lo = relaxed.k_opt.floor().max(1.0);
    let hi = relaxed.k_opt.ceil().max(1.0);
    let d_lo = multipass_uncertainty(nbar, lo, eta)?;
    let d_hi = multipass_uncertainty(nbar, hi, eta)?;
    if d_lo <= d_hi || lo == hi {
        Ok((lo as u64, d_lo))
    } else {
        Ok((hi as u64, d_hi))
    }
}
