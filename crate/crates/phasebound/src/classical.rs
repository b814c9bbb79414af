//! Classical coherent-light interferometry under loss: output statistics,
//! Fisher information (closed form and brute-force numeric), the optimal
//! splitter choice, and the standard interferometric limit.
//!
//! The model: coherent light of mean photon number `n̄` enters a two-arm
//! interferometer whose phase arm transmits a fraction `η` of its power.
//! The detectors register Poisson-distributed click counts with means
//!
//! ```text
//! ⟨n₁⟩ = A·n̄·(1 − v·cos φ),   ⟨n₂⟩ = A·n̄·(1 + v·cos φ),
//! A = (1 − T(1−η))/2,         v = 2√(T(1−T)η) / (1 − T(1−η)),
//! ```
//!
//! where `T` is the splitter transmission into the lossy arm, `A` the mean
//! amplitude factor and `v` the fringe visibility. Everything else in this
//! module — Fisher information, optimal `T`, precision limits — follows
//! from these two means.

use std::f64::consts::FRAC_PI_2;

use crate::error::Result;
use crate::model::InterferometerParams;
use crate::poisson;

/// Below this value the Fisher-information denominator `2(1 − v²cos²φ)` is
/// treated as the degenerate full-visibility fringe zero and replaced by its
/// algebraic limit.
const DEGENERATE_DENOMINATOR: f64 = 1e-14;

/// Mean detector outputs together with the fringe parameters behind them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputMeans {
    /// Mean click count at the dark-fringe detector, `A·n̄·(1 − v cos φ)`.
    pub mean_n1: f64,
    /// Mean click count at the bright-fringe detector, `A·n̄·(1 + v cos φ)`.
    pub mean_n2: f64,
    /// Amplitude factor `A = (1 − T(1−η))/2`, in `(0, ½]`.
    pub amplitude: f64,
    /// Fringe visibility `v = 2√(T(1−T)η)/(1 − T(1−η))`, in `[0, 1]`.
    pub visibility: f64,
}

/// Splitter-transmission strategies whose phase response the phase-scan
/// report compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseStrategy {
    /// `T = 1/(1+√η)`: maximizes Fisher information at the fringe slopes.
    OptimalTransmission,
    /// `T = 1/(1+η)`: restores full visibility, `v = 1`, at reduced flux.
    MaxVisibility,
}

impl PhaseStrategy {
    /// The splitter transmission this strategy prescribes at loss `eta`.
    pub fn transmission(self, eta: f64) -> f64 {
        match self {
            PhaseStrategy::OptimalTransmission => optimal_transmission(eta),
            PhaseStrategy::MaxVisibility => 1.0 / (1.0 + eta),
        }
    }
}

/// Mean click counts and fringe parameters for a parameter set.
pub fn output_means(p: InterferometerParams) -> OutputMeans {
    let t = p.transmission;
    let eta = p.loss_transmission;
    let survived = 1.0 - t * (1.0 - eta);
    let amplitude = survived / 2.0;
    let visibility = 2.0 * (t * (1.0 - t) * eta).sqrt() / survived;
    let fringe = visibility * p.phase.cos();
    OutputMeans {
        mean_n1: amplitude * p.photon_budget * (1.0 - fringe),
        mean_n2: amplitude * p.photon_budget * (1.0 + fringe),
        amplitude,
        visibility,
    }
}

/// Fisher information about the phase, in closed form:
/// `F = 4n̄Av²sin²φ / (2 − v²(cos 2φ + 1))`.
///
/// The denominator equals `2(1 − v²cos²φ)` and vanishes only at full
/// visibility on a fringe extremum (`v = 1`, `φ ∈ {0, π}`); there the
/// algebraic limit `F → 2n̄Av²` is returned. Note that exactly at such a
/// point the local estimation problem is one-sided and the sum defining the
/// information evaluates to zero — the limit is the useful convention for
/// plotting and for the flat max-visibility curve, and [`fisher_numeric`]
/// reports the literal sum instead.
pub fn fisher_analytic(p: InterferometerParams) -> f64 {
    let means = output_means(p);
    let a = means.amplitude;
    let v = means.visibility;
    let nbar = p.photon_budget;
    let cos = p.phase.cos();
    let sin = p.phase.sin();
    let denominator = 2.0 * (1.0 - v * v * cos * cos);
    if denominator < DEGENERATE_DENOMINATOR {
        return 2.0 * nbar * a * v * v;
    }
    4.0 * nbar * a * v * v * sin * sin / denominator
}

/// Fisher information by literal summation over click outcomes.
///
/// Evaluates `F = Σ_{n₁,n₂} (∂p/∂φ)²/p` for the product-Poisson outcome
/// distribution, with the derivative taken analytically through the means
/// (Poisson score times mean derivative — no finite differences). The sum
/// factorizes over the two independent detectors,
///
/// ```text
/// F = C₁A₂ + 2B₁B₂ + C₂A₁,    A_i = Σₙ p,  B_i = Σₙ p·S,  C_i = Σₙ p·S²,
/// ```
///
/// with `S = (n/μ − 1)·μ′` the per-detector score, so the cost is linear in
/// the truncation bound rather than quadratic. Each detector's range is cut
/// where the neglected Poisson tail drops below `tail_mass`. A detector
/// with zero mean contributes nothing: its only outcome has probability one
/// and zero derivative.
///
/// This routine exists as an independent check on [`fisher_analytic`]; the
/// two agree to better than `1e-8` relative away from degenerate points.
///
/// # Errors
///
/// Returns [`crate::error::Error::InvalidParameter`] when `tail_mass`
/// leaves `(0, 1e-6]`.
pub fn fisher_numeric(p: InterferometerParams, tail_mass: f64) -> Result<f64> {
    let means = output_means(p);
    let slope = means.amplitude * p.photon_budget * means.visibility * p.phase.sin();
    // (mean, d mean / d phase) per detector.
    let detectors = [(means.mean_n1, slope), (means.mean_n2, -slope)];
    let mut moments = [[0.0f64; 3]; 2];
    for (i, &(mu, dmu)) in detectors.iter().enumerate() {
        if mu == 0.0 {
            // Point mass at zero clicks; the score vanishes identically.
            moments[i] = [1.0, 0.0, 0.0];
            continue;
        }
        let cutoff = poisson::truncation_bound(mu, tail_mass)?;
        let mut sums = [0.0f64; 3];
        for n in 0..=cutoff {
            let prob = poisson::ln_pmf(n, mu).exp();
            let score = (n as f64 / mu - 1.0) * dmu;
            sums[0] += prob;
            sums[1] += prob * score;
            sums[2] += prob * score * score;
        }
        moments[i] = sums;
    }
    let [a1, b1, c1] = moments[0];
    let [a2, b2, c2] = moments[1];
    Ok(c1 * a2 + 2.0 * b1 * b2 + c2 * a1)
}

/// The Fisher-optimal splitter transmission `T = 1/(1+√η)`.
///
/// Biasing the splitter toward the lossy arm compensates the loss: the
/// optimum trades a little visibility for more light through the phase arm.
pub fn optimal_transmission(eta: f64) -> f64 {
    debug_assert!(eta > 0.0 && eta <= 1.0);
    1.0 / (1.0 + eta.sqrt())
}

/// Locates the Fisher-maximizing transmission by golden-section search at
/// quadrature (`φ = π/2`), as an independent check on
/// [`optimal_transmission`].
///
/// The result agrees with the closed form to well below `1e-6` in `T`; the
/// photon budget does not matter because the information is linear in it.
///
/// # Errors
///
/// Propagates interval validation errors from the underlying search
/// (not reachable with the fixed `[0, 1]` bracket used here).
pub fn optimal_transmission_search(eta: f64) -> Result<f64> {
    let objective = |t: f64| {
        let p = InterferometerParams::new(t, eta, FRAC_PI_2, 1.0)
            .expect("transmission stays in [0,1] during the search");
        fisher_analytic(p)
    };
    let (t_best, _) = crate::numeric::golden_max(objective, 0.0, 1.0, 1e-8)?;
    Ok(t_best)
}

/// Standard interferometric limit `δφ = (1+√η)/(2√(n̄η))`: the best phase
/// uncertainty classical light achieves at loss `η` with `n̄` photons,
/// attained with the optimal splitter at quadrature.
pub fn sil_uncertainty(eta: f64, nbar: f64) -> f64 {
    debug_assert!(eta > 0.0 && eta <= 1.0 && nbar > 0.0);
    (1.0 + eta.sqrt()) / (2.0 * (nbar * eta).sqrt())
}

/// Phase uncertainty of the full-visibility strategy,
/// `δφ = √((1+η)/(2n̄η))`: independent of the phase, but strictly worse
/// than [`sil_uncertainty`] whenever `η < 1`.
pub fn maxvis_uncertainty(eta: f64, nbar: f64) -> f64 {
    debug_assert!(eta > 0.0 && eta <= 1.0 && nbar > 0.0);
    ((1.0 + eta) / (2.0 * nbar * eta)).sqrt()
}

/// Phase uncertainty `1/√F`; zero information maps to the explicit
/// infinite-uncertainty marker.
pub fn uncertainty_from_fisher(fisher: f64) -> f64 {
    if fisher <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / fisher.sqrt()
    }
}

/// Phase-by-phase uncertainty curve `δφ(φ) = 1/√F(φ)` for one splitter
/// strategy.
///
/// Grid points where the information vanishes (the optimal-transmission
/// strategy on a fringe extremum) yield `f64::INFINITY` entries rather than
/// an error, so a full-turn scan always succeeds.
///
/// # Errors
///
/// Returns [`crate::error::Error::InvalidParameter`] when `eta` or `nbar`
/// is out of range (via parameter construction).
pub fn uncertainty_vs_phase(
    strategy: PhaseStrategy,
    eta: f64,
    nbar: f64,
    phase_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let t = strategy.transmission(eta);
    phase_grid
        .iter()
        .map(|&phi| {
            let p = InterferometerParams::new(t, eta, phi, nbar)?;
            Ok((phi, uncertainty_from_fisher(fisher_analytic(p))))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(t: f64, eta: f64, phi: f64, nbar: f64) -> InterferometerParams {
        InterferometerParams::new(t, eta, phi, nbar).unwrap()
    }

    #[test]
    fn lossless_balanced_splitter_has_unit_visibility() {
        let m = output_means(params(0.5, 1.0, 0.3, 10.0));
        assert!((m.amplitude - 0.5).abs() < 1e-15);
        assert!((m.visibility - 1.0).abs() < 1e-15);
    }

    #[test]
    fn full_visibility_transmission_restores_unit_visibility() {
        for eta in [0.05, 0.1, 0.3, 0.6, 0.9, 1.0] {
            let t = 1.0 / (1.0 + eta);
            let m = output_means(params(t, eta, 1.0, 5.0));
            assert!(
                (m.visibility - 1.0).abs() < 1e-12,
                "v = {} at eta = {eta}",
                m.visibility
            );
        }
    }

    #[test]
    fn fringe_parameters_match_hand_computation_at_low_transmission() {
        // At η = 0.1 with the optimal splitter: A = √η/2, v = 2η^{1/4}/(1+√η).
        let eta: f64 = 0.1;
        let m = output_means(params(optimal_transmission(eta), eta, 0.0, 1.0));
        assert!((m.amplitude - 0.158_113_883_008_419).abs() < 1e-14);
        assert!((m.visibility - 0.854_474_187_081_015).abs() < 1e-14);
        assert!((m.amplitude - eta.sqrt() / 2.0).abs() < 1e-15);
        assert!((m.visibility - 2.0 * eta.powf(0.25) / (1.0 + eta.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn means_satisfy_the_fringe_identity() {
        for (t, eta, phi, nbar) in [
            (0.3, 0.4, 1.1, 7.0),
            (0.9, 0.05, 4.4, 120.0),
            (0.5, 1.0, PI, 3.0),
        ] {
            let p = params(t, eta, phi, nbar);
            let m = output_means(p);
            let fringe = m.visibility * phi.cos();
            assert!((m.mean_n1 - m.amplitude * nbar * (1.0 - fringe)).abs() < 1e-12);
            assert!((m.mean_n2 - m.amplitude * nbar * (1.0 + fringe)).abs() < 1e-12);
            assert!((m.mean_n1 + m.mean_n2 - 2.0 * m.amplitude * nbar).abs() < 1e-12);
            assert!(m.visibility >= 0.0 && m.visibility <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn fisher_closed_form_known_values() {
        // Lossless balanced splitter at quadrature: F = n̄.
        let f = fisher_analytic(params(0.5, 1.0, FRAC_PI_2, 100.0));
        assert!((f - 100.0).abs() < 1e-9);

        // Optimal splitter at quadrature: F = 4n̄η/(1+√η)².
        for eta in [0.1f64, 0.6, 0.9] {
            let nbar = 17.0;
            let f = fisher_analytic(params(optimal_transmission(eta), eta, FRAC_PI_2, nbar));
            let expected = 4.0 * nbar * eta / (1.0 + eta.sqrt()).powi(2);
            assert!((f - expected).abs() < 1e-10 * expected, "eta = {eta}");
        }
        let f1 = fisher_analytic(params(optimal_transmission(0.1), 0.1, FRAC_PI_2, 1.0));
        assert!((f1 - 0.230_886_157_020_407).abs() < 1e-14);

        // Full-visibility splitter: F = 2n̄η/(1+η), independent of phase.
        for phi in [0.0, 0.4, FRAC_PI_2, PI, 5.0] {
            let f = fisher_analytic(params(1.0 / 1.6, 0.6, phi, 50.0));
            let expected = 2.0 * 50.0 * 0.6 / 1.6;
            assert!((f - expected).abs() < 1e-9, "phi = {phi}");
        }
    }

    #[test]
    fn numeric_sum_reproduces_the_closed_form() {
        // A slice of the full oracle grid (the acceptance suite runs all of
        // it); includes a unit-visibility point and a low-flux point.
        for (t, eta, phi, nbar) in [
            (0.5, 1.0, FRAC_PI_2, 100.0),
            (0.3, 0.1, 0.3, 1.0),
            (optimal_transmission(0.6), 0.6, 2.8, 10.0),
            (1.0 / 1.1, 0.1, 0.3, 100.0),
        ] {
            let p = params(t, eta, phi, nbar);
            let analytic = fisher_analytic(p);
            let numeric = fisher_numeric(p, 1e-12).unwrap();
            assert!(
                (numeric - analytic).abs() <= 1e-8 * analytic.abs(),
                "mismatch at ({t}, {eta}, {phi}, {nbar}): {numeric} vs {analytic}"
            );
        }
    }

    #[test]
    fn numeric_sum_survives_the_degenerate_fringe_zero() {
        // v = 1 near a fringe extremum: the vanishing mean's 1/p blow-up is
        // compensated and the information stays near 2n̄Av².
        let eta = 0.1;
        let t = 1.0 / (1.0 + eta);
        let p = params(t, eta, 1e-2, 100.0);
        let m = output_means(p);
        let limit = 2.0 * 100.0 * m.amplitude * m.visibility * m.visibility;
        let numeric = fisher_numeric(p, 1e-12).unwrap();
        assert!(
            (numeric - limit).abs() < 1e-3 * limit,
            "numeric {numeric} vs limit {limit}"
        );
        // Exactly on the extremum the literal sum is zero (one-sided
        // problem) while the closed form reports the limit by convention.
        let on_fringe = params(t, eta, 0.0, 100.0);
        assert_eq!(fisher_numeric(on_fringe, 1e-12).unwrap(), 0.0);
        assert!((fisher_analytic(on_fringe) - limit).abs() < 1e-6 * limit);

        assert!(fisher_numeric(p, 0.5).is_err());
    }

    #[test]
    fn optimal_transmission_matches_direct_search() {
        for eta in [0.05, 0.1, 0.35, 0.6, 0.9, 1.0] {
            let closed = optimal_transmission(eta);
            let searched = optimal_transmission_search(eta).unwrap();
            assert!(
                (closed - searched).abs() < 1e-6,
                "eta = {eta}: {closed} vs {searched}"
            );
        }
        assert!((optimal_transmission(1.0) - 0.5).abs() < 1e-15);
        assert!((optimal_transmission(0.1) - 0.759_746_926_647_958).abs() < 1e-14);
        assert!((optimal_transmission(0.6) - 0.563_508_326_896_292).abs() < 1e-14);
    }

    #[test]
    fn interferometric_limit_values_and_scaling() {
        assert!((sil_uncertainty(1.0, 100.0) - 0.1).abs() < 1e-15);
        assert!((sil_uncertainty(0.6, 100.0) - 0.114_549_722_436_790).abs() < 1e-14);
        assert!((maxvis_uncertainty(1.0, 100.0) - 0.1).abs() < 1e-15);
        assert!((maxvis_uncertainty(0.1, 100.0) - 0.234_520_787_991_171).abs() < 1e-14);

        // Exact 1/√n̄ scaling.
        for nbar in [1.0, 10.0, 1e4] {
            let ratio = sil_uncertainty(0.6, nbar) / sil_uncertainty(0.6, 1.0);
            assert!((ratio - 1.0 / nbar.sqrt()).abs() < 1e-14);
        }

        // SIL is the quadrature uncertainty of the optimal strategy...
        for eta in [0.1f64, 0.37, 0.6, 1.0] {
            let f = fisher_analytic(params(optimal_transmission(eta), eta, FRAC_PI_2, 100.0));
            assert!((sil_uncertainty(eta, 100.0) - 1.0 / f.sqrt()).abs() < 1e-12);
            // ...and beats full visibility strictly under loss.
            if eta < 1.0 {
                assert!(sil_uncertainty(eta, 100.0) < maxvis_uncertainty(eta, 100.0));
            }
        }

        // Strictly better transmission helps: monotone decrease in eta.
        let mut previous = sil_uncertainty(0.05, 10.0);
        for eta in [0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
            let current = sil_uncertainty(eta, 10.0);
            assert!(current < previous);
            previous = current;
        }
    }

    #[test]
    fn phase_scan_shapes_match_the_two_strategies() {
        use std::f64::consts::TAU;
        let grid: Vec<f64> = (0..64).map(|i| i as f64 * TAU / 64.0).collect();

        let flat = uncertainty_vs_phase(PhaseStrategy::MaxVisibility, 0.1, 100.0, &grid).unwrap();
        let reference = flat[1].1;
        for &(phi, dphi) in &flat {
            assert!(
                (dphi - reference).abs() < 1e-9 * reference,
                "max-visibility curve not flat at phi = {phi}"
            );
        }

        let scan =
            uncertainty_vs_phase(PhaseStrategy::OptimalTransmission, 0.1, 100.0, &grid).unwrap();
        // Minima sit at quadrature (grid indices 16 and 48 of 64).
        let min_idx = scan
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
            .unwrap()
            .0;
        assert!(min_idx == 16 || min_idx == 48, "minimum at index {min_idx}");
        // Fringe extrema carry no information. At phi = 0 the derivative
        // of the signal vanishes exactly and the scan reports the infinity
        // marker; the grid point at index 32 is the nearest float to pi,
        // not pi itself, so its uncertainty is merely astronomical.
        assert_eq!(scan[0].1, f64::INFINITY);
        assert!(scan[32].1 > crate::model::SATURATION_THRESHOLD);
        // At quadrature the optimal strategy beats the flat curve.
        assert!(scan[16].1 < reference);
        // Away from quadrature it loses — the curves cross.
        assert!(scan[1].1 > flat[1].1);
    }
}
