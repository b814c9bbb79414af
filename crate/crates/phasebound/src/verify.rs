//! Self-contained consistency suite: every computation with two
//! independent routes is recomputed both ways and compared, so a single
//! command can certify that the closed forms, the numeric routes, and the
//! optimizer all still agree with each other.
//!
//! The checks are deliberately redundant with the unit tests — that is
//! their value: they run against the *installed* binary in one process,
//! with no test harness, and report every route pair in one summary.
//! `fast` mode trims photon-number ranges so the suite finishes in
//! well under a second; the full suite stays under a desk-scale minute.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    chop_optimal, chop_uncertainty, eta_zero, interior_chop_coefficient, multipass_as_resource,
    multipass_optimal, multipass_uncertainty, noon_uncertainty, xi_constant,
};
use crate::classical::{
    fisher_analytic, fisher_numeric, optimal_transmission, sil_uncertainty,
};
use crate::model::InterferometerParams;
use crate::numeric::golden_min;
use crate::quantum::{
    noon_restricted_optimum, optimize_weights, quantum_multipass_uncertainty, quantum_uncertainty,
    stretch_weights, InformationKernel,
};

/// Outcome of one named consistency check.
#[derive(Debug, Clone)]
pub struct Check {
    /// Short stable identifier, suitable for grep.
    pub name: &'static str,
    /// Whether the check met its tolerance.
    pub passed: bool,
    /// Human-readable summary: worst deviation observed and its location.
    pub detail: String,
}

/// Runs the whole suite and collects one [`Check`] per route pair.
///
/// `fast` trims ranges (smaller photon numbers, fewer sample points) for
/// interactive runs; tolerances are identical in both modes.
pub fn run(fast: bool) -> Vec<Check> {
    vec![
        fisher_routes(fast),
        constants(),
        two_point_chain(fast),
        lossless_limit(fast),
        chop_routes(fast),
        free_pass_routes(),
        single_photon_vs_classical(),
        multipass_accounting_identity(),
        stretch_equivalence(fast),
        gradient_routes(fast),
    ]
}

/// True when every check in the slice passed.
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Fisher information, closed form vs truncated numeric sum, over the
/// full 81-point oracle grid (3 splitter choices × 3 losses × 3 phases ×
/// 3 photon budgets).
fn fisher_routes(fast: bool) -> Check {
    let etas = [0.1, 0.6, 1.0];
    let phis = [0.3, std::f64::consts::FRAC_PI_2, 2.8];
    let nbars: &[f64] = if fast { &[1.0, 10.0] } else { &[1.0, 10.0, 100.0] };

    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut points = 0u32;
    for &eta in &etas {
        for t in [0.3, 0.5, optimal_transmission(eta)] {
            for &phi in &phis {
                for &nbar in nbars {
                    let p = match InterferometerParams::new(t, eta, phi, nbar) {
                        Ok(p) => p,
                        Err(e) => return fail("fisher-routes", format!("bad grid point: {e}")),
                    };
                    let analytic = fisher_analytic(p);
                    let numeric = match fisher_numeric(p, 1e-12) {
                        Ok(f) => f,
                        Err(e) => return fail("fisher-routes", format!("numeric route: {e}")),
                    };
                    let deviation = (numeric - analytic).abs() / analytic.abs();
                    points += 1;
                    if deviation > worst {
                        worst = deviation;
                        worst_at = format!("(T={t:.4}, eta={eta}, phi={phi:.4}, nbar={nbar})");
                    }
                }
            }
        }
    }
    Check {
        name: "fisher-routes",
        passed: worst < 1e-8,
        detail: format!("worst relative deviation {worst:.3e} at {worst_at} over {points} points"),
    }
}

/// The three root-solved constants against their defining equations and
/// their literature windows.
fn constants() -> Check {
    let e0 = eta_zero();
    let c = interior_chop_coefficient();
    let xi = xi_constant();

    let e0_residual = (1.0 + e0.sqrt() + e0.ln()).abs();
    let c_residual = (1.0 + (-c / 2.0).exp() - c).abs();
    let xi_residual = (xi * (xi + 1.0).exp() - 1.0).abs();

    let passed = (0.227..=0.229).contains(&e0)
        && e0_residual < 1e-11
        && (c - 1.478).abs() < 1e-3
        && c_residual < 1e-11
        && (0.2775..=0.2785).contains(&xi)
        && xi_residual < 1e-11;
    Check {
        name: "constants",
        passed,
        detail: format!(
            "eta0 = {e0:.12} (residual {e0_residual:.1e}), \
             chop coefficient = {c:.12} (residual {c_residual:.1e}), \
             xi = {xi:.12} (residual {xi_residual:.1e})"
        ),
    }
}

/// The optimized two-point probe against the two-component closed form.
fn two_point_chain(fast: bool) -> Check {
    let n_max = if fast { 12 } else { 50 };
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for eta in [0.3, 0.6, 0.9] {
        for n in 1..=n_max {
            let optimum = match noon_restricted_optimum(n, eta) {
                Ok(o) => o,
                Err(e) => return fail("two-point-chain", format!("n = {n}, eta = {eta}: {e}")),
            };
            let closed = noon_uncertainty(n, eta);
            let deviation = (optimum.delta_phi / closed - 1.0).abs();
            if deviation > worst {
                worst = deviation;
                worst_at = format!("(n={n}, eta={eta})");
            }
        }
    }
    Check {
        name: "two-point-chain",
        passed: worst < 1e-10,
        detail: format!(
            "worst relative deviation {worst:.3e} at {worst_at}, n up to {n_max}"
        ),
    }
}

/// The full optimizer against the exact `1/n` limit at unit transmission.
fn lossless_limit(fast: bool) -> Check {
    let n_max = if fast { 8 } else { 20 };
    let mut worst = 0.0f64;
    let mut worst_at = 0u64;
    for n in 1..=n_max {
        let optimum = match optimize_weights(n, 1.0, 1e-8) {
            Ok(o) => o,
            Err(e) => return fail("lossless-limit", format!("n = {n}: {e}")),
        };
        let deviation = (optimum.delta_phi * n as f64 - 1.0).abs();
        if deviation > worst {
            worst = deviation;
            worst_at = n;
        }
    }
    Check {
        name: "lossless-limit",
        passed: worst < 1e-6,
        detail: format!(
            "worst |n·delta_phi − 1| = {worst:.3e} at n = {worst_at}, n up to {n_max}"
        ),
    }
}

/// The piecewise chop optimum against brute-force minimization over a
/// fine grid of probe sizes.
fn chop_routes(fast: bool) -> Check {
    let counts: &[f64] = if fast { &[5.0, 50.0] } else { &[5.0, 50.0, 500.0] };
    let steps = 4000;
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for &n in counts {
        for eta in [0.1, 0.3, 0.6, 0.9] {
            let piecewise = match chop_optimal(n, eta) {
                Ok(r) => r,
                Err(e) => return fail("chop-routes", format!("n = {n}, eta = {eta}: {e}")),
            };
            let mut grid_min = f64::INFINITY;
            let mut grid_argmin = 1.0;
            for i in 0..=steps {
                let k = 1.0 + (n - 1.0) * i as f64 / steps as f64;
                let value = match chop_uncertainty(n, k, eta) {
                    Ok(v) => v,
                    Err(e) => return fail("chop-routes", format!("k = {k}: {e}")),
                };
                if value < grid_min {
                    grid_min = value;
                    grid_argmin = k;
                }
            }
            // The piecewise value must not exceed any grid value: global
            // optimality, independent of the grid resolution.
            if piecewise.delta_phi > grid_min * (1.0 + 1e-12) {
                return fail(
                    "chop-routes",
                    format!(
                        "piecewise {0:.12e} above grid minimum {grid_min:.12e} at (n={n}, eta={eta})",
                        piecewise.delta_phi
                    ),
                );
            }
            // For the tightness half, refine around the coarse winner so
            // the sample spacing, not the formula, is what limits the gap.
            let spacing = (n - 1.0) / steps as f64;
            let lo = (grid_argmin - spacing).max(1.0);
            let hi = (grid_argmin + spacing).min(n);
            for i in 0..=steps {
                let k = lo + (hi - lo) * i as f64 / steps as f64;
                let value = match chop_uncertainty(n, k, eta) {
                    Ok(v) => v,
                    Err(e) => return fail("chop-routes", format!("k = {k}: {e}")),
                };
                grid_min = grid_min.min(value);
            }
            let gap = grid_min / piecewise.delta_phi - 1.0;
            if gap > worst {
                worst = gap;
                worst_at = format!("(n={n}, eta={eta})");
            }
        }
    }
    Check {
        name: "chop-routes",
        passed: worst < 1e-5,
        detail: format!(
            "piecewise optimum below every grid sample; sampled minimum within {worst:.3e} at {worst_at}"
        ),
    }
}

/// The free-pass closed form against golden-section minimization over the
/// pass count.
fn free_pass_routes() -> Check {
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for eta in [0.3, 0.6, 0.9] {
        for nbar in [1.0, 100.0] {
            let closed = match multipass_optimal(nbar, eta) {
                Ok(o) => o,
                Err(e) => {
                    return fail("free-pass-routes", format!("nbar = {nbar}, eta = {eta}: {e}"))
                }
            };
            let cap = 4.0 * closed.k_opt;
            let searched = golden_min(
                |k| multipass_uncertainty(nbar, k, eta).unwrap_or(f64::INFINITY),
                1.0,
                cap,
                1e-9,
            );
            let (k_search, d_search) = match searched {
                Ok(pair) => pair,
                Err(e) => return fail("free-pass-routes", format!("search: {e}")),
            };
            let k_gap = (k_search - closed.k_opt).abs();
            let d_gap = (d_search / closed.delta_phi - 1.0).abs();
            let gap = k_gap.max(d_gap);
            if gap > worst {
                worst = gap;
                worst_at = format!("(nbar={nbar}, eta={eta})");
            }
        }
    }
    Check {
        name: "free-pass-routes",
        passed: worst < 1e-6,
        detail: format!(
            "worst pass-count/uncertainty gap {worst:.3e} at {worst_at} (closed form vs search)"
        ),
    }
}

/// The single-photon quantum optimum against the classical limit at a
/// one-photon budget: one photon admits no entanglement advantage.
fn single_photon_vs_classical() -> Check {
    let mut worst = 0.0f64;
    let mut worst_at = 0.0f64;
    for eta in [0.1, 0.3, 0.6, 0.9] {
        let optimum = match optimize_weights(1, eta, 1e-9) {
            Ok(o) => o,
            Err(e) => return fail("single-photon-vs-classical", format!("eta = {eta}: {e}")),
        };
        let classical = sil_uncertainty(eta, 1.0);
        let deviation = (optimum.delta_phi / classical - 1.0).abs();
        if deviation > worst {
            worst = deviation;
            worst_at = eta;
        }
    }
    Check {
        name: "single-photon-vs-classical",
        passed: worst < 1e-8,
        detail: format!("worst relative deviation {worst:.3e} at eta = {worst_at}"),
    }
}

/// Pass-charged multi-pass against optimal chopping: the two resource
/// accountings are the same arithmetic and must agree bit for bit.
fn multipass_accounting_identity() -> Check {
    let mut mismatches = 0u32;
    let mut points = 0u32;
    for n in [1.0, 2.0, 7.0, 64.0, 513.0] {
        for eta in [0.15, 0.3, 0.6, 0.95] {
            points += 1;
            let chop = chop_optimal(n, eta);
            let mp = multipass_as_resource(n, eta);
            match (chop, mp) {
                (Ok(a), Ok(b)) => {
                    // Bit-exact: same branch, same k, same uncertainty.
                    if a != b {
                        mismatches += 1;
                    }
                }
                _ => mismatches += 1,
            }
        }
    }
    Check {
        name: "multipass-accounting-identity",
        passed: mismatches == 0,
        detail: format!("{mismatches} mismatches over {points} (n, eta) pairs (bit-exact compare)"),
    }
}

/// An `n`-photon probe sent through `k` passes against the stretched
/// `kn`-photon single-pass probe.
///
/// On two-point profiles the stretch preserves the loss statistics, so
/// the uncertainties must agree to rounding; profiles with interior
/// support leak less which-path information stretched, so there the
/// stretched probe must never be *worse* — together, multi-pass offers
/// no advantage over single-pass at equal total photon count.
fn stretch_equivalence(fast: bool) -> Check {
    let (n_max, k_max) = if fast { (2u64, 2u64) } else { (4, 3) };
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut dominated = 0u32;
    let mut comparisons = 0u32;
    for eta in [0.3f64, 0.6, 0.9] {
        for n in 1..=n_max {
            for k in 1..=k_max {
                // The probe tuned for the k-pass experiment sees the
                // compounded transmission.
                let effective = eta.powi(k as i32);
                let two_point = match noon_restricted_optimum(n, effective) {
                    Ok(o) => o.weights,
                    Err(e) => {
                        return fail("stretch-equivalence", format!("n = {n}, k = {k}: {e}"))
                    }
                };
                let paired = |weights| {
                    let multi = quantum_multipass_uncertainty(weights, eta, k)?;
                    let stretched = stretch_weights(weights, k)
                        .and_then(|w| quantum_uncertainty(&w, eta))?;
                    crate::error::Result::Ok((multi, stretched))
                };
                let (multi, stretched) = match paired(&two_point) {
                    Ok(pair) => pair,
                    Err(e) => {
                        return fail("stretch-equivalence", format!("n = {n}, k = {k}: {e}"))
                    }
                };
                let deviation = (multi / stretched - 1.0).abs();
                if deviation > worst {
                    worst = deviation;
                    worst_at = format!("(n={n}, k={k}, eta={eta})");
                }

                let general = match optimize_weights(n, effective, 1e-9) {
                    Ok(o) => o.weights,
                    Err(e) => {
                        return fail("stretch-equivalence", format!("n = {n}, k = {k}: {e}"))
                    }
                };
                let (multi_general, stretched_general) = match paired(&general) {
                    Ok(pair) => pair,
                    Err(e) => {
                        return fail("stretch-equivalence", format!("n = {n}, k = {k}: {e}"))
                    }
                };
                comparisons += 1;
                if stretched_general <= multi_general * (1.0 + 1e-12) {
                    dominated += 1;
                }
            }
        }
    }
    Check {
        name: "stretch-equivalence",
        passed: worst < 1e-10 && dominated == comparisons,
        detail: format!(
            "two-point equality within {worst:.3e} (worst at {worst_at}); \
             stretched probe at least as good on {dominated}/{comparisons} optimal profiles"
        ),
    }
}

/// Analytic gradient of the information functional against central
/// differences at deterministic pseudo-random interior points.
fn gradient_routes(fast: bool) -> Check {
    let photon_numbers: &[usize] = if fast { &[2, 5] } else { &[2, 5, 10] };
    let points_per_case = if fast { 5 } else { 20 };
    let step = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);

    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for &n in photon_numbers {
        for eta in [0.3, 0.6, 0.9] {
            let kernel = match InformationKernel::new(n, eta) {
                Ok(k) => k,
                Err(e) => return fail("gradient-routes", format!("kernel n = {n}: {e}")),
            };
            for point in 0..points_per_case {
                // Random direction, pulled toward the uniform profile so
                // every coordinate stays well clear of the boundary under
                // the finite-difference perturbation.
                let raw: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.05..1.0)).collect();
                let total: f64 = raw.iter().sum();
                let uniform = 1.0 / (n + 1) as f64;
                let x: Vec<f64> = raw
                    .iter()
                    .map(|r| 0.5 * r / total + 0.5 * uniform)
                    .collect();

                let mut analytic = vec![0.0; n + 1];
                kernel.information_and_gradient(&x, &mut analytic);
                let mut difference = vec![0.0; n + 1];
                let mut probe = x.clone();
                for i in 0..=n {
                    probe[i] = x[i] + step;
                    let plus = kernel.information(&probe);
                    probe[i] = x[i] - step;
                    let minus = kernel.information(&probe);
                    probe[i] = x[i];
                    difference[i] = (plus - minus) / (2.0 * step);
                }

                let norm = |v: &[f64]| v.iter().map(|g| g * g).sum::<f64>().sqrt();
                let gap: Vec<f64> = analytic
                    .iter()
                    .zip(&difference)
                    .map(|(a, d)| a - d)
                    .collect();
                let deviation = norm(&gap) / norm(&analytic);
                if deviation > worst {
                    worst = deviation;
                    worst_at = format!("(n={n}, eta={eta}, point={point})");
                }
            }
        }
    }
    Check {
        name: "gradient-routes",
        passed: worst < 1e-5,
        detail: format!("worst relative gradient deviation {worst:.3e} at {worst_at}"),
    }
}

/// A check that failed before producing a deviation measurement.
fn fail(name: &'static str, detail: String) -> Check {
    Check {
        name,
        passed: false,
        detail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes_every_check() {
        let checks = run(true);
        assert_eq!(checks.len(), 10);
        for check in &checks {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
        assert!(all_passed(&checks));
    }

    #[test]
    fn check_names_are_unique_and_stable() {
        let checks = run(true);
        let mut names: Vec<&str> = checks.iter().map(|c| c.name).collect();
        let original = names.clone();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), original.len());
        assert!(original.contains(&"fisher-routes"));
        assert!(original.contains(&"constants"));
        assert!(original.contains(&"gradient-routes"));
    }
}
