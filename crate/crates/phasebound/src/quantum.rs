//! Quantum precision bound for the lossy interferometer: the phase
//! information carried by an `n`-photon probe with photon-number weights
//! `x_0..x_n`, its minimization over the weight simplex, and the integer
//! pass-count search for multi-pass probes.
//!
//! The central quantity is a Fisher-like information functional of the
//! weights. Conditioning on the number of photons lost (`l` of `s`, with
//! binomial kernel row `B^s_l`) splits the probe into incoherent sectors,
//! and the surviving phase information is the total conditional variance
//! of the photon number across those sectors:
//!
//! ```text
//! F(x) = Σ_l Σ_s x_s·B^s_l·(s − r_l)²,    r_l = Σ_s x_s·B^s_l·s / Σ_s x_s·B^s_l
//! ```
//!
//! with `δφ = ½·F^{−1/2}`. The variance form above is algebraically equal
//! to the textbook `Σ_s x_s s² − Σ_l N_l²/D_l` but sums only nonnegative
//! terms, so it stays accurate when near-total cancellation would wreck
//! the naive difference (deep loss, weights hugging the simplex boundary).
//!
//! `F` is concave in the weights, so projected-gradient ascent from a
//! handful of starts with a line search and a fixed-step polish phase
//! reliably finds the optimum; the multi-pass objective is *not* unimodal
//! in the pass count, which the exhaustive integer scan sidesteps.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{loss_kernel_row, WeightVector};
use crate::numeric::{golden_max, project_to_simplex, solve_linear_system};

// ---------------------------------------------------------------------------
// Solver constants
// ---------------------------------------------------------------------------

/// Default projected-gradient tolerance for weight optimization. Loose
/// enough to converge in milliseconds, tight enough for plotting; pass an
/// explicit tolerance down to `1e-12` when digits matter.
pub const DEFAULT_WEIGHT_TOL: f64 = 1e-6;

/// Accepted tolerance range for [`optimize_weights`].
const WEIGHT_TOL_RANGE: (f64, f64) = (1e-12, 1e-4);

/// Iteration budget per optimization start.
const ITERATION_CAP: u64 = 100_000;

/// Armijo sufficient-increase slope for the backtracking line search.
const ARMIJO_SLOPE: f64 = 1e-4;

/// Maximum step halvings per line search before declaring a stall.
const MAX_HALVINGS: u32 = 60;

/// Line-search iterations without a meaningful drop in the best projected
/// gradient norm before handing control to the curvature-aware phases.
const SEARCH_STALL_LIMIT: u64 = 300;

/// Iteration budget of the fixed-step polish phase.
const POLISH_CAP: u64 = 2_000;

/// Polish iterations without a new best projected-gradient norm before
/// giving up on further progress.
const POLISH_STALE_LIMIT: u64 = 100;

/// Clamp range for the Barzilai–Borwein step length.
const STEP_RANGE: (f64, f64) = (1e-12, 1e12);

/// Face-change rounds of the Newton cleanup (deactivations happen inside
/// a round; each new round admits at most one boundary coordinate back).
const NEWTON_ROUNDS: u32 = 8;

/// Newton iterations per face before forcing a reactivation check.
const NEWTON_INNER_CAP: u32 = 40;

/// Relative Tikhonov shift applied to the face Hessian so near-singular
/// faces still yield a usable direction.
const NEWTON_REGULARIZATION: f64 = 1e-11;

/// Step halvings the Newton cleanup tries before concluding the quadratic
/// model has stopped describing the functional here.
const NEWTON_HALVINGS: u32 = 8;

/// Newton steps of the gradient-equalization cleanup per support set.
const EQUALIZATION_INNER_CAP: u32 = 30;

/// Support reshuffles (admissions of excluded coordinates) the
/// equalization cleanup may attempt per call. Sized so one call can
/// finish the job: cycling back through the additive phases re-zeroes
/// the very tail weights this phase exists to resolve.
const EQUALIZATION_ROUNDS: u32 = 40;

/// Largest log-weight change allowed per equalization Newton step; wilder
/// directions are scaled back into this trust region.
const EQUALIZATION_LOG_TRUST: f64 = 20.0;

/// Step halvings before an equalization Newton direction is abandoned.
const EQUALIZATION_HALVINGS: u32 = 12;

/// Weights below this floor count as collapsed: the coordinate leaves the
/// support instead of dragging the log parametrization toward underflow.
const EQUALIZATION_COLLAPSE_FLOOR: f64 = 1e-280;

/// How many natural-log units below the smallest kept weight a readmitted
/// coordinate re-enters the support.
const EQUALIZATION_REENTRY_OFFSET: f64 = 5.0;

/// Damped multiplicative steps run before the equalization Newton loop to
/// bring the weight decades roughly in line with the optimum first.
const EQUALIZATION_PRESCALE_STEPS: u32 = 200;

/// Largest log-weight change per prescale step (applied to the worst
/// residual; smaller residuals move proportionally less).
const EQUALIZATION_PRESCALE_DAMPING: f64 = 0.3;

/// Prescale steps without a 1% drop in the worst residual before the
/// prescale hands over to the Newton loop.
const EQUALIZATION_PRESCALE_STALE_LIMIT: u32 = 20;

/// Relative information loss past which a lower projected-gradient norm
/// no longer counts as a better iterate: the rounding floor of the
/// functional sits many orders below this, so any larger drop means the
/// iterate wandered into a different region, not closer to the optimum.
const VALUE_GUARD: f64 = 1e-9;

/// Information values at or below zero mean the state carries no phase
/// information; values below this guard are impossible for a sum of
/// nonnegative terms and indicate a kernel bug.
const NEGATIVE_INFORMATION_GUARD: f64 = -1e-10;

/// Seed mixed into the deterministic multi-start generator.
const MULTISTART_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

// ---------------------------------------------------------------------------
// Information kernel
// ---------------------------------------------------------------------------

/// Precomputed loss-kernel table for photon numbers `0..=n` at a fixed arm
/// transmission, with raw-slice evaluators for the information functional.
///
/// [`quantum_uncertainty`] wraps this for validated one-off calls; build
/// the kernel directly when scanning many weight profiles at the same
/// transmission (optimizer iterations, grid sweeps), since the table
/// depends only on `(n, eta)`.
pub struct InformationKernel {
    eta: f64,
    /// `rows[s][l]`: probability that `l` of `s` photons are lost.
    rows: Vec<Vec<f64>>,
}

impl InformationKernel {
    /// Tabulates kernel rows for every photon number up to `n`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidParameter`] when `eta` leaves `(0, 1]`.
    pub fn new(n: usize, eta: f64) -> Result<Self> {
        let mut rows = Vec::with_capacity(n + 1);
        for s in 0..=n {
            rows.push(loss_kernel_row(s, eta)?.probabilities);
        }
        Ok(Self { eta, rows })
    }

    /// Arm transmission the rows were built for.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Largest photon number the table covers.
    pub fn max_photon_number(&self) -> usize {
        self.rows.len() - 1
    }

    /// Phase information of raw nonnegative weights `x_0..x_n` (need not
    /// be normalized to machine precision; at most `n+1` entries).
    ///
    /// Sectors with zero total probability contribute zero: every term
    /// that would feed both their numerator and denominator is itself
    /// zero, so skipping them is the continuous extension, not a fudge.
    pub fn information(&self, weights: &[f64]) -> f64 {
        debug_assert!(weights.len() <= self.rows.len());
        let moments = self.sector_moments(weights);
        self.corrected_variance(weights, &moments)
    }

    /// Phase information together with its gradient in the raw weights.
    ///
    /// The value is computed by the same compensated summation as
    /// [`InformationKernel::information`]; the gradient entry for weight
    /// `t` is `t² − Σ_{l≤t} B^t_l·r_l·(2t − r_l)` with the same
    /// zero-probability sectors skipped.
    pub fn information_and_gradient(&self, weights: &[f64], gradient: &mut [f64]) -> f64 {
        debug_assert_eq!(weights.len(), gradient.len());
        let moments = self.sector_moments(weights);
        let total = self.corrected_variance(weights, &moments);
        for (t, (slot, row)) in gradient.iter_mut().zip(&self.rows).enumerate() {
            let t_real = t as f64;
            let mut pulled = 0.0;
            for (l, &b) in row.iter().enumerate() {
                if moments.denom[l] > 0.0 {
                    let r = moments.mean[l];
                    pulled += b * r * (2.0 * t_real - r);
                }
            }
            *slot = t_real * t_real - pulled;
        }
        total
    }

    /// First pass shared by value and gradient: per-sector probability
    /// mass `D_l`, conditional mean `r_l = N_l/D_l`, and whether more than
    /// one photon number feeds the sector.
    fn sector_moments(&self, weights: &[f64]) -> SectorMoments {
        let sectors = weights.len();
        let mut denom = vec![0.0; sectors];
        let mut mean = vec![0.0; sectors];
        let mut support = vec![0u8; sectors];
        for (s, (&x, row)) in weights.iter().zip(&self.rows).enumerate() {
            if x == 0.0 {
                continue;
            }
            for (l, &b) in row.iter().enumerate() {
                let mass = x * b;
                if mass > 0.0 {
                    denom[l] += mass;
                    mean[l] += mass * s as f64;
                    support[l] = support[l].saturating_add(1);
                }
            }
        }
        let mut multi = vec![false; sectors];
        for l in 0..sectors {
            if denom[l] > 0.0 {
                mean[l] /= denom[l];
                multi[l] = support[l] >= 2;
            }
        }
        SectorMoments { denom, mean, multi }
    }

    /// Second pass: total conditional variance across sectors, with the
    /// rounding of each stored sector mean compensated.
    ///
    /// The naive `Σ mass·(s − r_l)²` picks up `(s·ε)²` of dust per term
    /// from the roundoff `ε` in the stored `r_l`, which dominates exactly
    /// when the true variance is tiny (deep loss, profiles hugging the
    /// simplex boundary). The corrected two-pass form subtracts
    /// `(Σ mass·(s − r_l))²/D_l`, cancelling that dust to first order,
    /// and sectors fed by a single photon number are skipped outright —
    /// their conditional variance is identically zero.
    fn corrected_variance(&self, weights: &[f64], moments: &SectorMoments) -> f64 {
        let sectors = weights.len();
        let mut square = vec![0.0; sectors];
        let mut linear = vec![0.0; sectors];
        for (s, (&x, row)) in weights.iter().zip(&self.rows).enumerate() {
            if x == 0.0 {
                continue;
            }
            for (l, &b) in row.iter().enumerate() {
                if moments.multi[l] {
                    let mass = x * b;
                    let spread = s as f64 - moments.mean[l];
                    square[l] += mass * spread * spread;
                    linear[l] += mass * spread;
                }
            }
        }
        let mut total = 0.0;
        for l in 0..sectors {
            if moments.multi[l] {
                total += (square[l] - linear[l] * linear[l] / moments.denom[l]).max(0.0);
            }
        }
        total
    }
}

/// Per-sector conditioning data from the first pass over the weights.
///
/// `multi[l]` marks sectors where at least two photon numbers contribute
/// probability mass; single-point sectors carry no spread and are skipped
/// by the variance pass.
struct SectorMoments {
    denom: Vec<f64>,
    mean: Vec<f64>,
    multi: Vec<bool>,
}

/// Maps an information value to the phase uncertainty `½·F^{−1/2}`.
///
/// Zero information (a point-mass profile, say) carries no phase
/// signature, reported as infinite uncertainty.
///
/// # Errors
///
/// Returns [`Error::Inconsistency`] for information below `-1e-10`, which
/// a sum of nonnegative terms cannot produce; it would indicate a kernel
/// bug, not bad input.
fn uncertainty_from_information(information: f64) -> Result<f64> {
    if information < NEGATIVE_INFORMATION_GUARD {
        return Err(Error::Inconsistency {
            message: "phase information came out negative",
            discrepancy: information,
        });
    }
    if information <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(0.5 / information.sqrt())
}

/// Transmission after `k` passes, `η^k`, via `exp(k·ln η)` so large pass
/// counts degrade gracefully and `η = 1` stays exactly `1`.
fn effective_transmission(eta: f64, passes: f64) -> Result<f64> {
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1]",
            value: eta,
        });
    }
    let effective = (passes * eta.ln()).exp();
    if effective <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "so many passes that the survival probability underflows to zero",
            value: passes,
        });
    }
    Ok(effective)
}

// ---------------------------------------------------------------------------
// Public evaluators
// ---------------------------------------------------------------------------

/// Phase uncertainty of a single-pass probe with the given photon-number
/// weights at arm transmission `eta`: `δφ = ½·F(x)^{−1/2}`.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] when `eta` leaves `(0, 1]`, and
/// [`Error::Inconsistency`] on a (theoretically impossible) negative
/// information value.
pub fn quantum_uncertainty(weights: &WeightVector, eta: f64) -> Result<f64> {
    let kernel = InformationKernel::new(weights.photon_number(), eta)?;
    uncertainty_from_information(kernel.information(weights.weights()))
}

/// Phase uncertainty of the same probe sent through the sample `k` times:
/// the arm transmission drops to `η^k` while the acquired phase grows
/// `k`-fold, so `δφ(k passes) = δφ(single pass at η^k)/k`.
///
/// # Errors
///
/// As [`quantum_uncertainty`], plus [`Error::InvalidParameter`] for
/// `k = 0`.
pub fn quantum_multipass_uncertainty(weights: &WeightVector, eta: f64, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "pass count must be at least 1",
            value: 0.0,
        });
    }
    let effective = effective_transmission(eta, k as f64)?;
    Ok(quantum_uncertainty(weights, effective)? / k as f64)
}

/// Re-indexes an `n`-photon weight profile onto `k·n` photons by sending
/// each occupied photon number `s` to `k·s`, weights unchanged.
///
/// This is the single-pass state that mimics a `k`-pass experiment by
/// carrying `k` times the photons instead of crossing the sample `k`
/// times. On two-point profiles the mimicry is exact —
/// `quantum_uncertainty(stretch, η)` equals
/// `quantum_multipass_uncertainty(original, η, k)` — while profiles with
/// interior support do strictly better stretched, because losing single
/// photons from `|k·s⟩` leaks less which-path information than losing
/// them from `|s⟩` at the `k`-fold harsher transmission.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] for `k = 0`.
pub fn stretch_weights(weights: &WeightVector, k: u64) -> Result<WeightVector> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "stretch factor must be at least 1",
            value: 0.0,
        });
    }
    let source = weights.weights();
    let n = weights.photon_number();
    let mut stretched = vec![0.0; n * k as usize + 1];
    for (s, &x) in source.iter().enumerate() {
        stretched[s * k as usize] = x;
    }
    WeightVector::new(&stretched)
}

// ---------------------------------------------------------------------------
// Optimization results
// ---------------------------------------------------------------------------

/// Diagnostics of an optimization run.
///
/// One-dimensional searches (the two-point restriction) report zero
/// iterations, the absolute scalar derivative at the solution, and a
/// single start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    /// Projected-gradient iterations consumed (all phases, all starts).
    pub iterations: u64,
    /// Projected-gradient norm at the reported optimum.
    pub grad_norm: f64,
    /// Number of optimization starts that were run.
    pub starts: u32,
}

/// An optimized probe: photon number, pass count, weights, and the
/// uncertainty they achieve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumOptimum {
    /// Photon number of the probe (weights run over `0..=n`).
    pub n: u64,
    /// Pass count (`1` for single-pass strategies).
    pub k: u64,
    /// Optimized photon-number weights.
    pub weights: WeightVector,
    /// Phase uncertainty achieved by `weights` at `k` passes.
    pub delta_phi: f64,
    /// Solver diagnostics for the reported optimum.
    pub report: SolverReport,
}

// ---------------------------------------------------------------------------
// Projected-gradient solver
// ---------------------------------------------------------------------------

/// Outcome of one projected-gradient ascent run.
struct AscentRun {
    weights: Vec<f64>,
    information: f64,
    grad_norm: f64,
    iterations: u64,
    converged: bool,
}

/// Norm of the unit-step projected gradient `‖P(x + g) − x‖₂`, the
/// stationarity measure for ascent over the simplex.
fn projected_gradient_norm(x: &[f64], gradient: &[f64]) -> f64 {
    let shifted: Vec<f64> = x.iter().zip(gradient).map(|(&xi, &gi)| xi + gi).collect();
    let projected = project_to_simplex(&shifted);
    projected
        .iter()
        .zip(x)
        .map(|(&p, &xi)| (p - xi) * (p - xi))
        .sum::<f64>()
        .sqrt()
}

/// Maximizes the information functional over the simplex from one start.
///
/// Four phases, alternated until convergence or the budget runs out.
/// Barzilai–Borwein steps with a backtracking Armijo line search carry the
/// iterate into the vicinity of the optimum; because the Armijo test
/// compares function values, it necessarily stalls once increases shrink
/// to the rounding floor `ε·|F|`, at a projected-gradient norm around
/// `√(ε·|F|·L)` — typically `1e-8`, too coarse for the tightest supported
/// tolerances. A polish phase of fixed BB steps without an acceptance test
/// then contracts toward the stationary point (the functional is concave),
/// keeping the iterate with the smallest projected-gradient norm seen.
/// Badly conditioned kernels — sector masses spanning many decades under
/// deep loss — can reduce both first-order phases to a crawl, so a Newton
/// phase on the binding face supplies the curvature handling they lack.
/// When even that conditioning fails — deep-loss optima spread their
/// weights across dozens of decades, beyond any additive step — a final
/// equalization phase solves the stationarity system in log-weight
/// coordinates, where those scales are no obstacle. The cycle repeats
/// from whatever point it reaches, keeping the most stationary iterate
/// seen overall, and gives up after three cycles without real progress
/// rather than burning the budget on oscillation.
fn ascend_information(kernel: &InformationKernel, start: &[f64], tol: f64) -> AscentRun {
    let dim = start.len();
    let mut x = project_to_simplex(start);
    let mut gradient = vec![0.0; dim];
    let mut information = kernel.information_and_gradient(&x, &mut gradient);
    let mut grad_norm = projected_gradient_norm(&x, &gradient);
    let mut step = 1.0;
    let mut iterations = 0u64;
    let mut overall = (x.clone(), information, grad_norm);
    let mut stalled_cycles = 0u32;

    while grad_norm >= tol && iterations < ITERATION_CAP {
        let entry_best = overall.2;
        // Line-search phase.
        let mut best_pg = grad_norm;
        let mut search_stale = 0u64;
        while grad_norm >= tol && iterations < ITERATION_CAP {
            iterations += 1;
            let mut alpha = step;
            let mut accepted: Option<(Vec<f64>, f64)> = None;
            for _ in 0..MAX_HALVINGS {
                let trial: Vec<f64> = x
                    .iter()
                    .zip(&gradient)
                    .map(|(&xi, &gi)| xi + alpha * gi)
                    .collect();
                let candidate = project_to_simplex(&trial);
                let ascent: f64 = gradient
                    .iter()
                    .zip(candidate.iter().zip(&x))
                    .map(|(&g, (&c, &xi))| g * (c - xi))
                    .sum();
                if ascent <= 0.0 {
                    // The projection no longer moves: stationary at this
                    // step size, and smaller steps move even less.
                    break;
                }
                let value = kernel.information(&candidate);
                if value >= information + ARMIJO_SLOPE * ascent {
                    accepted = Some((candidate, value));
                    break;
                }
                alpha *= 0.5;
            }
            let Some((next, _)) = accepted else {
                break; // Rounding floor reached; hand over to the next phase.
            };
            let mut next_gradient = vec![0.0; dim];
            let next_information = kernel.information_and_gradient(&next, &mut next_gradient);
            step = barzilai_borwein_step(&x, &gradient, &next, &next_gradient).unwrap_or(step);
            x = next;
            gradient = next_gradient;
            information = next_information;
            grad_norm = projected_gradient_norm(&x, &gradient);
            // Progress watchdog: steps that keep passing the Armijo test
            // while the stationarity measure goes nowhere mean the kernel
            // needs curvature handling, not a bigger budget.
            if grad_norm < 0.99 * best_pg {
                best_pg = grad_norm;
                search_stale = 0;
            } else {
                search_stale += 1;
                if search_stale >= SEARCH_STALL_LIMIT {
                    break;
                }
            }
        }

        // Polish phase: fixed BB steps, tracking the most stationary iterate.
        if grad_norm >= tol && iterations < ITERATION_CAP {
            let mut best = (x.clone(), gradient.clone(), information, grad_norm);
            let mut stale = 0u64;
            for _ in 0..POLISH_CAP {
                if iterations >= ITERATION_CAP {
                    break;
                }
                iterations += 1;
                let shifted: Vec<f64> = x
                    .iter()
                    .zip(&gradient)
                    .map(|(&xi, &gi)| xi + step * gi)
                    .collect();
                let next = project_to_simplex(&shifted);
                if next == x {
                    break; // Exact fixed point; nothing left to polish.
                }
                let mut next_gradient = vec![0.0; dim];
                let next_information =
                    kernel.information_and_gradient(&next, &mut next_gradient);
                step = barzilai_borwein_step(&x, &gradient, &next, &next_gradient).unwrap_or(step);
                x = next;
                gradient = next_gradient;
                information = next_information;
                grad_norm = projected_gradient_norm(&x, &gradient);
                // The value guard keeps unchecked BB steps honest: a lower
                // projected gradient bought by materially lower information
                // is a stationary point of the wrong region.
                if grad_norm < best.3 && information >= best.2 * (1.0 - VALUE_GUARD) {
                    best = (x.clone(), gradient.clone(), information, grad_norm);
                    stale = 0;
                } else {
                    stale += 1;
                }
                if grad_norm < tol || stale >= POLISH_STALE_LIMIT {
                    break;
                }
            }
            (x, gradient, information, grad_norm) = best;
        }

        // Newton phase: quadratic steps on the binding face.
        if grad_norm >= tol && iterations < ITERATION_CAP {
            newton_face_polish(
                kernel,
                &mut x,
                &mut gradient,
                &mut information,
                &mut grad_norm,
                &mut iterations,
                tol,
            );
        }

        // Equalization phase: log-space Newton on the stationarity system.
        if grad_norm >= tol && iterations < ITERATION_CAP {
            equalization_polish(
                kernel,
                &mut x,
                &mut gradient,
                &mut information,
                &mut grad_norm,
                &mut iterations,
                tol,
            );
        }

        if grad_norm < overall.2 {
            overall = (x.clone(), information, grad_norm);
        }
        // Oscillation guard: phases restore their own best iterates, so a
        // cycle that fails to push the overall stationarity down by at
        // least a sliver has nothing further to offer.
        if overall.2 > 0.9 * entry_best {
            stalled_cycles += 1;
            if stalled_cycles >= 3 {
                break;
            }
        } else {
            stalled_cycles = 0;
        }
    }

    let (best_x, best_information, best_norm) = overall;
    if best_norm < grad_norm {
        x = best_x;
        information = best_information;
        grad_norm = best_norm;
    }

    AscentRun {
        converged: grad_norm < tol,
        weights: x,
        information,
        grad_norm,
        iterations,
    }
}

/// Barzilai–Borwein step length from consecutive iterates: `⟨s,s⟩/⟨s,−y⟩`
/// with `s` the iterate difference and `y` the gradient difference, which
/// is positive for a concave objective. Returns `None` when the curvature
/// estimate degenerates.
fn barzilai_borwein_step(
    x: &[f64],
    gradient: &[f64],
    next: &[f64],
    next_gradient: &[f64],
) -> Option<f64> {
    let mut s_dot_s = 0.0;
    let mut curvature = 0.0;
    for i in 0..x.len() {
        let s = next[i] - x[i];
        let y = next_gradient[i] - gradient[i];
        s_dot_s += s * s;
        curvature -= s * y;
    }
    if curvature > 0.0 && s_dot_s > 0.0 {
        Some((s_dot_s / curvature).clamp(STEP_RANGE.0, STEP_RANGE.1))
    } else {
        None
    }
}

/// Negative Hessian of the information functional restricted to the
/// `active` coordinates:
///
/// ```text
/// (−H)_{ab} = Σ_l 2·B^{i_a}_l·B^{i_b}_l·(i_a − r_l)·(i_b − r_l) / D_l
/// ```
///
/// — a sum of rank-one sector terms with positive coefficients, hence
/// positive semidefinite (equivalently: the functional is concave).
fn negative_face_hessian(
    kernel: &InformationKernel,
    moments: &SectorMoments,
    active: &[usize],
) -> Vec<Vec<f64>> {
    let m = active.len();
    let mut hessian = vec![vec![0.0; m]; m];
    let mut sector = vec![0.0; m];
    for l in 0..moments.denom.len() {
        if moments.denom[l] <= 0.0 {
            continue;
        }
        for (slot, &i) in active.iter().enumerate() {
            let b = kernel.rows[i].get(l).copied().unwrap_or(0.0);
            sector[slot] = b * (i as f64 - moments.mean[l]);
        }
        let scale = 2.0 / moments.denom[l];
        for a in 0..m {
            if sector[a] == 0.0 {
                continue;
            }
            let lead = scale * sector[a];
            for b in 0..m {
                hessian[a][b] += lead * sector[b];
            }
        }
    }
    hessian
}

/// Newton direction on the current face: solves the bordered system
/// `[−H + reg·I, 1; 1ᵀ, 0]·[dx; ν] = [g_S; 0]`, whose solution ascends
/// the local quadratic model while staying on the simplex hyperplane
/// (`Σ dx = 0`). Returns `None` when the face system degenerates.
fn face_newton_direction(
    kernel: &InformationKernel,
    x: &[f64],
    gradient: &[f64],
    active: &[usize],
) -> Option<Vec<f64>> {
    let m = active.len();
    let hessian = negative_face_hessian(kernel, &kernel.sector_moments(x), active);
    let max_diag = (0..m).map(|a| hessian[a][a]).fold(0.0, f64::max);
    let shift = NEWTON_REGULARIZATION * (1.0 + max_diag);
    let mut bordered = vec![vec![0.0; m + 1]; m + 1];
    let mut rhs = vec![0.0; m + 1];
    for a in 0..m {
        bordered[a][..m].copy_from_slice(&hessian[a]);
        bordered[a][a] += shift;
        bordered[a][m] = 1.0;
        bordered[m][a] = 1.0;
        rhs[a] = gradient[active[a]];
    }
    let solution = solve_linear_system(&bordered, &rhs)?;
    Some(solution[..m].to_vec())
}

/// Newton phase on the binding face.
///
/// First-order steps flatten out twice over: value-based acceptance cannot
/// see improvements beneath the rounding floor of the functional, and
/// badly conditioned kernels shrink every safe step length to a crawl.
/// Newton steps on the current face — equality-constrained to the simplex
/// hyperplane, boundary coordinates pinned — carry the curvature
/// information to do better: a step is accepted when it improves the
/// functional (Armijo, far from the optimum) or the stationarity measure
/// (near it, where value comparisons are blind), and halved otherwise.
/// Coordinates are deactivated when a step drives them to the boundary and
/// admitted back when their gradient entry rises above the face multiplier
/// `λ = Σ_i x_i·g_i`. The entry iterate is never lost: the caller's state
/// ends at the most stationary point seen.
fn newton_face_polish(
    kernel: &InformationKernel,
    x: &mut Vec<f64>,
    gradient: &mut Vec<f64>,
    information: &mut f64,
    grad_norm: &mut f64,
    iterations: &mut u64,
    tol: f64,
) {
    let dim = x.len();
    let target = (0.01 * tol).max(1e-15);
    let mut active: Vec<usize> = (0..dim).filter(|&i| x[i] > 0.0).collect();
    let mut best = (x.clone(), gradient.clone(), *information, *grad_norm);

    'rounds: for _ in 0..NEWTON_ROUNDS {
        for _ in 0..NEWTON_INNER_CAP {
            if *grad_norm < target || *iterations >= ITERATION_CAP {
                break 'rounds;
            }
            if active.len() < 2 {
                break; // Nothing movable on this face; consult reactivation.
            }
            let Some(dx) = face_newton_direction(kernel, x, gradient, &active) else {
                break 'rounds; // Singular face system: keep the entry result.
            };
            if dx.iter().all(|&d| d == 0.0) {
                break; // Stationary on this face.
            }
            // Longest feasible step along the direction.
            let mut tau_max = f64::INFINITY;
            let mut blocking = None;
            for (slot, &i) in active.iter().enumerate() {
                if dx[slot] < 0.0 {
                    let limit = x[i] / -dx[slot];
                    if limit < tau_max {
                        tau_max = limit;
                        blocking = Some(slot);
                    }
                }
            }
            if tau_max == 0.0 {
                // A coordinate sitting on the boundary wants to leave
                // again: pin it and re-solve without it.
                active.remove(blocking.expect("zero cap implies a blocking coordinate"));
                continue;
            }
            *iterations += 1;
            // Ascent slope of the step: positive by construction, since
            // dx solves a positive-definite system with right-hand side g.
            let slope: f64 = active
                .iter()
                .zip(&dx)
                .map(|(&i, &d)| gradient[i] * d)
                .sum();
            let mut tau = tau_max.min(1.0);
            let mut accepted = false;
            for _ in 0..=NEWTON_HALVINGS {
                let face_hit = tau == tau_max;
                let mut candidate = x.clone();
                for (slot, &i) in active.iter().enumerate() {
                    candidate[i] = (candidate[i] + tau * dx[slot]).max(0.0);
                }
                if face_hit {
                    let slot = blocking.expect("face hit implies a blocking coordinate");
                    candidate[active[slot]] = 0.0;
                }
                let mut candidate_gradient = vec![0.0; dim];
                let candidate_information =
                    kernel.information_and_gradient(&candidate, &mut candidate_gradient);
                let candidate_norm = projected_gradient_norm(&candidate, &candidate_gradient);
                let value_gain =
                    candidate_information > *information + ARMIJO_SLOPE * tau * slope;
                // A boundary hit changes the face — progress even when
                // neither measure momentarily improves — but only for
                // coordinates that were already negligible: a "hit" that
                // erases real information is an ill-conditioned direction
                // dressed up as an active-set change.
                let face_hit_ok =
                    face_hit && candidate_information >= *information * (1.0 - VALUE_GUARD);
                if candidate_norm < *grad_norm || value_gain || face_hit_ok {
                    *x = candidate;
                    *gradient = candidate_gradient;
                    *information = candidate_information;
                    *grad_norm = candidate_norm;
                    if face_hit {
                        let slot = blocking.expect("face hit implies a blocking coordinate");
                        active.remove(slot);
                    }
                    if *grad_norm < best.3 {
                        best = (x.clone(), gradient.clone(), *information, *grad_norm);
                    }
                    accepted = true;
                    break;
                }
                tau *= 0.5;
            }
            if !accepted {
                break 'rounds; // The quadratic model stopped helping.
            }
        }
        if *grad_norm < target || *iterations >= ITERATION_CAP {
            break;
        }
        // Reactivation: at a face optimum every active gradient entry
        // equals the multiplier λ = Σ_i x_i·g_i; an inactive coordinate
        // whose entry exceeds λ would raise the information if admitted.
        let multiplier: f64 = x.iter().zip(gradient.iter()).map(|(&xi, &gi)| xi * gi).sum();
        let margin = (0.01 * tol).max(1e-14);
        let mut entrant: Option<(usize, f64)> = None;
        for j in 0..dim {
            if active.contains(&j) {
                continue;
            }
            let excess = gradient[j] - multiplier;
            if excess > margin && entrant.is_none_or(|(_, e)| excess > e) {
                entrant = Some((j, excess));
            }
        }
        match entrant {
            Some((j, _)) => active.push(j),
            None => break,
        }
    }

    if best.3 < *grad_norm {
        (*x, *gradient, *information, *grad_norm) = best;
    }
}

/// Simplex multiplier and per-coordinate stationarity residuals.
///
/// The information is 1-homogeneous in the raw weights, so Euler's
/// relation pins the multiplier to `λ = Σ_i x_i·g_i` — the information
/// itself on the simplex — and an interior optimum of the support is
/// exactly the point where every gradient entry equals it.
fn kkt_residuals(x: &[f64], gradient: &[f64]) -> (f64, Vec<f64>) {
    let multiplier: f64 = x.iter().zip(gradient).map(|(&xi, &gi)| xi * gi).sum();
    let residuals = gradient.iter().map(|&gi| gi - multiplier).collect();
    (multiplier, residuals)
}

/// Jacobian of the stationarity residuals in log-weight coordinates,
/// restricted to the unknowns `vars`.
///
/// Differentiating `R_i = g_i − λ` along `ln x_k` gives
/// `J_ik = x_k·H_ik − x_k·R_k` with `H` the raw-weight Hessian — and the
/// product `x_k·H_ik` factors per loss sector into `−2·u_l[i]·w_l[k]`,
/// where `u_l[i] = B^i_l·(i − r_l)` and `w_l[k] = x_k·B^k_l·(k − r_l)/D_l`
/// is a centered share of the sector's mass, bounded by the photon number
/// no matter how many decades the weights span. The `1/D_l` factors that
/// blow up the additive-step Hessian under deep loss cancel analytically,
/// which is the whole point of working in log coordinates.
fn equalization_jacobian(
    kernel: &InformationKernel,
    x: &[f64],
    moments: &SectorMoments,
    residuals: &[f64],
    vars: &[usize],
) -> Vec<Vec<f64>> {
    let m = vars.len();
    let mut jacobian = vec![vec![0.0; m]; m];
    let mut u = vec![0.0; m];
    let mut w = vec![0.0; m];
    for l in 0..x.len() {
        if moments.denom[l] <= 0.0 {
            continue;
        }
        let r = moments.mean[l];
        for (slot, &i) in vars.iter().enumerate() {
            let b = kernel.rows[i].get(l).copied().unwrap_or(0.0);
            let centered = b * (i as f64 - r);
            u[slot] = centered;
            w[slot] = x[i] * centered / moments.denom[l];
        }
        for (a, &ua) in u.iter().enumerate() {
            if ua == 0.0 {
                continue;
            }
            let row = &mut jacobian[a];
            for (entry, &wb) in row.iter_mut().zip(&w) {
                *entry -= 2.0 * ua * wb;
            }
        }
    }
    for (column, &k) in vars.iter().enumerate() {
        let shift = x[k] * residuals[k];
        for row in &mut jacobian {
            row[column] -= shift;
        }
    }
    jacobian
}

/// Equalization phase: Newton on the stationarity system in log-weights.
///
/// Deep-loss optima spread their weights across dozens of decades — a
/// geometric tail in the photon number — and no additive step can adjust
/// a `1e-24` weight sitting next to a `0.3` one. In log coordinates the
/// scales disappear: the optimum solves `g_i(x) = λ` over the support,
/// Newton directions for that system come from a Jacobian of bounded
/// entries (see [`equalization_jacobian`]), and convergence is quadratic
/// from any reasonable warm start. One support coordinate (the heaviest)
/// stays pinned to fix the normalization gauge; its residual follows from
/// the others through `Σ_i x_i·R_i = 0`.
///
/// Support handling mirrors the face logic: a coordinate whose weight
/// collapses below [`EQUALIZATION_COLLAPSE_FLOOR`] leaves the support, and
/// after the Newton steps settle, an excluded coordinate whose gradient
/// exceeds the multiplier re-enters a few log units below the smallest
/// kept weight. Steps are accepted on a residual-norm decrease; when no
/// step helps — moderate-loss kernels whose optimum keeps part of the
/// boundary, where this system has no interior solution — the caller's
/// iterate is left at the most stationary point seen, and the other
/// phases carry on.
fn equalization_polish(
    kernel: &InformationKernel,
    x: &mut Vec<f64>,
    gradient: &mut Vec<f64>,
    information: &mut f64,
    grad_norm: &mut f64,
    iterations: &mut u64,
    tol: f64,
) {
    let dim = x.len();
    let mut support: Vec<usize> = (0..dim).filter(|&i| x[i] > 0.0).collect();
    if support.len() < 2 {
        return;
    }
    let mut log_weights = vec![f64::NEG_INFINITY; dim];
    for &i in &support {
        log_weights[i] = x[i].ln();
    }
    let mut best = (x.clone(), gradient.clone(), *information, *grad_norm);

    // Prescale: the additive phases deliver weights whose *decades* are
    // wrong — a tail coordinate stranded at 1e-16 that belongs at 1e-21
    // puts the first Newton model badly off. Damped multiplicative steps
    // (each log-weight moves proportionally to its residual, the worst by
    // EQUALIZATION_PRESCALE_DAMPING) fix the scales cheaply; contraction
    // to the tolerance is then the Newton loop's job.
    let mut prescale_stale = 0u32;
    let mut prescale_best = f64::MAX;
    for _ in 0..EQUALIZATION_PRESCALE_STEPS {
        if *grad_norm < tol || *iterations >= ITERATION_CAP || support.len() < 2 {
            break;
        }
        let (_, residuals) = kkt_residuals(x, gradient);
        let worst = support
            .iter()
            .map(|&i| residuals[i].abs())
            .fold(0.0f64, f64::max);
        if worst <= 0.0 {
            break;
        }
        *iterations += 1;
        let beta = EQUALIZATION_PRESCALE_DAMPING / worst;
        for &i in &support {
            log_weights[i] += beta * residuals[i];
        }
        *x = support_softmax(&log_weights, &support, dim);
        drop_collapsed(x, &mut log_weights, &mut support);
        *information = kernel.information_and_gradient(x, gradient);
        *grad_norm = projected_gradient_norm(x, gradient);
        if *grad_norm < best.3 {
            best = (x.clone(), gradient.clone(), *information, *grad_norm);
        }
        if worst < 0.99 * prescale_best {
            prescale_best = worst;
            prescale_stale = 0;
        } else {
            prescale_stale += 1;
            if prescale_stale >= EQUALIZATION_PRESCALE_STALE_LIMIT {
                break;
            }
        }
    }
    // The Newton loop starts from the most stationary point seen, not from
    // wherever the unchecked prescale drifted.
    if best.3 < *grad_norm {
        *x = best.0.clone();
        *gradient = best.1.clone();
        *information = best.2;
        *grad_norm = best.3;
        support = (0..dim).filter(|&i| x[i] > 0.0).collect();
        for (i, slot) in log_weights.iter_mut().enumerate() {
            *slot = if x[i] > 0.0 { x[i].ln() } else { f64::NEG_INFINITY };
        }
    }

    'rounds: for _ in 0..EQUALIZATION_ROUNDS {
        for _ in 0..EQUALIZATION_INNER_CAP {
            if *grad_norm < tol || *iterations >= ITERATION_CAP || support.len() < 2 {
                break 'rounds;
            }
            let (_, residuals) = kkt_residuals(x, gradient);
            let pinned = *support
                .iter()
                .max_by(|&&a, &&b| x[a].total_cmp(&x[b]))
                .expect("support holds at least two coordinates");
            let vars: Vec<usize> = support.iter().copied().filter(|&i| i != pinned).collect();
            let moments = kernel.sector_moments(x);
            let jacobian = equalization_jacobian(kernel, x, &moments, &residuals, &vars);
            let rhs: Vec<f64> = vars.iter().map(|&i| -residuals[i]).collect();
            let Some(mut delta) = solve_linear_system(&jacobian, &rhs) else {
                break 'rounds; // Singular system: keep the best seen.
            };
            let widest = delta.iter().fold(0.0f64, |acc, &d| acc.max(d.abs()));
            if widest > EQUALIZATION_LOG_TRUST {
                let scale = EQUALIZATION_LOG_TRUST / widest;
                for d in &mut delta {
                    *d *= scale;
                }
            }

            *iterations += 1;
            let merit: f64 = support
                .iter()
                .map(|&i| residuals[i] * residuals[i])
                .sum::<f64>()
                .sqrt();
            let mut tau = 1.0;
            let mut accepted = false;
            for _ in 0..EQUALIZATION_HALVINGS {
                let mut trial_logs = log_weights.clone();
                for (slot, &i) in vars.iter().enumerate() {
                    trial_logs[i] += tau * delta[slot];
                }
                let candidate = support_softmax(&trial_logs, &support, dim);
                let mut candidate_gradient = vec![0.0; dim];
                let candidate_information =
                    kernel.information_and_gradient(&candidate, &mut candidate_gradient);
                let (_, trial_residuals) = kkt_residuals(&candidate, &candidate_gradient);
                let trial_merit: f64 = support
                    .iter()
                    .map(|&i| trial_residuals[i] * trial_residuals[i])
                    .sum::<f64>()
                    .sqrt();
                if trial_merit < merit * (1.0 - ARMIJO_SLOPE * tau) {
                    log_weights = trial_logs;
                    *x = candidate;
                    *gradient = candidate_gradient;
                    *information = candidate_information;
                    *grad_norm = projected_gradient_norm(x, gradient);
                    if *grad_norm < best.3 {
                        best = (x.clone(), gradient.clone(), *information, *grad_norm);
                    }
                    accepted = true;
                    break;
                }
                tau *= 0.5;
            }
            if !accepted {
                break; // Direction exhausted on this support; try admission.
            }

            if drop_collapsed(x, &mut log_weights, &mut support) {
                *information = kernel.information_and_gradient(x, gradient);
                *grad_norm = projected_gradient_norm(x, gradient);
            }
        }
        if *grad_norm < tol || *iterations >= ITERATION_CAP {
            break;
        }

        // Admission: every excluded coordinate whose gradient exceeds the
        // multiplier would raise the information if given weight. All of
        // them enter at once — under deep loss the additive phases zero
        // whole stretches of the optimal tail, and readmitting one
        // coordinate per round would rediscover it a rung at a time.
        let (multiplier, _) = kkt_residuals(x, gradient);
        let margin = (0.01 * tol).max(1e-14);
        let entrants: Vec<usize> = (0..dim)
            .filter(|&j| !support.contains(&j) && gradient[j] - multiplier > margin)
            .collect();
        if entrants.is_empty() {
            break;
        }
        let floor = support
            .iter()
            .map(|&i| log_weights[i])
            .fold(f64::MAX, f64::min);
        for &j in &entrants {
            log_weights[j] = floor - EQUALIZATION_REENTRY_OFFSET;
            support.push(j);
        }
        support.sort_unstable();
        *x = support_softmax(&log_weights, &support, dim);
        *information = kernel.information_and_gradient(x, gradient);
        *grad_norm = projected_gradient_norm(x, gradient);
    }

    if best.3 < *grad_norm {
        (*x, *gradient, *information, *grad_norm) = best;
    }
}

/// Removes coordinates whose weight collapsed below
/// [`EQUALIZATION_COLLAPSE_FLOOR`] from the support, zeroing them exactly.
/// Returns whether anything was removed.
fn drop_collapsed(x: &mut [f64], log_weights: &mut [f64], support: &mut Vec<usize>) -> bool {
    let mut dropped = false;
    support.retain(|&i| {
        let keep = x[i] > EQUALIZATION_COLLAPSE_FLOOR;
        if !keep {
            x[i] = 0.0;
            log_weights[i] = f64::NEG_INFINITY;
            dropped = true;
        }
        keep
    });
    dropped
}

/// Normalized weights from log coordinates over a support set; excluded
/// coordinates stay exactly zero.
fn support_softmax(log_weights: &[f64], support: &[usize], dim: usize) -> Vec<f64> {
    let top = support
        .iter()
        .map(|&i| log_weights[i])
        .fold(f64::NEG_INFINITY, f64::max);
    let mut x = vec![0.0; dim];
    let mut total = 0.0;
    for &i in support {
        x[i] = (log_weights[i] - top).exp();
        total += x[i];
    }
    for &i in support {
        x[i] /= total;
    }
    x
}

/// Deterministic multi-start set: uniform weights, the two-point boundary
/// profile, and two seeded random interior points.
fn multistart_points(n: usize, eta: f64) -> Vec<Vec<f64>> {
    let dim = n + 1;
    let uniform = vec![1.0 / dim as f64; dim];
    let mut boundary = vec![0.0; dim];
    boundary[0] = 0.5;
    boundary[n] = 0.5;

    let seed = MULTISTART_SEED ^ (n as u64) ^ eta.to_bits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_interior = || {
        let mut point: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = point.iter().sum();
        if total > 0.0 {
            for w in &mut point {
                *w /= total;
            }
        }
        point
    };
    let first = random_interior();
    let second = random_interior();
    vec![uniform, boundary, first, second]
}

/// Minimizes the phase uncertainty over all weight profiles of an
/// `n`-photon probe at transmission `eta`, to projected-gradient
/// tolerance `tol`.
///
/// The functional is concave over the simplex, so one start would do; as
/// a safety net the solver still runs four (uniform, two-point boundary,
/// two seeded random interiors). The reported optimum is the best
/// converged start, and every converged start must agree with it within
/// `10·tol` (relative above `δφ = 1`); starts that merely exhaust their
/// budget are discounted, since a converged point certifies the global
/// optimum on its own.
///
/// # Errors
///
/// * [`Error::InvalidParameter`] — `n = 0`, `eta` outside `(0, 1]`, or
///   `tol` outside `[1e-12, 1e-4]`.
/// * [`Error::NonConvergence`] — no start reached the tolerance; carries
///   the best iterate found so far.
/// * [`Error::Inconsistency`] — converged starts disagreed beyond the
///   margin.
pub fn optimize_weights(n: u64, eta: f64, tol: f64) -> Result<QuantumOptimum> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            message: "photon number must be at least 1",
            value: 0.0,
        });
    }
    if !tol.is_finite() || tol < WEIGHT_TOL_RANGE.0 || tol > WEIGHT_TOL_RANGE.1 {
        return Err(Error::InvalidParameter {
            name: "tol",
            message: "must lie in [1e-12, 1e-4]",
            value: tol,
        });
    }
    let kernel = InformationKernel::new(n as usize, eta)?;
    let runs: Vec<AscentRun> = multistart_points(n as usize, eta)
        .iter()
        .map(|start| ascend_information(&kernel, start, tol))
        .collect();
    let starts = runs.len() as u32;
    let total_iterations: u64 = runs.iter().map(|r| r.iterations).sum();
    let best = runs
        .iter()
        .filter(|r| r.converged)
        .max_by(|a, b| a.information.total_cmp(&b.information));

    // Concavity makes any converged start a certificate for the global
    // optimum; a start that merely ran out of budget is no counter-
    // evidence. The call fails only when *no* start reached the tolerance.
    let Some(best) = best else {
        let fallback = runs
            .iter()
            .max_by(|a, b| a.information.total_cmp(&b.information))
            .expect("at least one start always runs");
        return Err(Error::NonConvergence {
            iterations: total_iterations,
            grad_norm: fallback.grad_norm,
            tol,
            best: Box::new(QuantumOptimum {
                n,
                k: 1,
                weights: WeightVector::new(&fallback.weights)?,
                delta_phi: uncertainty_from_information(fallback.information)?,
                report: SolverReport {
                    iterations: total_iterations,
                    grad_norm: fallback.grad_norm,
                    starts,
                },
            }),
        });
    };

    let weights = WeightVector::new(&best.weights)?;
    let delta_phi = uncertainty_from_information(best.information)?;
    let optimum = QuantumOptimum {
        n,
        k: 1,
        weights,
        delta_phi,
        report: SolverReport {
            iterations: total_iterations,
            grad_norm: best.grad_norm,
            starts,
        },
    };

    // Safety net: converged starts must all certify the same optimum.
    let margin = 10.0 * tol * delta_phi.max(1.0);
    for run in runs.iter().filter(|r| r.converged) {
        let run_delta = uncertainty_from_information(run.information)?;
        let gap = (run_delta - delta_phi).abs();
        if gap > margin {
            return Err(Error::Inconsistency {
                message: "optimization starts disagree beyond the safety margin",
                discrepancy: gap,
            });
        }
    }
    Ok(optimum)
}

// ---------------------------------------------------------------------------
// Two-point restriction
// ---------------------------------------------------------------------------

/// Optimizes the probe over two-point profiles `{0, n}` only: a 1-D
/// concave problem in the weight `x` on photon number `n`, with
/// information `n²·a·x(1−x)/(a·x + 1 − x)` at `a = η^n`.
///
/// Golden-section search localizes the maximum; since the stationarity
/// condition `1 − 2x − (a−1)x² = 0` is quadratic, its stable closed root
/// `x* = 1/(1+√a)` then polishes the location to machine precision — for
/// deep loss the optimum sits within `√a` of the boundary, far below what
/// a value-comparison search (or an absolute-tolerance bisection) can
/// resolve. Both routes must agree to `1e-6` in `x`.
///
/// # Errors
///
/// [`Error::InvalidParameter`] for `n = 0` or `eta` outside `(0, 1]`;
/// [`Error::Inconsistency`] if the search and the closed root disagree.
pub fn noon_restricted_optimum(n: u64, eta: f64) -> Result<QuantumOptimum> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            message: "photon number must be at least 1",
            value: 0.0,
        });
    }
    let kernel = InformationKernel::new(n as usize, eta)?;
    let mut raw = vec![0.0; n as usize + 1];
    let (searched, _) = golden_max(
        |x| {
            let mut profile = raw.clone();
            profile[0] = 1.0 - x;
            profile[n as usize] = x;
            kernel.information(&profile)
        },
        0.0,
        1.0,
        1e-8,
    )?;

    // Stable stationary point: complement computed directly, not as 1 − x,
    // so its relative accuracy survives a → 0.
    let half_log = 0.5 * (n as f64) * eta.ln();
    let root_a = half_log.exp(); // √a = η^{n/2}
    let x_top = 1.0 / (1.0 + root_a);
    let x_bottom = root_a / (1.0 + root_a);
    if (searched - x_top).abs() > 1e-6 {
        return Err(Error::Inconsistency {
            message: "two-point search disagrees with the stationary root",
            discrepancy: (searched - x_top).abs(),
        });
    }

    raw[0] = x_bottom;
    raw[n as usize] = x_top;
    let weights = WeightVector::new(&raw)?;
    let information = kernel.information(weights.weights());
    let delta_phi = uncertainty_from_information(information)?;

    // Scalar derivative of the information at the reported optimum, as the
    // 1-D analogue of a final gradient norm.
    let a = (2.0 * half_log).exp();
    let denominator = a * x_top + x_bottom;
    let stationarity = 1.0 - 2.0 * x_top - (a - 1.0) * x_top * x_top;
    let derivative = if denominator > 0.0 {
        (n as f64).powi(2) * a * stationarity / (denominator * denominator)
    } else {
        0.0
    };
    Ok(QuantumOptimum {
        n,
        k: 1,
        weights,
        delta_phi,
        report: SolverReport {
            iterations: 0,
            grad_norm: derivative.abs(),
            starts: 1,
        },
    })
}

// ---------------------------------------------------------------------------
// Multi-pass optimization
// ---------------------------------------------------------------------------

/// Default cap for the integer pass scan: twice the classical free-pass
/// optimum `2(1+ξ)/|ln η|`, past which the effective transmission has
/// collapsed and the uncertainty only grows.
fn default_pass_cap(eta: f64) -> u64 {
    let xi = crate::bounds::xi_constant();
    ((4.0 * (1.0 + xi) / eta.ln().abs()).ceil() as u64).max(1)
}

/// Optimizes an `n`-photon probe over both its weights and an integer
/// pass count `k ∈ [1, k_max]`.
///
/// The uncertainty is *not* unimodal in `k`, so every integer pass count
/// is tried — weights re-optimized against `η^k`, result rescaled by
/// `1/k` — and the global best kept (ties go to the smaller `k`). With
/// `k_max` unset the scan runs to twice the classical free-pass optimum,
/// beyond which additional passes only lose photons.
///
/// # Errors
///
/// * [`Error::UnboundedImprovement`] — `eta = 1` with no explicit
///   `k_max`: each extra lossless pass helps, so no finite optimum
///   exists.
/// * [`Error::InvalidParameter`] — `k_max = 0`, or as
///   [`optimize_weights`].
/// * [`Error::NonConvergence`] / [`Error::Inconsistency`] — propagated
///   from the per-`k` weight optimizations.
pub fn optimize_multipass(n: u64, eta: f64, k_max: Option<u64>, tol: f64) -> Result<QuantumOptimum> {
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1]",
            value: eta,
        });
    }
    let cap = match k_max {
        Some(0) => {
            return Err(Error::InvalidParameter {
                name: "k_max",
                message: "pass cap must be at least 1",
                value: 0.0,
            })
        }
        Some(cap) => cap,
        None if eta == 1.0 => return Err(Error::UnboundedImprovement),
        None => default_pass_cap(eta),
    };

    let mut best: Option<QuantumOptimum> = None;
    for k in 1..=cap {
        let effective = effective_transmission(eta, k as f64)?;
        let single = optimize_weights(n, effective, tol)?;
        let candidate = QuantumOptimum {
            n,
            k,
            delta_phi: single.delta_phi / k as f64,
            weights: single.weights,
            report: single.report,
        };
        let improves = best
            .as_ref()
            .map_or(true, |b| candidate.delta_phi < b.delta_phi);
        if improves {
            best = Some(candidate);
        }
    }
    Ok(best.expect("the scan covers at least k = 1"))
}

/// Diagnostic relaxation of [`optimize_multipass`] to a real-valued pass
/// count: golden-section search over `k`, re-optimizing the weights at
/// every probe. Returns `(k, δφ)`.
///
/// Physical pass counts are integers — this exists to show how much the
/// integer restriction costs (usually a fraction of a percent).
///
/// # Errors
///
/// As [`optimize_multipass`] with an unset cap.
pub fn relaxed_pass_optimum(n: u64, eta: f64, tol: f64) -> Result<(f64, f64)> {
    if !eta.is_finite() || eta <= 0.0 || eta >= 1.0 {
        if eta == 1.0 {
            return Err(Error::UnboundedImprovement);
        }
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1)",
            value: eta,
        });
    }
    let hi = default_pass_cap(eta) as f64;
    let (k, delta_phi) = crate::numeric::golden_min(
        |k| {
            let effective = effective_transmission(eta, k)
                .expect("eta validated and k bounded, so the power cannot underflow");
            match optimize_weights(n, effective, tol) {
                Ok(optimum) => optimum.delta_phi / k,
                Err(_) => f64::INFINITY,
            }
        },
        1.0,
        hi,
        1e-6,
    )?;
    Ok((k, delta_phi))
}
