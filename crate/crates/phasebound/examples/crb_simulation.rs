//! Monte Carlo check of the Cramér–Rao bound: simulated clicks, maximum
//! likelihood, and estimator efficiency.
//!
//! The Fisher-information bounds in this crate are only claims about an
//! ideal estimator. This example closes the loop experimentally:
//!
//!   1. simulate Poisson detector clicks for a lossy interferometer,
//!   2. run the per-trial maximum-likelihood phase estimator,
//!   3. compare the empirical RMSE against the Cramér–Rao bound,
//!   4. repeat with multiple passes, where the bound tightens k-fold,
//!   5. confirm the simulation is bit-reproducible from its seed.
//!
//! Run with:
//!
//! ```bash
//! cargo run --release --example crb_simulation
//! ```

use phasebound::classical::optimal_transmission;
use phasebound::error::Result;
use phasebound::model::InterferometerParams;
use phasebound::montecarlo::{
    default_window_halfwidth, empirical_fisher, mle_estimate, rmse_vs_crb, simulate_clicks,
};
use std::f64::consts::FRAC_PI_2;

fn main() -> Result<()> {
    let eta = 0.6;
    let nbar = 10_000.0;
    let seed = 42;
    let trials = 1000;

    // --- 1 + 2 + 3. Single pass at the fringe slope ------------------------
    // The optimal splitter and phi = pi/2 put the estimator in its best
    // regime; an efficient MLE should sit within a few percent of the bound.
    let t = optimal_transmission(eta);
    let p = InterferometerParams::new(t, eta, FRAC_PI_2, nbar)?;
    let report = rmse_vs_crb(p, 1, trials, seed)?;
    println!("single pass: eta = {eta}, nbar = {nbar}, {trials} trials");
    println!("  RMSE         = {:.6e}", report.rmse);
    println!("  CRB          = {:.6e}", report.crb);
    println!("  RMSE / CRB   = {:.4}", report.ratio);
    println!("  edge hits    = {} ({} kept)", report.discarded, report.trials - report.discarded);
    assert!(!report.unreliable, "window too tight for this configuration");

    // The empirical Fisher information (score variance at the true phase)
    // offers an estimator-free cross-check of the same bound.
    let batch = simulate_clicks(p, 1, trials, seed)?;
    let f_hat = empirical_fisher(&batch)?;
    println!("  empirical F  = {:.4}  (CRB from it: {:.6e})", f_hat, 1.0 / f_hat.sqrt());

    // --- 4. Multiple passes -------------------------------------------------
    // With k passes the phase signal is k-fold amplified while the loss
    // compounds; the bound at the pass-mapped parameters shrinks by 1/k on
    // top of the transmission penalty. The true phase must stay inside the
    // narrowed estimation window, so we estimate a smaller phase.
    let phi_true = std::f64::consts::PI / 10.0;
    println!("\npass scan at phi = pi/10 ({trials} trials each)");
    println!("  {:>3}  {:>12}  {:>12}  {:>7}  {:>6}", "k", "RMSE", "CRB", "ratio", "kept");
    for k in [1u64, 2, 3, 5] {
        let eta_k = eta.powi(k as i32);
        let params = InterferometerParams::new(optimal_transmission(eta_k), eta, phi_true, nbar)?;
        let r = rmse_vs_crb(params, k, trials, seed)?;
        println!(
            "  {:>3}  {:>12.4e}  {:>12.4e}  {:>7.4}  {:>6}",
            k,
            r.rmse,
            r.crb,
            r.ratio,
            r.trials - r.discarded
        );
    }

    // --- 5. Reproducibility ---------------------------------------------------
    // Every trial draws from its own counter-derived stream, so equal seeds
    // give bit-identical batches — and estimates — regardless of how the
    // trials might be scheduled.
    let again = simulate_clicks(p, 1, trials, seed)?;
    assert_eq!(batch.samples, again.samples);
    let window = default_window_halfwidth(1);
    let est_a = mle_estimate(&batch, window)?;
    let est_b = mle_estimate(&again, window)?;
    let identical = est_a
        .iter()
        .zip(&est_b)
        .all(|(a, b)| a.phi_hat.to_bits() == b.phi_hat.to_bits());
    println!("\nsame seed, fresh run: batches and estimates identical = {identical}");
    Ok(())
}
