//! Closed-form precision bounds: Heisenberg scaling, lossy superposition
//! probes, and the chopping trade-off.
//!
//! With `n` photons and no loss, entangled probes reach the Heisenberg
//! limit `1/n`. Loss punishes large superpositions exponentially, so the
//! better play is usually to chop the photon budget into many smaller
//! probes of `k` photons each. This example evaluates the closed forms:
//!
//!   1. the Heisenberg limit and the lossy single-probe bound,
//!   2. the chop uncertainty as a function of probe size `k`,
//!   3. the optimal probe size and its three loss regimes,
//!   4. integer probe sizes vs. the real-valued optimum.
//!
//! Run with:
//!
//! ```bash
//! cargo run --example strategy_bounds
//! ```

use phasebound::bounds::{
    chop_optimal, chop_optimal_integer, chop_uncertainty, eta_zero, heisenberg_limit,
    interior_chop_coefficient, noon_uncertainty, ChopRegimeKind,
};
use phasebound::error::Result;

fn main() -> Result<()> {
    let n = 100u64;

    // --- 1. One big probe vs. the lossless ideal -------------------------
    // The lossy bound (1 + eta^(n/2)) / (2 n eta^(n/2)) collapses onto 1/n
    // as eta -> 1 and blows up exponentially as soon as eta < 1: a single
    // n-photon superposition is fragile.
    println!("single n-photon probe, n = {n}");
    println!("  {:>6}  {:>14}  {:>14}", "eta", "lossy bound", "Heisenberg");
    for &eta in &[1.0, 0.99, 0.9, 0.6] {
        println!(
            "  {:>6}  {:>14.6e}  {:>14.6e}",
            eta,
            noon_uncertainty(n, eta),
            heisenberg_limit(n)
        );
    }

    // --- 2. Chopping the budget ------------------------------------------
    // Splitting n photons into n/k probes of k photons trades Heisenberg
    // scaling inside each probe against statistical averaging across them.
    let eta = 0.6;
    println!("\nchop uncertainty at eta = {eta}, n = {n}");
    println!("  {:>4}  {:>14}", "k", "delta_phi");
    for &k in &[1.0, 2.0, 3.0, 5.0, 10.0, 25.0, 100.0] {
        println!("  {:>4}  {:>14.6e}", k, chop_uncertainty(n as f64, k, eta)?);
    }

    // --- 3. The optimal probe size and its regimes ------------------------
    // Below the boundary loss eta0 single photons win outright; in an
    // intermediate band the optimum sits at k = c/|ln eta| for a universal
    // constant c; with very mild loss the whole budget goes into one probe.
    println!("\nregime boundary eta0 = {:.15}", eta_zero());
    println!("interior coefficient c = {:.15}", interior_chop_coefficient());
    println!("\noptimal chop vs. loss (n = {n})");
    println!("  {:>6}  {:>12}  {:>10}  {:>14}", "eta", "regime", "k_opt", "delta_phi");
    for &e in &[0.1, 0.5, 0.9, 0.999] {
        let opt = chop_optimal(n as f64, e)?;
        let regime = match opt.regime {
            ChopRegimeKind::KEqualsOne => "k = 1",
            ChopRegimeKind::Interior => "interior",
            ChopRegimeKind::KEqualsN => "k = n",
        };
        println!(
            "  {:>6}  {:>12}  {:>10.4}  {:>14.6e}",
            e, regime, opt.k_opt, opt.delta_phi
        );
    }

    // --- 4. Integer probe sizes -------------------------------------------
    // Real experiments chop into whole photons; the integer restriction
    // costs almost nothing because the objective is flat near the optimum.
    let (k_int, delta_int) = chop_optimal_integer(n as f64, eta)?;
    let relaxed = chop_optimal(n as f64, eta)?;
    println!("\ninteger chop at eta = {eta}: k = {k_int}, delta_phi = {delta_int:.9e}");
    println!(
        "relaxed  chop at eta = {eta}: k = {:.4}, delta_phi = {:.9e}",
        relaxed.k_opt, relaxed.delta_phi
    );
    println!(
        "integer penalty: {:+.3}%",
        100.0 * (delta_int / relaxed.delta_phi - 1.0)
    );
    Ok(())
}
