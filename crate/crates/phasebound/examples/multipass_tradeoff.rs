//! Multiple passes through the sample: phase amplification against
//! compounded loss.
//!
//! Sending the probe through the sample `k` times multiplies the acquired
//! phase by `k` but drops the transmission to `eta^k`. When passes are free
//! of charge (the photon budget is what's scarce), there is a sweet spot:
//!
//!   1. classical light: uncertainty vs. pass count and the closed-form
//!      optimum `k = 2(1 + xi)/|ln eta|`,
//!   2. charging passes against the budget instead collapses multi-pass
//!      onto the chopping bound,
//!   3. quantum probes with free passes: integer pass scan and the
//!      real-valued relaxation,
//!   4. the stretched-state identity: a `k`-pass two-component probe is
//!      exactly a single-pass probe with `k`-fold photon numbers.
//!
//! Run with:
//!
//! ```bash
//! cargo run --example multipass_tradeoff
//! ```

use phasebound::bounds::{
    chop_optimal, multipass_as_resource, multipass_optimal, multipass_optimal_integer,
    multipass_uncertainty,
};
use phasebound::error::Result;
use phasebound::model::WeightVector;
use phasebound::quantum::{
    optimize_multipass, quantum_multipass_uncertainty, quantum_uncertainty, relaxed_pass_optimum,
    stretch_weights, DEFAULT_WEIGHT_TOL,
};

fn main() -> Result<()> {
    let eta = 0.25;
    let nbar = 100.0;

    // --- 1. Classical light, passes free of charge -------------------------
    println!("classical multi-pass at eta = {eta}, nbar = {nbar}");
    println!("  {:>4}  {:>14}", "k", "delta_phi");
    for &k in &[1.0, 2.0, 3.0, 5.0, 8.0] {
        println!("  {:>4}  {:>14.6e}", k, multipass_uncertainty(nbar, k, eta)?);
    }
    let free = multipass_optimal(nbar, eta)?;
    let (k_int, delta_int) = multipass_optimal_integer(nbar, eta)?;
    println!("  optimum: k = {:.4} (xi = {:.6}), delta_phi = {:.6e}", free.k_opt, free.xi, free.delta_phi);
    println!("  best integer pass count: k = {k_int}, delta_phi = {delta_int:.6e}");

    // --- 2. Passes charged against the budget ------------------------------
    // If a k-pass photon counts as k photons spent, multi-passing is just a
    // relabeling of chopping, and the two bounds coincide exactly.
    let charged = multipass_as_resource(nbar, eta)?;
    let chop = chop_optimal(nbar, eta)?;
    println!("\npasses charged against the budget");
    println!("  multi-pass: k = {:.6}, delta_phi = {:.9e}", charged.k_opt, charged.delta_phi);
    println!("  chopping:   k = {:.6}, delta_phi = {:.9e}", chop.k_opt, chop.delta_phi);
    assert_eq!(charged.delta_phi.to_bits(), chop.delta_phi.to_bits());

    // --- 3. Quantum probes with free passes --------------------------------
    // Optimizing the weights at each effective transmission eta^k and
    // dividing by k finds the best integer pass count; the real-valued
    // relaxation shows the integer restriction costs little.
    let n = 4u64;
    let best = optimize_multipass(n, eta, None, DEFAULT_WEIGHT_TOL)?;
    println!("\nquantum multi-pass, n = {n} photons at eta = {eta}");
    println!("  best integer: k = {}, delta_phi = {:.12}", best.k, best.delta_phi);
    let (k_real, delta_real) = relaxed_pass_optimum(n, eta, DEFAULT_WEIGHT_TOL)?;
    println!("  relaxed:      k = {k_real:.6}, delta_phi = {delta_real:.12}");
    println!(
        "  integer penalty: {:+.4}%",
        100.0 * (best.delta_phi / delta_real - 1.0)
    );

    // --- 4. Stretching instead of re-passing --------------------------------
    // A two-component probe gains nothing from physically looping the
    // sample: re-indexing its photon numbers s -> k*s reproduces the k-pass
    // uncertainty in a single pass, photon budget permitting.
    let k = 3u64;
    let two_point = WeightVector::two_point(n as usize, 0.5)?;
    let looped = quantum_multipass_uncertainty(&two_point, eta, k)?;
    let stretched = quantum_uncertainty(&stretch_weights(&two_point, k)?, eta)?;
    println!("\nstretched-state identity (n = {n}, k = {k}, equal two-point weights)");
    println!("  k passes:       delta_phi = {looped:.15}");
    println!("  stretched once: delta_phi = {stretched:.15}");
    println!("  |diff|          = {:.3e}", (looped - stretched).abs());
    Ok(())
}
