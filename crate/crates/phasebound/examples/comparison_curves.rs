//! Building publication-style data tables: strategy comparison curves and
//! phase scans, rendered to CSV or JSON.
//!
//! The report module assembles per-strategy uncertainty curves into tables
//! with reproducible formatting — the same machinery behind the `curve`
//! subcommand of the CLI. This example:
//!
//!   1. builds a small comparison table (closed forms + optimized probes),
//!   2. prints it as CSV,
//!   3. scans uncertainty vs. phase for the two splitter strategies,
//!   4. shows the JSON rendering round-trips through serde.
//!
//! Run with:
//!
//! ```bash
//! cargo run --release --example comparison_curves
//! ```

use phasebound::error::Result;
use phasebound::model::StrategyTag;
use phasebound::quantum::DEFAULT_WEIGHT_TOL;
use phasebound::report::{
    phase_scan_curve, render_csv, render_json, strategy_comparison_curve, CurveTable,
};

fn main() -> Result<()> {
    let eta = 0.4;

    // --- 1 + 2. Strategy comparison table ----------------------------------
    // A Fibonacci-ish resource grid keeps the output small while spanning
    // two decades; the numerically optimized strategies (Q, QMP) are capped
    // at n = 8 to keep this example quick.
    let n_values: Vec<u64> = vec![1, 2, 3, 5, 8, 13, 21, 55, 100];
    let strategies = [
        StrategyTag::Sil,
        StrategyTag::Hl,
        StrategyTag::Chop,
        StrategyTag::MpFree,
        StrategyTag::Quantum,
        StrategyTag::QuantumMultipass,
    ];
    let table = strategy_comparison_curve(eta, &n_values, &strategies, 8, DEFAULT_WEIGHT_TOL)?;
    println!("# strategy comparison at eta = {eta}");
    print!("{}", render_csv(&table));

    // --- 3. Phase scan -------------------------------------------------------
    // Uncertainty vs. operating phase for the information-optimal and the
    // full-visibility splitter. The optimal splitter diverges on fringe
    // extrema (no signal slope there); max visibility stays finite.
    let grid: Vec<f64> = (1..8)
        .map(|i| i as f64 * std::f64::consts::PI / 8.0)
        .collect();
    let scan = phase_scan_curve(0.6, 1000.0, &grid)?;
    println!("\n# phase scan at eta = 0.6, nbar = 1000");
    print!("{}", render_csv(&scan));

    // --- 4. JSON round-trip ----------------------------------------------------
    // The JSON rendering carries the full metadata block and parses back to
    // an identical table, so downstream tooling can consume either format.
    let json = render_json(&table)?;
    let parsed: CurveTable = serde_json::from_str(&json)
        .expect("the crate's own JSON rendering must parse back");
    println!("\nJSON rendering: {} bytes, round-trips = {}", json.len(), parsed == table);
    Ok(())
}
