//! Curve tables and their serialization: the machine-readable data behind
//! the two standard comparison plots.
//!
//! * The **strategy comparison** table tracks phase uncertainty against
//!   the total resource count `n` for every supported strategy — classical
//!   baselines, chopped probes, multi-pass variants, and the numerically
//!   optimized quantum probes — plus the `1/n` and `1/√n` reference lines.
//! * The **phase scan** table sweeps the operating phase at fixed loss and
//!   photon budget, comparing the loss-optimal splitter against the
//!   full-visibility one, with the mean click counts of both detectors
//!   carried along.
//!
//! Resource accounting matches the comparison plot's convention: for the
//! classical baseline, chopping, and the single-pass quantum optimum the
//! abscissa is the total photon consumption (probe size × repetitions);
//! for the free-pass strategies (`MP-free`, `QMP`) it counts photons only,
//! with sample passes free of charge. The closed forms and optimizers
//! already charge resources accordingly, so each strategy is simply
//! evaluated at `n`.
//!
//! Output is deterministic to the byte: rows are sorted by (strategy tag,
//! abscissa), numbers are printed with twelve significant digits, and the
//! only environmental input is the crate version recorded in the metadata.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    chop_optimal, eta_zero, heisenberg_limit, multipass_optimal, multipass_uncertainty,
    noon_uncertainty, xi_constant,
};
use crate::classical::{
    maxvis_uncertainty, output_means, sil_uncertainty, uncertainty_vs_phase, PhaseStrategy,
};
use crate::error::{Error, Result};
use crate::model::{InterferometerParams, StrategyPoint, StrategyTag};
use crate::quantum::{optimize_multipass, optimize_weights};

/// Largest photon number the numerically optimized quantum strategies are
/// evaluated at by default; beyond this the per-point optimization cost
/// outgrows a desk-scale run.
pub const DEFAULT_QUANTUM_CAP: u64 = 30;

/// Output formats a [`CurveTable`] can be rendered to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    /// Flat `strategy,n,k,delta_phi,aux` rows.
    Csv,
    /// One `{metadata, rows}` object, pretty-printed.
    Json,
}

/// Provenance block attached to every curve table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    /// Which curve family the table belongs to.
    pub curve: String,
    /// Transmission of the lossy sample arm.
    pub eta: f64,
    /// Photon budget per shot; phase scans only.
    pub nbar: Option<f64>,
    /// Meaning of the rows' `n` column: `"n"` (resources) or `"phi"`.
    pub x_axis: String,
    /// Cap on the photon number of numerically optimized strategies;
    /// comparison tables only.
    pub quantum_cap: Option<u64>,
    /// Loss boundary below which chopping stops paying (root of
    /// `1 + √η + ln η`), recorded for reproducibility.
    pub eta_zero: f64,
    /// Survival constant of the free-pass optimum (root of `ξe^{ξ+1} = 1`).
    pub xi: f64,
    /// Crate version that produced the table.
    pub version: String,
    /// Strategies present, in their row order.
    pub strategies: Vec<StrategyTag>,
}

/// A complete curve: metadata plus rows sorted by (strategy tag, abscissa)
/// with no duplicate (strategy, abscissa) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    /// Provenance and axis description.
    pub metadata: CurveMetadata,
    /// The curve points.
    pub rows: Vec<StrategyPoint>,
}

/// The strategy set of the full comparison plot, in its canonical order.
pub fn default_comparison_strategies() -> Vec<StrategyTag> {
    vec![
        StrategyTag::Sil,
        StrategyTag::Hl,
        StrategyTag::ShotNoise,
        StrategyTag::Noon,
        StrategyTag::Chop,
        StrategyTag::MpResource,
        StrategyTag::MpFree,
        StrategyTag::Quantum,
        StrategyTag::QuantumMultipass,
    ]
}

/// Default abscissa for comparison curves: every integer resource count
/// from 1 to 1000. Closed-form strategies cover the whole range; the
/// optimized quantum strategies stop at the quantum cap.
pub fn default_n_values() -> Vec<u64> {
    (1..=1000).collect()
}

/// Default phase grid for scans: one full turn in hundredths,
/// `φ_j = j·2π/100`.
pub fn default_phase_grid() -> Vec<f64> {
    (0..100)
        .map(|j| f64::from(j) * std::f64::consts::TAU / 100.0)
        .collect()
}

/// Builds the strategy comparison table at loss `eta`.
///
/// One row per requested strategy per resource count, except that the
/// numerically optimized strategies ([`StrategyTag::Quantum`],
/// [`StrategyTag::QuantumMultipass`]) skip counts above `quantum_cap`.
/// `tol` is the projected-gradient tolerance handed to the optimizer.
/// Duplicate entries in `n_values` are collapsed.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] for an empty strategy list, an
/// empty or zero-containing `n_values`, or a zero `quantum_cap`, and
/// propagates domain errors from the per-strategy evaluators (for
/// example, free-pass strategies are unbounded at `eta = 1`).
pub fn strategy_comparison_curve(
    eta: f64,
    n_values: &[u64],
    strategies: &[StrategyTag],
    quantum_cap: u64,
    tol: f64,
) -> Result<CurveTable> {
    if strategies.is_empty() {
        return Err(Error::InvalidParameter {
            name: "strategies",
            message: "at least one strategy tag is required",
            value: 0.0,
        });
    }
    if n_values.is_empty() {
        return Err(Error::InvalidParameter {
            name: "n_values",
            message: "at least one resource count is required",
            value: 0.0,
        });
    }
    if n_values.contains(&0) {
        return Err(Error::InvalidParameter {
            name: "n_values",
            message: "resource counts start at 1",
            value: 0.0,
        });
    }
    if quantum_cap == 0 {
        return Err(Error::InvalidParameter {
            name: "quantum_cap",
            message: "the quantum photon-number cap must be at least 1",
            value: 0.0,
        });
    }

    let mut counts = n_values.to_vec();
    counts.sort_unstable();
    counts.dedup();
    let mut tags = strategies.to_vec();
    tags.sort_unstable_by_key(|t| t.as_str());
    tags.dedup();

    let mut rows = Vec::new();
    for &tag in &tags {
        for &n in &counts {
            if let Some(point) = comparison_point(tag, n, eta, quantum_cap, tol)? {
                rows.push(point);
            }
        }
    }

    Ok(CurveTable {
        metadata: CurveMetadata {
            curve: "strategy-comparison".to_owned(),
            eta,
            nbar: None,
            x_axis: "n".to_owned(),
            quantum_cap: Some(quantum_cap),
            eta_zero: eta_zero(),
            xi: xi_constant(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            strategies: tags,
        },
        rows,
    })
}

/// One comparison point, or `None` when the strategy does not cover `n`
/// (a quantum strategy above its cap).
fn comparison_point(
    tag: StrategyTag,
    n: u64,
    eta: f64,
    quantum_cap: u64,
    tol: f64,
) -> Result<Option<StrategyPoint>> {
    let nf = n as f64;
    let mut aux = BTreeMap::new();
    let (k, delta_phi) = match tag {
        StrategyTag::Sil => {
            validate_eta(eta)?;
            aux.insert(
                "transmission".to_owned(),
                crate::classical::optimal_transmission(eta),
            );
            (1.0, sil_uncertainty(eta, nf))
        }
        StrategyTag::MaxVis => {
            validate_eta(eta)?;
            aux.insert(
                "transmission".to_owned(),
                PhaseStrategy::MaxVisibility.transmission(eta),
            );
            (1.0, maxvis_uncertainty(eta, nf))
        }
        StrategyTag::Hl => (1.0, heisenberg_limit(n)),
        StrategyTag::ShotNoise => (1.0, 1.0 / nf.sqrt()),
        StrategyTag::Noon => (1.0, noon_uncertainty(n, eta)),
        StrategyTag::Chop | StrategyTag::MpResource => {
            let regime = chop_optimal(nf, eta)?;
            (regime.k_opt, regime.delta_phi)
        }
        StrategyTag::MpFree => {
            let optimum = multipass_optimal(nf, eta)?;
            if optimum.k_opt < 1.0 {
                // Deep loss pushes the stationary pass count below one;
                // the best physical choice is then a single pass.
                (1.0, multipass_uncertainty(nf, 1.0, eta)?)
            } else {
                (optimum.k_opt, optimum.delta_phi)
            }
        }
        StrategyTag::Quantum => {
            if n > quantum_cap {
                return Ok(None);
            }
            let optimum = optimize_weights(n, eta, tol)?;
            aux.insert("grad_norm".to_owned(), optimum.report.grad_norm);
            (1.0, optimum.delta_phi)
        }
        StrategyTag::QuantumMultipass => {
            if n > quantum_cap {
                return Ok(None);
            }
            let optimum = optimize_multipass(n, eta, None, tol)?;
            aux.insert("grad_norm".to_owned(), optimum.report.grad_norm);
            (optimum.k as f64, optimum.delta_phi)
        }
    };
    StrategyPoint::new(tag, nf, k, delta_phi, aux).map(Some)
}

/// Range gate shared by the strategies whose closed forms assert their
/// domain instead of returning errors.
fn validate_eta(eta: f64) -> Result<()> {
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1]",
            value: eta,
        });
    }
    Ok(())
}

/// Builds the phase scan table: uncertainty and mean click counts across
/// `phase_grid` for the loss-optimal and full-visibility splitter choices.
///
/// Rows carry the phase in the `n` column (`x_axis = "phi"`); each row's
/// `aux` holds `mean_n1`, `mean_n2`, and the splitter `transmission`.
/// Grid points where the information vanishes (the loss-optimal strategy
/// on a fringe extremum) become saturated rows. Duplicate grid values are
/// collapsed, and the grid is emitted in sorted order.
///
/// # Errors
///
/// Returns [`Error::InvalidParameter`] for an empty or non-finite grid,
/// negative phases, or out-of-range `eta`/`nbar`.
pub fn phase_scan_curve(eta: f64, nbar: f64, phase_grid: &[f64]) -> Result<CurveTable> {
    if phase_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "phase_grid",
            message: "at least one phase is required",
            value: 0.0,
        });
    }
    for &phi in phase_grid {
        if !phi.is_finite() || phi < 0.0 {
            return Err(Error::InvalidParameter {
                name: "phase_grid",
                message: "phases must be finite and non-negative",
                value: phi,
            });
        }
    }
    let mut grid = phase_grid.to_vec();
    grid.sort_unstable_by(f64::total_cmp);
    grid.dedup();

    let pairs = [
        (StrategyTag::MaxVis, PhaseStrategy::MaxVisibility),
        (StrategyTag::Sil, PhaseStrategy::OptimalTransmission),
    ];
    let mut rows = Vec::with_capacity(2 * grid.len());
    for (tag, strategy) in pairs {
        let transmission = strategy.transmission(eta);
        for (phi, delta_phi) in uncertainty_vs_phase(strategy, eta, nbar, &grid)? {
            let means = output_means(InterferometerParams::new(transmission, eta, phi, nbar)?);
            let aux = BTreeMap::from([
                ("mean_n1".to_owned(), means.mean_n1),
                ("mean_n2".to_owned(), means.mean_n2),
                ("transmission".to_owned(), transmission),
            ]);
            rows.push(StrategyPoint::new(tag, phi, 1.0, delta_phi, aux)?);
        }
    }

    Ok(CurveTable {
        metadata: CurveMetadata {
            curve: "phase-scan".to_owned(),
            eta,
            nbar: Some(nbar),
            x_axis: "phi".to_owned(),
            quantum_cap: None,
            eta_zero: eta_zero(),
            xi: xi_constant(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            strategies: pairs.iter().map(|&(tag, _)| tag).collect(),
        },
        rows,
    })
}

/// Prints a number with twelve significant digits; values that are exact
/// integers keep their plain form so counts stay readable.
fn format_number(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.11e}")
    }
}

/// Renders a table as CSV: header `strategy,n,k,delta_phi,aux`, LF line
/// endings, UTF-8, byte-stable for identical inputs. Saturated rows print
/// the literal `inf` in the `delta_phi` column; `aux` is a
/// `key=value;key=value` list in key order, empty when the row has none.
pub fn render_csv(table: &CurveTable) -> String {
    let mut out = String::from("strategy,n,k,delta_phi,aux\n");
    for row in &table.rows {
        let delta = if row.saturated {
            "inf".to_owned()
        } else {
            // `new` guarantees a finite value whenever the flag is clear.
            format_number(row.delta_phi.expect("unsaturated rows carry a value"))
        };
        let aux = row
            .aux
            .iter()
            .map(|(key, value)| format!("{key}={}", format_number(*value)))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{delta},{aux}\n",
            row.strategy.as_str(),
            format_number(row.n),
            format_number(row.k),
        ));
    }
    out
}

/// Renders a table as a single pretty-printed JSON object
/// `{metadata, rows}` with a trailing newline. Parsing the output as a
/// [`CurveTable`] reproduces every value exactly; infinite uncertainties
/// appear as `null` next to their raised `saturated` flag.
///
/// # Errors
///
/// Returns [`Error::Json`] when serialization fails.
pub fn render_json(table: &CurveTable) -> Result<String> {
    let mut out = serde_json::to_string_pretty(table)?;
    out.push('\n');
    Ok(out)
}

/// Renders `table` in `format` and writes it to `destination`, or to
/// standard output when no path is given.
///
/// # Errors
///
/// Returns [`Error::Io`] when the destination cannot be written and
/// propagates [`render_json`] failures.
pub fn emit(table: &CurveTable, format: OutputFormat, destination: Option<&Path>) -> Result<()> {
    let rendered = match format {
        OutputFormat::Csv => render_csv(table),
        OutputFormat::Json => render_json(table)?,
    };
    match destination {
        Some(path) => {
            let mut writer = BufWriter::new(File::create(path)?);
            writer.write_all(rendered.as_bytes())?;
            writer.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle.write_all(rendered.as_bytes())?;
            handle.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn rows_for(table: &CurveTable, tag: StrategyTag) -> Vec<&StrategyPoint> {
        table.rows.iter().filter(|r| r.strategy == tag).collect()
    }

    #[test]
    fn reference_rows_are_exact() {
        let table = strategy_comparison_curve(
            0.6,
            &(1..=10).collect::<Vec<_>>(),
            &[StrategyTag::Hl, StrategyTag::ShotNoise],
            DEFAULT_QUANTUM_CAP,
            1e-8,
        )
        .unwrap();
        assert_eq!(table.rows.len(), 20);
        for (i, row) in rows_for(&table, StrategyTag::Hl).iter().enumerate() {
            let n = (i + 1) as f64;
            assert_eq!(row.delta_phi, Some(1.0 / n));
        }
        for (i, row) in rows_for(&table, StrategyTag::ShotNoise).iter().enumerate() {
            let n = (i + 1) as f64;
            assert_eq!(row.delta_phi, Some(1.0 / n.sqrt()));
        }
    }

    #[test]
    fn rows_are_sorted_and_unique() {
        // Duplicates in the request collapse rather than duplicating rows.
        let table = strategy_comparison_curve(
            0.6,
            &[3, 1, 2, 3, 1],
            &[StrategyTag::Chop, StrategyTag::Sil, StrategyTag::Chop],
            DEFAULT_QUANTUM_CAP,
            1e-8,
        )
        .unwrap();
        assert_eq!(table.rows.len(), 6);
        let keys: Vec<(&str, f64)> = table
            .rows
            .iter()
            .map(|r| (r.strategy.as_str(), r.n))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.0.cmp(b.0).then(a.1.total_cmp(&b.1)));
        sorted.dedup();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn quantum_strategies_respect_their_cap_and_the_orderings() {
        let table = strategy_comparison_curve(
            0.6,
            &(1..=6).collect::<Vec<_>>(),
            &[
                StrategyTag::Sil,
                StrategyTag::Chop,
                StrategyTag::Quantum,
                StrategyTag::MpFree,
                StrategyTag::QuantumMultipass,
            ],
            4,
            1e-8,
        )
        .unwrap();
        assert_eq!(rows_for(&table, StrategyTag::Quantum).len(), 4);
        assert_eq!(rows_for(&table, StrategyTag::QuantumMultipass).len(), 4);
        assert_eq!(rows_for(&table, StrategyTag::Sil).len(), 6);

        let value = |tag, n: usize| {
            rows_for(&table, tag)[n - 1]
                .delta_phi
                .expect("finite uncertainty")
        };
        for n in 1..=4 {
            let q = value(StrategyTag::Quantum, n);
            let chop = value(StrategyTag::Chop, n);
            let sil = value(StrategyTag::Sil, n);
            assert!(q <= chop * (1.0 + 1e-9), "n = {n}: {q} vs {chop}");
            assert!(chop <= sil * (1.0 + 1e-12), "n = {n}: {chop} vs {sil}");
            // The integer pass count can land a whisker above the
            // fractional-pass closed form (about 8e-7 relative at n = 1),
            // so the comparison here allows that much headroom.
            let qmp = value(StrategyTag::QuantumMultipass, n);
            let mp = value(StrategyTag::MpFree, n);
            assert!(qmp <= mp * (1.0 + 1e-6), "n = {n}: {qmp} vs {mp}");
        }
    }

    #[test]
    fn phase_scan_reproduces_the_figure_shape() {
        let table = phase_scan_curve(0.1, 100.0, &default_phase_grid()).unwrap();
        let maxvis = rows_for(&table, StrategyTag::MaxVis);
        let sil = rows_for(&table, StrategyTag::Sil);
        assert_eq!(maxvis.len(), 100);
        assert_eq!(sil.len(), 100);

        // Full visibility makes the uncertainty phase-independent.
        let reference = maxvis[0].delta_phi.unwrap();
        for row in &maxvis {
            let value = row.delta_phi.unwrap();
            assert!((value / reference - 1.0).abs() < 1e-9, "{value}");
        }

        // The loss-optimal splitter bottoms out at quadrature (grid points
        // 25 and 75) below the flat curve, and diverges on the extrema.
        let quadrature = sil[25].delta_phi.unwrap();
        assert!((sil[25].phase() - FRAC_PI_2).abs() < 1e-12);
        let minimum = sil
            .iter()
            .filter_map(|r| r.delta_phi)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(quadrature, minimum);
        assert_eq!(sil[75].delta_phi.unwrap(), quadrature);
        assert!(quadrature < reference);
        assert!(sil[0].saturated && sil[0].delta_phi.is_none());

        // Mean click curves ride along for both detectors.
        for row in sil.iter().chain(&maxvis) {
            assert!(row.aux["mean_n1"] >= 0.0);
            assert!(row.aux["mean_n2"] >= 0.0);
            assert!(row.aux["transmission"] > 0.0 && row.aux["transmission"] < 1.0);
        }
    }

    #[test]
    fn csv_rendering_is_byte_stable_with_inf_literals() {
        let grid: Vec<f64> = (0..8).map(|j| f64::from(j) * PI / 4.0).collect();
        let a = phase_scan_curve(0.1, 50.0, &grid).unwrap();
        let b = phase_scan_curve(0.1, 50.0, &grid).unwrap();
        let csv = render_csv(&a);
        assert_eq!(csv, render_csv(&b));
        assert!(csv.starts_with("strategy,n,k,delta_phi,aux\n"));
        // The loss-optimal strategy is blind at the fringe extremum.
        assert!(csv.contains("SIL,0,1,inf,"));
        // Twelve significant digits, key=value aux entries in key order.
        let quadrature_row = csv
            .lines()
            .find(|l| l.starts_with("SIL,1.57079632679e0"))
            .expect("quadrature row present");
        assert!(quadrature_row.contains("mean_n1="));
        assert!(quadrature_row.find("mean_n1").unwrap() < quadrature_row.find("mean_n2").unwrap());
        assert!(quadrature_row.find("mean_n2").unwrap() < quadrature_row.find("transmission").unwrap());
    }

    #[test]
    fn empty_tables_render_as_a_bare_header() {
        let mut table = strategy_comparison_curve(
            0.6,
            &[1],
            &[StrategyTag::Hl],
            DEFAULT_QUANTUM_CAP,
            1e-8,
        )
        .unwrap();
        table.rows.clear();
        assert_eq!(render_csv(&table), "strategy,n,k,delta_phi,aux\n");
    }

    #[test]
    fn json_round_trips_exactly() {
        let table = strategy_comparison_curve(
            0.6,
            &[1, 2, 3],
            &[StrategyTag::Sil, StrategyTag::Noon, StrategyTag::MpFree],
            DEFAULT_QUANTUM_CAP,
            1e-8,
        )
        .unwrap();
        let json = render_json(&table).unwrap();
        assert_eq!(render_json(&table).unwrap(), json);
        let parsed: CurveTable = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, table);

        // Saturated scan rows survive the trip as null plus the flag.
        let scan = phase_scan_curve(0.1, 50.0, &[0.0, FRAC_PI_2]).unwrap();
        let scan_json = render_json(&scan).unwrap();
        let reparsed: CurveTable = serde_json::from_str(&scan_json).unwrap();
        assert_eq!(reparsed, scan);
        assert!(scan_json.contains("\"delta_phi\": null"));
    }

    #[test]
    fn invalid_requests_are_rejected() {
        assert!(strategy_comparison_curve(0.6, &[], &[StrategyTag::Hl], 30, 1e-8).is_err());
        assert!(strategy_comparison_curve(0.6, &[1], &[], 30, 1e-8).is_err());
        assert!(strategy_comparison_curve(0.6, &[0, 1], &[StrategyTag::Hl], 30, 1e-8).is_err());
        assert!(strategy_comparison_curve(0.6, &[1], &[StrategyTag::Hl], 0, 1e-8).is_err());
        assert!(strategy_comparison_curve(1.5, &[1], &[StrategyTag::Sil], 30, 1e-8).is_err());
        // Free-pass strategies have no finite optimum without loss.
        assert!(matches!(
            strategy_comparison_curve(1.0, &[2], &[StrategyTag::MpFree], 30, 1e-8),
            Err(Error::UnboundedImprovement)
        ));
        assert!(phase_scan_curve(0.1, 50.0, &[]).is_err());
        assert!(phase_scan_curve(0.1, 50.0, &[f64::NAN]).is_err());
        assert!(phase_scan_curve(0.1, 50.0, &[-0.5]).is_err());
    }

    #[test]
    fn deep_loss_free_pass_rows_fall_back_to_one_pass() {
        // Below eta ≈ 0.078 the relaxed pass count drops under one; the
        // table then reports the single-pass (classical-limit) value.
        let table = strategy_comparison_curve(
            0.05,
            &[4],
            &[StrategyTag::MpFree],
            DEFAULT_QUANTUM_CAP,
            1e-8,
        )
        .unwrap();
        let row = &table.rows[0];
        assert_eq!(row.k, 1.0);
        // Same formula, different arrangement of the square roots: agree
        // to rounding.
        let fallback = row.delta_phi.unwrap();
        assert!((fallback / sil_uncertainty(0.05, 4.0) - 1.0).abs() < 1e-14);
    }
}
