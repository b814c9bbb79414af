//! Command-line front end: closed-form bounds, probe optimization, curve
//! tables, Monte-Carlo validation, and the consistency suite, one verb
//! each.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 computation or
//! verification failure, 3 I/O failure. All reports are JSON on standard
//! output (curve tables also write CSV); given identical arguments —
//! seeds included — output bytes are identical run to run.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use phasebound::bounds::{
    chop_optimal, chop_optimal_integer, chop_uncertainty, heisenberg_limit, multipass_optimal,
    multipass_optimal_integer, multipass_uncertainty, noon_uncertainty, ChopRegimeKind,
};
use phasebound::classical::{maxvis_uncertainty, optimal_transmission, sil_uncertainty};
use phasebound::error::{Error, Result};
use phasebound::model::InterferometerParams;
use phasebound::montecarlo::rmse_vs_crb;
use phasebound::quantum::{
    optimize_multipass, optimize_weights, relaxed_pass_optimum, QuantumOptimum,
    DEFAULT_WEIGHT_TOL,
};
use phasebound::report::{
    default_n_values, default_phase_grid, phase_scan_curve, strategy_comparison_curve,
    OutputFormat, DEFAULT_QUANTUM_CAP,
};
use phasebound::verify;

#[derive(Parser)]
#[command(
    name = "phasebound",
    version,
    about = "Precision limits for optical phase estimation under photon loss"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one closed-form uncertainty bound.
    Bound {
        /// Which bound to evaluate.
        #[arg(value_enum)]
        strategy: BoundKind,
        /// Transmission of the lossy arm, in (0, 1].
        #[arg(long)]
        eta: f64,
        /// Resource count (photon budget; must be a positive integer for
        /// `hl` and `noon`).
        #[arg(long)]
        n: f64,
        /// Evaluate at this probe size / pass count instead of the
        /// optimal one (`chop` and `mp` only).
        #[arg(long)]
        k: Option<f64>,
        /// Restrict the optimal count to integers (`chop` and `mp` only).
        #[arg(long)]
        integer_k: bool,
    },
    /// Numerically optimize a quantum probe's photon-number weights.
    Optimize {
        /// Probe family: single-pass, or free-pass multi-pass.
        #[arg(value_enum)]
        strategy: OptimizeKind,
        /// Transmission of the lossy arm, in (0, 1].
        #[arg(long)]
        eta: f64,
        /// Photon number of the probe.
        #[arg(long)]
        n: u64,
        /// Cap on the pass scan (`quantum-mp` only).
        #[arg(long)]
        kmax: Option<u64>,
        /// Projected-gradient tolerance of the solver.
        #[arg(long, default_value_t = DEFAULT_WEIGHT_TOL)]
        tol: f64,
        /// Also report the relaxed real-valued pass optimum as a
        /// diagnostic (`quantum-mp` only).
        #[arg(long)]
        real_k: bool,
    },
    /// Emit a curve table: phase scan (fig2) or strategy comparison (fig3).
    Curve {
        /// Which curve family to produce.
        #[arg(value_enum)]
        figure: Figure,
        /// Transmission of the lossy arm; defaults to 0.1 for fig2 and
        /// 0.6 for fig3.
        #[arg(long)]
        eta: Option<f64>,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Photon budget per shot (fig2 only).
        #[arg(long, default_value_t = 100.0)]
        nbar: f64,
        /// Photon-number cap for the optimized quantum strategies
        /// (fig3 only).
        #[arg(long, default_value_t = DEFAULT_QUANTUM_CAP)]
        quantum_cap: u64,
    },
    /// Simulate trials and compare the estimator spread to its bound.
    Simulate {
        /// Transmission of the lossy arm, in (0, 1].
        #[arg(long)]
        eta: f64,
        /// Photon budget per shot.
        #[arg(long)]
        nbar: f64,
        /// True phase, radians.
        #[arg(long)]
        phi: f64,
        /// Number of passes through the lossy arm.
        #[arg(long)]
        passes: u64,
        /// Number of independent trials.
        #[arg(long)]
        trials: u64,
        /// Seed for the reproducible trial substreams.
        #[arg(long)]
        seed: u64,
        /// Splitter transmission; defaults to the loss-optimal choice for
        /// the compounded transmission.
        #[arg(long)]
        transmission: Option<f64>,
    },
    /// Run the cross-route consistency suite.
    Verify {
        /// Trim ranges for a sub-second run.
        #[arg(long)]
        fast: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    /// Classical light, loss-optimal splitter.
    Sil,
    /// Classical light, full-visibility splitter.
    Maxvis,
    /// Heisenberg limit 1/n.
    Hl,
    /// Two-component superposition probe under loss.
    Noon,
    /// Budget chopped into repeated smaller probes.
    Chop,
    /// Classical multi-pass, passes free of charge.
    Mp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimizeKind {
    /// Single-pass probe.
    Quantum,
    /// Probe plus integer pass count, passes free of charge.
    #[value(name = "quantum-mp")]
    QuantumMp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Figure {
    /// Uncertainty and mean clicks across the phase at fixed loss.
    Fig2,
    /// Uncertainty against resource count for every strategy.
    Fig3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// One evaluated bound, echoed with the inputs that produced it.
#[derive(Serialize)]
struct BoundReport {
    strategy: &'static str,
    eta: f64,
    n: f64,
    k: f64,
    delta_phi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    regime: Option<&'static str>,
}

/// Optimization result, with the optional relaxed-pass diagnostic.
#[derive(Serialize)]
struct OptimizeReport {
    optimum: QuantumOptimum,
    #[serde(skip_serializing_if = "Option::is_none")]
    relaxed_pass: Option<RelaxedPass>,
}

#[derive(Serialize)]
struct RelaxedPass {
    k: f64,
    delta_phi: f64,
}

/// Simulation outcome, echoing the exact configuration for reproduction.
#[derive(Serialize)]
struct SimulateReport {
    params: InterferometerParams,
    passes: u64,
    seed: u64,
    report: phasebound::montecarlo::CrbReport,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes; everything else a
            // clap parser rejects is a usage error.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::InvalidParameter { .. } | Error::UnboundedImprovement => 1,
                Error::RootBracket { .. }
                | Error::NonConvergence { .. }
                | Error::Inconsistency { .. } => 2,
                Error::Io(_) | Error::Json(_) => 3,
            })
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Bound {
            strategy,
            eta,
            n,
            k,
            integer_k,
        } => run_bound(strategy, eta, n, k, integer_k),
        Command::Optimize {
            strategy,
            eta,
            n,
            kmax,
            tol,
            real_k,
        } => run_optimize(strategy, eta, n, kmax, tol, real_k),
        Command::Curve {
            figure,
            eta,
            out,
            format,
            nbar,
            quantum_cap,
        } => run_curve(figure, eta, out.as_deref(), format, nbar, quantum_cap),
        Command::Simulate {
            eta,
            nbar,
            phi,
            passes,
            trials,
            seed,
            transmission,
        } => run_simulate(eta, nbar, phi, passes, trials, seed, transmission),
        Command::Verify { fast } => Ok(run_verify(fast)),
    }
}

/// Gate shared by the closed forms that assert their domain instead of
/// returning errors.
fn require_eta(eta: f64) -> Result<()> {
    if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            message: "must lie in (0, 1]",
            value: eta,
        });
    }
    Ok(())
}

fn require_positive(n: f64) -> Result<()> {
    if !n.is_finite() || n <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "n",
            message: "must be strictly positive",
            value: n,
        });
    }
    Ok(())
}

/// `n` reinterpreted as a count for the bounds defined only on integers.
fn require_count(n: f64) -> Result<u64> {
    require_positive(n)?;
    if n.fract() != 0.0 || n > 1e15 {
        return Err(Error::InvalidParameter {
            name: "n",
            message: "must be a positive integer for this strategy",
            value: n,
        });
    }
    Ok(n as u64)
}

fn run_bound(
    strategy: BoundKind,
    eta: f64,
    n: f64,
    k: Option<f64>,
    integer_k: bool,
) -> Result<ExitCode> {
    require_eta(eta)?;
    require_positive(n)?;
    let takes_k = matches!(strategy, BoundKind::Chop | BoundKind::Mp);
    if (k.is_some() || integer_k) && !takes_k {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "only chop and mp take a probe-size/pass-count option",
            value: k.unwrap_or(f64::NAN),
        });
    }
    if k.is_some() && integer_k {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "give an explicit count or ask for the integer optimum, not both",
            value: k.unwrap_or(f64::NAN),
        });
    }

    let mut regime = None;
    let (name, k_used, delta_phi) = match strategy {
        BoundKind::Sil => ("SIL", 1.0, sil_uncertainty(eta, n)),
        BoundKind::Maxvis => ("MAXVIS", 1.0, maxvis_uncertainty(eta, n)),
        BoundKind::Hl => ("HL", 1.0, heisenberg_limit(require_count(n)?)),
        BoundKind::Noon => ("NOON", 1.0, noon_uncertainty(require_count(n)?, eta)),
        BoundKind::Chop => match k {
            Some(k) => ("CHOP", k, chop_uncertainty(n, k, eta)?),
            None if integer_k => {
                let (k, delta_phi) = chop_optimal_integer(n, eta)?;
                ("CHOP", k as f64, delta_phi)
            }
            None => {
                let optimum = chop_optimal(n, eta)?;
                regime = Some(regime_name(optimum.regime));
                ("CHOP", optimum.k_opt, optimum.delta_phi)
            }
        },
        BoundKind::Mp => match k {
            Some(k) => ("MP-free", k, multipass_uncertainty(n, k, eta)?),
            None if integer_k => {
                let (k, delta_phi) = multipass_optimal_integer(n, eta)?;
                ("MP-free", k as f64, delta_phi)
            }
            None => {
                let optimum = multipass_optimal(n, eta)?;
                ("MP-free", optimum.k_opt, optimum.delta_phi)
            }
        },
    };

    print_json(&BoundReport {
        strategy: name,
        eta,
        n,
        k: k_used,
        delta_phi,
        regime,
    })?;
    Ok(ExitCode::SUCCESS)
}

fn regime_name(kind: ChopRegimeKind) -> &'static str {
    match kind {
        ChopRegimeKind::KEqualsOne => "single-photon",
        ChopRegimeKind::Interior => "interior",
        ChopRegimeKind::KEqualsN => "undivided",
    }
}

fn run_optimize(
    strategy: OptimizeKind,
    eta: f64,
    n: u64,
    kmax: Option<u64>,
    tol: f64,
    real_k: bool,
) -> Result<ExitCode> {
    if (kmax.is_some() || real_k) && strategy != OptimizeKind::QuantumMp {
        return Err(Error::InvalidParameter {
            name: "kmax",
            message: "pass-count options apply to quantum-mp only",
            value: kmax.map_or(f64::NAN, |k| k as f64),
        });
    }
    let report = match strategy {
        OptimizeKind::Quantum => OptimizeReport {
            optimum: optimize_weights(n, eta, tol)?,
            relaxed_pass: None,
        },
        OptimizeKind::QuantumMp => {
            let optimum = optimize_multipass(n, eta, kmax, tol)?;
            let relaxed_pass = if real_k {
                let (k, delta_phi) = relaxed_pass_optimum(n, eta, tol)?;
                Some(RelaxedPass { k, delta_phi })
            } else {
                None
            };
            OptimizeReport {
                optimum,
                relaxed_pass,
            }
        }
    };
    print_json(&report)?;
    Ok(ExitCode::SUCCESS)
}

fn run_curve(
    figure: Figure,
    eta: Option<f64>,
    out: Option<&std::path::Path>,
    format: Format,
    nbar: f64,
    quantum_cap: u64,
) -> Result<ExitCode> {
    let format = match format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    let table = match figure {
        Figure::Fig2 => phase_scan_curve(eta.unwrap_or(0.1), nbar, &default_phase_grid())?,
        Figure::Fig3 => strategy_comparison_curve(
            eta.unwrap_or(0.6),
            &default_n_values(),
            &phasebound::report::default_comparison_strategies(),
            quantum_cap,
            DEFAULT_WEIGHT_TOL,
        )?,
    };
    phasebound::report::emit(&table, format, out)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(
    eta: f64,
    nbar: f64,
    phi: f64,
    passes: u64,
    trials: u64,
    seed: u64,
    transmission: Option<f64>,
) -> Result<ExitCode> {
    require_eta(eta)?;
    if passes == 0 {
        return Err(Error::InvalidParameter {
            name: "passes",
            message: "pass count must be at least 1",
            value: 0.0,
        });
    }
    let compounded = (passes as f64 * eta.ln()).exp();
    let t = transmission.unwrap_or_else(|| optimal_transmission(compounded));
    let params = InterferometerParams::new(t, eta, phi, nbar)?;
    let report = rmse_vs_crb(params, passes, trials, seed)?;
    print_json(&SimulateReport {
        params,
        passes,
        seed,
        report,
    })?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify(fast: bool) -> ExitCode {
    let checks = verify::run(fast);
    let passed = checks.iter().filter(|c| c.passed).count();
    for check in &checks {
        let status = if check.passed { "ok  " } else { "FAIL" };
        println!("{status} {}: {}", check.name, check.detail);
    }
    println!("{passed}/{} checks passed", checks.len());
    if verify::all_passed(&checks) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut rendered = serde_json::to_string_pretty(value)?;
    rendered.push('\n');
    print!("{rendered}");
    Ok(())
}
