//! Precision limits for optical phase estimation under photon loss.
//!
//! Measuring a phase through an absorbing sample — a stained cell, a fiber
//! tap, a dispersive gas — pits two resources against each other: photons
//! improve precision, but every extra photon through the sample is extra
//! damage or extra loss. This crate computes how well different probing
//! strategies can possibly do at a given photon budget `n` and sample
//! transmission `η`, from ordinary laser light through numerically
//! optimized entangled probes, and validates the bounds by simulation.
//!
//! # Quick start
//!
//! ```
//! use phasebound::bounds::chop_optimal;
//! use phasebound::classical::sil_uncertainty;
//! use phasebound::quantum::{optimize_weights, DEFAULT_WEIGHT_TOL};
//!
//! let eta = 0.6; // sample power transmission
//!
//! // Classical light with the loss-optimal splitter: the standard
//! // interferometric limit for a budget of 100 photons.
//! let classical = sil_uncertainty(eta, 100.0);
//!
//! // The same budget chopped into repeated smaller superposition probes,
//! // chop size optimized.
//! let chopped = chop_optimal(100.0, eta)?.delta_phi;
//! assert!(chopped < classical);
//!
//! // The best 10-photon probe state, found by maximizing the information
//! // functional over photon-number weights.
//! let probe = optimize_weights(10, eta, DEFAULT_WEIGHT_TOL)?;
//! assert!(probe.delta_phi < sil_uncertainty(eta, 10.0));
//! # Ok::<(), phasebound::error::Error>(())
//! ```
//!
//! # Modules
//!
//! * [`classical`] — the lossy Mach–Zehnder with coherent light: detector
//!   means, fringe visibility, Fisher information (closed form and summed
//!   over click counts), and the optimal splitter transmission.
//! * [`bounds`] — closed-form limits: Heisenberg, lossy two-component
//!   probes, resource chopping with its three loss regimes, and classical
//!   multi-pass with passes charged or free.
//! * [`quantum`] — the information functional of a probe's photon-number
//!   weights, its maximization over the simplex, and integer pass-count
//!   optimization for multi-pass probes.
//! * [`montecarlo`] — simulated click statistics, per-trial maximum
//!   likelihood, and RMSE-versus-Cramér–Rao efficiency reports.
//! * [`report`] — strategy comparison tables and phase scans, rendered to
//!   CSV or JSON with reproducible formatting.
//! * [`verify`] — named cross-checks computing every load-bearing quantity
//!   by two independent routes.
//! * [`model`], [`poisson`], [`numeric`], [`error`] — shared parameter
//!   types, Poisson sampling and log-pmf, simplex projection and root
//!   finding, and the crate-wide error enum.
//!
//! # Examples
//!
//! Each major capability has a runnable walkthrough under `examples/`:
//!
//! * **`classical_fisher`** — fringes, Fisher information, and the splitter
//!   trade-off for classical light.
//! * **`strategy_bounds`** — the closed-form bounds and the chopping
//!   regimes.
//! * **`quantum_optimum`** — optimizing probe weights; profile migration
//!   with loss.
//! * **`multipass_tradeoff`** — phase amplification vs. compounded loss;
//!   the stretched-state identity.
//! * **`crb_simulation`** — Monte Carlo efficiency of the maximum-likelihood
//!   estimator against the Cramér–Rao bound.
//! * **`comparison_curves`** — building and rendering the comparison
//!   tables.
//! * **`consistency_checks`** — running the built-in verification suite.
//!
//! ```bash
//! cargo run --release --example quantum_optimum
//! ```
//!
//! # Command line
//!
//! The thin `phasebound` binary exposes the same machinery as subcommands:
//! `bound` (closed-form limits), `optimize` (probe-weight optimization),
//! `curve` (comparison tables to CSV/JSON), `simulate` (Monte Carlo
//! efficiency), and `verify` (the consistency suite). Exit codes: `0`
//! success, `1` invalid parameters, `2` numerical failure, `3` I/O error.

pub mod bounds;
pub mod classical;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod numeric;
pub mod poisson;
pub mod quantum;
pub mod report;
pub mod verify;
