//! Running the built-in consistency suite from library code.
//!
//! Every load-bearing quantity in this crate is computed by at least two
//! independent routes (closed form vs. numeric sum, optimizer vs. direct
//! evaluation, and so on). The verify module packages those cross-checks as
//! named, tolerance-gated checks — the same suite behind the `verify`
//! subcommand of the CLI. This example runs the fast variant and prints a
//! report line per check.
//!
//! Run with:
//!
//! ```bash
//! cargo run --release --example consistency_checks
//! ```

use phasebound::verify::{all_passed, run};

fn main() {
    let checks = run(true);
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for check in &checks {
        let status = if check.passed { "ok " } else { "FAIL" };
        println!("{status}  {:<width$}  {}", check.name, check.detail);
    }
    if all_passed(&checks) {
        println!("\nall {} checks passed", checks.len());
    } else {
        println!("\nsome checks FAILED");
        std::process::exit(1);
    }
}
