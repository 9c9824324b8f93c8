//! Runs the nine acceptance criteria and prints one line per criterion.
//! `ACCEPTANCE_SEED` overrides the default seed of 42.

use std::process::ExitCode;

use sacenter_core::verify::{run_all, Outcome};

fn main() -> ExitCode {
    let seed = std::env::var("ACCEPTANCE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    println!("acceptance suite, seed {seed}");
    let reports = run_all(seed);
    for r in &reports {
        println!("{}", r.line());
    }
    let failed: Vec<u8> = reports
        .iter()
        .filter(|r| r.outcome != Outcome::Pass)
        .map(|r| r.id)
        .collect();
    let total: f64 = reports.iter().map(|r| r.seconds).sum();
    if failed.is_empty() {
        println!("all {} criteria passed in {total:.1} s", reports.len());
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
