//! One pass/fail line per acceptance criterion, at the pinned tolerances and budgets.
//! Runs without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use exzero_core::suite::{run_all, SuiteConfig};

fn main() -> ExitCode {
    let results = run_all(&SuiteConfig::default());
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria PASS", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
