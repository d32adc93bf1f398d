//! Acceptance gate: runs every criterion at full budget and prints one
//! PASS/FAIL line per criterion. Set `DEPREF_ACCEPTANCE_VERBOSE=1` for the
//! individual measurements.

use std::process::ExitCode;
use std::time::Instant;

use depref::verify::{run_suite, Suite, VerifyConfig};

fn main() -> ExitCode {
    let verbose = std::env::var_os("DEPREF_ACCEPTANCE_VERBOSE").is_some();
    let start = Instant::now();
    let reports = match run_suite(Suite::All, &VerifyConfig::default()) {
        Ok(r) => r,
        Err(e) => {
            println!("acceptance suite aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!();
    for report in &reports {
        if verbose {
            print!("{report}");
        } else {
            println!("{}", report.summary_line());
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        reports.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
