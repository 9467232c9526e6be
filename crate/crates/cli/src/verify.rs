//! The `verify` subcommand: run the invariant suites and summarize.

use catzero::suites;

use crate::{install_pool, CliError, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

pub fn run(args: &crate::VerifyArgs) -> Result<i32, CliError> {
    let reports = install_pool(args.workers, || suites::run(&args.suite, args.seed))
        .map_err(|e| CliError {
            code: EXIT_USAGE,
            message: e.to_string(),
        })?;
    let mut all_ok = true;
    for report in &reports {
        let total = report.passed + report.failed;
        println!(
            "{}: {}/{} pass{}",
            report.name,
            report.passed,
            total,
            if report.all_passed() { "" } else { "  FAIL" }
        );
        for failure in &report.failures {
            eprintln!("  {failure}");
        }
        all_ok &= report.all_passed();
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}
