//! The `simulate` subcommand: run the tail experiment for a measure file,
//! emit CSV/JSON reports plus a manifest, and gate the exit code on the
//! domination check.

use catzero::file::{parse_measure, AnyMeasure};
use catzero::means::BarycenterSolve;
use catzero::measures::FiniteMeasure;
use catzero::montecarlo::{run_tail_experiment, ExperimentConfig, TailReport, TheoryTailBound};

use crate::{grid::parse_grid, install_pool, manifest::RunManifest, CliError, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

pub fn run(args: &crate::SimulateArgs) -> Result<i32, CliError> {
    let bytes = std::fs::read(&args.measure).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("cannot read {}: {e}", args.measure.display()),
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("{} is not UTF-8: {e}", args.measure.display()),
    })?;
    let measure = parse_measure(&text).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("{}: {e}", args.measure.display()),
    })?;
    let r_grid = parse_grid(&args.r_grid)?;

    let report = match measure {
        AnyMeasure::Tree(m) => experiment(*m, args, r_grid)?,
        AnyMeasure::Hyperboloid(m) => experiment(m, args, r_grid)?,
        AnyMeasure::Euclidean(m) => experiment(m, args, r_grid)?,
    };

    std::fs::create_dir_all(&args.out)?;
    let csv_path = args.out.join("report.csv");
    let json_path = args.out.join("report.json");
    let manifest_path = args.out.join("manifest.json");
    std::fs::write(&csv_path, report.to_csv())?;
    let json_text = serde_json::to_string_pretty(&report).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: e.to_string(),
    })?;
    std::fs::write(&json_path, json_text)?;

    let mut manifest = RunManifest::new(
        "simulate",
        args.seed,
        serde_json::json!({
            "measure": args.measure.display().to_string(),
            "n": args.n,
            "trials": args.trials,
            "r_grid": args.r_grid,
            "confidence": args.confidence,
            "space": report.meta.space,
            "diameter": report.meta.diameter,
        }),
    );
    manifest.record_input(&args.measure, &bytes);
    manifest.write(&manifest_path)?;

    println!(
        "space={} n={} trials={} D={}",
        report.meta.space, report.meta.n, report.meta.trials, report.meta.diameter
    );
    println!("wrote {}, {}, {}", csv_path.display(), json_path.display(), manifest_path.display());
    let failures = report.domination_failures();
    if failures.is_empty() {
        println!("domination check passed at all {} radii", report.rows.len());
        Ok(EXIT_OK)
    } else {
        let list = failures
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        eprintln!("bound violated at r = {list}");
        Ok(EXIT_CHECK_FAILED)
    }
}

fn experiment<S>(
    measure: FiniteMeasure<S>,
    args: &crate::SimulateArgs,
    r_grid: Vec<f64>,
) -> Result<TailReport, CliError>
where
    S: BarycenterSolve + TheoryTailBound + Sync,
    S::Point: Send + Sync,
{
    let cfg = ExperimentConfig::new(measure, args.n, args.trials, r_grid, args.seed)?
        .with_confidence(args.confidence)?;
    Ok(install_pool(args.workers, || run_tail_experiment(&cfg))?)
}
