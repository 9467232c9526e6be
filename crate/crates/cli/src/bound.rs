//! The `bound` subcommand: closed-form tail-bound tables.

use catzero::bounds::{hadamard_tail_bound, rtree_tail_bound, BoundQuery};

use crate::{grid::parse_grid, BoundArgs, BoundSpace, CliError, EXIT_OK};

pub fn run(args: &BoundArgs) -> Result<i32, CliError> {
    if args.space == BoundSpace::Rtree && args.m.is_some() {
        return Err(CliError::usage(
            "--m only applies to --space hadamard",
        ));
    }
    if args.space == BoundSpace::Hadamard && args.m.is_none() {
        return Err(CliError::usage("--space hadamard requires --m"));
    }
    if !args.diam.is_finite() || args.diam <= 0.0 {
        return Err(CliError::usage("--diam must be positive"));
    }
    if args.n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let radii = match (&args.r, &args.r_grid) {
        (Some(r), None) => vec![*r],
        (None, Some(spec)) => parse_grid(spec)?,
        (None, None) => return Err(CliError::usage("one of --r or --r-grid is required")),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    if radii.iter().any(|r| *r < 0.0) {
        return Err(CliError::usage("radii must be nonnegative"));
    }
    let rows: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let q = BoundQuery {
                n: args.n,
                r,
                diameter: args.diam,
                dim: args.m.unwrap_or(1),
            };
            let value = match args.space {
                BoundSpace::Rtree => rtree_tail_bound(&q),
                BoundSpace::Hadamard => hadamard_tail_bound(&q).value,
            };
            (r, value)
        })
        .collect();
    if args.json {
        let items: Vec<serde_json::Value> = rows
            .iter()
            .map(|(r, b)| serde_json::json!({ "r": r, "bound": b }))
            .collect();
        println!("{}", serde_json::to_string_pretty(&items).expect("serializable"));
    } else {
        println!("{:<24} bound", "r");
        for (r, b) in &rows {
            println!("{r:<24} {b}");
        }
    }
    Ok(EXIT_OK)
}
