//! `start:step:stop` radius grids, inclusive of both ends within half a step.

use crate::CliError;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "grid '{spec}' is not of the form start:step:stop"
        )));
    }
    let parse = |s: &str| -> Result<f64, CliError> {
        s.parse::<f64>()
            .map_err(|_| CliError::usage(format!("grid component '{s}' is not a number")))
    };
    let start = parse(parts[0])?;
    let step = parse(parts[1])?;
    let stop = parse(parts[2])?;
    if !step.is_finite() || step <= 0.0 {
        return Err(CliError::usage("grid step must be positive"));
    }
    if stop < start {
        return Err(CliError::usage("grid stop must not precede start"));
    }
    let count = ((stop - start) / step + 0.5).floor() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}
