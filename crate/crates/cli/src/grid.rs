//! Sweep specifications: comma lists whose items are single values or
//! inclusive `start:stop:step` ranges, e.g. `2,5,10` or `-0.9:0.9:0.3`.

use crate::error::{CliError, CliResult};

const MAX_POINTS: usize = 1_000_000;

pub fn parse_reals(what: &'static str, spec: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in items(what, spec)? {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(real(what, v)?),
            [a, b, s] => {
                let (start, stop, step) = (real(what, a)?, real(what, b)?, real(what, s)?);
                if step == 0.0 || (stop - start) * step < 0.0 {
                    return Err(CliError::usage(
                        what,
                        format!("step {step} never reaches {stop} from {start}"),
                    ));
                }
                // Count steps up front so accumulated rounding cannot drop the endpoint.
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                if count > MAX_POINTS {
                    return Err(CliError::usage(
                        what,
                        format!("range '{item}' has more than {MAX_POINTS} points"),
                    ));
                }
                out.extend((0..count).map(|k| start + k as f64 * step));
            }
            _ => {
                return Err(CliError::usage(
                    what,
                    format!("'{item}' is neither a value nor start:stop:step"),
                ))
            }
        }
    }
    Ok(out)
}

pub fn parse_counts(what: &'static str, spec: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for item in items(what, spec)? {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(count(what, v)?),
            [a, b, s] => {
                let (start, stop, step) = (count(what, a)?, count(what, b)?, count(what, s)?);
                if step == 0 || stop < start {
                    return Err(CliError::usage(
                        what,
                        format!("range '{item}' is empty or has zero step"),
                    ));
                }
                if (stop - start) / step >= MAX_POINTS {
                    return Err(CliError::usage(
                        what,
                        format!("range '{item}' has more than {MAX_POINTS} points"),
                    ));
                }
                out.extend((start..=stop).step_by(step));
            }
            _ => {
                return Err(CliError::usage(
                    what,
                    format!("'{item}' is neither a value nor start:stop:step"),
                ))
            }
        }
    }
    Ok(out)
}

fn items<'a>(what: &'static str, spec: &'a str) -> CliResult<Vec<&'a str>> {
    let items: Vec<&str> = spec.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(CliError::usage(what, format!("empty item in '{spec}'")));
    }
    Ok(items)
}

fn real(what: &'static str, s: &str) -> CliResult<f64> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::usage(what, format!("'{s}' is not a finite number"))),
    }
}

fn count(what: &'static str, s: &str) -> CliResult<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| CliError::usage(what, format!("'{s}' is not a non-negative integer")))
}
