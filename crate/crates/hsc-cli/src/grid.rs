//! Numeric grids written as `start:stop:step` ranges or comma lists.

use crate::CliError;

/// Parses `a:b:s` (inclusive start, stop included when reached within
/// rounding) or `x,y,z`. A single number is a one-point grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(CliError::Usage("empty grid".into()));
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(CliError::Usage(format!("range `{text}` must be start:stop:step")));
        };
        return range(number(start)?, number(stop)?, number(step)?);
    }
    text.split(',').map(number).collect()
}

fn number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let v: f64 = s.parse().map_err(|_| CliError::Usage(format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("`{s}` is not finite")));
    }
    Ok(v)
}

/// Points `start + k·step` up to `stop`, rounded to twelve decimals so that
/// `0.1 + 0.2` prints as `0.3`.
pub fn range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || stop < start {
        return Err(CliError::Usage(format!("range {start}:{stop}:{step} needs step > 0 and stop ≥ start")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::Usage("range has more than a million points".into()));
    }
    Ok((0..count).map(|k| round12(start + k as f64 * step)).collect())
}

fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_both_ends() {
        let g = parse_grid("0.05:0.95:0.05").unwrap();
        assert_eq!(g.len(), 19);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[2], 0.15);
        assert_eq!(g[18], 0.95);
        assert_eq!(parse_grid("0.2:3.0:0.1").unwrap().len(), 29);
        assert_eq!(parse_grid("0:1:0.3").unwrap(), vec![0.0, 0.3, 0.6, 0.9]);
    }

    #[test]
    fn lists_and_scalars() {
        assert_eq!(parse_grid("0,0.25, 0.5").unwrap(), vec![0.0, 0.25, 0.5]);
        assert_eq!(parse_grid("2.0").unwrap(), vec![2.0]);
    }

    #[test]
    fn malformed_grids_are_usage_errors() {
        for bad in ["", "1:2", "1:0:0.1", "0:1:0", "a,b", "1:2:3:4", "nan"] {
            assert!(matches!(parse_grid(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }
}
