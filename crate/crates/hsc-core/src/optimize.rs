//! One-dimensional maximization on a grid with quadratic refinement.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Result of [`maximize_on_grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridMaximum {
    /// Maximizer, possibly refined off the grid.
    pub x_star: f64,
    /// Objective at `x_star`.
    pub f_star: f64,
    /// Every grid point with its value; `None` marks a skipped point.
    pub grid: Vec<(f64, Option<f64>)>,
}

/// Maximizes `f` over `grid`, then fits a parabola through the best point
/// and its two neighbours and evaluates the vertex once. The vertex is kept
/// only if it improves on the grid maximum.
///
/// Points where `f` reports [`Error::InfeasibleTarget`] are skipped; other
/// errors propagate. Ties go to the smaller abscissa.
pub fn maximize_on_grid(grid: &[f64], mut f: impl FnMut(f64) -> Result<f64>) -> Result<GridMaximum> {
    let mut xs: Vec<f64> = grid.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    xs.dedup();
    let mut values = Vec::with_capacity(xs.len());
    for &x in &xs {
        match f(x) {
            Ok(v) => values.push((x, Some(v))),
            Err(Error::InfeasibleTarget { .. }) => values.push((x, None)),
            Err(e) => return Err(e),
        }
    }
    let mut best: Option<usize> = None;
    for (i, (_, v)) in values.iter().enumerate() {
        if let Some(v) = v {
            if best.map_or(true, |b| *v > values[b].1.expect("evaluated")) {
                best = Some(i);
            }
        }
    }
    let i = best.ok_or(Error::InvalidArgument("no feasible grid point"))?;
    let (mut x_star, mut f_star) = (values[i].0, values[i].1.expect("evaluated"));
    if i > 0 && i + 1 < values.len() {
        if let ((x0, Some(f0)), (x2, Some(f2))) = (values[i - 1], values[i + 1]) {
            let x1 = x_star;
            let f1 = f_star;
            let den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
            if den.abs() > 0.0 {
                let num = (x1 - x0) * (x1 - x0) * (f1 - f2) - (x1 - x2) * (x1 - x2) * (f1 - f0);
                let xv = x1 - 0.5 * num / den;
                if xv > x0 && xv < x2 && xv != x1 {
                    if let Ok(fv) = f(xv) {
                        if fv > f_star {
                            x_star = xv;
                            f_star = fv;
                        }
                    }
                }
            }
        }
    }
    Ok(GridMaximum { x_star, f_star, grid: values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refines_parabola_exactly() {
        let grid: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let m = maximize_on_grid(&grid, |x| Ok(1.0 - (x - 0.437) * (x - 0.437))).unwrap();
        assert!((m.x_star - 0.437).abs() < 1e-12);
    }

    #[test]
    fn ties_go_left() {
        let m = maximize_on_grid(&[0.2, 0.1, 0.3], |_| Ok(1.0)).unwrap();
        assert_eq!(m.x_star, 0.1);
    }

    #[test]
    fn infeasible_points_are_skipped() {
        let m = maximize_on_grid(&[0.0, 1.0, 2.0], |x| {
            if x < 0.5 {
                Err(Error::InfeasibleTarget { target: 0.0, floor: 1.0 })
            } else {
                Ok(x)
            }
        })
        .unwrap();
        assert_eq!(m.grid[0].1, None);
        assert_eq!(m.x_star, 2.0);
    }
}
