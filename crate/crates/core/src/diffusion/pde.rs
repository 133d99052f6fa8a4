use rayon::prelude::*;

use super::propagator::{check_common, propagator_1d_value};
use crate::error::{Error, Result};
use crate::frac_ops::{CaputoOperator, TimeGrid, GRADED_DEPTH, GRADED_RATIO};

fn uniform_step(name: &'static str, grid: &[f64]) -> Result<f64> {
    if grid.len() < 3 {
        return Err(Error::invalid(name, "needs at least 3 nodes"));
    }
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid(name, "nodes must be finite and increasing"));
    }
    for (j, &v) in grid.iter().enumerate() {
        if (v - (grid[0] + j as f64 * h)).abs() > 1e-9 * h.max(v.abs()) {
            return Err(Error::invalid(name, "nodes must be equally spaced"));
        }
    }
    Ok(h)
}

/// Discrete residual of D_t^α N − c ∂²N/∂x² for the one-dimensional
/// fundamental solution, normalised by max|N| over the grid.
///
/// See [`pde_residual_1d_with`] for the discretisation.
pub fn pde_residual_1d(alpha: f64, c_nu: f64, x_grid: &[f64], t_grid: &[f64]) -> Result<f64> {
    check_common(alpha, c_nu, 1.0)?;
    pde_residual_1d_with(alpha, c_nu, x_grid, t_grid, |x, t| {
        if t == 0.0 {
            if x == 0.0 {
                return Err(Error::Domain("the solution is a point mass at x = 0, t = 0".into()));
            }
            return Ok(0.0);
        }
        propagator_1d_value(alpha, c_nu, x, t)
    })
}

/// Residual of D_t^α N − c ∂²N/∂x² for an arbitrary N(x, t).
///
/// Space: central second differences, evaluated at interior x nodes. For
/// α < 1 the fundamental solution has a cusp at x = 0 (the point mass
/// acts as a source t^{−α}δ(x)/Γ(1−α) there), so stencils containing the
/// origin are skipped.
/// Time: for α < 1 the L1 Caputo rule over the history from 0, on the
/// graded grid whose uniform part has the spacing of `t_grid` (N is
/// sampled at t = 0 too); for α = 1 the central
/// first difference at interior t nodes. Both grids must be uniform and
/// `t_grid[0]` a multiple of its spacing when α < 1.
pub fn pde_residual_1d_with<F>(alpha: f64, c_nu: f64, x_grid: &[f64], t_grid: &[f64], n: F) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    check_common(alpha, c_nu, 1.0)?;
    let hx = uniform_step("x_grid", x_grid)?;
    let ht = uniform_step("t_grid", t_grid)?;
    if !(t_grid[0] > 0.0) {
        return Err(Error::invalid("t_grid", "must start after t = 0"));
    }
    let nt = t_grid.len();

    // columns of N over the time history used by the derivative
    let (times, offset): (Vec<f64>, usize) = if alpha < 1.0 {
        let m0 = (t_grid[0] / ht).round();
        if (m0 * ht - t_grid[0]).abs() > 1e-9 * t_grid[0] {
            return Err(Error::invalid("t_grid", "first node must be a multiple of the spacing"));
        }
        let steps = m0 as usize + nt - 1;
        // N ~ t^{−α/2} near x = 0 as t → 0; the graded history resolves that
        // layer and keeps the nodes of t_grid
        // the solution at x switches on near t ~ |x|^{2/α}; reach below that
        // for the smallest |x| of the grid
        let x_min = x_grid.iter().map(|x| x.abs()).filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
        let depth = (1e-3 * x_min.powf(2.0 / alpha) / ht).clamp(1e-13, GRADED_DEPTH);
        let graded = TimeGrid::graded_with(t_grid[nt - 1], steps, GRADED_RATIO, depth)?;
        let nodes = graded.nodes();
        match nodes.iter().position(|&t| (t - t_grid[0]).abs() <= 1e-9 * ht) {
            Some(k) if nodes.len() - k == nt => (nodes.to_vec(), k),
            _ => (TimeGrid::uniform(t_grid[nt - 1], steps)?.nodes().to_vec(), m0 as usize),
        }
    } else {
        (t_grid.to_vec(), 0)
    };
    let columns: Vec<Vec<f64>> = x_grid
        .par_iter()
        .map(|&x| times.iter().map(|&t| n(x, t)).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;

    let scale = columns
        .iter()
        .flat_map(|c| c[offset..].iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }

    let caputo = if alpha < 1.0 {
        Some(CaputoOperator::new(&TimeGrid::from_nodes(times.clone())?, alpha)?)
    } else {
        None
    };
    let (j_lo, j_hi) = if caputo.is_some() { (0, nt) } else { (1, nt - 1) };
    let worst = (1..x_grid.len() - 1)
        .into_par_iter()
        .filter(|&i| caputo.is_none() || x_grid[i - 1] * x_grid[i + 1] > 0.0)
        .map(|i| {
            let col = &columns[i];
            let mut worst = 0.0f64;
            for j in j_lo..j_hi {
                let k = offset + j;
                let dt = match &caputo {
                    Some(op) => op.at(k, col),
                    None => (col[k + 1] - col[k - 1]) / (2.0 * ht),
                };
                let dxx = (columns[i + 1][k] - 2.0 * col[k] + columns[i - 1][k]) / (hx * hx);
                worst = worst.max((dt - c_nu * dxx).abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst / scale)
}

/// Residuals on |x| ≤ `x_max` × [t_lo, t_hi] at spacing h and h/2 (the
/// x nodes staggered about 0). Fails with [`Error::UnderResolved`] when
/// halving the spacing does not reduce the residual.
pub fn pde_refinement_study(alpha: f64, c_nu: f64, x_max: f64, t_lo: f64, t_hi: f64, h: f64) -> Result<[f64; 2]> {
    if !(h > 0.0) || !(x_max > h) || !(t_lo > 0.0) || !(t_hi > t_lo) {
        return Err(Error::invalid("grid", "need h > 0, x_max > h and 0 < t_lo < t_hi"));
    }
    let residual = |h: f64| -> Result<f64> {
        let nx = (2.0 * x_max / h).round() as usize;
        let x: Vec<f64> = (0..nx).map(|i| -x_max + (i as f64 + 0.5) * h).collect();
        let j0 = (t_lo / h).round() as usize;
        let j1 = (t_hi / h).round() as usize;
        let t: Vec<f64> = (j0..=j1).map(|j| j as f64 * h).collect();
        pde_residual_1d(alpha, c_nu, &x, &t)
    };
    let coarse = residual(h)?;
    let fine = residual(h / 2.0)?;
    if !(fine < coarse) {
        return Err(Error::UnderResolved { coarse, fine });
    }
    Ok([coarse, fine])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_has_zero_residual() {
        let x: Vec<f64> = (0..9).map(|i| -1.0 + 0.25 * i as f64).collect();
        let t: Vec<f64> = (1..=8).map(|j| 0.125 * j as f64).collect();
        for alpha in [0.5, 1.0] {
            assert_eq!(pde_residual_1d_with(alpha, 1.0, &x, &t, |_, _| Ok(0.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn grid_checks() {
        let t = [0.5, 0.6, 0.7];
        assert!(pde_residual_1d(0.5, 1.0, &[0.0, 1.0], &t).is_err());
        assert!(pde_residual_1d(0.5, 1.0, &[0.0, 0.1, 0.3], &t).is_err());
        // x = 0 meets the initial point mass
        assert!(matches!(
            pde_residual_1d(0.5, 1.0, &[-0.1, 0.0, 0.1], &[0.1, 0.2, 0.3]),
            Err(Error::Domain(_))
        ));
        assert!(pde_residual_1d(0.5, 1.0, &[-0.15, 0.05, 0.25], &[0.15, 0.25, 0.35]).is_err());
    }
}
