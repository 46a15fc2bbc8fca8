use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solver::{ProblemSpec, SolutionField};

/// Worst residual entry on one time row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowWorst {
    pub t: f64,
    pub x: f64,
    pub abs_residual: f64,
}

/// Finite-difference residual `r = p u_t - u_xx - f` of a sampled field.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub sup_norm: f64,
    /// Root mean square over the evaluated points.
    pub l2_norm: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub dx_min: f64,
    pub dx_max: f64,
    pub points: usize,
    pub rows: Vec<RowWorst>,
}

// Three-point weights for the first derivative at nodes[k] of (nodes[0], nodes[1], nodes[2]).
fn first_derivative_weights(nodes: [f64; 3], k: usize) -> [f64; 3] {
    let [a, b, c] = nodes;
    let x = nodes[k];
    [
        ((x - b) + (x - c)) / ((a - b) * (a - c)),
        ((x - a) + (x - c)) / ((b - a) * (b - c)),
        ((x - a) + (x - b)) / ((c - a) * (c - b)),
    ]
}

fn second_derivative_weights(nodes: [f64; 3]) -> [f64; 3] {
    let [a, b, c] = nodes;
    [
        2.0 / ((a - b) * (a - c)),
        2.0 / ((b - a) * (b - c)),
        2.0 / ((c - a) * (c - b)),
    ]
}

fn spacing(v: &[f64]) -> (f64, f64) {
    v.windows(2)
        .map(|w| w[1] - w[0])
        .fold((f64::INFINITY, 0.0), |(lo, hi), d| (lo.min(d), hi.max(d)))
}

/// Centered differences in `x` on interior columns; centered in `t` on interior
/// rows and one-sided second order on the first and last rows.
pub fn fd_residual(field: &SolutionField, problem: &ProblemSpec) -> Result<ResidualReport> {
    let (ts, xs) = (&field.t_grid, &field.x_grid);
    if ts.len() < 3 || xs.len() < 3 {
        return Err(Error::domain(format!(
            "residual needs at least 3 points per direction, got {} x {}",
            ts.len(),
            xs.len()
        )));
    }
    if ts.windows(2).any(|w| !(w[0] < w[1])) || xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("residual grids must be strictly increasing"));
    }
    let nt = ts.len();
    let nx = xs.len();
    let mut sup = 0.0f64;
    let mut sum_sq = 0.0;
    let mut points = 0;
    let mut rows = Vec::with_capacity(nt);

    for i in 0..nt {
        let (base, k) = match i {
            0 => (0, 0),
            _ if i == nt - 1 => (nt - 3, 2),
            _ => (i - 1, 1),
        };
        let wt = first_derivative_weights([ts[base], ts[base + 1], ts[base + 2]], k);
        let t = ts[i];
        let p = problem.coefficient.eval_p(t)?;
        let mut worst = RowWorst {
            t,
            x: f64::NAN,
            abs_residual: 0.0,
        };
        for j in 1..nx - 1 {
            let u_t: Complex64 = (0..3).map(|m| field.get(base + m, j) * wt[m]).sum();
            let wx = second_derivative_weights([xs[j - 1], xs[j], xs[j + 1]]);
            let u_xx: Complex64 = (0..3).map(|m| field.get(i, j - 1 + m) * wx[m]).sum();
            let f = problem.source.eval(t, xs[j])?;
            let r = (p * u_t - u_xx - f).norm();
            sup = sup.max(r);
            sum_sq += r * r;
            points += 1;
            if r >= worst.abs_residual {
                worst = RowWorst {
                    t,
                    x: xs[j],
                    abs_residual: r,
                };
            }
        }
        rows.push(worst);
    }

    let (dt_min, dt_max) = spacing(ts);
    let (dx_min, dx_max) = spacing(xs);
    Ok(ResidualReport {
        sup_norm: sup,
        l2_norm: (sum_sq / points as f64).sqrt(),
        dt_min,
        dt_max,
        dx_min,
        dx_max,
        points,
        rows,
    })
}
