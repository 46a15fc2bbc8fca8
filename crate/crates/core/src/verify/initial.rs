use crate::error::{Error, Result};
use crate::solver::{ProblemSpec, Solver};

#[derive(Debug, Clone, PartialEq)]
pub struct InitialTraceReport {
    /// `(t_k, sup_x |u(t_k, x) - phi(x)|)` in the order given.
    pub rows: Vec<(f64, f64)>,
    /// Slack allowed when testing monotonicity.
    pub slack: f64,
}

impl InitialTraceReport {
    /// Errors decrease along the sequence, up to `slack`.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].1 <= w[0].1 + self.slack)
    }

    /// Last error divided by the first.
    pub fn reduction(&self) -> f64 {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) if a.1 > 0.0 => b.1 / a.1,
            _ => 0.0,
        }
    }
}

/// Distance of `u(t_k, .)` from the initial datum along a decreasing time sequence.
pub fn initial_check(problem: &ProblemSpec, times: &[f64], x_grid: &[f64]) -> Result<InitialTraceReport> {
    if times.is_empty() || x_grid.is_empty() {
        return Err(Error::domain("initial check needs times and positions"));
    }
    if times.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::domain("initial check times must be positive"));
    }
    if times.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::domain("initial check times must be strictly decreasing"));
    }
    let solver = Solver::new(problem.clone())?;
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let mut sup = 0.0f64;
        for &x in x_grid {
            let u = solver
                .solve(t, x)
                .map_err(|e| Error::AtPoint { t, x, source: Box::new(e) })?;
            sup = sup.max((u - problem.phi.eval(x)).norm());
        }
        rows.push((t, sup));
    }
    let scale = problem.phi.sampled_sup(
        x_grid[0],
        x_grid[x_grid.len() - 1],
    );
    Ok(InitialTraceReport {
        rows,
        slack: 10.0 * problem.tolerances.quad * scale.max(1.0),
    })
}
