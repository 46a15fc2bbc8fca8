//! Trapezoidal-in-time finite differences for `u_t = (u_xx + f) / p(t)` on a
//! truncated interval with zero boundary values.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solver::{GridSpec, ProblemSpec, Provenance, SolutionField};

// Data must be this small (relative to its maximum) on the outer band of the domain.
const TAIL_REL: f64 = 1e-8;
const TAIL_BAND: f64 = 0.05;
const PIVOT_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnConfig {
    /// The domain is `[-half_width, half_width]`.
    pub half_width: f64,
    pub dt: f64,
    pub dx: f64,
    /// Implicitness in `[1/2, 1]`; 1/2 is Crank–Nicolson.
    pub theta: f64,
}

impl CnConfig {
    pub fn new(half_width: f64, dt: f64, dx: f64) -> Self {
        CnConfig {
            half_width,
            dt,
            dx,
            theta: 0.5,
        }
    }
}

/// Solves the tridiagonal system `sub_i x_{i-1} + diag_i x_i + sup_i x_{i+1} = rhs_i` in place.
///
/// `sub[0]` and `sup[n-1]` are ignored.
pub fn solve_tridiagonal(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &mut [Complex64],
) -> Result<()> {
    let n = diag.len();
    if sub.len() != n || sup.len() != n || rhs.len() != n {
        return Err(Error::Oracle("tridiagonal band lengths differ".into()));
    }
    if n == 0 {
        return Ok(());
    }
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let scale = diag.iter().map(|d| d.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut denom = diag[0];
    if denom.norm() < PIVOT_FLOOR * scale {
        return Err(Error::Oracle(format!("pivot breakdown at row 0: |pivot| = {:e}", denom.norm())));
    }
    c_prime[0] = sup[0] / denom;
    rhs[0] /= denom;
    for i in 1..n {
        denom = diag[i] - sub[i] * c_prime[i - 1];
        if denom.norm() < PIVOT_FLOOR * scale {
            return Err(Error::Oracle(format!(
                "pivot breakdown at row {i}: |pivot| = {:e}",
                denom.norm()
            )));
        }
        c_prime[i] = sup[i] / denom;
        let prev = rhs[i - 1];
        rhs[i] = (rhs[i] - sub[i] * prev) / denom;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= c_prime[i] * next;
    }
    Ok(())
}

fn check_tail(label: &str, f: impl Fn(f64) -> f64, half_width: f64) -> Result<()> {
    let n = 400;
    let inner = half_width * (1.0 - TAIL_BAND);
    let peak = (0..=n)
        .map(|i| f(-half_width + 2.0 * half_width * i as f64 / n as f64))
        .fold(0.0, f64::max);
    let tail = (0..=n / 8)
        .flat_map(|i| {
            let x = inner + (half_width - inner) * i as f64 / (n / 8) as f64;
            [f(x), f(-x)]
        })
        .fold(0.0, f64::max);
    if tail > TAIL_REL * peak.max(1.0) {
        return Err(Error::DomainTooSmall(format!(
            "|{label}| reaches {tail:e} near x = +/-{half_width}"
        )));
    }
    Ok(())
}

// Four-point Lagrange interpolation on a uniform grid.
fn interpolate(nodes_x0: f64, dx: f64, values: &[Complex64], x: f64) -> Complex64 {
    let n = values.len();
    let s = (x - nodes_x0) / dx;
    let k = s.round();
    if (s - k).abs() < 1e-9 && k >= 0.0 && (k as usize) < n {
        return values[k as usize];
    }
    let base = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let mut out = Complex64::new(0.0, 0.0);
    for m in 0..4 {
        let mut w = 1.0;
        for q in 0..4 {
            if q != m {
                w *= (s - (base + q) as f64) / (m as f64 - q as f64);
            }
        }
        out += values[base + m] * w;
    }
    out
}

/// Independent finite-difference solution sampled onto `grid`.
pub fn cn_oracle(problem: &ProblemSpec, grid: &GridSpec, cfg: CnConfig) -> Result<SolutionField> {
    let CnConfig {
        half_width,
        dt,
        dx,
        theta,
    } = cfg;
    if !(half_width > 0.0 && dt > 0.0 && dx > 0.0) {
        return Err(Error::domain("oracle needs positive half-width, dt and dx"));
    }
    if !(0.5..=1.0).contains(&theta) {
        return Err(Error::domain(format!("oracle theta must lie in [1/2, 1], got {theta}")));
    }
    let cells = (2.0 * half_width / dx).round().max(4.0) as usize;
    let h = 2.0 * half_width / cells as f64;
    let x0 = -half_width;
    let xs: Vec<f64> = (0..=cells).map(|j| x0 + h * j as f64).collect();
    let ts = grid.t.values();
    let out_x = grid.x.values();
    if let Some(&x) = out_x.iter().find(|x| x.abs() > half_width) {
        return Err(Error::DomainTooSmall(format!("output point x = {x} outside oracle domain")));
    }
    let t_end = *ts.last().unwrap();

    check_tail("phi", |x| problem.phi.eval(x).norm(), half_width)?;
    for t in [0.0, 0.5 * t_end, t_end] {
        check_tail(
            "f",
            |x| problem.source.eval(t, x).map_or(f64::INFINITY, |v| v.norm()),
            half_width,
        )?;
    }

    let interior = cells - 1;
    let mut u: Vec<Complex64> = xs[1..cells].iter().map(|&x| problem.phi.eval(x)).collect();
    let has_source = !problem.source.is_zero();
    let source_at = |t: f64| -> Result<Vec<Complex64>> {
        if !has_source {
            return Ok(vec![Complex64::new(0.0, 0.0); interior]);
        }
        xs[1..cells].iter().map(|&x| problem.source.eval(t, x)).collect()
    };

    let mut t_now = 0.0;
    let mut f_now = source_at(0.0)?;
    let mut values = Vec::with_capacity(ts.len() * out_x.len());
    let mut sub = vec![Complex64::new(0.0, 0.0); interior];
    let mut diag = vec![Complex64::new(0.0, 0.0); interior];
    let mut sup = vec![Complex64::new(0.0, 0.0); interior];
    let mut rhs = vec![Complex64::new(0.0, 0.0); interior];

    for &t_target in &ts {
        if t_target < t_now {
            return Err(Error::domain("oracle output times must be increasing"));
        }
        let span = t_target - t_now;
        let steps = if span > 0.0 { (span / dt - 1e-9).ceil().max(1.0) as usize } else { 0 };
        for _ in 0..steps {
            let k = span / steps as f64;
            let t_next = t_now + k;
            let m = problem.coefficient.eval_p_inv(t_now + 0.5 * k, crate::coefficients::DEFAULT_P_FLOOR)?;
            let r = m * (k / (h * h));
            let f_next = source_at(t_next)?;
            let explicit = r * (1.0 - theta);
            let implicit = r * theta;
            for j in 0..interior {
                let left = if j > 0 { u[j - 1] } else { Complex64::new(0.0, 0.0) };
                let right = if j + 1 < interior { u[j + 1] } else { Complex64::new(0.0, 0.0) };
                rhs[j] = u[j] + explicit * (left - u[j] * 2.0 + right)
                    + m * k * (f_next[j] * theta + f_now[j] * (1.0 - theta));
                sub[j] = -implicit;
                sup[j] = -implicit;
                diag[j] = implicit * 2.0 + 1.0;
            }
            solve_tridiagonal(&sub, &diag, &sup, &mut rhs)?;
            u.copy_from_slice(&rhs);
            f_now = f_next;
            t_now = t_next;
        }
        t_now = t_target;
        let mut full = Vec::with_capacity(cells + 1);
        full.push(Complex64::new(0.0, 0.0));
        full.extend_from_slice(&u);
        full.push(Complex64::new(0.0, 0.0));
        for &x in &out_x {
            values.push(interpolate(x0, h, &full, x));
        }
    }

    let provenance = Provenance {
        method: "crank_nicolson".to_string(),
        homogeneous: !problem.phi.is_zero(),
        duhamel: has_source,
        duhamel_form: problem.duhamel_form,
        tolerances: problem.tolerances,
    };
    Ok(SolutionField::new(ts, out_x, values, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::CoefficientProfile;
    use crate::solver::{Axis, DataFn, Source};
    use crate::verify::ExactField;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn heat() -> ProblemSpec {
        ProblemSpec::new(
            CoefficientProfile::constant(c(1.0, 0.0)).unwrap(),
            DataFn::gaussian(1.0).unwrap(),
            Source::zero(),
        )
    }

    fn sup_error(field: &SolutionField, exact: ExactField) -> f64 {
        field.iter().map(|(t, x, u)| (u - exact.u(t, x)).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn thomas_matches_dense_product() {
        let sub = vec![c(0.0, 0.0), c(1.0, 0.5), c(-0.3, 0.2), c(0.7, 0.0)];
        let diag = vec![c(4.0, 1.0), c(3.0, -1.0), c(5.0, 0.0), c(2.0, 2.0)];
        let sup = vec![c(0.5, 0.0), c(0.1, 0.1), c(1.0, -1.0), c(0.0, 0.0)];
        let x = vec![c(1.0, 0.0), c(-2.0, 1.0), c(0.5, 0.5), c(0.0, 3.0)];
        let mut rhs: Vec<Complex64> = (0..4)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += sub[i] * x[i - 1];
                }
                if i < 3 {
                    s += sup[i] * x[i + 1];
                }
                s
            })
            .collect();
        solve_tridiagonal(&sub, &diag, &sup, &mut rhs).unwrap();
        for (a, b) in rhs.iter().zip(&x) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn thomas_pivot_breakdown() {
        let z = c(0.0, 0.0);
        let mut rhs = vec![c(1.0, 0.0); 2];
        let r = solve_tridiagonal(&[z, z], &[z, c(1.0, 0.0)], &[z, z], &mut rhs);
        assert!(matches!(r, Err(Error::Oracle(_))));
    }

    #[test]
    fn heat_benchmark_accuracy() {
        let grid = GridSpec::new(Axis::new(0.5, 0.5, 1).unwrap(), Axis::new(-4.0, 4.0, 41).unwrap()).unwrap();
        let field = cn_oracle(&heat(), &grid, CnConfig::new(12.0, 1e-3, 0.02)).unwrap();
        assert!(sup_error(&field, ExactField::HeatGauss) < 1e-4);
    }

    #[test]
    fn second_order_in_time() {
        // coarse dx and fine dt separate the temporal error from the spatial one
        let grid = GridSpec::new(Axis::new(0.5, 0.5, 1).unwrap(), Axis::new(-2.0, 2.0, 9).unwrap()).unwrap();
        let reference = cn_oracle(&heat(), &grid, CnConfig::new(10.0, 1e-4, 0.05)).unwrap();
        let diff = |dt: f64| {
            let f = cn_oracle(&heat(), &grid, CnConfig::new(10.0, dt, 0.05)).unwrap();
            f.values.iter().zip(&reference.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
        };
        let ratio = diff(0.1) / diff(0.05);
        assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
    }

    #[test]
    fn zero_data_single_step() {
        let p = ProblemSpec::new(
            CoefficientProfile::constant(c(1.0, 0.0)).unwrap(),
            DataFn::Zero,
            Source::zero(),
        );
        let grid = GridSpec::new(Axis::new(1e-3, 1e-3, 1).unwrap(), Axis::new(-1.0, 1.0, 5).unwrap()).unwrap();
        let field = cn_oracle(&p, &grid, CnConfig::new(4.0, 1e-3, 0.1)).unwrap();
        assert!(field.values.iter().all(|v| *v == c(0.0, 0.0)));
    }

    #[test]
    fn complex_coefficient_with_source() {
        let profile = CoefficientProfile::constant(Complex64::from_polar(1.0, 0.3)).unwrap();
        let m = crate::verify::manufacture(ExactField::TGauss, &profile);
        let p = ProblemSpec::new(profile, m.phi, m.source);
        let grid = GridSpec::new(Axis::new(0.2, 1.0, 3).unwrap(), Axis::new(-2.0, 2.0, 11).unwrap()).unwrap();
        let field = cn_oracle(&p, &grid, CnConfig::new(8.0, 2e-3, 0.02)).unwrap();
        assert!(sup_error(&field, ExactField::TGauss) < 1e-4);
    }

    #[test]
    fn tail_check_rejects_slow_decay() {
        let p = ProblemSpec::new(
            CoefficientProfile::constant(c(1.0, 0.0)).unwrap(),
            DataFn::Sech,
            Source::zero(),
        );
        let grid = GridSpec::new(Axis::new(0.1, 0.1, 1).unwrap(), Axis::new(-1.0, 1.0, 3).unwrap()).unwrap();
        assert!(matches!(
            cn_oracle(&p, &grid, CnConfig::new(5.0, 1e-3, 0.05)),
            Err(Error::DomainTooSmall(_))
        ));
        assert!(cn_oracle(&p, &grid, CnConfig::new(25.0, 1e-2, 0.1)).is_ok());
    }

    #[test]
    fn interpolation_is_exact_for_cubics() {
        let q = |x: f64| c(1.0 - x + 0.5 * x * x * x, x * x);
        let vals: Vec<Complex64> = (0..10).map(|j| q(j as f64 * 0.5)).collect();
        for x in [0.1, 1.3, 4.4] {
            assert!((interpolate(0.0, 0.5, &vals, x) - q(x)).norm() < 1e-12);
        }
    }
}
