use num_complex::Complex64;
use rayon::prelude::*;

use super::data::sampled_sup;
use super::field::{Provenance, SolutionField};
use super::problem::{DuhamelForm, GridSpec, ProblemSpec};
use crate::coefficients::OmegaCache;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::quadrature::{integrate_duhamel, integrate_line, QuadResult, SliceHoelder};

// Times at which the source is sampled to fix the Duhamel tolerance scale.
const SOURCE_SCALE_TIMES: usize = 5;

/// Evaluates the kernel representation for one problem.
///
/// Holds the omega cache so that repeated evaluations share checkpoints.
#[derive(Debug, Clone)]
pub struct Solver {
    problem: ProblemSpec,
    cache: OmegaCache,
}

impl Solver {
    pub fn new(problem: ProblemSpec) -> Result<Self> {
        problem.tolerances.validate()?;
        let cache = OmegaCache::with_tolerance(problem.coefficient.clone(), problem.tolerances.omega);
        Ok(Solver { problem, cache })
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn cache(&self) -> &OmegaCache {
        &self.cache
    }

    fn admissible(&self, omega: Complex64, t: f64, tau: Option<f64>) -> Result<Kernel> {
        let rho_min = self.problem.tolerances.rho_min;
        if !(omega.re >= rho_min) {
            return Err(Error::DegenerateRegime {
                t,
                tau,
                re_omega: omega.re,
                rho_min,
            });
        }
        Kernel::new(omega)
    }

    fn check_time(t: f64) -> Result<()> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain(format!("solution requested at t = {t}; need t > 0")));
        }
        Ok(())
    }

    /// Initial-datum term with its quadrature diagnostics.
    pub fn homogeneous_detail(&self, t: f64, x: f64) -> Result<QuadResult> {
        Self::check_time(t)?;
        let phi = &self.problem.phi;
        let tol = &self.problem.tolerances;
        let omega = self.cache.omega(t)?;
        let kernel = self.admissible(omega, t, None)?;
        if phi.is_zero() {
            return Ok(QuadResult::zero());
        }
        let radius = kernel.decay_radius(tol.tail)?;
        let scale = positive_or_one(phi.sampled_sup(x - radius, x + radius));
        integrate_line(|z| kernel.eval(z) * phi.eval(x + z), 0.0, radius, tol.quad * scale)
    }

    pub fn solve_homogeneous(&self, t: f64, x: f64) -> Result<Complex64> {
        Ok(self.homogeneous_detail(t, x)?.value)
    }

    fn weight(&self, tau: f64) -> Result<Complex64> {
        match self.problem.duhamel_form {
            DuhamelForm::Corrected => self.cache.p_inv(tau),
            DuhamelForm::Paper => Ok(Complex64::new(1.0, 0.0)),
        }
    }

    /// Spatial integral `m(tau) int Q(omega0(t, tau), y - x) f(tau, y) dy`.
    fn duhamel_slice(&self, t: f64, omega_t: Complex64, tau: f64, x: f64, tol: f64) -> Result<(Complex64, usize)> {
        let tols = &self.problem.tolerances;
        let omega0 = omega_t - self.cache.omega(tau)?;
        let kernel = self.admissible(omega0, t, Some(tau))?;
        let radius = kernel.decay_radius(tols.tail)?;
        let source = &self.problem.source;
        let mut failure = None;
        let r = integrate_line(
            |z| match source.eval(tau, x + z) {
                Ok(f) => kernel.eval(z) * f,
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            },
            0.0,
            radius,
            tol,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let r = r?;
        Ok((self.weight(tau)? * r.value, r.evaluations))
    }

    fn source_scale(&self, t: f64, x: f64, omega_t: Complex64) -> Result<f64> {
        let half_width = Kernel::new(omega_t)
            .and_then(|k| k.decay_radius(self.problem.tolerances.tail))
            .unwrap_or(8.0)
            .max(1.0);
        let mut scale = 0.0f64;
        for i in 0..SOURCE_SCALE_TIMES {
            let tau = t * i as f64 / (SOURCE_SCALE_TIMES - 1) as f64;
            let m = self.weight(tau)?.norm();
            let s = sampled_sup(
                |y| self.problem.source.eval(tau, y).map_or(0.0, |v| v.norm()),
                x - half_width,
                x + half_width,
            );
            scale = scale.max(m * s);
        }
        Ok(positive_or_one(scale))
    }

    /// Source term with its quadrature diagnostics.
    pub fn duhamel_detail(&self, t: f64, x: f64) -> Result<(QuadResult, Option<f64>)> {
        Self::check_time(t)?;
        if self.problem.source.is_zero() {
            return Ok((QuadResult::zero(), None));
        }
        let tols = &self.problem.tolerances;
        let omega_t = self.cache.omega(t)?;
        let scale = self.source_scale(t, x, omega_t)?;
        let outer_tol = tols.quad * scale * t;
        let inner_tol = outer_tol / (10.0 * t);
        let eps = tols.eps_split * t;

        let hoelder = match self.problem.hoelder {
            Some(h) => {
                let slice_omega = self.cache.omega0(t, t - eps)?;
                let weight_sup = self.weight(t - eps)?.norm().max(self.weight(t)?.norm());
                Some(SliceHoelder {
                    b: h.b,
                    alpha: h.alpha,
                    slice_omega,
                    weight_sup,
                })
            }
            None => None,
        };

        let mut inner_evals = 0usize;
        let r = integrate_duhamel(
            |tau| {
                let (v, n) = self.duhamel_slice(t, omega_t, tau, x, inner_tol)?;
                inner_evals += n;
                Ok(v)
            },
            t,
            eps,
            outer_tol,
            hoelder,
        )?;
        let mut result = r.result;
        result.evaluations = inner_evals;
        Ok((result, r.slice_bound))
    }

    pub fn solve_duhamel(&self, t: f64, x: f64) -> Result<Complex64> {
        Ok(self.duhamel_detail(t, x)?.0.value)
    }

    /// Both terms, with summed error estimates and evaluation counts.
    pub fn solve_detail(&self, t: f64, x: f64) -> Result<QuadResult> {
        let h = self.homogeneous_detail(t, x)?;
        let (d, _) = self.duhamel_detail(t, x)?;
        Ok(QuadResult {
            value: h.value + d.value,
            error_estimate: h.error_estimate + d.error_estimate,
            evaluations: h.evaluations + d.evaluations,
        })
    }

    pub fn solve(&self, t: f64, x: f64) -> Result<Complex64> {
        Ok(self.solve_detail(t, x)?.value)
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            method: "kernel".to_string(),
            homogeneous: !self.problem.phi.is_zero(),
            duhamel: !self.problem.source.is_zero(),
            duhamel_form: self.problem.duhamel_form,
            tolerances: self.problem.tolerances,
        }
    }

    /// Evaluates every grid point; the first failing point (t-major order) is reported.
    pub fn solve_grid_detail(&self, grid: &GridSpec) -> Result<(SolutionField, Vec<QuadResult>)> {
        let ts = grid.t.values();
        let xs = grid.x.values();
        // Fill the checkpoints before the parallel phase so it only reads.
        for &t in &ts {
            self.cache
                .omega(t)
                .map_err(|e| Error::AtPoint { t, x: xs[0], source: Box::new(e) })?;
        }
        let points: Vec<(f64, f64)> = ts
            .iter()
            .flat_map(|&t| xs.iter().map(move |&x| (t, x)))
            .collect();
        let results: Vec<Result<QuadResult>> = points
            .par_iter()
            .map(|&(t, x)| self.solve_detail(t, x))
            .collect();
        let mut values = Vec::with_capacity(points.len());
        let mut details = Vec::with_capacity(points.len());
        for (r, &(t, x)) in results.into_iter().zip(&points) {
            let r = r.map_err(|e| Error::AtPoint { t, x, source: Box::new(e) })?;
            if !(r.value.re.is_finite() && r.value.im.is_finite()) {
                return Err(Error::AtPoint {
                    t,
                    x,
                    source: Box::new(Error::domain("non-finite solution value")),
                });
            }
            values.push(r.value);
            details.push(r);
        }
        Ok((SolutionField::new(ts, xs, values, self.provenance()), details))
    }

    pub fn solve_grid(&self, grid: &GridSpec) -> Result<SolutionField> {
        Ok(self.solve_grid_detail(grid)?.0)
    }
}

fn positive_or_one(s: f64) -> f64 {
    if s > 0.0 && s.is_finite() {
        s
    } else {
        1.0
    }
}

pub fn solve_homogeneous(problem: &ProblemSpec, t: f64, x: f64) -> Result<Complex64> {
    Solver::new(problem.clone())?.solve_homogeneous(t, x)
}

pub fn solve_duhamel(problem: &ProblemSpec, t: f64, x: f64) -> Result<Complex64> {
    Solver::new(problem.clone())?.solve_duhamel(t, x)
}

pub fn solve(problem: &ProblemSpec, t: f64, x: f64) -> Result<Complex64> {
    Solver::new(problem.clone())?.solve(t, x)
}

pub fn solve_grid(problem: &ProblemSpec, grid: &GridSpec) -> Result<SolutionField> {
    Solver::new(problem.clone())?.solve_grid(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::CoefficientProfile;
    use crate::solver::{Axis, DataFn, HoelderParams, Source};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constant(v: f64) -> CoefficientProfile {
        CoefficientProfile::constant(c(v, 0.0)).unwrap()
    }

    #[test]
    fn gaussian_heat_closed_form() {
        let p = ProblemSpec::new(constant(1.0), DataFn::gaussian(1.0).unwrap(), Source::zero());
        let u = solve_homogeneous(&p, 0.25, 0.0).unwrap();
        assert!((u - c(0.5f64.sqrt(), 0.0)).norm() < 1e-8);
    }

    #[test]
    fn constant_datum_is_preserved() {
        let p = ProblemSpec::new(
            CoefficientProfile::phase_arc(0.0, PI / 4.0, 0.2, 0.8).unwrap(),
            DataFn::Const(c(2.0, -1.0)),
            Source::zero(),
        );
        let s = Solver::new(p).unwrap();
        for (t, x) in [(0.1, 0.0), (0.7, 3.0), (1.5, -2.0)] {
            assert!((s.solve(t, x).unwrap() - c(2.0, -1.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn sine_multiplier() {
        let p = ProblemSpec::new(constant(1.0), DataFn::Sine { k: 1.0 }, Source::zero());
        let s = Solver::new(p).unwrap();
        for (t, x) in [(0.3, 0.4), (1.0, 2.0)] {
            let u = s.solve_homogeneous(t, x).unwrap();
            assert!((u - c((-t).exp() * x.sin(), 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn duhamel_forms_discriminate() {
        let base = ProblemSpec::new(constant(2.0), DataFn::Zero, Source::Static(DataFn::Const(c(1.0, 0.0))));
        let u = solve(&base, 1.0, 0.0).unwrap();
        assert!((u - c(0.5, 0.0)).norm() < 1e-6, "{u}");
        let paper = base.with_duhamel_form(DuhamelForm::Paper);
        let u = solve(&paper, 1.0, 0.0).unwrap();
        assert!((u - c(1.0, 0.0)).norm() < 1e-6, "{u}");
    }

    #[test]
    fn zero_source_gives_zero_duhamel() {
        let p = ProblemSpec::new(constant(1.0), DataFn::Sech, Source::zero());
        assert_eq!(solve_duhamel(&p, 0.5, 0.1).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn manufactured_t_gauss() {
        let field = crate::verify::ExactField::TGauss;
        let p = ProblemSpec::new(
            constant(1.0),
            DataFn::Zero,
            Source::Manufactured {
                field,
                profile: constant(1.0),
            },
        );
        let u = solve_duhamel(&p, 0.5, 0.0).unwrap();
        assert!((u - c(0.5, 0.0)).norm() < 1e-5, "{u}");
    }

    #[test]
    fn hoelder_slice_bound_reported() {
        let p = ProblemSpec::new(constant(1.0), DataFn::Zero, Source::Static(DataFn::Sine { k: 1.0 }))
            .with_hoelder(HoelderParams::new(1.0, 1.0).unwrap());
        let s = Solver::new(p).unwrap();
        let (r, bound) = s.duhamel_detail(1.0, 0.3).unwrap();
        let b = bound.unwrap();
        assert!(b > 0.0 && b < 1e-8);
        assert!(r.error_estimate >= b);
        // u = (1 - e^{-t}) sin x
        assert!((r.value - c((1.0 - (-1.0f64).exp()) * 0.3f64.sin(), 0.0)).norm() < 1e-6);
    }

    #[test]
    fn degenerate_regime_names_time() {
        let p = ProblemSpec::new(
            CoefficientProfile::constant(c(0.0, 1.0)).unwrap(),
            DataFn::gaussian(1.0).unwrap(),
            Source::zero(),
        );
        match solve(&p, 0.5, 0.0) {
            Err(Error::DegenerateRegime { t, tau: None, .. }) => assert_eq!(t, 0.5),
            other => panic!("unexpected {other:?}"),
        }
        // degenerate only inside the Duhamel slices beyond the ramp end
        let p = ProblemSpec::new(
            CoefficientProfile::phase_arc(0.0, PI / 2.0, 1.0, 2.0).unwrap(),
            DataFn::Zero,
            Source::Static(DataFn::Const(c(1.0, 0.0))),
        );
        match solve(&p, 2.5, 0.0) {
            Err(Error::DegenerateRegime { t, tau: Some(tau), .. }) => {
                assert_eq!(t, 2.5);
                assert!(tau >= 2.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grid_of_one_point_matches_solve() {
        let p = ProblemSpec::new(constant(1.0), DataFn::gaussian(1.0).unwrap(), Source::zero());
        let grid = GridSpec::new(Axis::new(0.4, 0.4, 1).unwrap(), Axis::new(0.3, 0.3, 1).unwrap()).unwrap();
        let field = solve_grid(&p, &grid).unwrap();
        assert_eq!(field.values.len(), 1);
        assert_eq!(field.values[0], solve(&p, 0.4, 0.3).unwrap());
    }

    #[test]
    fn grid_error_carries_coordinates() {
        let p = ProblemSpec::new(
            CoefficientProfile::phase_arc(0.0, PI / 2.0, 1.0, 2.0).unwrap(),
            DataFn::Zero,
            Source::Static(DataFn::Const(c(1.0, 0.0))),
        );
        let grid = GridSpec::new(Axis::new(1.5, 2.5, 3).unwrap(), Axis::new(-1.0, 1.0, 2).unwrap()).unwrap();
        match solve_grid(&p, &grid) {
            Err(Error::AtPoint { t, x, source }) => {
                // Re omega0(2, tau) ~ (pi/4)(2 - tau)^2 already drops below rho_min at t = 2
                assert_eq!((t, x), (2.0, -1.0));
                assert!(matches!(*source, Error::DegenerateRegime { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
