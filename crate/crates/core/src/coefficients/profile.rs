use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default floor on `|p(t)|` used by the nonvanishing check.
pub const DEFAULT_P_FLOOR: f64 = 1e-12;

/// The time-dependent complex coefficient `p(t)` in front of `u_t`.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientProfile {
    Constant(Complex64),
    /// `p(t) = exp(i theta(t))` with `theta` linear from `theta0` to `theta1`
    /// on `[ramp_start, ramp_end]` and clamped outside.
    PhaseArc {
        theta0: f64,
        theta1: f64,
        ramp_start: f64,
        ramp_end: f64,
    },
    /// Ratio of two real polynomials, coefficients in ascending powers of t.
    Rational {
        numerator: Vec<f64>,
        denominator: Vec<f64>,
    },
    /// Piecewise-linear interpolation through `(t_i, p_i)`, constant outside.
    Table(Vec<(f64, Complex64)>),
}

impl CoefficientProfile {
    pub fn constant(value: Complex64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::domain("constant coefficient must be finite"));
        }
        Ok(CoefficientProfile::Constant(value))
    }

    pub fn phase_arc(theta0: f64, theta1: f64, ramp_start: f64, ramp_end: f64) -> Result<Self> {
        if ![theta0, theta1, ramp_start, ramp_end].iter().all(|v| v.is_finite()) {
            return Err(Error::domain("phase_arc parameters must be finite"));
        }
        if !(ramp_start < ramp_end) {
            return Err(Error::domain(format!(
                "phase_arc ramp must satisfy start < end, got [{ramp_start}, {ramp_end}]"
            )));
        }
        Ok(CoefficientProfile::PhaseArc {
            theta0,
            theta1,
            ramp_start,
            ramp_end,
        })
    }

    pub fn rational(numerator: Vec<f64>, denominator: Vec<f64>) -> Result<Self> {
        if numerator.is_empty() || denominator.is_empty() {
            return Err(Error::domain("rational coefficient lists must be nonempty"));
        }
        if !numerator.iter().chain(&denominator).all(|v| v.is_finite()) {
            return Err(Error::domain("rational coefficients must be finite"));
        }
        if denominator.iter().all(|&v| v == 0.0) {
            return Err(Error::domain("rational denominator is identically zero"));
        }
        Ok(CoefficientProfile::Rational {
            numerator,
            denominator,
        })
    }

    pub fn table(knots: Vec<(f64, Complex64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::domain("table needs at least one knot"));
        }
        for (t, p) in &knots {
            if !(t.is_finite() && p.re.is_finite() && p.im.is_finite()) {
                return Err(Error::domain("table knots must be finite"));
            }
        }
        if let Some(w) = knots.windows(2).find(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::domain(format!(
                "table knots must be strictly increasing: {} then {}",
                w[0].0, w[1].0
            )));
        }
        Ok(CoefficientProfile::Table(knots))
    }

    /// `p(t)` for `t >= 0`.
    pub fn eval_p(&self, t: f64) -> Result<Complex64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("coefficient evaluated at t = {t} < 0")));
        }
        let p = match self {
            CoefficientProfile::Constant(c) => *c,
            CoefficientProfile::PhaseArc {
                theta0,
                theta1,
                ramp_start,
                ramp_end,
            } => {
                let s = ((t - ramp_start) / (ramp_end - ramp_start)).clamp(0.0, 1.0);
                let theta = if s == 0.0 {
                    *theta0
                } else if s == 1.0 {
                    *theta1
                } else {
                    theta0 + s * (theta1 - theta0)
                };
                Complex64::from_polar(1.0, theta)
            }
            CoefficientProfile::Rational {
                numerator,
                denominator,
            } => Complex64::new(horner(numerator, t) / horner(denominator, t), 0.0),
            CoefficientProfile::Table(knots) => interpolate(knots, t),
        };
        if !(p.re.is_finite() && p.im.is_finite()) {
            return Err(Error::domain(format!("coefficient is not finite at t = {t}")));
        }
        Ok(p)
    }

    /// `1/p(t)`, refusing when `|p(t)| < floor`.
    pub fn eval_p_inv(&self, t: f64, floor: f64) -> Result<Complex64> {
        let p = self.eval_p(t)?;
        let modulus = p.norm();
        if modulus < floor {
            return Err(Error::DegenerateCoefficient { t, modulus });
        }
        Ok(p.inv())
    }

    /// Points where the profile may fail to be smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            CoefficientProfile::PhaseArc {
                ramp_start,
                ramp_end,
                ..
            } => vec![*ramp_start, *ramp_end],
            CoefficientProfile::Table(knots) => knots.iter().map(|k| k.0).collect(),
            _ => Vec::new(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            CoefficientProfile::Constant(_) => "constant",
            CoefficientProfile::PhaseArc { .. } => "phase_arc",
            CoefficientProfile::Rational { .. } => "rational",
            CoefficientProfile::Table(_) => "table",
        }
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub(crate) fn interpolate(knots: &[(f64, Complex64)], t: f64) -> Complex64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    // first index with knot time > t; at least 1 here
    let hi = knots.partition_point(|k| k.0 <= t);
    let (t0, p0) = knots[hi - 1];
    let (t1, p1) = knots[hi];
    let s = (t - t0) / (t1 - t0);
    p0 + (p1 - p0) * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_profile() {
        let p = CoefficientProfile::constant(c(1.0, 0.0)).unwrap();
        assert_eq!(p.eval_p(5.0).unwrap(), c(1.0, 0.0));
        let p = CoefficientProfile::constant(c(2.0, 0.0)).unwrap();
        assert_eq!(p.eval_p_inv(0.3, DEFAULT_P_FLOOR).unwrap(), c(0.5, 0.0));
        let p = CoefficientProfile::constant(c(0.0, 1.0)).unwrap();
        assert_eq!(p.eval_p_inv(0.3, DEFAULT_P_FLOOR).unwrap(), c(0.0, -1.0));
    }

    #[test]
    fn negative_time_is_rejected() {
        let p = CoefficientProfile::constant(c(1.0, 0.0)).unwrap();
        assert!(matches!(p.eval_p(-1e-9), Err(Error::Domain(_))));
    }

    #[test]
    fn phase_arc_values() {
        let p = CoefficientProfile::phase_arc(0.0, PI / 2.0, 1.0, 2.0).unwrap();
        assert_eq!(p.eval_p(0.5).unwrap(), c(1.0, 0.0));
        let mid = p.eval_p(1.5).unwrap();
        assert!((mid - c(0.5f64.sqrt(), 0.5f64.sqrt())).norm() < 1e-15);
        for t in [0.0, 0.3, 1.1, 1.9, 2.0, 7.0] {
            assert!((p.eval_p(t).unwrap().norm() - 1.0).abs() < 1e-15);
        }
        assert!(CoefficientProfile::phase_arc(0.0, 1.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn table_interpolation_and_zero_knot() {
        let p = CoefficientProfile::table(vec![
            (0.0, c(1.0, 0.0)),
            (1.0, c(0.0, 0.0)),
            (2.0, c(1.0, 1.0)),
        ])
        .unwrap();
        assert_eq!(p.eval_p(0.5).unwrap(), c(0.5, 0.0));
        assert_eq!(p.eval_p(1.5).unwrap(), c(0.5, 0.5));
        assert_eq!(p.eval_p(9.0).unwrap(), c(1.0, 1.0));
        assert!(matches!(
            p.eval_p_inv(1.0, DEFAULT_P_FLOOR),
            Err(Error::DegenerateCoefficient { t, .. }) if t == 1.0
        ));
    }

    #[test]
    fn table_knots_must_increase() {
        assert!(CoefficientProfile::table(vec![(0.0, c(1.0, 0.0)), (0.0, c(2.0, 0.0))]).is_err());
        assert!(CoefficientProfile::table(vec![]).is_err());
    }

    #[test]
    fn rational_profile() {
        // (1 + t) / (2 + t^2)
        let p = CoefficientProfile::rational(vec![1.0, 1.0], vec![2.0, 0.0, 1.0]).unwrap();
        assert!((p.eval_p(1.0).unwrap() - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        // pole at t = 1
        let p = CoefficientProfile::rational(vec![1.0], vec![-1.0, 1.0]).unwrap();
        assert!(p.eval_p(1.0).is_err());
        assert!(CoefficientProfile::rational(vec![1.0], vec![0.0]).is_err());
    }
}
