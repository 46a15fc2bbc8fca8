use crate::coefficients::{CoefficientProfile, DEFAULT_OMEGA_TOL};
use crate::error::{Error, Result};
use crate::kernel::DEFAULT_RHO_MIN;

use super::data::{DataFn, Source};

/// Which Duhamel integrand is assembled for the source term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuhamelForm {
    /// Source slices propagated without the `1/p(tau)` weight, as originally published.
    Paper,
    /// Source slices weighted by `1/p(tau)`, which is what the equation
    /// divided by `p` produces.
    #[default]
    Corrected,
}

impl DuhamelForm {
    pub fn name(self) -> &'static str {
        match self {
            DuhamelForm::Paper => "paper",
            DuhamelForm::Corrected => "corrected",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper" => Some(DuhamelForm::Paper),
            "corrected" => Some(DuhamelForm::Corrected),
            _ => None,
        }
    }
}

/// Hölder constant and exponent of the source in `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoelderParams {
    pub b: f64,
    pub alpha: f64,
}

impl HoelderParams {
    pub fn new(b: f64, alpha: f64) -> Result<Self> {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::domain(format!("Hoelder constant must be >= 0, got {b}")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(format!("Hoelder exponent must lie in (0, 1], got {alpha}")));
        }
        Ok(HoelderParams { b, alpha })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative accuracy requested from every spatial and temporal quadrature.
    pub quad: f64,
    /// Smallest admissible `Re omega`.
    pub rho_min: f64,
    /// Width of the near-diagonal Duhamel slice, relative to `t`.
    pub eps_split: f64,
    /// Kernel tail level used to pick truncation radii.
    pub tail: f64,
    /// Per-segment tolerance of the omega cache.
    pub omega: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad: 1e-10,
            rho_min: DEFAULT_RHO_MIN,
            eps_split: 1e-6,
            tail: 1e-16,
            omega: DEFAULT_OMEGA_TOL,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("tolerance `{name}` must be positive, got {v}")))
            }
        };
        pos("quad", self.quad)?;
        pos("rho_min", self.rho_min)?;
        pos("eps_split", self.eps_split)?;
        pos("omega", self.omega)?;
        if !(self.tail > 0.0 && self.tail < 1.0) {
            return Err(Error::domain(format!("tolerance `tail` must lie in (0, 1), got {}", self.tail)));
        }
        if self.eps_split >= 1.0 {
            return Err(Error::domain("tolerance `eps_split` must be below 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub coefficient: CoefficientProfile,
    pub phi: DataFn,
    pub source: Source,
    pub hoelder: Option<HoelderParams>,
    pub duhamel_form: DuhamelForm,
    pub tolerances: Tolerances,
}

impl ProblemSpec {
    pub fn new(coefficient: CoefficientProfile, phi: DataFn, source: Source) -> Self {
        ProblemSpec {
            coefficient,
            phi,
            source,
            hoelder: None,
            duhamel_form: DuhamelForm::default(),
            tolerances: Tolerances::default(),
        }
    }

    pub fn with_hoelder(mut self, h: HoelderParams) -> Self {
        self.hoelder = Some(h);
        self
    }

    pub fn with_duhamel_form(mut self, form: DuhamelForm) -> Self {
        self.duhamel_form = form;
        self
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }
}

/// Evenly spaced samples `start, ..., end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) {
            return Err(Error::domain("axis bounds must be finite"));
        }
        match count {
            0 => return Err(Error::domain("axis needs at least one point")),
            1 if start != end => {
                return Err(Error::domain("a single-point axis needs start == end"));
            }
            1 => {}
            _ if !(start < end) => {
                return Err(Error::domain(format!("axis range [{start}, {end}] is degenerate")));
            }
            _ => {}
        }
        Ok(Axis { start, end, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.end
                } else {
                    self.start + (self.end - self.start) * i as f64 / n
                }
            })
            .collect()
    }
}

/// A rectangular `(t, x)` sampling of the layer `t0 <= t <= T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t: Axis,
    pub x: Axis,
}

impl GridSpec {
    pub fn new(t: Axis, x: Axis) -> Result<Self> {
        if !(t.start > 0.0) {
            return Err(Error::domain(format!("grid times must be positive, got start {}", t.start)));
        }
        Ok(GridSpec { t, x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values() {
        let a = Axis::new(0.1, 1.0, 5).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[4], 1.0);
        assert!((v[2] - 0.55).abs() < 1e-15);
        assert_eq!(Axis::new(2.0, 2.0, 1).unwrap().values(), vec![2.0]);
        assert!(Axis::new(1.0, 1.0, 3).is_err());
        assert!(Axis::new(0.0, 1.0, 0).is_err());
        assert!(Axis::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn grid_needs_positive_times() {
        let x = Axis::new(-1.0, 1.0, 3).unwrap();
        assert!(GridSpec::new(Axis::new(0.0, 1.0, 3).unwrap(), x).is_err());
        assert!(GridSpec::new(Axis::new(0.5, 1.0, 3).unwrap(), x).is_ok());
    }

    #[test]
    fn hoelder_exponent_range() {
        assert!(HoelderParams::new(1.0, 1.0).is_ok());
        assert!(HoelderParams::new(1.0, 1.5).is_err());
        assert!(HoelderParams::new(1.0, 0.0).is_err());
        assert!(HoelderParams::new(-1.0, 0.5).is_err());
    }

    #[test]
    fn default_tolerances_validate() {
        Tolerances::default().validate().unwrap();
        let bad = Tolerances { tail: 1.0, ..Tolerances::default() };
        assert!(bad.validate().is_err());
    }
}
