//! Built-in data functions for the initial datum and the source term.

use num_complex::Complex64;

use crate::coefficients::profile_interpolate;
use crate::coefficients::CoefficientProfile;
use crate::error::{Error, Result};
use crate::verify::ExactField;

// Samples used to estimate a supremum on a window.
const SUP_SAMPLES: usize = 129;

/// A bounded continuous function of `x` from the built-in registry.
#[derive(Debug, Clone, PartialEq)]
pub enum DataFn {
    Zero,
    Const(Complex64),
    /// `exp(-a x^2)` with `a >= 0`.
    Gaussian { a: f64 },
    /// `sin(k x)`
    Sine { k: f64 },
    /// `1 / cosh(x)`
    Sech,
    /// Linear interpolation through `(x_i, v_i)`, extended by the end values.
    Table(Vec<(f64, Complex64)>),
}

impl DataFn {
    pub fn gaussian(a: f64) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::domain(format!("gaussian width parameter must be >= 0, got {a}")));
        }
        Ok(DataFn::Gaussian { a })
    }

    pub fn table(knots: Vec<(f64, Complex64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::domain("data table needs at least one knot"));
        }
        if knots
            .iter()
            .any(|(x, v)| !(x.is_finite() && v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::domain("data table entries must be finite"));
        }
        if knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::domain("data table abscissae must be strictly increasing"));
        }
        Ok(DataFn::Table(knots))
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            DataFn::Zero => Complex64::new(0.0, 0.0),
            DataFn::Const(c) => *c,
            DataFn::Gaussian { a } => Complex64::new((-a * x * x).exp(), 0.0),
            DataFn::Sine { k } => Complex64::new((k * x).sin(), 0.0),
            DataFn::Sech => Complex64::new(1.0 / x.cosh(), 0.0),
            DataFn::Table(knots) => profile_interpolate(knots, x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DataFn::Zero => true,
            DataFn::Const(c) => *c == Complex64::new(0.0, 0.0),
            DataFn::Table(k) => k.iter().all(|v| v.1 == Complex64::new(0.0, 0.0)),
            _ => false,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DataFn::Zero => "zero",
            DataFn::Const(_) => "const",
            DataFn::Gaussian { .. } => "gaussian",
            DataFn::Sine { .. } => "sine",
            DataFn::Sech => "sech",
            DataFn::Table(_) => "table",
        }
    }

    /// Sampled `sup |f|` on `[a, b]`.
    pub fn sampled_sup(&self, a: f64, b: f64) -> f64 {
        sampled_sup(|x| self.eval(x).norm(), a, b)
    }
}

pub(crate) fn sampled_sup(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (0..SUP_SAMPLES)
        .map(|i| f(a + (b - a) * i as f64 / (SUP_SAMPLES - 1) as f64))
        .fold(0.0, f64::max)
}

/// The source term `f(t, x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Time-independent registry function.
    Static(DataFn),
    /// `f = p(t) u_t - u_xx` for a closed-form field `u`.
    Manufactured {
        field: ExactField,
        profile: CoefficientProfile,
    },
}

impl Source {
    pub fn zero() -> Self {
        Source::Static(DataFn::Zero)
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<Complex64> {
        match self {
            Source::Static(d) => Ok(d.eval(x)),
            Source::Manufactured { field, profile } => {
                Ok(profile.eval_p(t)? * field.u_t(t, x) - field.u_xx(t, x))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Source::Static(d) => d.is_zero(),
            Source::Manufactured { field, .. } => field.is_stationary_zero(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Source::Static(d) => d.name().to_string(),
            Source::Manufactured { field, .. } => format!("mms:{}", field.name()),
        }
    }
}
