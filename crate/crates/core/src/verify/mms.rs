use num_complex::Complex64;

use crate::coefficients::CoefficientProfile;
use crate::error::{Error, Result};
use crate::solver::{DataFn, Source};

/// Closed-form fields with known `u_t` and `u_xx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactField {
    /// `u = c`
    Constant(Complex64),
    /// `u = t exp(-x^2)`
    TGauss,
    /// `u = exp(-t) sin x`
    DecaySine,
    /// `u = (1 + 4t)^(-1/2) exp(-x^2 / (1 + 4t))`
    HeatGauss,
}

impl ExactField {
    /// Registry lookup; constants are written `const` or `const:re,im`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "t_gauss" => Ok(ExactField::TGauss),
            "decay_sine" => Ok(ExactField::DecaySine),
            "heat_gauss" => Ok(ExactField::HeatGauss),
            "const" => Ok(ExactField::Constant(Complex64::new(1.0, 0.0))),
            _ => {
                if let Some(rest) = name.strip_prefix("const:") {
                    let mut parts = rest.split(',').map(|s| s.trim().parse::<f64>());
                    if let (Some(Ok(re)), im, None) = (parts.next(), parts.next(), parts.next()) {
                        let im = match im {
                            None => 0.0,
                            Some(Ok(v)) => v,
                            Some(Err(_)) => return Err(Error::UnknownField(name.to_string())),
                        };
                        return Ok(ExactField::Constant(Complex64::new(re, im)));
                    }
                }
                Err(Error::UnknownField(name.to_string()))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            ExactField::Constant(c) if *c == Complex64::new(1.0, 0.0) => "const".to_string(),
            ExactField::Constant(c) => format!("const:{},{}", c.re, c.im),
            ExactField::TGauss => "t_gauss".to_string(),
            ExactField::DecaySine => "decay_sine".to_string(),
            ExactField::HeatGauss => "heat_gauss".to_string(),
        }
    }

    pub fn u(&self, t: f64, x: f64) -> Complex64 {
        let r = match self {
            ExactField::Constant(c) => return *c,
            ExactField::TGauss => t * (-x * x).exp(),
            ExactField::DecaySine => (-t).exp() * x.sin(),
            ExactField::HeatGauss => {
                let s = 1.0 + 4.0 * t;
                (-x * x / s).exp() / s.sqrt()
            }
        };
        Complex64::new(r, 0.0)
    }

    pub fn u_t(&self, t: f64, x: f64) -> Complex64 {
        let r = match self {
            ExactField::Constant(_) => 0.0,
            ExactField::TGauss => (-x * x).exp(),
            ExactField::DecaySine => -(-t).exp() * x.sin(),
            ExactField::HeatGauss => {
                let s = 1.0 + 4.0 * t;
                // d/dt of s^{-1/2} e^{-x^2/s} with ds/dt = 4
                (-x * x / s).exp() * s.powf(-1.5) * (4.0 * x * x / s - 2.0)
            }
        };
        Complex64::new(r, 0.0)
    }

    pub fn u_xx(&self, t: f64, x: f64) -> Complex64 {
        let r = match self {
            ExactField::Constant(_) => 0.0,
            ExactField::TGauss => t * (-x * x).exp() * (4.0 * x * x - 2.0),
            ExactField::DecaySine => -(-t).exp() * x.sin(),
            ExactField::HeatGauss => {
                let s = 1.0 + 4.0 * t;
                (-x * x / s).exp() / s.sqrt() * (4.0 * x * x / (s * s) - 2.0 / s)
            }
        };
        Complex64::new(r, 0.0)
    }

    /// `u(0, .)` as a registry data function.
    pub fn initial(&self) -> DataFn {
        match self {
            ExactField::Constant(c) => DataFn::Const(*c),
            ExactField::TGauss => DataFn::Zero,
            ExactField::DecaySine => DataFn::Sine { k: 1.0 },
            ExactField::HeatGauss => DataFn::Gaussian { a: 1.0 },
        }
    }

    /// True when the manufactured source vanishes for every coefficient.
    pub(crate) fn is_stationary_zero(&self) -> bool {
        matches!(self, ExactField::Constant(_))
    }
}

/// Source and initial datum that make `field` an exact solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Manufactured {
    pub field: ExactField,
    pub source: Source,
    pub phi: DataFn,
}

/// `f = p u_t - u_xx` and `phi = u(0, .)` for a registry field.
pub fn mms_source(field_name: &str, coefficient: &CoefficientProfile) -> Result<Manufactured> {
    let field = ExactField::from_name(field_name)?;
    Ok(manufacture(field, coefficient))
}

pub fn manufacture(field: ExactField, coefficient: &CoefficientProfile) -> Manufactured {
    Manufactured {
        field,
        source: Source::Manufactured {
            field,
            profile: coefficient.clone(),
        },
        phi: field.initial(),
    }
}
