//! Complex Gaussian kernel `Q(omega, z) = exp(-z^2 / (4 omega)) / (2 sqrt(pi omega))`.
//!
//! `omega` is either the accumulated integral of `1/p` from 0 to `t` (initial
//! datum term) or from `tau` to `t` (source term). The square root is the
//! principal branch, which is continuous on `Re omega > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default floor on `Re omega` below which quadrature refuses to run.
pub const DEFAULT_RHO_MIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArg {
    pub omega: Complex64,
    /// Spatial offset `y - x`.
    pub z: f64,
}

/// Kernel with the per-omega work done once, for use inside quadrature loops.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    omega: Complex64,
    // -1/(4 omega)
    exponent_scale: Complex64,
    // -ln(2 sqrt(pi omega))
    log_prefactor: Complex64,
}

impl Kernel {
    pub fn new(omega: Complex64) -> Result<Self> {
        check_admissible(omega)?;
        let exponent_scale = -0.25 * omega.inv();
        let log_prefactor = -(Complex64::new((2.0 * PI.sqrt()).ln(), 0.0) + 0.5 * omega.ln());
        Ok(Kernel {
            omega,
            exponent_scale,
            log_prefactor,
        })
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    #[inline]
    pub fn eval(&self, z: f64) -> Complex64 {
        (self.exponent_scale * (z * z) + self.log_prefactor).exp()
    }

    /// `|Q(omega, z)|`, a real Gaussian in `z`.
    #[inline]
    pub fn modulus(&self, z: f64) -> f64 {
        (self.exponent_scale.re * z * z + self.log_prefactor.re).exp()
    }

    /// Analytic L1 norm `sqrt(|omega| / Re omega)`.
    pub fn l1_norm(&self) -> f64 {
        (self.omega.norm() / self.omega.re).sqrt()
    }

    pub fn decay_radius(&self, tol: f64) -> Result<f64> {
        decay_radius(self.omega, tol)
    }
}

fn check_admissible(omega: Complex64) -> Result<()> {
    if omega.re > 0.0 && omega.re.is_finite() && omega.im.is_finite() {
        Ok(())
    } else {
        Err(Error::DegenerateKernel {
            omega,
            re: omega.re,
        })
    }
}

pub fn kernel_eval(arg: KernelArg) -> Result<Complex64> {
    Ok(Kernel::new(arg.omega)?.eval(arg.z))
}

/// `int_R Q(omega, z) dz`, which is 1 on the whole half-plane `Re omega > 0`.
pub fn kernel_mass(omega: Complex64) -> Result<Complex64> {
    check_admissible(omega)?;
    Ok(Complex64::new(1.0, 0.0))
}

/// Radius beyond which the Gaussian factor `|exp(-z^2/(4 omega))|` stays below `tol`.
pub fn decay_radius(omega: Complex64, tol: f64) -> Result<f64> {
    check_admissible(omega)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::domain(format!("decay tolerance must lie in (0, 1), got {tol}")));
    }
    Ok((4.0 * omega.norm_sqr() * (1.0 / tol).ln() / omega.re).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_line;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_values() {
        let v = kernel_eval(KernelArg { omega: c(1.0, 0.0), z: 0.0 }).unwrap();
        assert!((v - c(0.282_094_791_773_878_14, 0.0)).norm() < 1e-15);
        let v = kernel_eval(KernelArg { omega: c(0.25, 0.0), z: 1.0 }).unwrap();
        assert!((v - c(0.207_553_748_710_297_8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn far_tail_is_quiet_zero() {
        let v = kernel_eval(KernelArg { omega: c(1.0, 0.0), z: 100.0 }).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
        assert!(v.norm() <= 1e-300);
        let v = kernel_eval(KernelArg { omega: c(0.01, 1.0), z: 1e4 }).unwrap();
        assert!(v.norm() == 0.0);
    }

    #[test]
    fn principal_branch_prefactor() {
        // For omega = i the kernel at z = 0 is 1/(2 sqrt(pi) e^{i pi/4}).
        let v = kernel_eval(KernelArg { omega: c(1e-300, 1.0), z: 0.0 }).unwrap();
        let expected = Complex64::from_polar(1.0 / (2.0 * PI.sqrt()), -PI / 4.0);
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn inadmissible_omega() {
        for w in [c(-1.0, 0.0), c(0.0, 1.0), c(f64::NAN, 0.0)] {
            assert!(matches!(Kernel::new(w), Err(Error::DegenerateKernel { .. })));
            assert!(kernel_mass(w).is_err());
            assert!(decay_radius(w, 0.5).is_err());
        }
        assert_eq!(kernel_mass(c(0.3, 0.4)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn decay_radius_values() {
        let r = decay_radius(c(1.0, 0.0), (-25.0f64).exp()).unwrap();
        assert!((r - 10.0).abs() < 1e-12);
        assert!(decay_radius(c(1.0, 0.0), 1.0 - 1e-15).unwrap() < 1e-6);
        assert!(decay_radius(c(1.0, 0.0), 1.0).is_err());
        // fixed Re omega, growing |omega|
        let mut last = 0.0;
        for s in [1.0, 2.0, 4.0, 8.0] {
            let r = decay_radius(c(1.0, s), 1e-10).unwrap();
            assert!(r > last);
            last = r;
        }
    }

    #[test]
    fn gaussian_factor_below_tol_outside_radius() {
        let w = c(0.3, -0.7);
        let tol = 1e-9;
        let k = Kernel::new(w).unwrap();
        let r = k.decay_radius(tol).unwrap();
        let gauss = |z: f64| (k.exponent_scale * (z * z)).exp().norm();
        assert!(gauss(r) <= tol * (1.0 + 1e-12));
        assert!(gauss(1.5 * r) < tol);
        assert!(gauss(0.9 * r) > tol);
    }

    #[test]
    fn symmetric_in_z() {
        let k = Kernel::new(c(0.2, 0.9)).unwrap();
        for z in [0.1, 0.7, 3.3, 12.0] {
            assert_eq!(k.eval(z), k.eval(-z));
        }
    }

    #[test]
    fn numerical_mass_and_l1() {
        for w in [c(1.0, 0.0), c(0.3, 0.4), c(2.0, -1.5)] {
            let k = Kernel::new(w).unwrap();
            let r = k.decay_radius(1e-16).unwrap();
            let mass = integrate_line(|z| k.eval(z), 0.0, r, 1e-12).unwrap();
            assert!((mass.value - c(1.0, 0.0)).norm() < 1e-10, "{w}: {:?}", mass);
            let l1 = integrate_line(|z| c(k.modulus(z), 0.0), 0.0, r, 1e-12).unwrap();
            assert!((l1.value.re - k.l1_norm()).abs() < 1e-8);
        }
    }
}
