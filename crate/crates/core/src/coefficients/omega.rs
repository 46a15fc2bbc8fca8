use std::sync::RwLock;

use num_complex::Complex64;

use super::profile::{CoefficientProfile, DEFAULT_P_FLOOR};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_finite_with, QuadOptions};

/// Default absolute tolerance for each cached quadrature segment.
pub const DEFAULT_OMEGA_TOL: f64 = 1e-12;

// Checkpoints sit at multiples of this dyadic step.
const CHECKPOINT_STEP: f64 = 1.0 / 16.0;
const SEGMENT_MAX_PANELS: usize = 1 << 14;

/// Accumulated integrals of `1/p`: `omega(t) = int_0^t 1/p`.
///
/// Values at the checkpoints `k * step` are computed once and kept; a query
/// at `t` adds one adaptive integral over `[k * step, t]` to the nearest
/// checkpoint below. Checkpoint growth takes the write lock; everything else
/// only reads.
#[derive(Debug)]
pub struct OmegaCache {
    profile: CoefficientProfile,
    tol: f64,
    floor: f64,
    checkpoints: RwLock<Vec<Complex64>>,
}

impl Clone for OmegaCache {
    fn clone(&self) -> Self {
        OmegaCache {
            profile: self.profile.clone(),
            tol: self.tol,
            floor: self.floor,
            checkpoints: RwLock::new(self.checkpoints.read().unwrap().clone()),
        }
    }
}

impl OmegaCache {
    pub fn new(profile: CoefficientProfile) -> Self {
        Self::with_tolerance(profile, DEFAULT_OMEGA_TOL)
    }

    pub fn with_tolerance(profile: CoefficientProfile, tol: f64) -> Self {
        OmegaCache {
            profile,
            tol,
            floor: DEFAULT_P_FLOOR,
            checkpoints: RwLock::new(vec![Complex64::new(0.0, 0.0)]),
        }
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self
    }

    pub fn profile(&self) -> &CoefficientProfile {
        &self.profile
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn p_inv(&self, t: f64) -> Result<Complex64> {
        self.profile.eval_p_inv(t, self.floor)
    }

    fn segment(&self, a: f64, b: f64) -> Result<Complex64> {
        let mut failure = None;
        let r = integrate_finite_with(
            |s| match self.profile.eval_p_inv(s, self.floor) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            },
            a,
            b,
            self.tol,
            QuadOptions {
                max_panels: SEGMENT_MAX_PANELS,
            },
        );
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(r?.value)
    }

    fn checkpoint(&self, k: usize) -> Result<Complex64> {
        if let Some(v) = self.checkpoints.read().unwrap().get(k) {
            return Ok(*v);
        }
        let mut cps = self.checkpoints.write().unwrap();
        while cps.len() <= k {
            let j = cps.len();
            let a = (j - 1) as f64 * CHECKPOINT_STEP;
            let b = j as f64 * CHECKPOINT_STEP;
            let next = cps[j - 1] + self.segment(a, b)?;
            cps.push(next);
        }
        Ok(cps[k])
    }

    /// `int_0^t 1/p`.
    pub fn omega(&self, t: f64) -> Result<Complex64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("omega requested at t = {t}")));
        }
        if let CoefficientProfile::Constant(_) = self.profile {
            return Ok(self.p_inv(t)? * t);
        }
        let k = (t / CHECKPOINT_STEP).floor() as usize;
        let base = self.checkpoint(k)?;
        let start = k as f64 * CHECKPOINT_STEP;
        if t == start {
            return Ok(base);
        }
        Ok(base + self.segment(start, t)?)
    }

    /// `int_tau^t 1/p = omega(t) - omega(tau)`.
    pub fn omega0(&self, t: f64, tau: f64) -> Result<Complex64> {
        if !(tau <= t) || !(tau >= 0.0) {
            return Err(Error::domain(format!("omega0 needs 0 <= tau <= t, got t = {t}, tau = {tau}")));
        }
        if tau == t {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(self.omega(t)? - self.omega(tau)?)
    }

    /// Mean of `1/p` over `[tau, t]`; `mean_h(t, 0)` is the `H_1(t)` of the origin-anchored estimate.
    pub fn mean_h(&self, t: f64, tau: f64) -> Result<Complex64> {
        if !(t > tau) {
            return Err(Error::domain(format!("mean_h needs t > tau, got t = {t}, tau = {tau}")));
        }
        Ok(self.omega0(t, tau)? / (t - tau))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quarter_arc() -> OmegaCache {
        OmegaCache::new(CoefficientProfile::phase_arc(0.0, PI / 2.0, 0.0, 1.0).unwrap())
    }

    // closed-form antiderivative of exp(-i pi s / 2) from 0 to t
    fn arc_omega(t: f64) -> Complex64 {
        (c(1.0, 0.0) - Complex64::new(0.0, -PI * t / 2.0).exp()) * (2.0 / PI) / c(0.0, 1.0)
    }

    #[test]
    fn constant_profiles() {
        let one = OmegaCache::new(CoefficientProfile::constant(c(1.0, 0.0)).unwrap());
        assert_eq!(one.omega(2.0).unwrap(), c(2.0, 0.0));
        assert_eq!(one.omega0(3.0, 1.0).unwrap(), c(2.0, 0.0));
        let i = OmegaCache::new(CoefficientProfile::constant(c(0.0, 1.0)).unwrap());
        assert_eq!(i.omega(1.0).unwrap(), c(0.0, -1.0));
        let two = OmegaCache::new(CoefficientProfile::constant(c(2.0, 0.0)).unwrap());
        assert_eq!(two.mean_h(3.0, 1.0).unwrap(), c(0.5, 0.0));
        assert_eq!(i.mean_h(1.0, 0.0).unwrap(), c(0.0, -1.0));
    }

    #[test]
    fn arc_matches_antiderivative() {
        let cache = quarter_arc();
        let w = cache.omega(1.0).unwrap();
        assert!((w - c(2.0 / PI, -2.0 / PI)).norm() < 1e-12);
        for t in [0.0, 0.03, 0.5, 0.77, 1.0] {
            assert!((cache.omega(t).unwrap() - arc_omega(t)).norm() < 1e-12);
        }
        let d = cache.omega0(1.0, 0.5).unwrap();
        assert!((d - (arc_omega(1.0) - arc_omega(0.5))).norm() < 1e-12);
        let h = cache.mean_h(1.0, 0.0).unwrap();
        assert!((h.arg() + PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let cache = quarter_arc();
        assert!(cache.omega(-1.0).is_err());
        assert!(cache.omega0(1.0, 2.0).is_err());
        assert!(cache.mean_h(1.0, 1.0).is_err());
        assert_eq!(cache.omega0(0.7, 0.7).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn degenerate_coefficient_propagates() {
        let p = CoefficientProfile::table(vec![(0.0, c(1.0, 0.0)), (1.0, c(0.0, 0.0)), (2.0, c(1.0, 0.0))])
            .unwrap();
        let cache = OmegaCache::new(p);
        assert!(cache.omega(0.5).is_ok());
        // 1/p is not integrable across the zero knot
        assert!(cache.omega(1.5).is_err());
        let zero = OmegaCache::new(CoefficientProfile::constant(c(0.0, 0.0)).unwrap());
        assert!(matches!(zero.omega(1.0), Err(Error::DegenerateCoefficient { .. })));
    }

    #[test]
    fn clone_keeps_checkpoints() {
        let cache = quarter_arc();
        cache.omega(0.9).unwrap();
        let copy = cache.clone();
        assert_eq!(copy.omega(0.9).unwrap(), cache.omega(0.9).unwrap());
    }
}
