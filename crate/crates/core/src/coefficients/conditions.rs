use num_complex::Complex64;

use super::omega::OmegaCache;
use super::profile::{CoefficientProfile, DEFAULT_P_FLOOR};

/// `Re p` counts as positive when it exceeds this fraction of `|p|`.
pub const POSITIVE_REL: f64 = 1e-12;

// Bisection depth used to localize sign changes and jumps.
const BISECTIONS: usize = 60;
// A jump that survives BISECTIONS halvings above this size is a discontinuity.
const JUMP_REL: f64 = 1e-6;

/// Maximal interval on which `Re p > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
}

/// Sampled verdicts on the hypotheses imposed on `p`.
///
/// Every verdict comes from finitely many samples (uniform grid, profile
/// breakpoints, and bisection refinement near sign changes of `Re p`); the
/// report records how many were used.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub t_max: f64,
    pub requested_samples: usize,
    pub evaluated_samples: usize,
    pub sampling_based: bool,

    pub continuous_ok: bool,
    /// Largest jump left after bisecting each sample interval, with its location.
    pub residual_jump: f64,
    pub residual_jump_t: f64,

    pub nonvanishing_ok: bool,
    pub min_modulus: f64,
    pub min_modulus_t: f64,

    pub repart_ok: bool,
    pub min_re_p: f64,
    pub min_re_p_t: f64,
    pub re_p0: f64,

    /// `max(0, sup_t int_0^t Im(1/p))`; `None` when the running integral could not be formed.
    pub p0_estimate: Option<f64>,
    pub im_integral_sup: Option<f64>,
    pub im_integral_inf: Option<f64>,

    pub positive_segments: Vec<Segment>,
}

impl ConditionReport {
    pub fn p0_ok(&self) -> bool {
        self.p0_estimate.is_some_and(f64::is_finite)
    }

    pub fn passes(&self) -> bool {
        self.continuous_ok && self.nonvanishing_ok && self.repart_ok && self.p0_ok()
    }
}

fn is_positive(p: Complex64) -> bool {
    p.re > POSITIVE_REL * p.norm()
}

/// Samples `p` on `[0, t_max]` and evaluates the four coefficient hypotheses.
pub fn check_conditions(profile: &CoefficientProfile, t_max: f64, samples: usize) -> ConditionReport {
    let samples = samples.max(2);
    let eval = |t: f64| profile.eval_p(t).ok();

    let mut times: Vec<f64> = (0..samples)
        .map(|i| t_max * i as f64 / (samples - 1) as f64)
        .collect();
    times.extend(profile.breakpoints().into_iter().filter(|&b| b > 0.0 && b < t_max));
    times.sort_by(f64::total_cmp);
    times.dedup();

    // Continuity: bisect toward the larger half-jump; a continuous profile drives the jump to zero.
    let mut continuous_ok = true;
    let mut residual_jump = 0.0f64;
    let mut residual_jump_t = 0.0;
    for w in times.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (Some(mut pa), Some(mut pb)) = (eval(a), eval(b)) else {
            continuous_ok = false;
            residual_jump = f64::INFINITY;
            residual_jump_t = if eval(a).is_none() { a } else { b };
            continue;
        };
        let scale = 1.0 + pa.norm().max(pb.norm());
        let Some(p_mid) = eval(0.5 * (a + b)) else {
            continuous_ok = false;
            residual_jump = f64::INFINITY;
            residual_jump_t = 0.5 * (a + b);
            continue;
        };
        if (p_mid - pa).norm().max((pb - p_mid).norm()) <= JUMP_REL * scale {
            continue;
        }
        for _ in 0..BISECTIONS {
            let m = 0.5 * (a + b);
            let Some(pm) = eval(m) else {
                continuous_ok = false;
                break;
            };
            if (pm - pa).norm() >= (pb - pm).norm() {
                b = m;
                pb = pm;
            } else {
                a = m;
                pa = pm;
            }
        }
        let jump = (pb - pa).norm();
        if jump > residual_jump {
            residual_jump = jump;
            residual_jump_t = 0.5 * (a + b);
        }
        if jump > JUMP_REL * scale {
            continuous_ok = false;
        }
    }

    // Positive-real-part segments: localize every sign change of the positivity predicate.
    let mut refined = Vec::with_capacity(times.len());
    for w in times.windows(2) {
        refined.push(w[0]);
        let (a, b) = (w[0], w[1]);
        let (Some(pa), Some(pb)) = (eval(a), eval(b)) else { continue };
        let pos_a = is_positive(pa);
        if pos_a == is_positive(pb) {
            continue;
        }
        let (mut lo, mut hi) = (a, b);
        for _ in 0..BISECTIONS {
            let m = 0.5 * (lo + hi);
            if m <= lo || m >= hi {
                break;
            }
            match eval(m) {
                Some(pm) if is_positive(pm) == pos_a => lo = m,
                _ => hi = m,
            }
        }
        refined.push(lo);
        refined.push(hi);
    }
    refined.push(*times.last().unwrap());
    refined.dedup();

    let values: Vec<(f64, Option<Complex64>)> = refined.iter().map(|&t| (t, eval(t))).collect();

    let mut positive_segments = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for &(t, p) in &values {
        match (p.is_some_and(is_positive), open) {
            (true, None) => open = Some((t, t)),
            (true, Some((s, _))) => open = Some((s, t)),
            (false, Some((s, e))) => {
                if s < e {
                    positive_segments.push(Segment { start: s, end: e });
                }
                open = None;
            }
            (false, None) => {}
        }
    }
    if let Some((s, e)) = open {
        if s < e {
            positive_segments.push(Segment { start: s, end: e });
        }
    }

    // Nonvanishing modulus and nonnegative real part
    let mut min_modulus = f64::INFINITY;
    let mut min_modulus_t = 0.0;
    let mut min_re_p = f64::INFINITY;
    let mut min_re_p_t = 0.0;
    let mut re_ok = true;
    for &(t, p) in &values {
        let Some(p) = p else {
            re_ok = false;
            continue;
        };
        if p.norm() < min_modulus {
            min_modulus = p.norm();
            min_modulus_t = t;
        }
        if p.re < min_re_p {
            min_re_p = p.re;
            min_re_p_t = t;
        }
        if p.re < -POSITIVE_REL * p.norm() {
            re_ok = false;
        }
    }
    let p_at_zero = eval(0.0);
    let re_p0 = p_at_zero.map_or(f64::NAN, |p| p.re);
    let nonvanishing_ok = values.iter().all(|v| v.1.is_some()) && min_modulus >= DEFAULT_P_FLOOR;
    let repart_ok = re_ok && p_at_zero.is_some_and(is_positive);

    // Bounded imaginary drift: running integral of Im(1/p) at every sample.
    let (mut p0_estimate, mut im_integral_sup, mut im_integral_inf) = (None, None, None);
    if nonvanishing_ok {
        let cache = OmegaCache::new(profile.clone());
        let ims: Option<Vec<f64>> = values.iter().map(|&(t, _)| cache.omega(t).ok().map(|w| w.im)).collect();
        if let Some(ims) = ims {
            let sup = ims.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let inf = ims.iter().copied().fold(f64::INFINITY, f64::min);
            p0_estimate = Some(sup.max(0.0));
            im_integral_sup = Some(sup);
            im_integral_inf = Some(inf);
        }
    }

    ConditionReport {
        t_max,
        requested_samples: samples,
        evaluated_samples: values.len(),
        sampling_based: true,
        continuous_ok,
        residual_jump,
        residual_jump_t,
        nonvanishing_ok,
        min_modulus,
        min_modulus_t,
        repart_ok,
        min_re_p,
        min_re_p_t,
        re_p0,
        p0_estimate,
        im_integral_sup,
        im_integral_inf,
        positive_segments,
    }
}

/// Sampled test of `Re p > 0` on all of `[a, b]`.
pub fn positive_on(profile: &CoefficientProfile, a: f64, b: f64, samples: usize) -> bool {
    let samples = samples.max(2);
    let mut times: Vec<f64> = (0..samples)
        .map(|i| a + (b - a) * i as f64 / (samples - 1) as f64)
        .collect();
    times.extend(profile.breakpoints().into_iter().filter(|&s| s > a && s < b));
    times
        .into_iter()
        .all(|t| profile.eval_p(t).is_ok_and(is_positive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_constant_passes() {
        let r = check_conditions(&CoefficientProfile::constant(c(1.0, 0.0)).unwrap(), 3.0, 16);
        assert!(r.passes());
        assert_eq!(r.p0_estimate, Some(0.0));
        assert_eq!(r.positive_segments, vec![Segment { start: 0.0, end: 3.0 }]);
        assert!(r.sampling_based);
    }

    #[test]
    fn imaginary_constant_fails_repart_at_zero() {
        let r = check_conditions(&CoefficientProfile::constant(c(0.0, 1.0)).unwrap(), 3.0, 16);
        assert!(!r.repart_ok);
        assert!(r.nonvanishing_ok && r.continuous_ok);
        assert_eq!(r.re_p0, 0.0);
        assert!(r.positive_segments.is_empty());
        // Im(1/i) = -1, so the running integral never exceeds 0
        assert_eq!(r.p0_estimate, Some(0.0));
        assert!((r.im_integral_inf.unwrap() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn phase_arc_segment_ends_at_ramp_end() {
        let p = CoefficientProfile::phase_arc(0.0, PI / 2.0, 1.0, 2.0).unwrap();
        let r = check_conditions(&p, 3.0, 31);
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.p0_estimate, Some(0.0));
        assert_eq!(r.positive_segments.len(), 1);
        let seg = r.positive_segments[0];
        assert_eq!(seg.start, 0.0);
        assert!((seg.end - 2.0).abs() < 1e-9, "{seg:?}");
        assert!(seg.end < 2.0);
    }

    #[test]
    fn zero_knot_is_found() {
        let p = CoefficientProfile::table(vec![(0.0, c(1.0, 0.0)), (1.234, c(0.0, 0.0)), (2.0, c(1.0, 0.0))])
            .unwrap();
        let r = check_conditions(&p, 2.0, 5);
        assert!(!r.nonvanishing_ok);
        assert_eq!(r.min_modulus, 0.0);
        assert_eq!(r.min_modulus_t, 1.234);
        assert_eq!(r.p0_estimate, None);
        assert!(!r.passes());
    }

    #[test]
    fn pole_breaks_continuity() {
        // 1 / (t - 0.5)^2; with 8 samples the pole sits midway between two equal values
        let p = CoefficientProfile::rational(vec![1.0], vec![0.25, -1.0, 1.0]).unwrap();
        let r = check_conditions(&p, 1.0, 8);
        assert!(!r.continuous_ok);
        let r = check_conditions(&p, 1.0, 9);
        assert!(!r.continuous_ok);
    }

    #[test]
    fn negative_real_part_detected() {
        let p = CoefficientProfile::phase_arc(0.0, PI, 1.0, 2.0).unwrap();
        let r = check_conditions(&p, 3.0, 16);
        assert!(!r.repart_ok);
        assert!(r.min_re_p < -0.99);
        assert!((r.positive_segments[0].end - 1.5).abs() < 1e-9);
    }

    #[test]
    fn dip_into_negative_imag_reports_positive_p0() {
        // p = 1 - i on [0, 1]: Im(1/p) = 1/2
        let p = CoefficientProfile::constant(c(1.0, -1.0)).unwrap();
        let r = check_conditions(&p, 2.0, 9);
        assert!((r.p0_estimate.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn positive_on_interval() {
        let p = CoefficientProfile::phase_arc(0.0, PI / 2.0, 1.0, 2.0).unwrap();
        assert!(positive_on(&p, 0.0, 1.9, 32));
        assert!(!positive_on(&p, 0.0, 2.5, 32));
    }
}
