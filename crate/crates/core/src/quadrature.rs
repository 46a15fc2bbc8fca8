//! Adaptive integration of complex-valued integrands.
//!
//! Every panel is integrated with the 15-point Kronrod rule and its embedded
//! 7-point Gauss rule; the panel error estimate is the modulus of their
//! difference. The panel with the largest estimate is bisected until the
//! summed estimate drops below the absolute tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on the number of panels in one adaptive run.
pub const DEFAULT_MAX_PANELS: usize = 1 << 20;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_002_644_759,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the center.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
        }
    }
}

/// Tuning knobs for [`integrate_finite_with`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so runs are reproducible.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Panel
where
    F: FnMut(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += sum * WGK[j];
        if j % 2 == 1 {
            gauss += sum * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Panel { a, b, value, error }
}

/// Adaptive integral of `integrand` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate_finite<F>(integrand: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_finite_with(integrand, a, b, tol, QuadOptions::default())
}

pub fn integrate_finite_with<F>(
    mut integrand: F,
    a: f64,
    b: f64,
    tol: f64,
    opts: QuadOptions,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(QuadResult::zero());
    }

    let mut evaluations = 15;
    let first = gk15(&mut integrand, a, b);
    if !first.value.re.is_finite() || !first.value.im.is_finite() {
        return Err(Error::domain(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }

    let mut active = BinaryHeap::new();
    // Panels too narrow to split further; their error is final.
    let mut frozen: Vec<Panel> = Vec::new();
    let mut total_error = first.error;
    active.push(first);

    while total_error > tol {
        if active.len() + frozen.len() >= opts.max_panels {
            break;
        }
        let Some(worst) = active.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            frozen.push(worst);
            continue;
        }
        let left = gk15(&mut integrand, worst.a, mid);
        let right = gk15(&mut integrand, mid, worst.b);
        evaluations += 30;
        total_error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
        // Re-sum occasionally so cancellation in the running total cannot stall the loop.
        if evaluations % (30 * 1024) == 15 {
            total_error = active.iter().chain(frozen.iter()).map(|p| p.error).sum();
        }
    }

    let mut panels: Vec<Panel> = active.into_vec();
    panels.extend(frozen);
    // Sum in interval order so the result does not depend on heap layout.
    panels.sort_by(|l, r| l.a.total_cmp(&r.a));
    let value = panels.iter().map(|p| p.value).sum::<Complex64>();
    let error_estimate: f64 = panels.iter().map(|p| p.error).sum();
    let result = QuadResult {
        value,
        error_estimate,
        evaluations,
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::domain("integrand produced non-finite values"));
    }
    if error_estimate > tol {
        return Err(Error::NonConvergence {
            partial: result,
            tol,
        });
    }
    Ok(result)
}

/// Integral over `[center - radius, center + radius]`.
///
/// The two tails beyond the window are not integrated at all; the caller
/// picks `radius` (normally from [`crate::kernel::decay_radius`]) so that they
/// are below its tolerance.
pub fn integrate_line<F>(integrand: F, center: f64, radius: f64, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::domain(format!("radius must be positive, got {radius}")));
    }
    integrate_finite(integrand, center - radius, center + radius, tol)
}

/// Hölder data used to bound the near-diagonal slice of a Duhamel integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceHoelder {
    /// Hölder constant of the source in x.
    pub b: f64,
    /// Hölder exponent in (0, 1].
    pub alpha: f64,
    /// Kernel parameter accumulated over the slice, i.e. omega_0(t, t - eps).
    pub slice_omega: Complex64,
    /// Supremum of the Duhamel weight over the slice.
    pub weight_sup: f64,
}

impl SliceHoelder {
    /// Bound on `eps * sup |g(tau) - g(t - eps)|` coming from the spatial
    /// Hölder modulus of the source: each slice value differs from the weighted
    /// point value `m f(tau, x)` by at most `B * int |Q| |z|^alpha`.
    pub fn bound(&self, eps: f64) -> f64 {
        let w = self.slice_omega;
        if !(w.re > 0.0) {
            return f64::INFINITY;
        }
        let l1 = (w.norm() / w.re).sqrt();
        // |Q| is a real Gaussian with variance 2|w|^2/Re w; E|Z|^alpha <= (4|w|^2/Re w)^(alpha/2).
        let spread = 4.0 * w.norm_sqr() / w.re;
        2.0 * eps * self.weight_sup * self.b * l1 * spread.powf(0.5 * self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuhamelResult {
    /// Value and total error estimate; the estimate includes `slice_bound` when known.
    pub result: QuadResult,
    /// Bound on the near-diagonal slice error, `None` when no Hölder data was given.
    pub slice_bound: Option<f64>,
}

/// Integrates `inner` over `[0, t]`, treating `[t - eps_split, t]` as a single
/// rectangle anchored at `t - eps_split`.
pub fn integrate_duhamel<F>(
    mut inner: F,
    t: f64,
    eps_split: f64,
    tol: f64,
    hoelder: Option<SliceHoelder>,
) -> Result<DuhamelResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if !(eps_split > 0.0 && eps_split < t) {
        return Err(Error::domain(format!(
            "eps_split must lie in (0, t) = (0, {t}), got {eps_split}"
        )));
    }
    let split = t - eps_split;
    let mut failure: Option<Error> = None;
    let main = {
        let wrapped = |tau: f64| {
            if failure.is_some() {
                return Complex64::new(0.0, 0.0);
            }
            match inner(tau) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        };
        integrate_finite(wrapped, 0.0, split, tol)
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let main = main?;
    let anchor = inner(split)?;
    let slice_bound = hoelder.map(|h| h.bound(eps_split));
    let result = QuadResult {
        value: main.value + anchor * eps_split,
        error_estimate: main.error_estimate + slice_bound.unwrap_or(0.0),
        evaluations: main.evaluations + 1,
    };
    Ok(DuhamelResult {
        result,
        slice_bound,
    })
}
