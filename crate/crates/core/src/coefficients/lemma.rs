use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::conditions::{positive_on, POSITIVE_REL};
use super::omega::OmegaCache;

// Samples used to test Re p > 0 on [tau, t].
const SEGMENT_SAMPLES: usize = 64;
// Relative slack for the algebraic identity lhs = mid.
const IDENTITY_REL: f64 = 1e-12;

/// Quantities entering the real-part estimate for the mean `H(t, tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub t: f64,
    pub tau: f64,
    pub h: Complex64,
    pub h_abs: f64,
    pub h_arg: f64,
    /// `pi/2 - |arg H|`, the largest admissible angle.
    pub delta_margin: f64,
    /// `Re int_tau^t 1/p`
    pub lhs: f64,
    /// `(t - tau) |H| cos arg H`
    pub mid: f64,
    /// `(t - tau) |H| sin delta`
    pub rhs: f64,
    /// `Re p > 0` on the whole of `[tau, t]` (sampled).
    pub interior_applicable: bool,
    /// `Re p(tau) > 0`.
    pub anchored_applicable: bool,
    pub note: Option<String>,
}

impl LemmaRow {
    pub fn identity_residual(&self) -> f64 {
        (self.lhs - self.mid).abs()
    }

    pub fn identity_holds(&self) -> bool {
        self.note.is_some() || self.identity_residual() <= IDENTITY_REL * (1.0 + (self.t - self.tau) * self.h_abs)
    }

    /// Sign of `mid - rhs`; the published estimate claims `mid <= rhs`.
    pub fn mid_minus_rhs(&self) -> f64 {
        self.mid - self.rhs
    }
}

/// Row for the origin-anchored estimate with `H_1(t) = omega(t) / t`.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginRow {
    pub t: f64,
    pub h1: Complex64,
    pub delta_margin: f64,
    /// `Re omega(t)`
    pub lhs: f64,
    /// `t |H_1| sin delta`
    pub rhs: f64,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LemmaReport {
    pub rows: Vec<LemmaRow>,
    pub origin_rows: Vec<OriginRow>,
}

impl LemmaReport {
    pub fn identities_hold(&self) -> bool {
        self.rows.iter().all(LemmaRow::identity_holds)
    }

    pub fn margins_in_range(&self) -> bool {
        let ok = |m: f64| (0.0..=FRAC_PI_2).contains(&m);
        self.rows.iter().filter(|r| r.note.is_none()).all(|r| ok(r.delta_margin))
            && self.origin_rows.iter().filter(|r| r.note.is_none()).all(|r| ok(r.delta_margin))
    }
}

fn margin(h: Complex64) -> f64 {
    FRAC_PI_2 - h.arg().abs()
}

fn inapplicable(t: f64, tau: f64, note: String) -> LemmaRow {
    LemmaRow {
        t,
        tau,
        h: Complex64::new(f64::NAN, f64::NAN),
        h_abs: f64::NAN,
        h_arg: f64::NAN,
        delta_margin: f64::NAN,
        lhs: f64::NAN,
        mid: f64::NAN,
        rhs: f64::NAN,
        interior_applicable: false,
        anchored_applicable: false,
        note: Some(note),
    }
}

/// One row per `(t, tau)` pair plus one origin row per distinct `t`.
///
/// Precondition failures are recorded per row, never raised.
pub fn lemma_report(cache: &OmegaCache, eval_points: &[(f64, f64)]) -> LemmaReport {
    let profile = cache.profile();
    let rows = eval_points
        .iter()
        .map(|&(t, tau)| {
            if !(t > tau && tau >= 0.0) {
                return inapplicable(t, tau, format!("requires t > tau >= 0, got ({t}, {tau})"));
            }
            let h = match cache.mean_h(t, tau) {
                Ok(h) => h,
                Err(e) => return inapplicable(t, tau, e.to_string()),
            };
            let span = t - tau;
            let h_abs = h.norm();
            let h_arg = h.arg();
            let delta_margin = margin(h);
            let mut note = None;
            if delta_margin < 0.0 {
                note = Some(format!("Re H < 0 (arg H = {h_arg})"));
            }
            let interior_applicable = positive_on(profile, tau, t, SEGMENT_SAMPLES);
            let anchored_applicable = profile
                .eval_p(tau)
                .is_ok_and(|p| p.re > POSITIVE_REL * p.norm());
            LemmaRow {
                t,
                tau,
                h,
                h_abs,
                h_arg,
                delta_margin,
                lhs: (h * span).re,
                mid: span * h_abs * h_arg.cos(),
                rhs: span * h_abs * delta_margin.sin(),
                interior_applicable,
                anchored_applicable,
                note,
            }
        })
        .collect();

    let mut ts: Vec<f64> = eval_points.iter().map(|p| p.0).filter(|&t| t > 0.0).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let origin_rows = ts
        .into_iter()
        .map(|t| match cache.mean_h(t, 0.0) {
            Ok(h1) => {
                let delta_margin = margin(h1);
                OriginRow {
                    t,
                    h1,
                    delta_margin,
                    lhs: (h1 * t).re,
                    rhs: t * h1.norm() * delta_margin.sin(),
                    note: (delta_margin < 0.0).then(|| "Re H_1 < 0".to_string()),
                }
            }
            Err(e) => OriginRow {
                t,
                h1: Complex64::new(f64::NAN, f64::NAN),
                delta_margin: f64::NAN,
                lhs: f64::NAN,
                rhs: f64::NAN,
                note: Some(e.to_string()),
            },
        })
        .collect();

    LemmaReport { rows, origin_rows }
}
