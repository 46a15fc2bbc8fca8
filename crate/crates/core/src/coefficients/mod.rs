//! The coefficient `p(t)`, its accumulated inverse integrals, and sampled
//! checks of the hypotheses placed on it.

mod conditions;
mod lemma;
mod omega;
mod profile;

pub use conditions::{check_conditions, positive_on, ConditionReport, Segment, POSITIVE_REL};
pub use lemma::{lemma_report, LemmaReport, LemmaRow, OriginRow};
pub use omega::{OmegaCache, DEFAULT_OMEGA_TOL};
pub use profile::{CoefficientProfile, DEFAULT_P_FLOOR};

pub(crate) use profile::interpolate as profile_interpolate;
