use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::QuadResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// `|p(t)|` fell below the nonvanishing floor.
    #[error("degenerate coefficient at t = {t}: |p(t)| = {modulus:e} below floor")]
    DegenerateCoefficient { t: f64, modulus: f64 },

    #[error("degenerate kernel: Re omega = {re:e} is not positive (omega = {omega})")]
    DegenerateKernel { omega: Complex64, re: f64 },

    /// The accumulated coefficient integral has lost its decay at the requested time.
    #[error("degenerate regime at t = {t} (tau = {tau:?}): Re omega = {re_omega:e} below rho_min = {rho_min:e}")]
    DegenerateRegime {
        t: f64,
        tau: Option<f64>,
        re_omega: f64,
        rho_min: f64,
    },

    #[error("quadrature did not converge: error estimate {:e} above tolerance {tol:e} after {} evaluations", .partial.error_estimate, .partial.evaluations)]
    NonConvergence { partial: QuadResult, tol: f64 },

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("simulation domain too small: {0}")]
    DomainTooSmall(String),

    #[error("unknown exact field `{0}`")]
    UnknownField(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("solve failed at (t = {t}, x = {x}): {source}")]
    AtPoint {
        t: f64,
        x: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Strips any `AtPoint` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            e => e,
        }
    }

    /// Short machine-readable tag used by the CLI error records.
    pub fn kind(&self) -> &'static str {
        match self.root() {
            Error::Domain(_) => "domain",
            Error::DegenerateCoefficient { .. } => "degenerate_coefficient",
            Error::DegenerateKernel { .. } => "degenerate_kernel",
            Error::DegenerateRegime { .. } => "degenerate_regime",
            Error::NonConvergence { .. } => "non_convergence",
            Error::Oracle(_) => "oracle_failure",
            Error::DomainTooSmall(_) => "domain_too_small",
            Error::UnknownField(_) => "unknown_field",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::AtPoint { .. } => unreachable!(),
        }
    }
}
