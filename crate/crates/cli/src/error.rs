use degenheat_core::Error as CoreError;
use thiserror::Error;

/// Failures of a CLI run, grouped by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{key}: {message}")]
    Parse { key: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Numeric(#[from] CoreError),
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Parse { .. } | CliError::Usage(_) | CliError::Io(_) => EXIT_INPUT,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Numeric(e) => e.kind(),
        }
    }

    /// One-line JSON object describing the failure.
    pub fn record(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("error".into(), self.kind().into());
        obj.insert("exit".into(), self.exit_code().into());
        match self {
            CliError::Parse { key, .. } => {
                obj.insert("key".into(), key.as_str().into());
            }
            CliError::Numeric(e) => {
                if let CoreError::AtPoint { t, x, .. } = e {
                    obj.insert("t".into(), (*t).into());
                    obj.insert("x".into(), (*x).into());
                }
                match e.root() {
                    CoreError::DegenerateRegime { t, tau, re_omega, .. } => {
                        obj.insert("t".into(), (*t).into());
                        if let Some(tau) = tau {
                            obj.insert("tau".into(), (*tau).into());
                        }
                        obj.insert("re_omega".into(), (*re_omega).into());
                    }
                    CoreError::DegenerateCoefficient { t, .. } => {
                        obj.insert("t".into(), (*t).into());
                    }
                    _ => {}
                }
            }
            _ => {}
        }
        obj.insert("message".into(), self.to_string().into());
        serde_json::Value::Object(obj).to_string()
    }
}
