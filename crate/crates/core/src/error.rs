use thiserror::Error;

use crate::config::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {name} {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("invalid configuration ({} violation(s)): {}", .0.len(), join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error(
        "particle-step budget exceeded: {required} particle-steps required, ceiling is {ceiling} \
         (limiting parameter: {limiting})"
    )]
    BudgetExceeded {
        required: u128,
        ceiling: u128,
        limiting: &'static str,
    },

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("csv error at line {line}: {reason}")]
    Csv { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
