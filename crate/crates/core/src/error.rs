use thiserror::Error;

use crate::lp::LpError;
use crate::net::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {}", join(.0))]
    InvalidNetwork(Vec<Violation>),

    #[error("invalid sessions: {}", .0.join("; "))]
    InvalidSessions(Vec<String>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("window {window} is below the minimum window {minimum}")]
    WindowTooSmall { window: usize, minimum: usize },

    #[error("scheduling graph too large: more than {cap} {what} ({links} links, window {window})")]
    SchedulingGraphTooLarge {
        what: &'static str,
        cap: usize,
        links: usize,
        window: usize,
    },

    #[error("enumeration overflow: more than {cap} {what}")]
    EnumerationOverflow { what: &'static str, cap: usize },

    #[error("iteration cap of {0} exceeded")]
    IterationCapExceeded(usize),

    #[error("random network generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error(transparent)]
    Lp(#[from] LpError),
}

impl Error {
    /// Short machine-readable tag for the error variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidNetwork(_) => "invalid_network",
            Error::InvalidSessions(_) => "invalid_sessions",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::WindowTooSmall { .. } => "window_too_small",
            Error::SchedulingGraphTooLarge { .. } => "scheduling_graph_too_large",
            Error::EnumerationOverflow { .. } => "enumeration_overflow",
            Error::IterationCapExceeded(_) => "iteration_cap_exceeded",
            Error::GenerationFailed { .. } => "generation_failed",
            Error::Lp(LpError::Infeasible) => "lp_infeasible",
            Error::Lp(LpError::Unbounded) => "lp_unbounded",
            Error::Lp(_) => "lp_error",
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
