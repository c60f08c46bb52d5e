use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// Offered load meets or exceeds controller capacity; the queue never drains.
    #[error("UNSTABLE: offered load {offered_load} >= controller capacity {capacity}")]
    Unstable { offered_load: f64, capacity: f64 },

    /// The BBU compute budget is below the antenna/resource-block overhead floor.
    #[error("INFEASIBLE_RATE: compute budget yields a negative data rate ({raw} bit/s)")]
    InfeasibleRate { raw: f64 },

    /// Transmission alone takes as long as the deadline.
    #[error("INFEASIBLE_DEADLINE: transmission time {transmission} s >= deadline {deadline} s")]
    InfeasibleDeadline { deadline: f64, transmission: f64 },

    /// No point in the planner's search interval meets the deadline.
    #[error("INFEASIBLE: {0}")]
    Infeasible(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid sweep spec: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Sentinel name for outcomes that are model infeasibilities rather than
    /// usage mistakes.
    pub fn sentinel(&self) -> Option<&'static str> {
        match self {
            Error::Unstable { .. } => Some("UNSTABLE"),
            Error::InfeasibleRate { .. } => Some("INFEASIBLE_RATE"),
            Error::InfeasibleDeadline { .. } => Some("INFEASIBLE_DEADLINE"),
            Error::Infeasible(_) => Some("INFEASIBLE"),
            _ => None,
        }
    }
}
