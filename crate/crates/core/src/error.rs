use thiserror::Error;

use crate::lp::LpStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("missing configuration key `{0}`")]
    MissingKey(String),

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("duplicate configuration key `{0}`")]
    DuplicateKey(String),

    #[error("parameter `{0}` must be positive")]
    NonPositiveParameter(String),

    #[error("malformed number for `{key}`: {value:?}")]
    MalformedNumber { key: String, value: String },

    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("expected {expected} waypoints, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("trajectory infeasible: {0}")]
    InfeasibleTrajectory(String),

    #[error("LP not solved to optimality (status {0:?})")]
    NotOptimal(LpStatus),

    #[error(
        "circle chord {chord_m:.3} m exceeds per-slot travel cap {s_max_m:.3} m{}",
        match min_slots {
            Some(n) => format!("; need at least {n} slots"),
            None => "; radius is not speed-reachable for any slot count".to_string(),
        }
    )]
    CircleChordTooLong {
        chord_m: f64,
        s_max_m: f64,
        min_slots: Option<usize>,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
}

impl Error {
    /// True for errors caused by bad user input rather than solver trouble.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::MissingKey(_)
                | Error::UnknownKey(_)
                | Error::DuplicateKey(_)
                | Error::NonPositiveParameter(_)
                | Error::MalformedNumber { .. }
                | Error::Syntax { .. }
                | Error::LengthMismatch { .. }
                | Error::InfeasibleTrajectory(_)
                | Error::CircleChordTooLong { .. }
                | Error::InvalidConfig(_)
                | Error::UnknownScheme(_)
        )
    }
}
