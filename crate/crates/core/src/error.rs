use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial is not monic with degree >= 1: {0}")]
    NotMonic(String),
    #[error("not a Pisot number: root {root} {reason}")]
    NotPisot { root: String, reason: String },
    #[error("polynomial is reducible: factor {factor}")]
    Reducible { factor: String },
    #[error("precision exhausted at {cap} bits: {what}")]
    PrecisionExhausted { what: String, cap: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("duplicate edge {from} -> {to} labelled {label}")]
    DuplicateEdge {
        from: String,
        to: String,
        label: i64,
    },
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("label {0} is not in the alphabet")]
    LabelOutsideAlphabet(i64),
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("automaton is not primitive")]
    NotPrimitive,
    #[error("automaton is not strongly connected")]
    NotStronglyConnected,
    #[error("initial state set is empty")]
    EmptyInitialSet,
    #[error("state {0:?} has no outgoing edge")]
    DeadState(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted { .. } => 3,
            Error::CapExceeded { .. } => 1,
            _ => 2,
        }
    }
}
