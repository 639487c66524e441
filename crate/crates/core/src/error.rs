use thiserror::Error;

use crate::state::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid state: {}", join_violations(.0))]
    InvalidState(Vec<Violation>),

    #[error("qubit {qubit} is outside 1..={n}")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("{n} qubits exceeds the limit of {limit} (set PCG_MAX_QUBITS to override)")]
    TooManyQubits { n: usize, limit: usize },

    #[error("expected a sign of 1 or -1, got {0}")]
    BadSign(i64),

    #[error("outcome has {got} qubits, state has {expected}")]
    OutcomeLength { expected: usize, got: usize },

    #[error("conditioning event has probability zero")]
    ZeroProbability,

    #[error("edge {edge} overlaps the conditioning qubits")]
    EdgeOverlapsConditioning { edge: String },

    #[error("bipartition must be a nonempty proper subset of the register")]
    TrivialBipartition,

    #[error("invalid PCG: {0}")]
    InvalidPcg(String),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("family {family} does not accept parameter {param:?}: {reason}")]
    FamilyParameter {
        family: &'static str,
        param: Option<usize>,
        reason: &'static str,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("worker pool: {0}")]
    Pool(String),
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
