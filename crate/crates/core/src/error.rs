use thiserror::Error;

use crate::model::Violation;

/// Errors raised while parsing, compiling or cross-referencing problem data.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("shift index {shift} outside 1..={num_shifts}")]
    ShiftOutOfRange { shift: usize, num_shifts: usize },
    #[error("calendar needs at least one day")]
    EmptyCalendar,
    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("instance is malformed ({} violation(s)); first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    Invalid(Vec<Violation>),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Errors raised by the solvers (heuristic, oracle, roster, generator).
#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("day {day} is infeasible: {reason}")]
    Infeasible { day: usize, reason: String },
    #[error("solution is infeasible ({0} hard-constraint violation(s))")]
    InfeasibleSolution(usize),
    #[error("search budget of {limit} nodes exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("roster infeasible: shift {shift} cannot get enough nurses of skill >= {level}")]
    RosterInfeasible { shift: usize, level: u8 },
    #[error("model and solution disagree: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Config(String),
}
