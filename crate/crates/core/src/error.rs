// Copyright 2026 The eapms Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The instance text could not be read into the expected shape.
    #[error("parse error: {0}")]
    Parse(String),

    /// The instance parsed but violates a model invariant.
    #[error("invalid instance: {0}")]
    Validation(String),

    /// A caller broke an operation precondition (index or dimension mismatch).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate instance: makespan {makespan} is not positive")]
    DegenerateMakespan { makespan: f64 },

    /// Some task type has no machine type with `ETC <= MS`.
    #[error("makespan candidate {ms} is infeasible: task type {task_type} fits no machine type")]
    CandidateInfeasible { ms: f64, task_type: usize },

    #[error("candidate sweep needs {required} makespan targets but the cap is {cap}; use epsilon >= {required_epsilon:.6}")]
    CandidateCap {
        required: usize,
        cap: usize,
        required_epsilon: f64,
    },

    /// No b-matching covers every task node exactly `b_i` times.
    #[error("slot graph admits no saturating b-matching: {0}")]
    MalformedSlotGraph(String),

    #[error("enumeration budget of {budget} states exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("linear program is {0}")]
    LpStatus(&'static str),

    #[error("io error: {0}")]
    Io(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
