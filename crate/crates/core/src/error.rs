// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Crate-wide error type.

use thiserror::Error;

use crate::pulse_ir::ChannelId;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input is malformed or violates a contract.
    Validation,
    /// A numerical routine failed (singular matrix, branch cut, no convergence).
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("instruction {instruction} cannot target channel {channel}")]
    ChannelMismatch {
        instruction: &'static str,
        channel: ChannelId,
    },

    #[error("overlap on {channel}: [{new_start}, {new_end}) intersects [{existing_start}, {existing_end})")]
    Overlap {
        channel: ChannelId,
        new_start: u64,
        new_end: u64,
        existing_start: u64,
        existing_end: u64,
    },

    #[error("shift by {delta} would move an entry starting at {start} before t=0")]
    NegativeStart { delta: i64, start: u64 },

    #[error("no definition for gate '{gate}' on qubits {qubits:?}")]
    MissingDefinition { gate: String, qubits: Vec<u32> },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("missing initial frequency for {0}")]
    MissingFrequency(ChannelId),

    #[error("channel {0} is not bound in the backend model")]
    UnboundChannel(ChannelId),

    #[error("invalid backend model: {0}")]
    InvalidBackend(String),

    #[error("expression error at column {column}: {message}")]
    Expression { column: usize, message: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("eigenvalue {re:.3e}{im:+.3e}i lies on the principal-log branch cut; shorten the evolution time")]
    BranchCut { re: f64, im: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Singular(_)
            | Error::BranchCut { .. }
            | Error::NoConvergence(_)
            | Error::NoRoot(_) => ErrorKind::Numeric,
            _ => ErrorKind::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
