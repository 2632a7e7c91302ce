use thiserror::Error;

use crate::expr::{EvalError, ParseError};
use crate::jet::JetError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid frame specification: {0}")]
    InvalidSpec(String),
    #[error("expression `{source_text}`: {error}")]
    Parse {
        source_text: String,
        error: ParseError,
    },
    #[error("evaluation failed at {point:?}: {error}")]
    Eval { point: Vec<f64>, error: EvalError },
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("frame is degenerate at {point:?} (|det| = {det:e})")]
    DegenerateFrame { point: Vec<f64>, det: f64 },
    #[error("derivative order {requested} exceeds the jet budget (max order {max})")]
    OrderOverflow { requested: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(
        "k_r strictly decreases up to r = {max_order} (dims {dims:?}); raise the maximum order"
    )]
    StabilizationNotFound { max_order: usize, dims: Vec<usize> },
    #[error("point {point:?} (or its probe ball) lies outside the domain box")]
    OutsideDomain { point: Vec<f64> },
    #[error("trajectory left the domain box at t = {t} (x = {point:?})")]
    DomainExit { t: f64, point: Vec<f64> },
    #[error("not enough samples: {0}")]
    InsufficientSamples(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}
