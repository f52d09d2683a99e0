use thiserror::Error;

/// Failures while loading or constructing a parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("{what} {node}: declared degree {declared}, listed {listed}")]
    DegreeMismatch {
        what: &'static str,
        node: usize,
        declared: usize,
        listed: usize,
    },
    #[error("duplicate entry ({check}, {var})")]
    DuplicateEntry { check: usize, var: usize },
    #[error("variable and check adjacency lists disagree at ({check}, {var})")]
    Inconsistent { check: usize, var: usize },
    #[error("shift {shift} at block ({row}, {col}) outside 0..{z}")]
    BadShift {
        row: usize,
        col: usize,
        shift: i64,
        z: usize,
    },
    #[error("group size {group_size} does not divide {n}")]
    BadGroupSize { group_size: usize, n: usize },
    #[error("no 4-cycle-free shift assignment for column {column} after {attempts} draws")]
    ConstructionFailed { column: usize, attempts: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("bit vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("unknown code specification {0:?}")]
    UnknownSpec(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Failures raised by a decode run.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("invalid decoder configuration: {0}")]
    Config(String),
    #[error("check {check}: sorted vector emptied by removal (capacity too small for this code)")]
    EmptyVector { check: usize },
    #[error("check {check}: index {index} inserted twice")]
    DuplicateIndex { check: usize, index: u32 },
    #[error("check {check}: exact-mode vector overflow")]
    CapacityOverflow { check: usize },
    #[error("expected {expected} channel values, got {got}")]
    LengthMismatch { got: usize, expected: usize },
}

/// Failures from the simulation harness.
#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("config: {0}")]
    Config(String),
    #[error("decoder abort on frame {frame} (snr index {snr_index}, seed {seed:#018x}): {source}")]
    Decode {
        snr_index: usize,
        frame: u64,
        seed: u64,
        #[source]
        source: DecodeError,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl SimError {
    /// Process exit code for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Decode { .. } => 2,
            _ => 1,
        }
    }
}
