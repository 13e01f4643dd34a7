use std::path::PathBuf;

use thiserror::Error;

/// Axis of a requirement/endowment matrix, used in error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Economy,
    Activity,
    Capability,
    Time,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Axis::Economy => "economy",
            Axis::Activity => "activity",
            Axis::Capability => "capability",
            Axis::Time => "time",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch on {axis} axis: expected {expected}, found {found}")]
    DimensionMismatch {
        axis: Axis,
        expected: usize,
        found: usize,
    },

    #[error("{axis} index {index} out of range (len {len})")]
    IndexOutOfRange {
        axis: Axis,
        index: usize,
        len: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{name} = {value} outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("entries outside [0, 1]: {}", format_cells(.0))]
    CellsOutOfRange(Vec<(usize, usize, f64)>),

    #[error("quadratic has complex roots (discriminant {0})")]
    ComplexRoots(f64),

    #[error("integration left [0, 1] at t = {time}: value {value}")]
    Overshoot { time: f64, value: f64 },

    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: values outside [0, 1]: {}", .cells.join("; "))]
    DomainViolation { path: PathBuf, cells: Vec<String> },

    #[error("config: {0}")]
    Config(String),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_cells(cells: &[(usize, usize, f64)]) -> String {
    cells
        .iter()
        .map(|(row, col, v)| format!("({row}, {col}) = {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
