use thiserror::Error;

use crate::complex::Cell;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("facet {index} is empty")]
    EmptyFacet { index: usize },
    #[error("facet {index} repeats vertex {vertex}")]
    DuplicateVertex { index: usize, vertex: u32 },
    #[error("complex has no cells")]
    EmptyComplex,
    #[error("dimension {dim} out of range (complex has dimension {max})")]
    DimensionOutOfRange { dim: usize, max: usize },
    #[error("cell {0} is not in the complex")]
    UnknownCell(Cell),
    #[error("invalid matching: {0}")]
    InvalidMatching(#[from] crate::hasse::MatchingViolation),
    #[error("matching is not a Morse matching")]
    NotMorse,
    #[error("cell {0} is not critical")]
    NotCritical(Cell),
    #[error("edge ({0}, {1}) is not in the matching")]
    EdgeNotInMatching(Cell, Cell),
    #[error("cells {0} and {1} do not have consecutive dimensions")]
    DimensionMismatch(Cell, Cell),
    #[error("boundary composition d{dim} o d{} is nonzero", dim + 1)]
    BoundarySquareNonzero { dim: usize },
    #[error("chain has length {got}, expected {expected}")]
    ChainLength { got: usize, expected: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("basis label {0} not found in dimension {1}")]
    UnknownLabel(Cell, usize),
    #[error("invalid V-path: {0}")]
    InvalidPath(String),
    #[error("matching is not complete: {0} cell(s) unmatched")]
    IncompleteMatching(usize),
    #[error("reroute conflict: {0}")]
    RerouteConflict(String),
    #[error("segment ({0}, {1}) does not join comparable cells")]
    NotASubdivisionEdge(Cell, Cell),
    #[error("Euler chains have different boundaries")]
    BoundaryMismatch,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
