use thiserror::Error;

use crate::lattice::TriTriple;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("hexagon sides must be positive, got ({0}, {1}, {2})")]
    InvalidDims(i64, i64, i64),
    #[error("triangle {0} lies outside the hexagon")]
    OutOfBounds(TriTriple),
    #[error("triangle {0} listed more than once")]
    Duplicate(TriTriple),
    #[error("labels ({l2}/2, {lp2}/2, {lpp2}/2) do not bound a unit triangle of the claimed orientation: {reason}")]
    InconsistentTriple {
        l2: i64,
        lp2: i64,
        lpp2: i64,
        reason: &'static str,
    },
    #[error("region is untileable: triangle {0} has no available partner")]
    Untileable(TriTriple),
    #[error("triangle {0} is not a vertex of the graph")]
    VertexNotPresent(TriTriple),
    #[error("binomial argument {0}/2 is not an integer")]
    HalfIntegerArgument(i64),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("index ({row}, {col}) out of range for a {size}x{size} matrix")]
    IndexOutOfRange { row: usize, col: usize, size: usize },
    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("hole set is not admissibility inducing; the determinant counts signed matchings")]
    NotAdmissible,
    #[error("vertex set has {blacks} black and {whites} white vertices")]
    UnbalancedColors { blacks: usize, whites: usize },
    #[error("Kasteleyn/path determinant sign differs between pairs ({first} vs {second})")]
    SignInconsistency { first: String, second: String },
    #[error("routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}
