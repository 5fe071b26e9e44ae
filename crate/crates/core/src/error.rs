use thiserror::Error;

/// Errors produced by graph construction, spectral solves and range computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point cloud is empty")]
    EmptyPointCloud,

    #[error("point {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },

    #[error("point {index} has dimension {found}, expected {expected}")]
    RaggedPointCloud {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("node index {index} out of range for graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("self-loop at node {0} is not allowed")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("edge ({i}, {j}) has non-positive or non-finite weight {weight}")]
    InvalidWeight { i: usize, j: usize, weight: f64 },

    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    AsymmetricAdjacency(usize, usize),

    #[error("node {0} is isolated (zero degree); the normalized Laplacian is undefined")]
    IsolatedNode(usize),

    #[error("graph is disconnected: node {unreachable} is unreachable from node {center}")]
    Disconnected { center: usize, unreachable: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("symmetric eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    EigenNoConvergence { index: usize, iterations: usize },

    #[error("supplied eigenbasis is invalid: {0}")]
    InvalidEigenbasis(String),

    #[error("index set is empty")]
    EmptyIndexSet,

    #[error("frequency index {index} out of range 1..={n} (frequency indices are 1-based)")]
    FrequencyOutOfRange { index: usize, n: usize },

    #[error("filter entry {index} = {value} lies outside [0, 1]")]
    FilterOutOfRange { index: usize, value: f64 },

    #[error("filter sup-norm is {0}, expected 1")]
    FilterSupNorm(f64),

    #[error("filter has no positive entry; cannot normalize")]
    ZeroFilter,

    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("signal is zero")]
    ZeroSignal,

    #[error("signal has a non-finite entry")]
    NonFiniteSignal,

    #[error("sigma1 = {0} >= 1: no uncertainty, the corner bound is vacuous")]
    NoUncertainty(f64),

    #[error("argument {t} outside the gamma-curve domain [{sigma1}, 1]")]
    GammaDomain { t: f64, sigma1: f64 },

    #[error("region computations need n >= 3 nodes; for n = 2 the range is only the elliptical boundary of the numerical range")]
    TwoNodeRange,

    #[error("need at least 3 angles, got {0}")]
    TooFewAngles(usize),

    #[error("angles must be strictly increasing in [0, 2pi)")]
    UnsortedAngles,

    #[error("consecutive angles {from} and {to} are at least pi apart; outer vertex is undefined")]
    AngleGapTooLarge { from: f64, to: f64 },

    #[error("threshold {s} must be smaller than the top eigenvalue {top}")]
    ThresholdTooLarge { s: f64, top: f64 },

    #[error("pair kind `{0}` needs explicit filter values")]
    ExplicitFiltersRequired(&'static str),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Coarse error classes, used by the command line front end to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::EigenNoConvergence { .. } | Error::NoUncertainty(_) => ErrorClass::Numerical,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
