use alloc::string::String;

/// Errors raised by the spectral toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid interval ({a}, {b}): need finite a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("positivity: {side} weight {value} is below the floor {floor:e}")]
    WeightNotPositive {
        side: &'static str,
        value: f64,
        floor: f64,
    },

    #[error("unsupported combo: {0}")]
    UnsupportedCombo(String),

    #[error("at least one mode is required")]
    EmptyRequest,

    #[error("mode index {index} out of range {first}..={last}")]
    IndexOutOfRange {
        index: usize,
        first: usize,
        last: usize,
    },

    #[error("point {x} lies outside [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("secular equation: root finder did not converge on branch {branch} after {iterations} bisections")]
    RootNotConverged { branch: usize, iterations: usize },

    #[error("frontier exhausted: factor {factor} needs at least {required} modes, has {available}")]
    FrontierExhausted {
        factor: u8,
        required: usize,
        available: usize,
    },

    #[error("matrix is not positive definite (pivot {pivot} = {value})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("dirichlet elimination leaves no unknowns")]
    NoUnknowns,

    #[error("mesh needs at least 2 elements per direction, got {0}")]
    MeshTooCoarse(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("requested {requested} eigenpairs from a problem of order {order}")]
    TooManyEigenpairs { requested: usize, order: usize },

    #[error("singular shift at pair ({j}, {k}): lambda + mu = {denominator}")]
    SingularShift { j: usize, k: usize, denominator: f64 },

    #[error("right-hand side has a component {coefficient} on the skipped zero mode")]
    IncompatibleRhs { coefficient: f64 },

    #[error("unsupported inner product: {0}")]
    UnsupportedInnerProduct(String),

    #[error("unsupported hypothesis: {0}")]
    UnsupportedHypothesis(String),

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("invalid quadrature order {0}")]
    InvalidQuadratureOrder(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
