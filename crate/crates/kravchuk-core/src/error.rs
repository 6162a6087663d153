//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid size N = {0}: N must be an even integer >= 2")]
    InvalidGridSize(usize),

    #[error("grid mismatch: N = {0} vs N = {1}")]
    GridMismatch(usize, usize),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("value length {len} does not match grid size {expected}")]
    LengthMismatch { len: usize, expected: usize },

    #[error("non-finite value {value} at node a = {node} (k = {index})")]
    NonFinite { value: f64, node: f64, index: usize },

    #[error(
        "basis construction failed: Gram residual {residual:.3e} at (n, m) = ({n}, {m}) exceeds {limit:.1e}"
    )]
    GramResidual { n: usize, m: usize, residual: f64, limit: f64 },

    #[error("transform construction failed: unitarity residual {0:.3e}")]
    UnitarityResidual(f64),

    #[error("matrix exponential produced non-finite entries")]
    NonFiniteMatrix,

    #[error("coefficient vector length {len} exceeds grid capacity {max}")]
    TooManyCoefficients { len: usize, max: usize },

    #[error(
        "quadrature expansion of `{name}` did not converge: |c_{n}| = {tail:.3e} above 1e-12"
    )]
    QuadratureTail { name: String, n: usize, tail: f64 },

    #[error("unknown test function `{0}`")]
    UnknownTestFunction(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
