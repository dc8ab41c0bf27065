use thiserror::Error;

/// Errors raised by the algebra and geometry routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("n = {0} is not supported (need n >= 3)")]
    InvalidRank(usize),

    #[error("block {block} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    BlockShape {
        block: &'static str,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },

    #[error("block {block} is not skew-symmetric (residual {residual:e})")]
    NotSkew { block: &'static str, residual: f64 },

    #[error("matrix does not satisfy X^T I + I X = 0 (residual {0:e})")]
    NotInAlgebra(f64),

    #[error("element is not in p (k-part norm {0:e})")]
    NotTangent(f64),

    #[error("Gram matrix is singular: basis vectors are linearly dependent")]
    SingularGram,

    #[error("element is not in {space} (residual {residual:e})")]
    NotInSubspace { space: &'static str, residual: f64 },

    #[error("vector is not of unit length (norm {0})")]
    NotUnit(f64),

    #[error("normal is not orthogonal to the subalgebra (residual {0:e})")]
    NormalNotOrthogonal(f64),

    #[error("subspace is not closed under the bracket (residual {0:e})")]
    NotSubalgebra(f64),

    #[error("normal vector is not A-isotropic (t = {0})")]
    NotIsotropic(f64),

    #[error("operators are not simultaneously diagonalizable (residual {0:e})")]
    NotCommuting(f64),

    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("radius {0} is focal: the Jacobi tensor is singular")]
    Focal(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
