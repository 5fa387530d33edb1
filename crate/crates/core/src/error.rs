use thiserror::Error;

use crate::field::FieldError;

/// Errors raised by matrix and 3D-matrix operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimensions must be positive")]
    ZeroDimension,
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("depth mismatch: {left} layers vs {right} layers")]
    DepthMismatch { left: usize, right: usize },
    #[error("matrix is singular (determinant is zero)")]
    SingularMatrix,
    #[error("singular layer(s) {}: determinant is zero", join_indices(.0))]
    SingularLayers(Vec<usize>),
    #[error("multi-scalar is not absolutely nonzero: component {component} is zero")]
    NotAbsolutelyNonzero { component: usize },
}

fn join_indices(ks: &[usize]) -> String {
    ks.iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
