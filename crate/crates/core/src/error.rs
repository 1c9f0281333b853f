use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::cover::CoverError;
use crate::decompose::DecomposeError;
use crate::graph::{DecompositionError, GraphError};
use crate::matrix::MatrixError;
use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Graph(_) => "invalid-graph",
            Error::Decomposition(_) => "invalid-decomposition",
            Error::Algebra(_) => "algebra-mismatch",
            Error::Matrix(MatrixError::TooLarge { .. }) => "permanent-limit",
            Error::Matrix(MatrixError::Overflow) => "overflow",
            Error::Matrix(_) => "invalid-matrix",
            Error::Cover(CoverError::SymbolicTooLarge { .. }) => "symbolic-limit",
            Error::Cover(_) => "invalid-family",
            Error::Decompose(_) => "edge-limit",
            Error::Oracle(OracleError::GridTooLarge { .. }) => "grid-limit",
            Error::Oracle(OracleError::ZeroCoefficient | OracleError::VertexExponent(_)) => "precondition",
            Error::Oracle(OracleError::Matrix(MatrixError::TooLarge { .. })) => "permanent-limit",
            Error::Oracle(_) => "invalid-lists",
        }
    }
}
