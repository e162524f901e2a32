//! Graded cohomology rings with explicit cup-product tables, their
//! consistency checks, and reduction of coefficients from `Z` to `Z/k`.

mod basis;
mod coefficients;
mod expr;
mod model;
mod reduction;
mod validate;

use thiserror::Error;

use crate::abelian::AbelianError;

pub(crate) use basis::{canonical_basis, CanonicalBasis};
pub use coefficients::CoefficientRing;
pub use expr::parse_combination;
pub(crate) use model::valid_name;
pub use model::{Class, CohomologyModel, CupValue, GenId, ModelBuilder, ProductEntry};
pub use reduction::{in_reduction_image, naturality, reduce_model, ModularSupplement, ReductionMap};
pub use validate::{validate, Diagnostic, DiagnosticKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid coefficient ring: {0}")]
    InvalidModulus(String),
    #[error("degree {degree} is outside 0..={dimension}")]
    Degree { degree: usize, dimension: usize },
    #[error("{0}")]
    Mismatch(String),
    #[error("invalid generator name: {0}")]
    InvalidName(String),
    #[error("unknown generator name: {0}")]
    UnknownName(String),
    #[error("malformed combination: {0}")]
    Expression(String),
    #[error("inconsistent modular data: {0}")]
    Supplement(String),
    #[error("model failed validation: {}", join(.0))]
    Validation(Vec<Diagnostic>),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

fn join(d: &[Diagnostic]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[cfg(test)]
pub(crate) mod testing;
