//! Exact arithmetic for finitely generated abelian groups.
//!
//! Groups are kept in invariant-factor form, homomorphisms are integer
//! matrices between canonical coordinates, and every linear question
//! (preimages, images, cokernels) is answered through a Smith normal form
//! over unbounded integers.

mod group;
mod hom;
mod matrix;
mod snf;

use thiserror::Error;

pub use group::{cokernel, group_from_presentation, Cokernel, FgAbGroup, GroupElement, Order};
pub use hom::{coset_contains_infinite_order, Coset, GroupHom};
pub use matrix::IntMatrix;
pub use snf::{smith_decomposition, smith_normal_form, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("element does not belong to the group: {0}")]
    Ownership(String),
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("factor list is not in invariant-factor form: {0}")]
    NotCanonical(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("homomorphism is not well defined: {0}")]
    IllDefined(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
