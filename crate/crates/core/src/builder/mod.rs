//! Cohomology model families built from spheres, products, connected sums,
//! a small catalog, and explicit data files.

mod catalog;
mod connected_sum;
mod description;
mod explicit;
mod family;
mod product;
mod raw;

use std::path::PathBuf;

use thiserror::Error;

use crate::ring::{Diagnostic, RingError};

pub use catalog::{catalog_family, CatalogEntry};
pub use connected_sum::connected_sum;
pub use description::ManifoldDescription;
pub use explicit::{load_explicit, parse_explicit};
pub use family::{evaluate, sphere, ModelFamily};
pub use product::product;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuilderError {
    #[error("invalid description: {0}")]
    InvalidDescription(String),
    #[error("unsupported product: {0}")]
    UnsupportedProduct(String),
    #[error("invalid connected sum: {0}")]
    ConnectedSum(String),
    #[error("{source_name}:{line}:{column}: {message}")]
    Syntax {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}", validation_message(.source_name, .line, .diagnostics))]
    Validation {
        source_name: String,
        line: Option<usize>,
        diagnostics: Vec<Diagnostic>,
    },
    #[error("cannot read {}: {message}", .path.display())]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn validation_message(source: &str, line: &Option<usize>, diagnostics: &[Diagnostic]) -> String {
    let place = match line {
        Some(l) => format!("{source}:{l}"),
        None => source.to_string(),
    };
    let parts: Vec<String> = diagnostics.iter().map(|d| d.to_string()).collect();
    format!("{place}: model failed validation: {}", parts.join("; "))
}
