use std::fmt;
use std::path::PathBuf;

use super::CatalogEntry;

/// Expression tree describing a manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManifoldDescription {
    Sphere(usize),
    Product(Vec<ManifoldDescription>),
    ConnectedSum(Vec<ManifoldDescription>),
    Catalog(CatalogEntry),
    Explicit(PathBuf),
}

impl fmt::Display for ManifoldDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, xs: &[ManifoldDescription]| {
            write!(f, "{head}(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")
        };
        match self {
            ManifoldDescription::Sphere(n) => write!(f, "sphere({n})"),
            ManifoldDescription::Product(xs) => list(f, "product", xs),
            ManifoldDescription::ConnectedSum(xs) => list(f, "connected_sum", xs),
            ManifoldDescription::Catalog(c) => write!(f, "{c}"),
            ManifoldDescription::Explicit(p) => {
                let s = p.to_string_lossy();
                write!(f, "load(\"")?;
                for c in s.chars() {
                    match c {
                        '"' => write!(f, "\\\"")?,
                        '\\' => write!(f, "\\\\")?,
                        c => write!(f, "{c}")?,
                    }
                }
                write!(f, "\")")
            }
        }
    }
}
