//! Obstructions to special generic maps read off cohomology rings: each
//! predicate searches for a witness, every witness is replayed before it is
//! reported, and `analyze` aggregates verdicts per target dimension together
//! with a lower bound on the number of components of the singular set.

mod analyze;
mod bound;
mod predicates;
mod search;
mod witness;

use num_bigint::BigInt;
use thiserror::Error;

use crate::abelian::AbelianError;
use crate::ring::RingError;

pub use analyze::{analyze, ObstructionReport, TargetVerdict, Verdict};
pub use bound::{component_bound, replay_bound, BoundJustification, ComponentBound, IndependentClass};
pub use predicates::{
    cup_length, projective_catalog, six_dimensional, square_not_divisible, torsion_product, Search,
};
pub use witness::{replay, Certificate, Predicate, Witness, WitnessClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("target dimension {n} is outside 1..{dimension}")]
    TargetOutOfRange { n: usize, dimension: usize },
    #[error("no model over Z/{0} in this family")]
    MissingModel(BigInt),
    #[error("witness failed replay: {0}")]
    Replay(String),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Search configuration shared by all predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Coefficient moduli, `0` for the integers.
    pub moduli: Vec<BigInt>,
    /// Coefficient bound for combinations and multiplicity bound for
    /// monomials.
    pub bound: u32,
    /// Largest number of elements or combinations enumerated per search.
    pub enum_cap: usize,
    /// Target dimensions; `None` means `1..m`.
    pub targets: Option<(usize, usize)>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            moduli: vec![BigInt::from(0), BigInt::from(2), BigInt::from(3)],
            bound: 3,
            enum_cap: 4096,
            targets: None,
        }
    }
}

impl SearchOptions {
    /// Moduli in search order: `0` first, then ascending, without repeats.
    pub(crate) fn ordered_moduli(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.moduli.iter().map(num_traits::Signed::abs).collect();
        v.sort();
        v.dedup();
        v
    }
}
