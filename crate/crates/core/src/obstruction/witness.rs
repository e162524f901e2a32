use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::search::lift_certificate;
use super::ObstructionError;
use crate::builder::{CatalogEntry, ModelFamily};
use crate::ring::{in_reduction_image, Class, CohomologyModel, CupValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Predicate {
    /// A nonzero product of classes of degree at most `m - n` whose degrees
    /// add up to at least `n`.
    CupLength,
    /// Complex projective spaces of complex dimension `c >= 2` map to no
    /// `R^n` with `n <= 2c`.
    ProjectiveCatalog,
    /// An integral degree-2 class whose square is not divisible by 2
    /// (`m >= 7`, target 5).
    SquareNotDivisible,
    /// A nonzero product of two degree-2 classes with no integral lift of
    /// infinite order (`m >= 7`, targets 1 to 5).
    TorsionProduct,
    /// The six-dimensional variant: both factors also lie outside the image
    /// of reduction.
    SixDimensional,
}

impl Predicate {
    pub fn name(&self) -> &'static str {
        match self {
            Predicate::CupLength => "cup-length",
            Predicate::ProjectiveCatalog => "projective-space",
            Predicate::SquareNotDivisible => "square-parity",
            Predicate::TorsionProduct => "torsion-product",
            Predicate::SixDimensional => "six-dimensional",
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A class together with its rendering in canonical generator names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessClass {
    pub degree: usize,
    pub expression: String,
    pub class: Class,
}

impl WitnessClass {
    pub(crate) fn new(model: &CohomologyModel, class: Class) -> Self {
        WitnessClass {
            degree: class.degree(),
            expression: model.format(&class),
            class,
        }
    }
}

/// Why a product has no integral lift of infinite order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Nothing reduces to the product.
    EmptyPreimage,
    /// Every lift lies in `base + span(kernel)`, and all of these have finite
    /// order.
    TorsionOnlyCoset {
        base: WitnessClass,
        kernel: Vec<WitnessClass>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub predicate: Predicate,
    /// Target dimensions this witness rules out.
    pub excludes: Vec<usize>,
    /// Coefficient modulus, `0` for the integers.
    pub modulus: BigInt,
    pub elements: Vec<WitnessClass>,
    pub product: Option<WitnessClass>,
    pub certificate: Option<Certificate>,
}

fn fail(msg: impl Into<String>) -> ObstructionError {
    ObstructionError::Replay(msg.into())
}

fn model<'a>(family: &'a ModelFamily, k: &BigInt) -> Result<&'a CohomologyModel, ObstructionError> {
    family.model(k).ok_or_else(|| ObstructionError::MissingModel(k.clone()))
}

/// Re-parses each expression and checks it names the recorded class.
fn check_rendering(model: &CohomologyModel, w: &WitnessClass) -> Result<(), ObstructionError> {
    model.check_class(&w.class)?;
    if w.class.degree() != w.degree {
        return Err(fail(format!("`{}` is recorded in the wrong degree", w.expression)));
    }
    let parsed = model.parse_class(Some(w.degree), &w.expression)?;
    if parsed != w.class {
        return Err(fail(format!("`{}` does not parse back to its class", w.expression)));
    }
    Ok(())
}

fn known_product(model: &CohomologyModel, xs: &[Class]) -> Result<Class, ObstructionError> {
    match model.cup_sequence(xs)? {
        CupValue::Known(c) => Ok(c),
        CupValue::Unknown => Err(fail("product is undetermined")),
    }
}

fn require_simply_connected(family: &ModelFamily, min_dim: usize) -> Result<(), ObstructionError> {
    if !family.integral().simply_connected() {
        return Err(fail("manifold is not simply connected"));
    }
    if family.dimension() < min_dim {
        return Err(fail(format!("dimension below {min_dim}")));
    }
    Ok(())
}

/// Re-derives every claim a witness makes from the family's models.
pub fn replay(family: &ModelFamily, w: &Witness) -> Result<(), ObstructionError> {
    let m = family.dimension();
    if w.excludes.is_empty() {
        return Err(fail("witness excludes no target"));
    }
    if w.predicate == Predicate::ProjectiveCatalog {
        let Some(CatalogEntry::ComplexProjective(c)) = family.catalog() else {
            return Err(fail("not a complex projective space from the catalog"));
        };
        if *c < 2 || w.excludes.iter().any(|&n| n < 1 || n > 2 * c) {
            return Err(fail("targets outside the range of the projective-space rule"));
        }
        return Ok(());
    }
    let model = model(family, &w.modulus)?;
    for e in &w.elements {
        check_rendering(model, e)?;
    }
    let classes: Vec<Class> = w.elements.iter().map(|e| e.class.clone()).collect();
    if classes.is_empty() {
        return Err(fail("witness has no elements"));
    }
    let product = known_product(model, &classes)?;
    let claimed = w.product.as_ref().ok_or_else(|| fail("missing product"))?;
    check_rendering(model, claimed)?;
    if claimed.class != product {
        return Err(fail("recorded product differs from the recomputed one"));
    }
    if product.is_zero() {
        return Err(fail("product is zero"));
    }
    match w.predicate {
        Predicate::ProjectiveCatalog => unreachable!(),
        Predicate::CupLength => {
            let total: usize = classes.iter().map(|c| c.degree()).sum();
            for &n in &w.excludes {
                if n == 0 || n >= m {
                    return Err(fail(format!("target {n} out of range")));
                }
                if classes.iter().any(|c| c.degree() == 0 || c.degree() > m - n) {
                    return Err(fail(format!("a degree exceeds {} for target {n}", m - n)));
                }
                if total < n {
                    return Err(fail(format!("degrees sum to {total} < {n}")));
                }
            }
        }
        Predicate::SquareNotDivisible => {
            require_simply_connected(family, 7)?;
            if w.excludes != [5] || !w.modulus.is_zero() {
                return Err(fail("square-parity witnesses are integral and exclude only 5"));
            }
            if classes.len() != 2 || classes[0] != classes[1] || classes[0].degree() != 2 {
                return Err(fail("expected the square of one degree-2 class"));
            }
            if model.group(4).is_divisible_by(product.element(), &BigInt::from(2))? {
                return Err(fail("square is divisible by 2"));
            }
        }
        Predicate::TorsionProduct | Predicate::SixDimensional => {
            let six = w.predicate == Predicate::SixDimensional;
            require_simply_connected(family, if six { 6 } else { 7 })?;
            if six && (m != 6 || w.modulus.is_zero()) {
                return Err(fail("six-dimensional witnesses need m = 6 and k >= 2"));
            }
            if w.excludes.iter().any(|&n| !(1..=5).contains(&n)) {
                return Err(fail("targets must lie in 1..=5"));
            }
            if classes.len() != 2 || classes.iter().any(|c| c.degree() != 2) {
                return Err(fail("expected two degree-2 classes"));
            }
            if six {
                let red = family
                    .reduction(&w.modulus)
                    .ok_or_else(|| ObstructionError::MissingModel(w.modulus.clone()))?;
                for c in &classes {
                    if in_reduction_image(red, 2, c.element())? {
                        return Err(fail("a factor is the reduction of an integral class"));
                    }
                }
            }
            let cert = lift_certificate(family, &w.modulus, &product)?
                .ok_or_else(|| fail("the product lifts to a class of infinite order"))?;
            if Some(&cert) != w.certificate.as_ref() {
                return Err(fail("lift certificate differs from the recomputed one"));
            }
        }
    }
    Ok(())
}
