use num_bigint::BigInt;
use num_traits::Zero;

use super::witness::WitnessClass;
use super::{ObstructionError, SearchOptions};
use crate::abelian::{smith_decomposition, GroupElement, IntMatrix};
use crate::builder::ModelFamily;
use crate::ring::{Class, CohomologyModel, CupValue};

/// An integral degree-4 class `u` whose reduction mod `modulus` is the
/// nonzero product of `factors` (for `modulus = 0`, `u` is that product).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentClass {
    pub modulus: BigInt,
    pub factors: [WitnessClass; 2],
    pub product: WitnessClass,
    pub integral: WitnessClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundJustification {
    /// `l` integral classes with independent images modulo torsion, each
    /// reducing to a nonzero product of two degree-2 classes; bound `l + 1`.
    IndependentProducts { classes: Vec<IndependentClass> },
    /// A nonzero product of two degree-2 classes forces a disconnected
    /// singular set; bound 2.
    NonzeroProduct {
        modulus: BigInt,
        factors: [WitnessClass; 2],
        product: WitnessClass,
    },
    /// Nothing beyond the trivial bound.
    Trivial,
}

/// Lower bound on the number of components of the singular set of a special
/// generic map into `R^5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentBound {
    pub value: usize,
    pub justification: BoundJustification,
}

impl ComponentBound {
    pub fn trivial() -> Self {
        ComponentBound {
            value: 1,
            justification: BoundJustification::Trivial,
        }
    }

    /// The `l` of the independent-products justification, 0 otherwise.
    pub fn independent_count(&self) -> usize {
        match &self.justification {
            BoundJustification::IndependentProducts { classes } => classes.len(),
            _ => 0,
        }
    }
}

/// Nonzero products of pairs of degree-2 generators over `model`, in pair
/// order. Bilinearity makes generator pairs exhaustive for both uses here.
fn generator_products(model: &CohomologyModel) -> Result<Vec<(Class, Class, Class)>, ObstructionError> {
    let gens: Vec<Class> = model.generators_in(2).map(|id| model.generator(id)).collect();
    let mut out = Vec::new();
    for j in 0..gens.len() {
        for i in 0..=j {
            if let CupValue::Known(p) = model.cup(&gens[i], &gens[j])? {
                if !p.is_zero() {
                    out.push((gens[i].clone(), gens[j].clone(), p));
                }
            }
        }
    }
    Ok(out)
}

fn free_rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    if rows.is_empty() || cols == 0 {
        return 0;
    }
    let m = IntMatrix::from_rows(cols, rows.to_vec()).expect("rows have equal length");
    smith_decomposition(&m).rank()
}

/// Candidates are integral lifts of nonzero generator-pair products over each
/// ring of `opts.moduli`; for `k >= 2` the lift is the base point of the
/// preimage coset, moved by the first kernel generator of infinite order
/// when the base itself is torsion. A greedy pass keeps those that raise the rank modulo
/// torsion, which yields the maximal rank of the candidate set.
pub fn component_bound(family: &ModelFamily, opts: &SearchOptions) -> Result<ComponentBound, ObstructionError> {
    let m = family.dimension();
    if m < 6 {
        return Err(ObstructionError::Inapplicable("component bound needs dimension at least 6".into()));
    }
    if !family.integral().simply_connected() {
        return Err(ObstructionError::Inapplicable("the manifold is not simply connected".into()));
    }
    let integral = family.integral();
    let h4 = integral.group(4);
    let mut chosen: Vec<IndependentClass> = Vec::new();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut first_nonzero = None;
    for k in opts.ordered_moduli() {
        let Some(model) = family.model(&k) else { continue };
        for (u, v, p) in generator_products(model)? {
            if first_nonzero.is_none() {
                first_nonzero = Some((k.clone(), model, u.clone(), v.clone(), p.clone()));
            }
            if m < 7 {
                break;
            }
            let lift = if k.is_zero() {
                Some(p.clone())
            } else {
                let red = family.reduction(&k).expect("model present");
                red.hom(4)?.solve(p.element())?.map(|c| {
                    let infinite = |x: &GroupElement| h4.free_part(x).iter().any(|v| !v.is_zero());
                    let lift = match c.kernel_generators.iter().find(|g| infinite(g)) {
                        Some(g) if !infinite(&c.base) => h4.add(&c.base, g),
                        _ => c.base,
                    };
                    CohomologyModel::class_unchecked(4, lift)
                })
            };
            let Some(lift) = lift else { continue };
            let free = h4.free_part(lift.element());
            if free.iter().all(Zero::is_zero) {
                continue;
            }
            rows.push(free);
            if free_rank(&rows, h4.free_rank()) < rows.len() {
                rows.pop();
                continue;
            }
            chosen.push(IndependentClass {
                modulus: k.clone(),
                factors: [WitnessClass::new(model, u), WitnessClass::new(model, v)],
                product: WitnessClass::new(model, p),
                integral: WitnessClass::new(integral, lift),
            });
        }
    }
    let bound = if !chosen.is_empty() {
        ComponentBound {
            value: chosen.len() + 1,
            justification: BoundJustification::IndependentProducts { classes: chosen },
        }
    } else if let Some((modulus, model, u, v, p)) = first_nonzero {
        ComponentBound {
            value: 2,
            justification: BoundJustification::NonzeroProduct {
                modulus,
                factors: [WitnessClass::new(model, u), WitnessClass::new(model, v)],
                product: WitnessClass::new(model, p),
            },
        }
    } else {
        ComponentBound::trivial()
    };
    replay_bound(family, &bound)?;
    Ok(bound)
}

fn fail(msg: &str) -> ObstructionError {
    ObstructionError::Replay(msg.to_string())
}

fn check_product(family: &ModelFamily, k: &BigInt, factors: &[WitnessClass; 2], product: &WitnessClass) -> Result<(), ObstructionError> {
    let model = family.model(k).ok_or_else(|| ObstructionError::MissingModel(k.clone()))?;
    for f in factors {
        model.check_class(&f.class)?;
        if f.degree != 2 || model.parse_class(Some(2), &f.expression)? != f.class {
            return Err(fail("factor is not the recorded degree-2 class"));
        }
    }
    match model.cup(&factors[0].class, &factors[1].class)? {
        CupValue::Known(p) if !p.is_zero() && p == product.class => Ok(()),
        _ => Err(fail("product is not the recorded nonzero class")),
    }
}

/// Re-derives a component bound from the family.
pub fn replay_bound(family: &ModelFamily, bound: &ComponentBound) -> Result<(), ObstructionError> {
    let m = family.dimension();
    match &bound.justification {
        BoundJustification::Trivial => {
            if bound.value != 1 {
                return Err(fail("trivial bound must be 1"));
            }
        }
        BoundJustification::NonzeroProduct {
            modulus,
            factors,
            product,
        } => {
            if m < 6 || bound.value != 2 {
                return Err(fail("nonzero-product bound is 2 and needs dimension at least 6"));
            }
            check_product(family, modulus, factors, product)?;
        }
        BoundJustification::IndependentProducts { classes } => {
            if m < 7 || classes.is_empty() || bound.value != classes.len() + 1 {
                return Err(fail("independent-products bound is l + 1 with l >= 1 and dimension at least 7"));
            }
            let integral = family.integral();
            let h4 = integral.group(4);
            let mut rows = Vec::new();
            for c in classes {
                check_product(family, &c.modulus, &c.factors, &c.product)?;
                integral.check_class(&c.integral.class)?;
                let reduced = if c.modulus.is_zero() {
                    c.integral.class.clone()
                } else {
                    let red = family
                        .reduction(&c.modulus)
                        .ok_or_else(|| ObstructionError::MissingModel(c.modulus.clone()))?;
                    red.apply(&c.integral.class)?
                };
                if reduced != c.product.class {
                    return Err(fail("integral class does not reduce to the product"));
                }
                rows.push(h4.free_part(c.integral.class.element()));
            }
            if free_rank(&rows, h4.free_rank()) != classes.len() {
                return Err(fail("integral classes are dependent modulo torsion"));
            }
        }
    }
    Ok(())
}
