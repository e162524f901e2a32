use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::search::{candidate_elements, lift_certificate, ordered_pairs};
use super::witness::{replay, Certificate, Predicate, Witness, WitnessClass};
use super::{ObstructionError, SearchOptions};
use crate::builder::{CatalogEntry, ModelFamily};
use crate::ring::{in_reduction_image, Class, CohomologyModel, CupValue};

/// Outcome of one bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Search {
    pub witness: Option<Witness>,
    /// The enumeration hit the cap before finishing.
    pub truncated: bool,
}

impl Search {
    fn none(truncated: bool) -> Self {
        Search { witness: None, truncated }
    }
}

fn checked(family: &ModelFamily, w: Witness, truncated: bool) -> Result<Search, ObstructionError> {
    replay(family, &w)?;
    Ok(Search {
        witness: Some(w),
        truncated,
    })
}

fn model<'a>(family: &'a ModelFamily, k: &BigInt) -> Result<&'a CohomologyModel, ObstructionError> {
    family.model(k).ok_or_else(|| ObstructionError::MissingModel(k.clone()))
}

fn check_modulus(k: &BigInt) -> Result<(), ObstructionError> {
    if k.is_one() || *k < BigInt::zero() {
        return Err(ObstructionError::Inapplicable(format!("modulus {k} is not 0 or at least 2")));
    }
    Ok(())
}

fn require_simply_connected(family: &ModelFamily) -> Result<(), ObstructionError> {
    if family.integral().simply_connected() {
        Ok(())
    } else {
        Err(ObstructionError::Inapplicable("the manifold is not simply connected".into()))
    }
}

/// Nonzero products of classes of degree at most `m - n` with total degree
/// at least `n`. Monomials in the generators are searched breadth-first by
/// length, each generator used at most `bound` times; partial products that
/// vanish or are undetermined are pruned. Rings are tried in the order of
/// `opts.moduli`, skipping those the family lacks.
pub fn cup_length(family: &ModelFamily, n: usize, opts: &SearchOptions) -> Result<Search, ObstructionError> {
    let m = family.dimension();
    if n == 0 || n >= m {
        return Err(ObstructionError::TargetOutOfRange { n, dimension: m });
    }
    let mut truncated = false;
    for k in opts.ordered_moduli() {
        let Some(model) = family.model(&k) else { continue };
        let (w, t) = cup_length_in(model, n, opts)?;
        truncated |= t;
        if let Some((elements, product)) = w {
            let w = Witness {
                predicate: Predicate::CupLength,
                excludes: vec![n],
                modulus: k,
                elements: elements.into_iter().map(|c| WitnessClass::new(model, c)).collect(),
                product: Some(WitnessClass::new(model, product)),
                certificate: None,
            };
            return checked(family, w, truncated);
        }
    }
    Ok(Search::none(truncated))
}

type Found = Option<(Vec<Class>, Class)>;

fn cup_length_in(model: &CohomologyModel, n: usize, opts: &SearchOptions) -> Result<(Found, bool), ObstructionError> {
    let m = model.dimension();
    let gens: Vec<Class> = (1..=m - n)
        .flat_map(|d| model.generators_in(d).collect::<Vec<_>>())
        .map(|id| model.generator(id))
        .collect();
    let bound = opts.bound as usize;
    if bound == 0 {
        return Ok((None, false));
    }
    // (indices, total degree, product)
    let mut level: Vec<(Vec<usize>, usize, Class)> =
        gens.iter().enumerate().map(|(i, g)| (vec![i], g.degree(), g.clone())).collect();
    let mut truncated = false;
    while !level.is_empty() {
        if let Some((seq, _, p)) = level.iter().find(|(_, total, p)| *total >= n && !p.is_zero()) {
            let elements = seq.iter().map(|&i| gens[i].clone()).collect();
            return Ok((Some((elements, p.clone())), truncated));
        }
        let mut next = Vec::new();
        'outer: for (seq, total, p) in &level {
            let last = *seq.last().expect("nonempty");
            for (j, g) in gens.iter().enumerate().skip(last) {
                if total + g.degree() > m {
                    continue;
                }
                let used = seq.iter().filter(|&&i| i == j).count();
                if used >= bound {
                    continue;
                }
                let CupValue::Known(q) = model.cup(p, g)? else { continue };
                if q.is_zero() {
                    continue;
                }
                if next.len() == opts.enum_cap {
                    truncated = true;
                    break 'outer;
                }
                let mut s = seq.clone();
                s.push(j);
                next.push((s, total + g.degree(), q));
            }
        }
        level = next;
    }
    Ok((None, truncated))
}

/// The catalog rule for complex projective spaces of complex dimension at
/// least 2.
pub fn projective_catalog(family: &ModelFamily) -> Result<Search, ObstructionError> {
    let Some(CatalogEntry::ComplexProjective(c)) = family.catalog() else {
        return Ok(Search::none(false));
    };
    if *c < 2 {
        return Ok(Search::none(false));
    }
    let w = Witness {
        predicate: Predicate::ProjectiveCatalog,
        excludes: (1..=2 * c).collect(),
        modulus: BigInt::zero(),
        elements: Vec::new(),
        product: None,
        certificate: None,
    };
    checked(family, w, false)
}

/// An integral degree-2 class with a square not divisible by 2. Parity of
/// `u^2` only depends on `u` mod 2, so 0/1 combinations of the generators
/// are exhaustive; they are tried by support size, then lexicographically.
pub fn square_not_divisible(family: &ModelFamily, opts: &SearchOptions) -> Result<Search, ObstructionError> {
    if family.dimension() < 7 {
        return Err(ObstructionError::Inapplicable("square-parity needs dimension at least 7".into()));
    }
    require_simply_connected(family)?;
    let model = family.integral();
    let len = model.group(2).len();
    let two = BigInt::from(2);
    let mut tried = 0usize;
    for size in 1..=len {
        for support in subsets(len, size) {
            if tried == opts.enum_cap {
                return Ok(Search::none(true));
            }
            tried += 1;
            let mut coords = vec![BigInt::zero(); len];
            for i in support {
                coords[i] = BigInt::one();
            }
            let u = model.class(2, coords)?;
            if u.is_zero() {
                continue;
            }
            let CupValue::Known(sq) = model.cup(&u, &u)? else { continue };
            if model.group(4).is_divisible_by(sq.element(), &two)? {
                continue;
            }
            let w = Witness {
                predicate: Predicate::SquareNotDivisible,
                excludes: vec![5],
                modulus: BigInt::zero(),
                elements: vec![WitnessClass::new(model, u.clone()), WitnessClass::new(model, u)],
                product: Some(WitnessClass::new(model, sq)),
                certificate: None,
            };
            return checked(family, w, false);
        }
    }
    Ok(Search::none(false))
}

/// `size`-element subsets of `0..len` in lexicographic order.
fn subsets(len: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i + 1, len, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, size, &mut Vec::new(), &mut out);
    out
}

/// A nonzero product of two degree-2 classes over `Z/k` that is not the
/// reduction of an integral class of infinite order (`m >= 7`).
///
/// For `k >= 2` the products that do lift form a subgroup (or all of
/// `H^4(Z/k)` once `H^4(Z)` has a free part), so pairs of generators
/// suffice. For `k = 0` the condition asks for a nonzero torsion product,
/// which is not linear in the factors; bounded combinations are paired.
pub fn torsion_product(family: &ModelFamily, k: &BigInt, opts: &SearchOptions) -> Result<Search, ObstructionError> {
    if family.dimension() < 7 {
        return Err(ObstructionError::Inapplicable("torsion-product needs dimension at least 7".into()));
    }
    check_modulus(k)?;
    require_simply_connected(family)?;
    let model = model(family, k)?;
    let (candidates, mut truncated) = if k.is_zero() {
        if model.group(4).torsion_factors().is_empty() {
            return Ok(Search::none(false));
        }
        candidate_elements(model, 2, opts.bound, opts.enum_cap)
    } else {
        let gens = model.generators_in(2).map(|id| model.generator(id)).collect();
        (gens, false)
    };
    let found = pair_search(family, k, model, &candidates, opts.enum_cap, &mut truncated)?;
    match found {
        Some((u, v, p, cert)) => {
            let w = lift_witness(Predicate::TorsionProduct, k, model, u, v, p, cert);
            checked(family, w, truncated)
        }
        None => Ok(Search::none(truncated)),
    }
}

/// The six-dimensional variant: both factors lie outside the image of
/// reduction from integral classes, their product is nonzero, and the product
/// has no integral lift of infinite order.
pub fn six_dimensional(family: &ModelFamily, k: &BigInt, opts: &SearchOptions) -> Result<Search, ObstructionError> {
    if family.dimension() != 6 {
        return Err(ObstructionError::Inapplicable("six-dimensional needs dimension exactly 6".into()));
    }
    if *k < BigInt::from(2) {
        return Err(ObstructionError::Inapplicable(format!("six-dimensional needs k >= 2, got {k}")));
    }
    require_simply_connected(family)?;
    let red = family
        .reduction(k)
        .ok_or_else(|| ObstructionError::MissingModel(k.clone()))?;
    let model = red.modular();
    let (all, mut truncated) = candidate_elements(model, 2, opts.bound, opts.enum_cap);
    let mut candidates = Vec::new();
    for c in all {
        if !in_reduction_image(red, 2, c.element())? {
            candidates.push(c);
        }
    }
    let found = pair_search(family, k, model, &candidates, opts.enum_cap, &mut truncated)?;
    match found {
        Some((u, v, p, cert)) => {
            let w = lift_witness(Predicate::SixDimensional, k, model, u, v, p, cert);
            checked(family, w, truncated)
        }
        None => Ok(Search::none(truncated)),
    }
}

type PairHit = Option<(Class, Class, Class, Certificate)>;

/// First pair in prefix-stable order whose product is known, nonzero and
/// without an infinite-order lift. At most `16 * cap` pairs are examined.
fn pair_search(
    family: &ModelFamily,
    k: &BigInt,
    model: &CohomologyModel,
    candidates: &[Class],
    cap: usize,
    truncated: &mut bool,
) -> Result<PairHit, ObstructionError> {
    let mut memo: HashMap<Vec<BigInt>, Option<Certificate>> = HashMap::new();
    let limit = cap.saturating_mul(16);
    for (count, (i, j)) in ordered_pairs(candidates.len()).enumerate() {
        if count == limit {
            *truncated = true;
            break;
        }
        let (u, v) = (&candidates[i], &candidates[j]);
        let CupValue::Known(p) = model.cup(u, v)? else { continue };
        if p.is_zero() {
            continue;
        }
        if k.is_zero() && model.group(4).element_order(p.element())?.is_infinite() {
            continue;
        }
        let key = p.element().coords().to_vec();
        let cert = match memo.get(&key) {
            Some(c) => c.clone(),
            None => {
                let c = lift_certificate(family, k, &p)?;
                memo.insert(key, c.clone());
                c
            }
        };
        if let Some(cert) = cert {
            return Ok(Some((u.clone(), v.clone(), p, cert)));
        }
    }
    Ok(None)
}

fn lift_witness(
    predicate: Predicate,
    k: &BigInt,
    model: &CohomologyModel,
    u: Class,
    v: Class,
    p: Class,
    cert: Certificate,
) -> Witness {
    Witness {
        predicate,
        excludes: (1..=5).collect(),
        modulus: k.clone(),
        elements: vec![WitnessClass::new(model, u), WitnessClass::new(model, v)],
        product: Some(WitnessClass::new(model, p)),
        certificate: Some(cert),
    }
}
