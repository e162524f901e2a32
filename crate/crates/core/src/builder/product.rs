use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::family::{normalize_moduli, ModelFamily};
use super::raw::{canonical_hom, Canonical, RawModel};
use super::BuilderError;
use crate::abelian::{GroupHom, IntMatrix};
use crate::ring::{Class, CohomologyModel, CupValue, GenId, ReductionMap};

/// Raw Künneth basis: per degree, the generator tuples in lexicographic order.
struct Tensor {
    raw: RawModel,
    tuples: Vec<Vec<Vec<GenId>>>,
    index: Vec<HashMap<Vec<GenId>, usize>>,
}

fn component_name(name: &str, position: usize) -> String {
    name.split('⊗').map(|c| format!("{c}#{position}")).collect::<Vec<_>>().join("⊗")
}

fn tensor(models: &[&CohomologyModel]) -> Result<Tensor, BuilderError> {
    let ring = models[0].ring().clone();
    let m: usize = models.iter().map(|x| x.dimension()).sum();
    let mut raw = RawModel::new(m, ring);
    raw.orientable = models.iter().all(|x| x.orientable());
    raw.simply_connected = models.iter().all(|x| x.simply_connected());
    let mut tuples: Vec<Vec<Vec<GenId>>> = vec![Vec::new(); m + 1];

    let mut all = vec![Vec::new()];
    for model in models {
        let gens: Vec<GenId> = model.generators().collect();
        all = all
            .into_iter()
            .flat_map(|t: Vec<GenId>| {
                gens.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(*g);
                    t
                })
            })
            .collect();
    }
    for t in all {
        let degree: usize = t.iter().map(|g| g.degree).sum();
        let order = t.iter().zip(models).fold(BigInt::zero(), |acc, (g, model)| {
            acc.gcd(&model.group(g.degree).factors()[g.index])
        });
        let parts: Vec<String> = t
            .iter()
            .zip(models)
            .enumerate()
            .filter(|(_, (g, _))| g.degree > 0)
            .map(|(i, (g, model))| component_name(model.name(*g), i + 1))
            .collect();
        let name = if parts.is_empty() { "1".to_string() } else { parts.join("⊗") };
        raw.degrees[degree].push(order, name);
        tuples[degree].push(t);
    }
    let index: Vec<HashMap<Vec<GenId>, usize>> = tuples
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
        .collect();

    for i in 1..=m {
        for j in i..=m - i {
            for (p, x) in tuples[i].iter().enumerate() {
                let start = if i == j { p } else { 0 };
                for (q, y) in tuples[j].iter().enumerate().skip(start) {
                    if let Some(e) = tuple_product(models, &index[i + j], raw.degrees[i + j].len(), x, y) {
                        raw.products.insert((GenId::new(i, p), GenId::new(j, q)), e);
                    }
                }
            }
        }
    }
    Ok(Tensor { raw, tuples, index })
}

/// `(x_1 ⊗ ... ⊗ x_r)(y_1 ⊗ ... ⊗ y_r) = ± (x_1 y_1) ⊗ ... ⊗ (x_r y_r)` with
/// sign `(-1)^(sum_{i>j} |x_i||y_j|)`. Returns `None` for zero.
fn tuple_product(
    models: &[&CohomologyModel],
    index: &HashMap<Vec<GenId>, usize>,
    len: usize,
    x: &[GenId],
    y: &[GenId],
) -> Option<Option<Vec<BigInt>>> {
    let mut factors = Vec::with_capacity(models.len());
    let mut unknown = false;
    for ((a, b), model) in x.iter().zip(y).zip(models) {
        if a.degree + b.degree > model.dimension() {
            return None;
        }
        match model.cup(&model.generator(*a), &model.generator(*b)).expect("generators are valid") {
            CupValue::Known(c) if c.is_zero() => return None,
            CupValue::Known(c) => factors.push(c),
            CupValue::Unknown => unknown = true,
        }
    }
    if unknown {
        return Some(None);
    }
    let mut sign_exp = 0usize;
    for i in 0..x.len() {
        for j in 0..i {
            sign_exp += x[i].degree * y[j].degree;
        }
    }
    let sign = if sign_exp % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let mut out = vec![BigInt::zero(); len];
    expand(&factors, &mut Vec::new(), sign, &mut |t, c| out[index[t]] += c);
    Some(Some(out))
}

/// Calls `f(tuple, coefficient)` for every term of the tensor product of the
/// given classes.
fn expand(
    classes: &[Class],
    prefix: &mut Vec<GenId>,
    coef: BigInt,
    f: &mut dyn FnMut(&Vec<GenId>, BigInt),
) {
    let Some((head, rest)) = classes.split_first() else {
        f(prefix, coef);
        return;
    };
    for (i, c) in head.element().coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        prefix.push(GenId::new(head.degree(), i));
        expand(rest, prefix, &coef * c, f);
        prefix.pop();
    }
}

/// Künneth product. At most one factor may have torsion in its integral
/// cohomology, so that no Tor terms appear; each mod-`k` model is the tensor
/// product of the factors' mod-`k` models, which is exact for the same reason.
pub fn product(factors: &[&ModelFamily], moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    let moduli = normalize_moduli(moduli)?;
    if factors.len() < 2 {
        return Err(BuilderError::InvalidDescription(
            "a product needs at least two factors".into(),
        ));
    }
    let description = format!(
        "product({})",
        factors.iter().map(|f| f.description()).collect::<Vec<_>>().join(", ")
    );
    let torsionful: Vec<&str> = factors
        .iter()
        .filter(|f| (0..=f.dimension()).any(|j| !f.integral().group(j).torsion_factors().is_empty()))
        .map(|f| f.description())
        .collect();
    if torsionful.len() > 1 {
        return Err(BuilderError::UnsupportedProduct(format!(
            "{} all have torsion in integral cohomology; products are only formed when at most one factor does, since the Künneth Tor terms are not modeled",
            torsionful.join(", ")
        )));
    }
    let integral_models: Vec<&CohomologyModel> = factors.iter().map(|f| f.integral()).collect();
    let int_tensor = tensor(&integral_models)?;
    let int_canon = int_tensor.raw.canonicalize()?;

    let mut reductions = BTreeMap::new();
    for k in &moduli {
        let reds: Vec<&ReductionMap> = factors
            .iter()
            .map(|f| {
                f.reduction(k).ok_or_else(|| {
                    BuilderError::InvalidDescription(format!("{} has no Z/{k} model", f.description()))
                })
            })
            .collect::<Result<_, _>>()?;
        let mod_models: Vec<&CohomologyModel> = reds.iter().map(|r| r.modular()).collect();
        let mod_tensor = tensor(&mod_models)?;
        let mod_canon = mod_tensor.raw.canonicalize()?;
        let per_degree = reduction_homs(&int_tensor, &int_canon, &mod_tensor, &mod_canon, &reds)?;
        reductions.insert(
            k.clone(),
            ReductionMap::from_parts(mod_canon.model, per_degree),
        );
    }
    ModelFamily::assemble(description, int_canon.model, reductions)
}

fn reduction_homs(
    int_tensor: &Tensor,
    int_canon: &Canonical,
    mod_tensor: &Tensor,
    mod_canon: &Canonical,
    reds: &[&ReductionMap],
) -> Result<Vec<GroupHom>, BuilderError> {
    let m = int_tensor.raw.dimension;
    let mut homs = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let rows = mod_tensor.tuples[j].len();
        let cols = int_tensor.tuples[j].len();
        let mut raw = IntMatrix::zeros(rows, cols);
        for (c, t) in int_tensor.tuples[j].iter().enumerate() {
            let images: Vec<Class> = t
                .iter()
                .zip(reds)
                .map(|(g, r)| r.apply(&integral_generator(r, *g)))
                .collect::<Result<_, _>>()?;
            let mut entries: Vec<(usize, BigInt)> = Vec::new();
            expand(&images, &mut Vec::new(), BigInt::one(), &mut |tu, coef| {
                entries.push((mod_tensor.index[j][tu], coef))
            });
            for (r, coef) in entries {
                let v = raw.get(r, c) + coef;
                raw.set(r, c, v);
            }
        }
        homs.push(canonical_hom(&int_canon.bases[j], &mod_canon.bases[j], &raw)?);
    }
    Ok(homs)
}

fn integral_generator(r: &ReductionMap, g: GenId) -> Class {
    let group = r.hom(g.degree).expect("degree in range").source();
    CohomologyModel::class_unchecked(g.degree, group.generator(g.index))
}
