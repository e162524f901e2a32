use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::family::{normalize_moduli, ModelFamily};
use super::raw::{canonical_hom, Canonical, RawModel};
use super::BuilderError;
use crate::abelian::{GroupHom, IntMatrix};
use crate::ring::{CohomologyModel, GenId, ProductEntry, ReductionMap};

/// Raw basis of a connected sum: shared unit and top, middle degrees are the
/// concatenation of the summands' generators. `offsets[i][j]` is where
/// summand `i` starts in degree `j`.
fn sum_raw(models: &[&CohomologyModel]) -> Result<(RawModel, Vec<Vec<usize>>), BuilderError> {
    let m = models[0].dimension();
    let ring = models[0].ring().clone();
    let mut raw = RawModel::new(m, ring.clone());
    raw.degrees[0].push(ring.free_factor(), "1".into());
    raw.degrees[m].push(ring.free_factor(), "top".into());
    let mut offsets = vec![vec![0; m + 1]; models.len()];
    for j in 1..m {
        for (i, model) in models.iter().enumerate() {
            offsets[i][j] = raw.degrees[j].len();
            let g = model.group(j);
            for (f, name) in g.factors().iter().zip(model.names(j)) {
                raw.degrees[j].push(f.clone(), format!("summand{}.{name}", i + 1));
            }
        }
    }
    for (i, model) in models.iter().enumerate() {
        if model.group(m).factors() != [ring.free_factor()] {
            return Err(BuilderError::ConnectedSum(format!(
                "summand {} has H^{m} = {}, expected {ring}",
                i + 1,
                model.group(m)
            )));
        }
        for a in model.generators().filter(|g| g.degree > 0 && g.degree < m) {
            for b in model.generators().filter(|g| *g >= a && g.degree > 0 && a.degree + g.degree <= m) {
                let target = a.degree + b.degree;
                let value = match model.entry(a, b) {
                    ProductEntry::Unknown => None,
                    ProductEntry::Known(v) if v.is_zero() => continue,
                    ProductEntry::Known(v) => {
                        let mut out = vec![BigInt::zero(); raw.degrees[target].len()];
                        let off = if target == m { 0 } else { offsets[i][target] };
                        for (t, c) in v.coords().iter().enumerate() {
                            out[off + t] = c.clone();
                        }
                        Some(out)
                    }
                };
                let ra = GenId::new(a.degree, offsets[i][a.degree] + a.index);
                let rb = GenId::new(b.degree, offsets[i][b.degree] + b.index);
                raw.products.insert((ra, rb), value);
            }
        }
    }
    Ok((raw, offsets))
}

/// Connected sum of closed, oriented, simply connected manifolds of a
/// common dimension at least 3.
pub fn connected_sum(summands: &[&ModelFamily], moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    let moduli = normalize_moduli(moduli)?;
    if summands.len() < 2 {
        return Err(BuilderError::InvalidDescription(
            "a connected sum needs at least two summands".into(),
        ));
    }
    let description = format!(
        "connected_sum({})",
        summands.iter().map(|f| f.description()).collect::<Vec<_>>().join(", ")
    );
    let m = summands[0].dimension();
    for f in summands {
        if f.dimension() != m {
            return Err(BuilderError::ConnectedSum(format!(
                "{} has dimension {}, but {} has dimension {m}",
                f.description(),
                f.dimension(),
                summands[0].description()
            )));
        }
        if !f.integral().orientable() {
            return Err(BuilderError::ConnectedSum(format!("{} is not orientable", f.description())));
        }
        if !f.integral().simply_connected() {
            return Err(BuilderError::ConnectedSum(format!(
                "{} is not simply connected",
                f.description()
            )));
        }
    }
    if m < 3 {
        return Err(BuilderError::ConnectedSum(format!(
            "summands must have dimension at least 3, got {m}"
        )));
    }
    let int_models: Vec<&CohomologyModel> = summands.iter().map(|f| f.integral()).collect();
    let (int_raw, int_off) = sum_raw(&int_models)?;
    let int_canon = int_raw.canonicalize()?;
    let mut reductions = BTreeMap::new();
    for k in &moduli {
        let reds: Vec<&ReductionMap> = summands
            .iter()
            .map(|f| {
                f.reduction(k).ok_or_else(|| {
                    BuilderError::InvalidDescription(format!("{} has no Z/{k} model", f.description()))
                })
            })
            .collect::<Result<_, _>>()?;
        let mod_models: Vec<&CohomologyModel> = reds.iter().map(|r| r.modular()).collect();
        let (mod_raw, mod_off) = sum_raw(&mod_models)?;
        let mod_canon = mod_raw.canonicalize()?;
        let homs = sum_homs(&int_raw, &int_canon, &int_off, &mod_raw, &mod_canon, &mod_off, &reds)?;
        reductions.insert(k.clone(), ReductionMap::from_parts(mod_canon.model, homs));
    }
    ModelFamily::assemble(description, int_canon.model, reductions)
}

fn sum_homs(
    int_raw: &RawModel,
    int_canon: &Canonical,
    int_off: &[Vec<usize>],
    mod_raw: &RawModel,
    mod_canon: &Canonical,
    mod_off: &[Vec<usize>],
    reds: &[&ReductionMap],
) -> Result<Vec<GroupHom>, BuilderError> {
    let m = int_raw.dimension;
    let mut homs = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let mut raw = IntMatrix::zeros(mod_raw.degrees[j].len(), int_raw.degrees[j].len());
        if j == 0 || j == m {
            let h = reds[0].hom(j)?.matrix();
            raw.set(0, 0, h.get(0, 0).clone());
        } else {
            for (i, red) in reds.iter().enumerate() {
                let h = red.hom(j)?.matrix();
                for r in 0..h.rows() {
                    for c in 0..h.cols() {
                        raw.set(mod_off[i][j] + r, int_off[i][j] + c, h.get(r, c).clone());
                    }
                }
            }
        }
        homs.push(canonical_hom(&int_canon.bases[j], &mod_canon.bases[j], &raw)?);
    }
    Ok(homs)
}
