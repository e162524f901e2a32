use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{catalog_family, connected_sum, load_explicit, product, BuilderError, CatalogEntry, ManifoldDescription};
use crate::abelian::FgAbGroup;
use crate::ring::{naturality, reduce_model, validate, CoefficientRing, CohomologyModel, ModelBuilder, ReductionMap};

/// An integral model together with its mod-`k` reductions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFamily {
    description: String,
    integral: CohomologyModel,
    reductions: BTreeMap<BigInt, ReductionMap>,
    catalog: Option<CatalogEntry>,
    notices: Vec<String>,
}

impl ModelFamily {
    /// Validates every member and the naturality of every reduction.
    pub(crate) fn assemble(
        description: String,
        integral: CohomologyModel,
        reductions: BTreeMap<BigInt, ReductionMap>,
    ) -> Result<Self, BuilderError> {
        let diags = validate(&integral);
        if !diags.is_empty() {
            return Err(BuilderError::Validation {
                source_name: description,
                line: None,
                diagnostics: diags,
            });
        }
        for red in reductions.values() {
            let mut diags = validate(red.modular());
            diags.extend(naturality(&integral, red));
            if !diags.is_empty() {
                return Err(BuilderError::Validation {
                    source_name: format!("{description} over {}", red.modular().ring()),
                    line: None,
                    diagnostics: diags,
                });
            }
        }
        let mut family = ModelFamily {
            description,
            integral,
            reductions,
            catalog: None,
            notices: Vec::new(),
        };
        family.note_unknowns();
        Ok(family)
    }

    fn note_unknowns(&mut self) {
        self.notices.retain(|n| !n.contains("undetermined cup products"));
        let mut notes = Vec::new();
        if self.integral.has_unknown_products() {
            notes.push("integral model has undetermined cup products".to_string());
        }
        for (k, red) in &self.reductions {
            if red.modular().has_unknown_products() {
                notes.push(format!("Z/{k} model has undetermined cup products"));
            }
        }
        self.notices.extend(notes);
    }

    pub(crate) fn with_catalog(mut self, entry: CatalogEntry) -> Self {
        self.catalog = Some(entry);
        self
    }

    pub(crate) fn set_description(&mut self, description: String) {
        self.description = description;
    }

    /// Drops reductions for moduli that were not requested.
    pub(crate) fn retain_moduli(&mut self, moduli: &[BigInt]) {
        self.reductions.retain(|k, _| moduli.contains(k));
        self.note_unknowns();
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn dimension(&self) -> usize {
        self.integral.dimension()
    }

    pub fn integral(&self) -> &CohomologyModel {
        &self.integral
    }

    pub fn reduction(&self, k: &BigInt) -> Option<&ReductionMap> {
        self.reductions.get(k)
    }

    pub fn reductions(&self) -> &BTreeMap<BigInt, ReductionMap> {
        &self.reductions
    }

    /// The model over `Z` for `k = 0`, otherwise over `Z/k`.
    pub fn model(&self, k: &BigInt) -> Option<&CohomologyModel> {
        if k.is_zero() {
            Some(&self.integral)
        } else {
            self.reductions.get(k).map(|r| r.modular())
        }
    }

    pub fn moduli(&self) -> impl Iterator<Item = &BigInt> {
        self.reductions.keys()
    }

    pub fn catalog(&self) -> Option<&CatalogEntry> {
        self.catalog.as_ref()
    }

    pub fn notices(&self) -> &[String] {
        &self.notices
    }
}

/// Sorted, deduplicated moduli `>= 2`; `0` is dropped since the integral
/// model is always present.
pub(crate) fn normalize_moduli(moduli: &[BigInt]) -> Result<Vec<BigInt>, BuilderError> {
    let mut out = Vec::new();
    for k in moduli {
        let r = CoefficientRing::new(k.abs())?;
        if !r.is_integral() {
            out.push(r.modulus().clone());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub(crate) fn uct_reductions(
    integral: &CohomologyModel,
    moduli: &[BigInt],
) -> Result<BTreeMap<BigInt, ReductionMap>, BuilderError> {
    moduli
        .iter()
        .map(|k| Ok((k.clone(), reduce_model(integral, k.clone(), None)?)))
        .collect()
}

/// `S^n`, generated by `s<n>` in degree `n`.
pub fn sphere(n: usize, moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    if n == 0 {
        return Err(BuilderError::InvalidDescription(
            "sphere dimension must be at least 1".into(),
        ));
    }
    let moduli = normalize_moduli(moduli)?;
    let mut b = ModelBuilder::new(n, CoefficientRing::integers()).simply_connected(n >= 2);
    b.set_group(n, FgAbGroup::integers(), vec![format!("s{n}")])?;
    let integral = b.build()?;
    let reductions = uct_reductions(&integral, &moduli)?;
    ModelFamily::assemble(format!("sphere({n})"), integral, reductions)
}

/// Evaluates a description with reductions for each requested modulus.
pub fn evaluate(desc: &ManifoldDescription, moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    let moduli = normalize_moduli(moduli)?;
    let mut family = evaluate_node(desc, &moduli)?;
    family.set_description(desc.to_string());
    Ok(family)
}

fn evaluate_node(desc: &ManifoldDescription, moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    let moduli = moduli.to_vec();
    match desc {
        ManifoldDescription::Sphere(n) => sphere(*n, &moduli),
        ManifoldDescription::Product(xs) | ManifoldDescription::ConnectedSum(xs) if xs.len() < 2 => {
            Err(BuilderError::InvalidDescription(format!(
                "{desc} needs at least two operands"
            )))
        }
        ManifoldDescription::Product(xs) => {
            let fs = xs.iter().map(|x| evaluate(x, &moduli)).collect::<Result<Vec<_>, _>>()?;
            product(&fs.iter().collect::<Vec<_>>(), &moduli)
        }
        ManifoldDescription::ConnectedSum(xs) => {
            let fs = xs.iter().map(|x| evaluate(x, &moduli)).collect::<Result<Vec<_>, _>>()?;
            connected_sum(&fs.iter().collect::<Vec<_>>(), &moduli)
        }
        ManifoldDescription::Catalog(c) => catalog_family(c, &moduli),
        ManifoldDescription::Explicit(path) => load_explicit(path, &moduli),
    }
}
