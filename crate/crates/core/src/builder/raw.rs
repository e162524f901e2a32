//! Models written over a non-canonical basis of named cyclic summands.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abelian::{GroupHom, IntMatrix};
use crate::ring::{
    canonical_basis, CanonicalBasis, CoefficientRing, CohomologyModel, GenId, ModelBuilder,
    ProductEntry, RingError,
};

#[derive(Clone, Debug, Default)]
pub(crate) struct RawDegree {
    pub orders: Vec<BigInt>,
    pub names: Vec<String>,
}

impl RawDegree {
    pub fn push(&mut self, order: BigInt, name: String) {
        self.orders.push(order);
        self.names.push(name);
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }
}

/// Raw product coordinates, `None` when undetermined.
pub(crate) type RawProduct = Option<Vec<BigInt>>;

pub(crate) struct RawModel {
    pub dimension: usize,
    pub ring: CoefficientRing,
    pub orientable: bool,
    pub simply_connected: bool,
    pub degrees: Vec<RawDegree>,
    /// Entries for raw generator pairs `a <= b` of positive degree; absent
    /// pairs multiply to zero.
    pub products: BTreeMap<(GenId, GenId), RawProduct>,
}

pub(crate) struct Canonical {
    pub model: CohomologyModel,
    pub bases: Vec<CanonicalBasis>,
}

impl RawModel {
    pub fn new(dimension: usize, ring: CoefficientRing) -> Self {
        RawModel {
            dimension,
            ring,
            orientable: true,
            simply_connected: true,
            degrees: vec![RawDegree::default(); dimension + 1],
            products: BTreeMap::new(),
        }
    }

    fn raw_entry(&self, a: GenId, b: GenId) -> Option<RawProduct> {
        let (key, flip) = if a <= b { ((a, b), false) } else { ((b, a), a.degree % 2 == 1 && b.degree % 2 == 1) };
        let e = self.products.get(&key)?;
        Some(match e {
            Some(v) if flip => Some(v.iter().map(|c| -c).collect()),
            other => other.clone(),
        })
    }

    pub fn canonicalize(&self) -> Result<Canonical, RingError> {
        let m = self.dimension;
        let bases: Vec<CanonicalBasis> = (0..=m)
            .map(|j| canonical_basis(j, &self.degrees[j].orders, &self.degrees[j].names))
            .collect();
        let mut builder = ModelBuilder::new(m, self.ring.clone())
            .orientable(self.orientable)
            .simply_connected(self.simply_connected);
        for j in 1..=m {
            builder.set_group(j, bases[j].group.clone(), bases[j].names.clone())?;
        }
        if bases[0].group != *builder.group(0).expect("degree 0 exists") {
            return Err(RingError::Mismatch(format!(
                "H^0 must be {}, got {}",
                self.ring, bases[0].group
            )));
        }
        for i in 1..=m {
            for j in i..=m - i {
                let (bi, bj) = (&bases[i], &bases[j]);
                for a in 0..bi.group.len() {
                    let start = if i == j { a } else { 0 };
                    for b in start..bj.group.len() {
                        let entry = self.lifted_product(&bases, GenId::new(i, a), GenId::new(j, b));
                        let zero = matches!(&entry, ProductEntry::Known(v) if v.is_zero());
                        if !zero {
                            builder.set_product(GenId::new(i, a), GenId::new(j, b), entry)?;
                        }
                    }
                }
            }
        }
        Ok(Canonical {
            model: builder.build()?,
            bases,
        })
    }

    fn lifted_product(&self, bases: &[CanonicalBasis], a: GenId, b: GenId) -> ProductEntry {
        let la = bases[a.degree].lift(a.index);
        let lb = bases[b.degree].lift(b.index);
        let target = a.degree + b.degree;
        let mut acc = vec![BigInt::zero(); self.degrees[target].len()];
        for (p, cp) in la.iter().enumerate() {
            if cp.is_zero() {
                continue;
            }
            for (q, cq) in lb.iter().enumerate() {
                if cq.is_zero() {
                    continue;
                }
                match self.raw_entry(GenId::new(a.degree, p), GenId::new(b.degree, q)) {
                    None => {}
                    Some(None) => return ProductEntry::Unknown,
                    Some(Some(v)) => {
                        let f = cp * cq;
                        for (t, c) in acc.iter_mut().zip(&v) {
                            *t += &f * c;
                        }
                    }
                }
            }
        }
        ProductEntry::Known(bases[target].project(&acc))
    }
}

/// Rewrites a map given on raw bases (`target raw x source raw`) in the
/// canonical bases.
pub(crate) fn canonical_hom(
    source: &CanonicalBasis,
    target: &CanonicalBasis,
    raw: &IntMatrix,
) -> Result<GroupHom, RingError> {
    let m = &(&target.projection * raw) * &source.section;
    Ok(GroupHom::new(source.group.clone(), target.group.clone(), m)?)
}
