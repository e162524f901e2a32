use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::family::{normalize_moduli, uct_reductions, ModelFamily};
use super::{parse_explicit, BuilderError};
use crate::abelian::{FgAbGroup, IntMatrix};
use crate::ring::{reduce_model, CoefficientRing, GenId, ModelBuilder, ModularSupplement, ProductEntry};

const WU: &str = include_str!("../../data/wu.sgm");
const M0: &str = include_str!("../../data/m0.sgm");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogEntry {
    /// `CP^n`, real dimension `2n`.
    ComplexProjective(usize),
    /// `RP^n` for `1 <= n <= 7`.
    RealProjective(usize),
    Wu,
    M0,
}

impl CatalogEntry {
    /// Text of the shipped data file, for entries defined by one.
    pub fn data_file(&self) -> Option<&'static str> {
        match self {
            CatalogEntry::Wu => Some(WU),
            CatalogEntry::M0 => Some(M0),
            _ => None,
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogEntry::ComplexProjective(n) => write!(f, "cp({n})"),
            CatalogEntry::RealProjective(n) => write!(f, "rp({n})"),
            CatalogEntry::Wu => write!(f, "wu"),
            CatalogEntry::M0 => write!(f, "m0"),
        }
    }
}

fn power_name(base: &str, i: usize) -> String {
    if i == 1 {
        base.to_string()
    } else {
        format!("{base}{i}")
    }
}

pub fn catalog_family(entry: &CatalogEntry, moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    let moduli = normalize_moduli(moduli)?;
    let family = match *entry {
        CatalogEntry::ComplexProjective(n) => complex_projective(n, &moduli)?,
        CatalogEntry::RealProjective(n) => real_projective(n, &moduli)?,
        CatalogEntry::Wu | CatalogEntry::M0 => {
            let text = entry.data_file().expect("file-backed entry");
            let mut f = parse_explicit(text, &entry.to_string(), &moduli)?;
            f.retain_moduli(&moduli);
            f
        }
    };
    Ok(family.with_catalog(*entry))
}

fn complex_projective(n: usize, moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    if n == 0 {
        return Err(BuilderError::InvalidDescription("cp(n) needs n >= 1".into()));
    }
    let mut b = ModelBuilder::new(2 * n, CoefficientRing::integers());
    for i in 1..=n {
        b.set_group(2 * i, FgAbGroup::integers(), vec![power_name("g", i)])?;
    }
    for i in 1..=n {
        for j in i..=n - i {
            b.set_product_coords(GenId::new(2 * i, 0), GenId::new(2 * j, 0), &[BigInt::from(1)])?;
        }
    }
    let integral = b.build()?;
    let reductions = uct_reductions(&integral, moduli)?;
    ModelFamily::assemble(format!("cp({n})"), integral, reductions)
}

/// Integral classes `x^i` in degree `2i` of order 2 (plus `top` when `n` is
/// odd); mod 2 the ring is truncated polynomial on `w` in degree 1.
fn real_projective(n: usize, moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    if !(1..=7).contains(&n) {
        return Err(BuilderError::InvalidDescription(format!(
            "rp(n) is available for 1 <= n <= 7, got {n}"
        )));
    }
    let two = BigInt::from(2);
    let z2 = FgAbGroup::cyclic(&two);
    let mut b = ModelBuilder::new(n, CoefficientRing::integers())
        .orientable(n % 2 == 1)
        .simply_connected(false);
    for i in 1..=n / 2 {
        b.set_group(2 * i, z2.clone(), vec![power_name("x", i)])?;
    }
    if n % 2 == 1 {
        b.set_group(n, FgAbGroup::integers(), vec!["top".into()])?;
    }
    for i in 1..=n / 2 {
        for j in i..=n / 2 - i {
            b.set_product_coords(GenId::new(2 * i, 0), GenId::new(2 * j, 0), &[BigInt::from(1)])?;
        }
    }
    let integral = b.build()?;

    let mut s = ModularSupplement::default();
    for d in 0..=n {
        let name = if d == 0 { "1".to_string() } else { power_name("w", d) };
        s.groups.insert(d, (z2.clone(), vec![name]));
        if d % 2 == 0 || d == n {
            s.reductions.insert(d, IntMatrix::from_rows(1, vec![vec![BigInt::from(1)]]).unwrap());
        }
    }
    for a in 1..=n {
        for c in a..=n - a {
            let v = z2.generator(0);
            s.products.push((GenId::new(a, 0), GenId::new(c, 0), ProductEntry::Known(v)));
        }
    }
    let mut reductions = BTreeMap::new();
    for k in moduli {
        let supplement = (*k == two).then_some(&s);
        reductions.insert(k.clone(), reduce_model(&integral, k.clone(), supplement)?);
    }
    ModelFamily::assemble(format!("rp({n})"), integral, reductions)
}
