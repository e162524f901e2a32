use num_bigint::BigInt;
use num_traits::Zero;

use super::bound::{component_bound, ComponentBound};
use super::predicates::{cup_length, projective_catalog, six_dimensional, square_not_divisible, torsion_product, Search};
use super::witness::{Predicate, Witness};
use super::{ObstructionError, SearchOptions};
use crate::builder::ModelFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Excluded(Vec<Witness>),
    Unknown,
}

impl Verdict {
    pub fn is_excluded(&self) -> bool {
        matches!(self, Verdict::Excluded(_))
    }

    pub fn witnesses(&self) -> &[Witness] {
        match self {
            Verdict::Excluded(w) => w,
            Verdict::Unknown => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetVerdict {
    pub n: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub dimension: usize,
    pub input: String,
    pub verdicts: Vec<TargetVerdict>,
    pub component_bound: ComponentBound,
    pub notices: Vec<String>,
}

impl ObstructionReport {
    pub fn verdict(&self, n: usize) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.n == n).map(|v| &v.verdict)
    }
}

fn ring_name(k: &BigInt) -> String {
    if k.is_zero() {
        "Z".into()
    } else {
        format!("Z/{k}")
    }
}

struct Collector {
    witnesses: Vec<Witness>,
    notices: Vec<String>,
}

impl Collector {
    fn take(&mut self, s: Search, predicate: Predicate, k: &BigInt) {
        if s.truncated {
            self.notices.push(format!(
                "{predicate} search over {} stopped at the enumeration cap",
                ring_name(k)
            ));
        }
        self.witnesses.extend(s.witness);
    }
}

/// Runs every applicable predicate and collects verdicts for each target
/// dimension, plus the component bound.
pub fn analyze(family: &ModelFamily, opts: &SearchOptions) -> Result<ObstructionReport, ObstructionError> {
    let m = family.dimension();
    let (lo, hi) = opts.targets.unwrap_or((1, m.saturating_sub(1)));
    for n in [lo, hi] {
        if lo <= hi && (n == 0 || n >= m) {
            return Err(ObstructionError::TargetOutOfRange { n, dimension: m });
        }
    }
    let mut c = Collector {
        witnesses: Vec::new(),
        notices: family.notices().to_vec(),
    };
    let moduli: Vec<BigInt> = opts
        .ordered_moduli()
        .into_iter()
        .filter(|k| {
            let ok = family.model(k).is_some();
            if !ok {
                c.notices.push(format!("coefficients {} are not available for this input; skipped", ring_name(k)));
            }
            ok
        })
        .collect();
    let simply_connected = family.integral().simply_connected();
    if !simply_connected {
        c.notices
            .push("the manifold is not simply connected; only the cup-length and catalog rules apply".into());
    }

    let zero = BigInt::zero();
    let available = SearchOptions {
        moduli: moduli.clone(),
        ..opts.clone()
    };
    c.take(projective_catalog(family)?, Predicate::ProjectiveCatalog, &zero);
    if simply_connected && m >= 7 {
        c.take(square_not_divisible(family, opts)?, Predicate::SquareNotDivisible, &zero);
        for k in &moduli {
            c.take(torsion_product(family, k, opts)?, Predicate::TorsionProduct, k);
        }
    }
    if simply_connected && m == 6 {
        for k in moduli.iter().filter(|k| !k.is_zero()) {
            c.take(six_dimensional(family, k, opts)?, Predicate::SixDimensional, k);
        }
    }

    let mut verdicts = Vec::new();
    for n in lo..=hi {
        let mut ws = Vec::new();
        let s = cup_length(family, n, &available)?;
        if s.truncated {
            c.notices.push(format!("cup-length search for n = {n} stopped at the enumeration cap"));
        }
        ws.extend(s.witness);
        ws.extend(c.witnesses.iter().filter(|w| w.excludes.contains(&n)).cloned());
        let verdict = if ws.is_empty() { Verdict::Unknown } else { Verdict::Excluded(ws) };
        verdicts.push(TargetVerdict { n, verdict });
    }

    let component_bound = match component_bound(family, &available) {
        Ok(b) => b,
        Err(ObstructionError::Inapplicable(why)) => {
            c.notices.push(format!("component bound: {why}; reporting 1"));
            ComponentBound::trivial()
        }
        Err(e) => return Err(e),
    };
    Ok(ObstructionReport {
        dimension: m,
        input: family.description().to_string(),
        verdicts,
        component_bound,
        notices: c.notices,
    })
}
