use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Class, CohomologyModel, CupValue, GenId, ProductEntry};
use crate::abelian::{smith_decomposition, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticKind {
    Structure,
    Commutativity,
    Bilinearity,
    UnitLaw,
    Associativity,
    Nondegeneracy,
    Naturality,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Structure => "structure",
            DiagnosticKind::Commutativity => "graded commutativity",
            DiagnosticKind::Bilinearity => "bilinearity",
            DiagnosticKind::UnitLaw => "unit law",
            DiagnosticKind::Associativity => "associativity",
            DiagnosticKind::Nondegeneracy => "Poincare duality",
            DiagnosticKind::Naturality => "naturality",
        };
        write!(f, "{kind}: {}", self.message)
    }
}

struct Report<'a> {
    model: &'a CohomologyModel,
    out: Vec<Diagnostic>,
}

impl Report<'_> {
    fn push(&mut self, kind: DiagnosticKind, message: String) {
        self.out.push(Diagnostic { kind, message });
    }

    fn pair(&self, a: GenId, b: GenId) -> String {
        format!("{} * {}", self.model.name(a), self.model.name(b))
    }

    fn show(&self, degree: usize, v: &crate::abelian::GroupElement) -> String {
        self.model
            .format(&CohomologyModel::class_unchecked(degree, v.clone()))
    }
}

/// Checks the algebraic consistency of a model. An empty list means the
/// model passed every check that its known products allow.
pub fn validate(model: &CohomologyModel) -> Vec<Diagnostic> {
    let mut r = Report {
        model,
        out: Vec::new(),
    };
    structure(&mut r);
    table(&mut r);
    associativity(&mut r);
    nondegeneracy(&mut r);
    r.out
}

fn top_factor(model: &CohomologyModel) -> Option<BigInt> {
    let ring = model.ring();
    if ring.is_integral() {
        model.orientable().then(BigInt::zero)
    } else if model.orientable() || ring.modulus() == &BigInt::from(2) {
        Some(ring.modulus().clone())
    } else {
        None
    }
}

fn structure(r: &mut Report) {
    let m = r.model.dimension();
    if let Some(expected) = top_factor(r.model) {
        let top = r.model.group(m);
        if top.factors() != [expected.clone()] {
            let want = if expected.is_zero() {
                "Z".to_string()
            } else {
                format!("Z/{expected}")
            };
            r.push(
                DiagnosticKind::Structure,
                format!("H^{m} of a closed manifold of this kind must be {want}, got {top}"),
            );
        }
    }
}

fn table(r: &mut Report) {
    let model = r.model;
    let entries: Vec<((GenId, GenId), ProductEntry)> = model
        .stored_entries()
        .map(|(k, v)| (*k, v.clone()))
        .collect();
    for ((a, b), e) in entries {
        let ProductEntry::Known(v) = e else { continue };
        let degree = a.degree + b.degree;
        let target = model.group(degree);
        for id in [a, b] {
            let d = &model.group(id.degree).factors()[id.index];
            if !d.is_zero() && !target.scale(d, &v).is_zero() {
                let msg = format!(
                    "{} has order {d} but {d} * ({}) = {} is nonzero",
                    model.name(id),
                    r.pair(a, b),
                    r.show(degree, &target.scale(d, &v))
                );
                r.push(DiagnosticKind::Bilinearity, msg);
            }
        }
        if a.degree == 0 || b.degree == 0 {
            let other = if a.degree == 0 { b } else { a };
            if v != model.group(other.degree).generator(other.index) {
                let msg = format!("{} is {}, expected {}", r.pair(a, b), r.show(degree, &v), model.name(other));
                r.push(DiagnosticKind::UnitLaw, msg);
            }
        }
        let odd = a.degree % 2 == 1 && b.degree % 2 == 1;
        if a == b && odd && !target.scale(&BigInt::from(2), &v).is_zero() {
            let msg = format!(
                "{} = {} for an odd-degree class but twice it is nonzero",
                r.pair(a, b),
                r.show(degree, &v)
            );
            r.push(DiagnosticKind::Commutativity, msg);
        }
        if a < b {
            let reverse = model.stored_entries().find(|(k, _)| **k == (b, a)).map(|(_, e)| e.clone());
            if let Some(ProductEntry::Known(w)) = reverse {
                let expected = if odd { target.neg(&v) } else { v.clone() };
                if w != expected {
                    let msg = format!(
                        "{} = {} but {} = {}",
                        r.pair(a, b),
                        r.show(degree, &v),
                        r.pair(b, a),
                        r.show(degree, &w)
                    );
                    r.push(DiagnosticKind::Commutativity, msg);
                }
            }
        }
    }
}

fn associativity(r: &mut Report) {
    let model = r.model;
    let m = model.dimension();
    let gens: Vec<GenId> = model.generators().filter(|g| g.degree > 0).collect();
    let classes: Vec<Class> = gens.iter().map(|&g| model.generator(g)).collect();
    let n = gens.len();
    let mut pairs: Vec<Option<Class>> = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            if gens[i].degree + gens[j].degree <= m {
                if let CupValue::Known(c) = model.cup(&classes[i], &classes[j]).expect("generators are valid") {
                    pairs[i * n + j] = Some(c);
                }
            }
        }
    }
    for (i, &a) in gens.iter().enumerate() {
        for (j, &b) in gens.iter().enumerate() {
            let Some(xy) = &pairs[i * n + j] else { continue };
            for (l, &c) in gens.iter().enumerate() {
                if a.degree + b.degree + c.degree > m {
                    continue;
                }
                let Some(yz) = &pairs[j * n + l] else { continue };
                if xy.is_zero() && yz.is_zero() {
                    continue;
                }
                let left = model.cup(xy, &classes[l]).expect("degrees checked");
                let right = model.cup(&classes[i], yz).expect("degrees checked");
                if let (CupValue::Known(lv), CupValue::Known(rv)) = (left, right) {
                    if lv != rv {
                        let msg = format!(
                            "({}) * {} = {} but {} * ({} * {}) = {}",
                            r.pair(a, b),
                            model.name(c),
                            model.format(&lv),
                            model.name(a),
                            model.name(b),
                            model.name(c),
                            model.format(&rv)
                        );
                        r.push(DiagnosticKind::Associativity, msg);
                    }
                }
            }
        }
    }
}

fn pairing(model: &CohomologyModel, left: &[GenId], right: &[GenId]) -> Option<IntMatrix> {
    let mut mat = IntMatrix::zeros(left.len(), right.len());
    for (i, &a) in left.iter().enumerate() {
        for (j, &b) in right.iter().enumerate() {
            match model.entry(a, b) {
                ProductEntry::Known(v) => mat.set(i, j, v.coords()[0].clone()),
                ProductEntry::Unknown => return None,
            }
        }
    }
    Some(mat)
}

fn nondegeneracy(r: &mut Report) {
    let model = r.model;
    let m = model.dimension();
    let ring = model.ring();
    let Some(top) = top_factor(model) else { return };
    if model.group(m).factors() != [top] {
        return;
    }
    if ring.is_integral() {
        for j in 0..=m / 2 {
            let free = |d: usize| -> Vec<GenId> {
                model
                    .generators_in(d)
                    .filter(|g| model.group(d).factors()[g.index].is_zero())
                    .collect()
            };
            let (left, right) = (free(j), free(m - j));
            let Some(mat) = pairing(model, &left, &right) else { continue };
            if left.len() != right.len() {
                r.push(
                    DiagnosticKind::Nondegeneracy,
                    format!(
                        "free ranks of H^{j} and H^{} differ ({} vs {})",
                        m - j,
                        left.len(),
                        right.len()
                    ),
                );
            } else if !mat.determinant().abs().is_one() {
                r.push(
                    DiagnosticKind::Nondegeneracy,
                    format!(
                        "pairing H^{j} x H^{} on free parts has determinant {}, not a unit",
                        m - j,
                        mat.determinant()
                    ),
                );
            }
        }
    } else if ring.is_field() {
        let p = ring.modulus();
        for j in 0..=m / 2 {
            let left: Vec<GenId> = model.generators_in(j).collect();
            let right: Vec<GenId> = model.generators_in(m - j).collect();
            let Some(mat) = pairing(model, &left, &right) else { continue };
            let rank = smith_decomposition(&mat)
                .diagonal()
                .iter()
                .filter(|d| !d.is_zero() && !(*d % p).is_zero())
                .count();
            if rank != left.len() || rank != right.len() {
                r.push(
                    DiagnosticKind::Nondegeneracy,
                    format!(
                        "pairing H^{j} x H^{} has rank {rank} over {ring}, but the groups have ranks {} and {}",
                        m - j,
                        left.len(),
                        right.len()
                    ),
                );
            }
        }
    }
}
