use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::basis::canonical_basis;
use super::{validate, Class, CoefficientRing, CohomologyModel, CupValue, Diagnostic, DiagnosticKind, GenId, ModelBuilder, ProductEntry, RingError};
use crate::abelian::{FgAbGroup, GroupElement, GroupHom, IntMatrix};

/// Explicit mod-`k` data that overrides what the universal coefficient
/// theorem leaves open. Degrees absent from `groups` are trivial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModularSupplement {
    pub groups: BTreeMap<usize, (FgAbGroup, Vec<String>)>,
    /// Rows index integral generators, columns index modular generators.
    pub reductions: BTreeMap<usize, IntMatrix>,
    /// Generator ids refer to `groups`.
    pub products: Vec<(GenId, GenId, ProductEntry)>,
}

/// Coefficient reduction `H^*(M; Z) -> H^*(M; Z/k)` together with the
/// mod-`k` model it lands in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    modular: CohomologyModel,
    per_degree: Vec<GroupHom>,
}

impl ReductionMap {
    pub fn modulus(&self) -> &BigInt {
        self.modular.ring().modulus()
    }

    pub fn modular(&self) -> &CohomologyModel {
        &self.modular
    }

    pub fn hom(&self, degree: usize) -> Result<&GroupHom, RingError> {
        self.per_degree.get(degree).ok_or(RingError::Degree {
            degree,
            dimension: self.modular.dimension(),
        })
    }

    pub fn apply(&self, x: &Class) -> Result<Class, RingError> {
        let image = self.hom(x.degree())?.apply(x.element())?;
        Ok(CohomologyModel::class_unchecked(x.degree(), image))
    }

    pub(crate) fn from_parts(modular: CohomologyModel, per_degree: Vec<GroupHom>) -> Self {
        ReductionMap { modular, per_degree }
    }
}

/// Whether `v` is the reduction of some integral class.
pub fn in_reduction_image(red: &ReductionMap, degree: usize, v: &GroupElement) -> Result<bool, RingError> {
    Ok(red.hom(degree)?.in_image(v)?)
}

struct UctDegree {
    group: FgAbGroup,
    names: Vec<String>,
    reduction: GroupHom,
}

/// Groups `H^j ⊗ Z/k ⊕ Tor(H^(j+1), Z/k)` with the reduction landing in the
/// tensor summand.
fn uct_degree(integral: &CohomologyModel, k: &BigInt, j: usize) -> UctDegree {
    let h = integral.group(j);
    let next = integral.group(j + 1);
    let mut orders = Vec::new();
    let mut names = Vec::new();
    for (i, d) in h.factors().iter().enumerate() {
        orders.push(d.gcd(k));
        names.push(integral.names(j)[i].clone());
    }
    for (i, d) in next.factors().iter().enumerate() {
        if !d.is_zero() {
            orders.push(d.gcd(k));
            names.push(format!("tor_{}", integral.names(j + 1)[i]));
        }
    }
    let basis = canonical_basis(j, &orders, &names);
    let mut raw = IntMatrix::zeros(orders.len(), h.len());
    for i in 0..h.len() {
        raw.set(i, i, BigInt::one());
    }
    let matrix = &basis.projection * &raw;
    let reduction = GroupHom::new(h.clone(), basis.group.clone(), matrix)
        .expect("reduction onto the tensor summand is well defined");
    UctDegree {
        group: basis.group,
        names: basis.names,
        reduction,
    }
}

/// Builds the mod-`k` model of a validated integral model. Without a
/// supplement, groups and products come from the universal coefficient
/// theorem and naturality; products no lift determines are unknown.
pub fn reduce_model(
    integral: &CohomologyModel,
    k: impl Into<BigInt>,
    supplement: Option<&ModularSupplement>,
) -> Result<ReductionMap, RingError> {
    let ring = CoefficientRing::new(k)?;
    if ring.is_integral() {
        return Err(RingError::InvalidModulus("reduction needs k >= 2".into()));
    }
    if !integral.ring().is_integral() {
        return Err(RingError::Mismatch(format!(
            "reduction starts from an integral model, got one over {}",
            integral.ring()
        )));
    }
    let k = ring.modulus().clone();
    let m = integral.dimension();
    let mut builder = ModelBuilder::new(m, ring.clone())
        .orientable(integral.orientable())
        .simply_connected(integral.simply_connected());
    let mut per_degree = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let uct = uct_degree(integral, &k, j);
        let (group, names, hom) = match supplement {
            None => (uct.group, uct.names, uct.reduction),
            Some(s) => {
                let (group, names) = s
                    .groups
                    .get(&j)
                    .cloned()
                    .unwrap_or_else(|| (FgAbGroup::trivial(), Vec::new()));
                if group != uct.group {
                    return Err(RingError::Supplement(format!(
                        "H^{j}(M; {ring}) must be {} by the universal coefficient theorem, got {group}",
                        uct.group
                    )));
                }
                let source = integral.group(j);
                let hom = match s.reductions.get(&j) {
                    Some(mat) => GroupHom::new(source.clone(), group.clone(), mat.transpose())
                        .map_err(|e| RingError::Supplement(format!("reduction in degree {j}: {e}")))?,
                    None if source.is_trivial() || group.is_trivial() => GroupHom::zero(source, &group),
                    None => {
                        return Err(RingError::Supplement(format!(
                            "missing reduction matrix in degree {j}"
                        )))
                    }
                };
                let expected = source.tensor_with_cyclic(&k).order();
                if hom.image_order() != expected {
                    return Err(RingError::Supplement(format!(
                        "reduction in degree {j} has image of order {}, expected {}",
                        hom.image_order().unwrap_or_default(),
                        expected.unwrap_or_default()
                    )));
                }
                (group, names, hom)
            }
        };
        builder.set_group(j, group, names)?;
        per_degree.push(hom);
    }
    if j0_mismatch(&builder, &ring) {
        return Err(RingError::Supplement("H^0 must be generated by 1".into()));
    }

    // Lifts of modular generators, where they exist.
    let mut lifts: BTreeMap<GenId, Option<Class>> = BTreeMap::new();
    for j in 1..=m {
        let g = builder.group(j).expect("degree in range").clone();
        for i in 0..g.len() {
            let coset = per_degree[j].solve(&g.generator(i))?;
            let lift = coset.map(|c| CohomologyModel::class_unchecked(j, c.base));
            lifts.insert(GenId::new(j, i), lift);
        }
    }
    let derive = |a: GenId, b: GenId| -> Result<ProductEntry, RingError> {
        let target = builder.group(a.degree + b.degree).expect("degree in range");
        if target.is_trivial() {
            return Ok(ProductEntry::Known(target.zero()));
        }
        let (Some(Some(x)), Some(Some(y))) = (lifts.get(&a), lifts.get(&b)) else {
            return Ok(ProductEntry::Unknown);
        };
        Ok(match integral.cup(x, y)? {
            CupValue::Known(v) => ProductEntry::Known(per_degree[v.degree()].apply(v.element())?),
            CupValue::Unknown => ProductEntry::Unknown,
        })
    };
    let ids: Vec<GenId> = (1..=m)
        .flat_map(|j| (0..builder.group(j).map_or(0, |g| g.len())).map(move |i| GenId::new(j, i)))
        .collect();
    let mut derived = BTreeMap::new();
    for (ai, &a) in ids.iter().enumerate() {
        for &b in &ids[ai..] {
            if a.degree + b.degree <= m {
                derived.insert((a, b), derive(a, b)?);
            }
        }
    }
    if let Some(s) = supplement {
        for (a, b, e) in &s.products {
            if a.degree == 0 || b.degree == 0 {
                builder.set_product(*a, *b, e.clone())?;
                continue;
            }
            let key = if a <= b { (*a, *b) } else { (*b, *a) };
            let odd = a.degree % 2 == 1 && b.degree % 2 == 1;
            let normalized = match e {
                ProductEntry::Known(v) if a > b && odd => {
                    let g = builder.group(a.degree + b.degree).expect("degree in range");
                    ProductEntry::Known(g.neg(&g.reduce(v.coords().to_vec())))
                }
                ProductEntry::Known(v) => {
                    let g = builder.group(a.degree + b.degree).ok_or(RingError::Degree {
                        degree: a.degree + b.degree,
                        dimension: m,
                    })?;
                    ProductEntry::Known(g.reduce(v.coords().to_vec()))
                }
                ProductEntry::Unknown => ProductEntry::Unknown,
            };
            if let (Some(ProductEntry::Known(d)), ProductEntry::Known(n)) = (derived.get(&key), &normalized) {
                if d != n {
                    let show = |v: &GroupElement| {
                        format_in(&builder, key.0.degree + key.1.degree, v)
                    };
                    return Err(RingError::Supplement(format!(
                        "{} * {} is declared {} but naturality of reduction forces {}",
                        builder.names(key.0.degree).unwrap()[key.0.index],
                        builder.names(key.1.degree).unwrap()[key.1.index],
                        show(n),
                        show(d)
                    )));
                }
            }
            if normalized == ProductEntry::Unknown && matches!(derived.get(&key), Some(ProductEntry::Known(_))) {
                continue;
            }
            derived.insert(key, normalized);
        }
    }
    for ((a, b), e) in derived {
        if e != ProductEntry::Known(builder.group(a.degree + b.degree).unwrap().zero()) {
            builder.set_product(a, b, e)?;
        }
    }
    let modular = builder.build()?;
    let red = ReductionMap { modular, per_degree };
    let mut diags = validate(&red.modular);
    diags.extend(naturality(integral, &red));
    if !diags.is_empty() {
        return Err(RingError::Validation(diags));
    }
    Ok(red)
}

fn j0_mismatch(builder: &ModelBuilder, ring: &CoefficientRing) -> bool {
    builder.group(0).is_none_or(|g| g.factors() != [ring.free_factor()])
}

fn format_in(builder: &ModelBuilder, degree: usize, v: &GroupElement) -> String {
    let names = builder.names(degree).unwrap_or(&[]);
    let parts: Vec<String> = v
        .coords()
        .iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| if c.is_one() { n.clone() } else { format!("{c}*{n}") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// `rho(x) * rho(y) = rho(x * y)` on every pair of integral generators whose
/// products are known on both sides.
pub fn naturality(integral: &CohomologyModel, red: &ReductionMap) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let m = integral.dimension();
    let gens: Vec<GenId> = integral.generators().collect();
    for &a in &gens {
        for &b in &gens {
            if a.degree + b.degree > m || a > b {
                continue;
            }
            let (x, y) = (integral.generator(a), integral.generator(b));
            let CupValue::Known(xy) = integral.cup(&x, &y).expect("generators are valid") else {
                continue;
            };
            let (rx, ry) = (red.apply(&x).expect("valid"), red.apply(&y).expect("valid"));
            let CupValue::Known(lhs) = red.modular.cup(&rx, &ry).expect("valid") else {
                continue;
            };
            let rhs = red.apply(&xy).expect("valid");
            if lhs != rhs {
                out.push(Diagnostic {
                    kind: DiagnosticKind::Naturality,
                    message: format!(
                        "reduction of {} * {} is {} but the product of the reductions is {}",
                        integral.name(a),
                        integral.name(b),
                        red.modular.format(&rhs),
                        red.modular.format(&lhs)
                    ),
                });
            }
        }
    }
    out
}
