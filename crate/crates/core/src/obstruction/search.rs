use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::witness::{Certificate, WitnessClass};
use super::ObstructionError;
use crate::abelian::{coset_contains_infinite_order, GroupHom};
use crate::builder::ModelFamily;
use crate::ring::{Class, CohomologyModel};

/// The reduction `H^4(Z) -> H^4(Z/k)`, or the identity for `k = 0`.
fn degree_four_reduction(family: &ModelFamily, k: &BigInt) -> Result<GroupHom, ObstructionError> {
    if k.is_zero() {
        return Ok(GroupHom::identity(family.integral().group(4)));
    }
    let red = family
        .reduction(k)
        .ok_or_else(|| ObstructionError::MissingModel(k.clone()))?;
    Ok(red.hom(4)?.clone())
}

/// `Some(certificate)` when no integral class of infinite order reduces to
/// `product`, `None` when one does.
pub(crate) fn lift_certificate(
    family: &ModelFamily,
    k: &BigInt,
    product: &Class,
) -> Result<Option<Certificate>, ObstructionError> {
    let hom = degree_four_reduction(family, k)?;
    let integral = family.integral();
    let Some(coset) = hom.solve(product.element())? else {
        return Ok(Some(Certificate::EmptyPreimage));
    };
    if coset_contains_infinite_order(integral.group(4), &coset)? {
        return Ok(None);
    }
    let wrap = |e| WitnessClass::new(integral, CohomologyModel::class_unchecked(4, e));
    Ok(Some(Certificate::TorsionOnlyCoset {
        base: wrap(coset.base),
        kernel: coset.kernel_generators.into_iter().map(wrap).collect(),
    }))
}

/// Coefficient vectors of length `len` with entries in `[-bound, bound]`,
/// in shells of increasing sup-norm, each shell ordered by L1-norm and then
/// lexicographically. Raising `bound` only appends, so any prefix taken
/// under a cap is stable. Stops after `cap` vectors; the flag reports
/// truncation.
pub(crate) fn shell_combinations(len: usize, bound: u32, cap: usize) -> (Vec<Vec<i64>>, bool) {
    let mut out = Vec::new();
    let b = i64::from(bound);
    if len == 0 {
        return (out, false);
    }
    for s in 1..=b {
        for l1 in s..=s * len as i64 {
            let mut prefix = Vec::with_capacity(len);
            if !fill(len, s, l1, false, &mut prefix, &mut out, cap) {
                return (out, true);
            }
        }
    }
    (out, false)
}

/// Appends, in lexicographic order, all completions of `prefix` with entries
/// in `[-s, s]`, absolute sum `rest`, and some entry of magnitude `s`.
/// Returns `false` once `cap` is hit.
fn fill(len: usize, s: i64, rest: i64, hit: bool, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, cap: usize) -> bool {
    let left = (len - prefix.len()) as i64;
    if left == 0 {
        if rest == 0 && hit {
            if out.len() == cap {
                return false;
            }
            out.push(prefix.clone());
        }
        return true;
    }
    if rest > left * s || (!hit && rest < s) {
        return true;
    }
    for c in -s..=s {
        if c.abs() > rest {
            continue;
        }
        prefix.push(c);
        let ok = fill(len, s, rest - c.abs(), hit || c.abs() == s, prefix, out, cap);
        prefix.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Nonzero elements of `H^degree`: every element when the group is finite
/// and small enough, otherwise bounded combinations of the generators.
pub(crate) fn candidate_elements(
    model: &CohomologyModel,
    degree: usize,
    bound: u32,
    cap: usize,
) -> (Vec<Class>, bool) {
    let group = model.group(degree);
    if let Some(order) = group.order() {
        if order <= BigInt::from(cap) + BigInt::one() {
            let all = group
                .elements()
                .expect("finite")
                .filter(|e| !e.is_zero())
                .map(|e| CohomologyModel::class_unchecked(degree, e))
                .collect();
            return (all, false);
        }
    }
    let (combos, truncated) = shell_combinations(group.len(), bound, cap);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for c in combos {
        let coords: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
        let class = model.class(degree, coords).expect("reduced by construction");
        if !class.is_zero() && seen.insert(class.element().coords().to_vec()) {
            out.push(class);
        }
    }
    (out, truncated)
}

/// Pairs `(i, j)` with `i <= j`, ordered so that the pairs among the first
/// `t` candidates always come first.
pub(crate) fn ordered_pairs(len: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..len).flat_map(|j| (0..=j).map(move |i| (i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_grow_by_appending() {
        let (b1, _) = shell_combinations(2, 1, usize::MAX);
        let (b2, _) = shell_combinations(2, 2, usize::MAX);
        assert_eq!(b1.len(), 8);
        assert_eq!(b2.len(), 24);
        assert_eq!(&b2[..8], &b1[..]);
        assert_eq!(b1[0], vec![-1, 0]);
    }

    #[test]
    fn shells_respect_cap() {
        let (v, truncated) = shell_combinations(3, 3, 10);
        assert_eq!(v.len(), 10);
        assert!(truncated);
        let (v, truncated) = shell_combinations(0, 3, 10);
        assert!(v.is_empty() && !truncated);
    }

    #[test]
    fn pairs_are_prefix_closed() {
        let p: Vec<_> = ordered_pairs(3).collect();
        assert_eq!(p, vec![(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)]);
    }
}
