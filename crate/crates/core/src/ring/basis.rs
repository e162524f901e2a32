//! Canonical bases for direct sums of cyclic groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abelian::{cokernel, FgAbGroup, GroupElement, IntMatrix};

/// A direct sum of named cyclic summands rewritten in invariant-factor form.
#[derive(Clone, Debug)]
pub(crate) struct CanonicalBasis {
    pub group: FgAbGroup,
    pub names: Vec<String>,
    /// canonical x raw
    pub projection: IntMatrix,
    /// raw x canonical
    pub section: IntMatrix,
}

impl CanonicalBasis {
    pub fn project(&self, raw: &[BigInt]) -> GroupElement {
        self.group
            .element(self.projection.apply(raw))
            .expect("projection has one row per canonical factor")
    }

    pub fn lift(&self, k: usize) -> Vec<BigInt> {
        self.section.column(k)
    }
}

fn sort_key(d: &BigInt) -> (u8, BigInt) {
    if d.is_zero() {
        (1, BigInt::zero())
    } else {
        (0, d.clone())
    }
}

/// Keeps the summand names when the summands only need reordering; otherwise
/// falls back to a Smith normal form change of basis with synthesized names
/// `h<degree>_<index>`.
pub(crate) fn canonical_basis(degree: usize, orders: &[BigInt], names: &[String]) -> CanonicalBasis {
    let n = orders.len();
    let mut kept: Vec<usize> = (0..n).filter(|&i| !orders[i].is_one()).collect();
    kept.sort_by_key(|&i| sort_key(&orders[i]));
    let chain = kept
        .windows(2)
        .all(|w| orders[w[1]].is_zero() || orders[w[1]].is_multiple_of(&orders[w[0]]));
    if chain {
        let group = FgAbGroup::new(kept.iter().map(|&i| orders[i].clone()).collect())
            .expect("sorted chain is canonical");
        let mut projection = IntMatrix::zeros(kept.len(), n);
        let mut section = IntMatrix::zeros(n, kept.len());
        for (k, &i) in kept.iter().enumerate() {
            projection.set(k, i, BigInt::one());
            section.set(i, k, BigInt::one());
        }
        return CanonicalBasis {
            group,
            names: kept.iter().map(|&i| names[i].clone()).collect(),
            projection,
            section,
        };
    }
    let rows: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| !orders[i].is_zero())
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = orders[i].clone();
            r
        })
        .collect();
    let rel = IntMatrix::from_rows(n, rows).expect("rows have length n");
    let c = cokernel(n, &rel).expect("column count matches");
    let names = (0..c.group.len()).map(|k| format!("h{degree}_{}", k + 1)).collect();
    CanonicalBasis {
        group: c.group,
        names,
        projection: c.projection,
        section: c.section,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn permutation_keeps_names() {
        let b = canonical_basis(2, &ints(&[0, 2, 1, 4]), &names(&["a", "b", "c", "d"]));
        assert_eq!(b.group, FgAbGroup::from_i64(&[2, 4, 0]).unwrap());
        assert_eq!(b.names, names(&["b", "d", "a"]));
        assert_eq!(b.project(&ints(&[5, 1, 7, 3])).coords(), &ints(&[1, 3, 5])[..]);
    }

    #[test]
    fn coprime_summands_are_merged() {
        let b = canonical_basis(5, &ints(&[2, 3]), &names(&["x", "y"]));
        assert_eq!(b.group, FgAbGroup::from_i64(&[6]).unwrap());
        assert_eq!(b.names, names(&["h5_1"]));
        // section then projection is the identity on the canonical side
        let lifted = b.lift(0);
        assert_eq!(b.project(&lifted), b.group.generator(0));
        // x and y both survive: 3x and 2y are nonzero
        assert!(!b.project(&ints(&[1, 0])).is_zero());
        assert!(!b.project(&ints(&[0, 1])).is_zero());
    }
}
