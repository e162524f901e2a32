//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Full Smith decomposition `d = u * a * v` together with the inverses of
/// the unimodular factors.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1, ..., d_min(r, c)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Returns `(u, d, v)` with `d = u * a * v`, `d` diagonal with nonnegative
/// entries in a divisibility chain, and `u`, `v` unimodular.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith_decomposition(a);
    (s.u, s.d, s.v)
}

struct Tracker {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Tracker {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.d.add_row_multiple(dst, src, f);
        self.u.add_row_multiple(dst, src, f);
        self.u_inv.add_col_multiple(src, dst, &-f);
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.d.add_col_multiple(dst, src, f);
        self.v.add_col_multiple(dst, src, f);
        self.v_inv.add_row_multiple(src, dst, &-f);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

pub fn smith_decomposition(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut t = Tracker {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };

    for p in 0..m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = smallest_nonzero(&t.d, p, p) else {
            break;
        };
        t.swap_rows(p, pi);
        t.swap_cols(p, pj);

        loop {
            let mut clean = true;
            for i in p + 1..m {
                if t.d.get(i, p).is_zero() {
                    continue;
                }
                let q = t.d.get(i, p).div_floor(t.d.get(p, p));
                t.add_row(i, p, &-q);
                if !t.d.get(i, p).is_zero() {
                    clean = false;
                }
            }
            for j in p + 1..n {
                if t.d.get(p, j).is_zero() {
                    continue;
                }
                let q = t.d.get(p, j).div_floor(t.d.get(p, p));
                t.add_col(j, p, &-q);
                if !t.d.get(p, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // A remainder smaller than the pivot survived; promote it.
                let (bi, bj) = smallest_in_cross(&t.d, p);
                t.swap_rows(p, bi);
                t.swap_cols(p, bj);
                continue;
            }
            let pivot = t.d.get(p, p).clone();
            let offender = (p + 1..m).find(|&i| {
                (p + 1..n).any(|j| !t.d.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => t.add_row(p, i, &BigInt::one()),
                None => break,
            }
        }
        if t.d.get(p, p).is_negative() {
            t.negate_row(p);
        }
    }

    SmithDecomposition {
        u: t.u,
        d: t.d,
        v: t.v,
        u_inv: t.u_inv,
        v_inv: t.v_inv,
    }
}

fn smallest_nonzero(d: &IntMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in r0..d.rows() {
        for j in c0..d.cols() {
            let v = d.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Smallest nonzero entry in row `p` or column `p`, at or beyond the diagonal.
fn smallest_in_cross(d: &IntMatrix, p: usize) -> (usize, usize) {
    let mut best = (p, p, d.get(p, p).abs());
    for i in p + 1..d.rows() {
        let a = d.get(i, p).abs();
        if !a.is_zero() && a < best.2 {
            best = (i, p, a);
        }
    }
    for j in p + 1..d.cols() {
        let a = d.get(p, j).abs();
        if !a.is_zero() && a < best.2 {
            best = (p, j, a);
        }
    }
    (best.0, best.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_decomposition(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert!(s.d.is_diagonal());
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(a.rows()));
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(a.cols()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let i = IntMatrix::identity(2);
        let (u, d, v) = smith_normal_form(&i);
        assert_eq!(u, i);
        assert_eq!(d, i);
        assert_eq!(v, i);
    }

    #[test]
    fn zero_matrix() {
        let z = IntMatrix::zeros(2, 3);
        let (u, d, v) = smith_normal_form(&z);
        assert_eq!(u, IntMatrix::identity(2));
        assert_eq!(d, z);
        assert_eq!(v, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2; the only 2x2 minor is -8, so d2 = 8 / 2 = 4.
        let s = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(4, 0));
        check(&IntMatrix::zeros(0, 0));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn negative_entries() {
        let s = check(&IntMatrix::from_i64(&[&[-3, 0, 7], &[5, -9, 1], &[0, 0, -4]]));
        assert_eq!(s.rank(), 3);
    }
}
