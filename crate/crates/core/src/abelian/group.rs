use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hom::GroupHom;
use super::matrix::IntMatrix;
use super::snf::smith_decomposition;
use super::AbelianError;

/// A finitely generated abelian group in invariant-factor form.
///
/// Factors are stored finite-first in divisibility order, followed by zeros;
/// a zero factor is an infinite cyclic summand. No factor equals one, so two
/// groups are isomorphic iff their factor lists are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FgAbGroup {
    factors: Vec<BigInt>,
}

/// An element of a [`FgAbGroup`], in canonical coordinates relative to the
/// invariant-factor generators. Coordinates of finite factors lie in `[0, d)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement(Vec<BigInt>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Order::Infinite)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinity"),
        }
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FgAbGroup {
    /// Validates a factor list already in invariant-factor form.
    pub fn new(factors: Vec<BigInt>) -> Result<Self, AbelianError> {
        let mut seen_zero = false;
        let mut prev: Option<&BigInt> = None;
        for d in &factors {
            if d.is_negative() {
                return Err(AbelianError::NotCanonical(format!("negative factor {d}")));
            }
            if d.is_one() {
                return Err(AbelianError::NotCanonical("factor 1 is not allowed".into()));
            }
            if d.is_zero() {
                seen_zero = true;
                continue;
            }
            if seen_zero {
                return Err(AbelianError::NotCanonical(
                    "finite factors must precede infinite ones".into(),
                ));
            }
            if let Some(p) = prev {
                if !d.is_multiple_of(p) {
                    return Err(AbelianError::NotCanonical(format!(
                        "{p} does not divide {d}"
                    )));
                }
            }
            prev = Some(d);
        }
        Ok(FgAbGroup { factors })
    }

    pub fn from_i64(factors: &[i64]) -> Result<Self, AbelianError> {
        FgAbGroup::new(factors.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn trivial() -> Self {
        FgAbGroup::default()
    }

    pub fn integers() -> Self {
        FgAbGroup {
            factors: vec![BigInt::zero()],
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            factors: vec![BigInt::zero(); rank],
        }
    }

    /// `Z/n`, with `n = 0` meaning `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: &BigInt) -> Self {
        let n = n.abs();
        if n.is_one() {
            FgAbGroup::trivial()
        } else {
            FgAbGroup { factors: vec![n] }
        }
    }

    /// Normalizes an arbitrary direct sum of cyclic groups.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        cokernel_of_diagonal(orders).group
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Number of cyclic summands (generators).
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> &[BigInt] {
        &self.factors[..self.factors.len() - self.free_rank()]
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion_factors().iter().product()
    }

    /// Group order, or `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank() == 0).then(|| self.torsion_order())
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![BigInt::zero(); self.len()])
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut c = vec![BigInt::zero(); self.len()];
        c[i] = BigInt::one();
        GroupElement(c)
    }

    /// Builds an element from arbitrary integer coordinates, reducing them.
    pub fn element(&self, coords: Vec<BigInt>) -> Result<GroupElement, AbelianError> {
        if coords.len() != self.len() {
            return Err(AbelianError::Ownership(format!(
                "element has {} coordinates, group has {} factors",
                coords.len(),
                self.len()
            )));
        }
        Ok(self.reduce(coords))
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement, AbelianError> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub(crate) fn reduce(&self, mut coords: Vec<BigInt>) -> GroupElement {
        for (c, d) in coords.iter_mut().zip(&self.factors) {
            if !d.is_zero() {
                *c = c.mod_floor(d);
            }
        }
        GroupElement(coords)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.len() == self.len()
            && x.0.iter().zip(&self.factors).all(|(c, d)| {
                d.is_zero() || (!c.is_negative() && c < d)
            })
    }

    pub fn check(&self, x: &GroupElement) -> Result<(), AbelianError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(AbelianError::Ownership(format!(
                "{x:?} is not a canonical element of {self}"
            )))
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let coords = x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect();
        self.reduce(coords)
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        self.reduce(x.0.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, n: &BigInt, x: &GroupElement) -> GroupElement {
        self.reduce(x.0.iter().map(|a| a * n).collect())
    }

    /// `acc += n * x`
    pub(crate) fn add_scaled(&self, acc: &mut GroupElement, n: &BigInt, x: &GroupElement) {
        for ((a, b), d) in acc.0.iter_mut().zip(&x.0).zip(&self.factors) {
            *a += n * b;
            if !d.is_zero() {
                *a = a.mod_floor(d);
            }
        }
    }

    pub fn element_order(&self, x: &GroupElement) -> Result<Order, AbelianError> {
        self.check(x)?;
        let mut order = BigInt::one();
        for (c, d) in x.0.iter().zip(&self.factors) {
            if c.is_zero() {
                continue;
            }
            if d.is_zero() {
                return Ok(Order::Infinite);
            }
            order = order.lcm(&(d / c.gcd(d)));
        }
        Ok(Order::Finite(order))
    }

    /// Whether `x = n * y` has a solution `y`. Decided per cyclic factor.
    pub fn is_divisible_by(&self, x: &GroupElement, n: &BigInt) -> Result<bool, AbelianError> {
        self.check(x)?;
        if *n < BigInt::from(2) {
            return Err(AbelianError::InvalidArgument(format!(
                "divisor must be at least 2, got {n}"
            )));
        }
        Ok(x.0.iter().zip(&self.factors).all(|(c, d)| {
            if d.is_zero() {
                c.is_multiple_of(n)
            } else {
                c.is_multiple_of(&n.gcd(d))
            }
        }))
    }

    /// Projection onto `G / Fi(G)`: the coordinates of the infinite factors.
    pub fn free_part(&self, x: &GroupElement) -> Vec<BigInt> {
        x.0.iter()
            .zip(&self.factors)
            .filter(|(_, d)| d.is_zero())
            .map(|(c, _)| c.clone())
            .collect()
    }

    /// `(Fi(G), rank Fr(G))`.
    pub fn torsion_and_free(&self) -> (FgAbGroup, usize) {
        (
            FgAbGroup {
                factors: self.torsion_factors().to_vec(),
            },
            self.free_rank(),
        )
    }

    /// `G ⊗ Z/k`, with `k = 0` meaning `Z`.
    pub fn tensor_with_cyclic(&self, k: &BigInt) -> FgAbGroup {
        let k = k.abs();
        let orders: Vec<BigInt> = self.factors.iter().map(|d| d.gcd(&k)).collect();
        FgAbGroup::from_cyclic_orders(&orders)
    }

    /// `Tor(G, Z/k)`, with `k = 0` meaning `Z`.
    pub fn tor_with_cyclic(&self, k: &BigInt) -> FgAbGroup {
        let k = k.abs();
        if k.is_zero() {
            return FgAbGroup::trivial();
        }
        let orders: Vec<BigInt> = self
            .torsion_factors()
            .iter()
            .map(|d| d.gcd(&k))
            .collect();
        FgAbGroup::from_cyclic_orders(&orders)
    }

    /// Iterates all elements of a finite group in mixed-radix order, or
    /// returns `None` for infinite groups.
    pub fn elements(&self) -> Option<impl Iterator<Item = GroupElement> + '_> {
        if !self.is_finite() {
            return None;
        }
        let mut next = Some(self.zero());
        Some(std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            for (c, d) in succ.0.iter_mut().zip(&self.factors).rev() {
                *c += 1;
                if &*c < d {
                    next = Some(succ);
                    return Some(current);
                }
                *c = BigInt::zero();
            }
            Some(current)
        }))
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|d| {
                if d.is_zero() {
                    "Z".to_string()
                } else {
                    format!("Z/{d}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({self})")
    }
}

/// A cokernel `Z^n / rowspace(R)` in canonical form, with the projection
/// from free coordinates and a section sending canonical generators back to
/// free coordinates.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FgAbGroup,
    /// `group.len() x n`: column `j` is the image of the `j`-th free generator.
    pub projection: IntMatrix,
    /// `n x group.len()`: column `k` is a free preimage of canonical generator `k`.
    pub section: IntMatrix,
}

impl Cokernel {
    pub fn project(&self, coords: &[BigInt]) -> GroupElement {
        self.group.reduce(self.projection.apply(coords))
    }
}

/// Cokernel of the relation rows `relations` on `generator_count` free
/// generators.
pub fn cokernel(generator_count: usize, relations: &IntMatrix) -> Result<Cokernel, AbelianError> {
    if relations.cols() != generator_count {
        return Err(AbelianError::Presentation(format!(
            "relation matrix has {} columns, expected {generator_count}",
            relations.cols()
        )));
    }
    let n = generator_count;
    let s = smith_decomposition(relations);
    // rowspace(R) V = rowspace(D), so x -> xV identifies the quotient with
    // Z^n / rowspace(D).
    let diag = s.diagonal();
    let mut kept: Vec<(usize, BigInt)> = Vec::new();
    for i in 0..n {
        let d = diag.get(i).cloned().unwrap_or_default();
        if !d.is_one() {
            kept.push((i, d));
        }
    }
    // Diagonal order is already finite-then-zero with divisibility.
    let group = FgAbGroup::new(kept.iter().map(|(_, d)| d.clone()).collect())
        .expect("Smith diagonal is canonical");
    let mut projection = IntMatrix::zeros(kept.len(), n);
    let mut section = IntMatrix::zeros(n, kept.len());
    for (k, (i, _)) in kept.iter().enumerate() {
        for j in 0..n {
            projection.set(k, j, s.v.get(j, *i).clone());
            section.set(j, k, s.v_inv.get(*i, j).clone());
        }
    }
    Ok(Cokernel {
        group,
        projection,
        section,
    })
}

pub(crate) fn cokernel_of_diagonal(orders: &[BigInt]) -> Cokernel {
    let n = orders.len();
    let rows: Vec<Vec<BigInt>> = orders
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(i, d)| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = d.abs();
            r
        })
        .collect();
    let rel = IntMatrix::from_rows(n, rows).expect("rows have length n");
    cokernel(n, &rel).expect("column count matches")
}

/// The cokernel in invariant-factor form together with the projection from
/// the free group on the generators.
pub fn group_from_presentation(
    generator_count: usize,
    relations: &IntMatrix,
) -> Result<(FgAbGroup, GroupHom), AbelianError> {
    let c = cokernel(generator_count, relations)?;
    let proj = GroupHom::new(FgAbGroup::free(generator_count), c.group.clone(), c.projection)?;
    Ok((c.group, proj))
}
