use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CoefficientRing, RingError};
use crate::abelian::{FgAbGroup, GroupElement};

/// The `index`-th canonical generator of `H^degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId {
    pub degree: usize,
    pub index: usize,
}

impl GenId {
    pub fn new(degree: usize, index: usize) -> Self {
        GenId { degree, index }
    }
}

/// An element of one graded piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Class {
    degree: usize,
    element: GroupElement,
}

impl Class {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn element(&self) -> &GroupElement {
        &self.element
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }
}

/// A stored cup-table entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductEntry {
    Known(GroupElement),
    Unknown,
}

/// Result of a cup product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CupValue {
    Known(Class),
    Unknown,
}

impl CupValue {
    pub fn known(&self) -> Option<&Class> {
        match self {
            CupValue::Known(c) => Some(c),
            CupValue::Unknown => None,
        }
    }

    pub fn is_known_nonzero(&self) -> bool {
        self.known().is_some_and(|c| !c.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GradedPiece {
    pub group: FgAbGroup,
    pub names: Vec<String>,
}

/// Cohomology of a closed connected manifold with one coefficient ring.
///
/// The cup table is keyed by ordered generator pairs. Builders in this crate
/// store only pairs `a <= b`; an entry for `(b, a)` is derived with the sign
/// `(-1)^(|a||b|)`. Pairs with no entry multiply to zero, except that the unit
/// obeys the unit law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyModel {
    dimension: usize,
    orientable: bool,
    simply_connected: bool,
    ring: CoefficientRing,
    pieces: Vec<GradedPiece>,
    products: BTreeMap<(GenId, GenId), ProductEntry>,
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "0"
        && !name.starts_with('#')
        && !name.chars().any(|c| c.is_whitespace() || ",=+-*?;:[]".contains(c))
        && (name == "1" || !name.chars().all(|c| c.is_ascii_digit()))
}

fn sign_swaps(a: GenId, b: GenId) -> bool {
    a.degree % 2 == 1 && b.degree % 2 == 1
}

impl CohomologyModel {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn simply_connected(&self) -> bool {
        self.simply_connected
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    /// `H^degree`; trivial above the dimension.
    pub fn group(&self, degree: usize) -> &FgAbGroup {
        static TRIVIAL: std::sync::OnceLock<FgAbGroup> = std::sync::OnceLock::new();
        match self.pieces.get(degree) {
            Some(p) => &p.group,
            None => TRIVIAL.get_or_init(FgAbGroup::trivial),
        }
    }

    pub fn names(&self, degree: usize) -> &[String] {
        self.pieces.get(degree).map_or(&[], |p| &p.names[..])
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.pieces[id.degree].names[id.index]
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.pieces.iter().enumerate().find_map(|(d, p)| {
            p.names.iter().position(|n| n == name).map(|i| GenId::new(d, i))
        })
    }

    /// Generators of `H^degree`.
    pub fn generators_in(&self, degree: usize) -> impl Iterator<Item = GenId> {
        (0..self.group(degree).len()).map(move |i| GenId::new(degree, i))
    }

    /// All generators ordered by degree, then index.
    pub fn generators(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..=self.dimension).flat_map(move |d| self.generators_in(d))
    }

    pub fn unit_id(&self) -> GenId {
        GenId::new(0, 0)
    }

    pub fn unit(&self) -> Class {
        self.generator(self.unit_id())
    }

    pub fn generator(&self, id: GenId) -> Class {
        Class {
            degree: id.degree,
            element: self.group(id.degree).generator(id.index),
        }
    }

    pub fn zero(&self, degree: usize) -> Class {
        Class {
            degree,
            element: self.group(degree).zero(),
        }
    }

    /// A class from unreduced coordinates.
    pub fn class(&self, degree: usize, coords: Vec<BigInt>) -> Result<Class, RingError> {
        self.check_degree(degree)?;
        Ok(Class {
            degree,
            element: self.group(degree).element(coords)?,
        })
    }

    pub fn class_i64(&self, degree: usize, coords: &[i64]) -> Result<Class, RingError> {
        self.class(degree, coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub(crate) fn class_unchecked(degree: usize, element: GroupElement) -> Class {
        Class { degree, element }
    }

    pub fn check_class(&self, x: &Class) -> Result<(), RingError> {
        self.check_degree(x.degree)?;
        self.group(x.degree).check(&x.element)?;
        Ok(())
    }

    fn check_degree(&self, degree: usize) -> Result<(), RingError> {
        if degree > self.dimension {
            return Err(RingError::Degree {
                degree,
                dimension: self.dimension,
            });
        }
        Ok(())
    }

    /// Classes above the dimension are accepted; they are all zero.
    pub fn add(&self, x: &Class, y: &Class) -> Result<Class, RingError> {
        self.group(x.degree).check(&x.element)?;
        self.group(y.degree).check(&y.element)?;
        if x.degree != y.degree {
            return Err(RingError::Mismatch(format!(
                "cannot add classes of degrees {} and {}",
                x.degree, y.degree
            )));
        }
        Ok(Class {
            degree: x.degree,
            element: self.group(x.degree).add(&x.element, &y.element),
        })
    }

    pub fn scale(&self, n: &BigInt, x: &Class) -> Class {
        Class {
            degree: x.degree,
            element: self.group(x.degree).scale(n, &x.element),
        }
    }

    /// Explicitly stored entries, including ones for the unit.
    pub fn stored_entries(&self) -> impl Iterator<Item = (&(GenId, GenId), &ProductEntry)> {
        self.products.iter()
    }

    pub fn has_unknown_products(&self) -> bool {
        self.products.values().any(|e| *e == ProductEntry::Unknown)
    }

    /// The product of two generators as seen through the sign rule and the
    /// unit law.
    pub fn entry(&self, a: GenId, b: GenId) -> ProductEntry {
        if let Some(e) = self.products.get(&(a, b)) {
            return e.clone();
        }
        if let Some(e) = self.products.get(&(b, a)) {
            return match e {
                ProductEntry::Known(v) if sign_swaps(a, b) => {
                    ProductEntry::Known(self.group(a.degree + b.degree).neg(v))
                }
                other => other.clone(),
            };
        }
        if a.degree == 0 {
            return ProductEntry::Known(self.group(b.degree).generator(b.index));
        }
        if b.degree == 0 {
            return ProductEntry::Known(self.group(a.degree).generator(a.index));
        }
        ProductEntry::Known(self.group(a.degree + b.degree).zero())
    }

    pub fn cup(&self, x: &Class, y: &Class) -> Result<CupValue, RingError> {
        self.check_class(x)?;
        self.check_class(y)?;
        let degree = x.degree + y.degree;
        let target = self.group(degree);
        let mut acc = target.zero();
        if degree > self.dimension {
            return Ok(CupValue::Known(Class { degree, element: acc }));
        }
        for (i, xa) in x.element.coords().iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (j, yb) in y.element.coords().iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                match self.entry(GenId::new(x.degree, i), GenId::new(y.degree, j)) {
                    ProductEntry::Unknown => return Ok(CupValue::Unknown),
                    ProductEntry::Known(e) => target.add_scaled(&mut acc, &(xa * yb), &e),
                }
            }
        }
        Ok(CupValue::Known(Class { degree, element: acc }))
    }

    /// Left fold of [`cup`](Self::cup). Classes past the dimension stay zero.
    pub fn cup_sequence(&self, xs: &[Class]) -> Result<CupValue, RingError> {
        let (first, rest) = xs
            .split_first()
            .ok_or_else(|| RingError::Mismatch("empty cup sequence".into()))?;
        self.check_class(first)?;
        let mut acc = first.clone();
        for y in rest {
            self.check_class(y)?;
            if acc.degree + y.degree > self.dimension {
                return Ok(CupValue::Known(self.zero(acc.degree + y.degree)));
            }
            match self.cup(&acc, y)? {
                CupValue::Known(c) => acc = c,
                CupValue::Unknown => return Ok(CupValue::Unknown),
            }
        }
        Ok(CupValue::Known(acc))
    }

    /// Renders a class as an integer combination of generator names, for
    /// example `2*a - b`.
    pub fn format(&self, x: &Class) -> String {
        let names = self.names(x.degree);
        let mut out = String::new();
        for (c, name) in x.element.coords().iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let negative = c < &BigInt::zero();
            let mag = if negative { -c } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses an integer combination of generator names. `degree` must be
    /// given when the text is `0`.
    pub fn parse_class(&self, degree: Option<usize>, text: &str) -> Result<Class, RingError> {
        let terms = super::expr::parse_combination(text)?;
        let mut found_degree = degree;
        let mut resolved = Vec::new();
        for (coef, name) in terms {
            let id = self
                .find(&name)
                .ok_or_else(|| RingError::UnknownName(name.clone()))?;
            match found_degree {
                Some(d) if d != id.degree => {
                    return Err(RingError::Mismatch(format!(
                        "{name} has degree {}, expected {d}",
                        id.degree
                    )))
                }
                _ => found_degree = Some(id.degree),
            }
            resolved.push((coef, id));
        }
        let degree = found_degree.ok_or_else(|| {
            RingError::Expression("the degree of `0` cannot be inferred here".into())
        })?;
        self.check_degree(degree)?;
        let mut coords = vec![BigInt::zero(); self.group(degree).len()];
        for (coef, id) in resolved {
            coords[id.index] += coef;
        }
        self.class(degree, coords)
    }

    /// Ranks of the graded pieces as modules over the coefficient ring: the
    /// free rank over `Z`, the number of factors equal to `k` over `Z/k`.
    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.dimension)
            .map(|d| {
                let m = self.ring.modulus();
                self.group(d).factors().iter().filter(|f| *f == m).count()
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks()
            .iter()
            .enumerate()
            .map(|(d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}

impl fmt::Display for CohomologyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension {} over {}", self.dimension, self.ring)?;
        for (d, p) in self.pieces.iter().enumerate() {
            if p.group.is_trivial() {
                continue;
            }
            writeln!(f, "  H^{d} = {}  [{}]", p.group, p.names.join(", "))?;
        }
        Ok(())
    }
}

/// Assembles a [`CohomologyModel`]. All degrees start trivial except `H^0`,
/// which is the coefficient ring generated by `1`.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    dimension: usize,
    orientable: bool,
    simply_connected: bool,
    ring: CoefficientRing,
    pieces: Vec<GradedPiece>,
    products: BTreeMap<(GenId, GenId), ProductEntry>,
}

impl ModelBuilder {
    pub fn new(dimension: usize, ring: CoefficientRing) -> Self {
        let mut pieces = vec![
            GradedPiece {
                group: FgAbGroup::trivial(),
                names: Vec::new(),
            };
            dimension + 1
        ];
        pieces[0] = GradedPiece {
            group: FgAbGroup::cyclic(&ring.free_factor()),
            names: vec!["1".into()],
        };
        ModelBuilder {
            dimension,
            orientable: true,
            simply_connected: true,
            ring,
            pieces,
            products: BTreeMap::new(),
        }
    }

    pub fn orientable(mut self, yes: bool) -> Self {
        self.orientable = yes;
        self
    }

    pub fn simply_connected(mut self, yes: bool) -> Self {
        self.simply_connected = yes;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn group(&self, degree: usize) -> Option<&FgAbGroup> {
        self.pieces.get(degree).map(|p| &p.group)
    }

    pub fn names(&self, degree: usize) -> Option<&[String]> {
        self.pieces.get(degree).map(|p| &p.names[..])
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.pieces.iter().enumerate().find_map(|(d, p)| {
            p.names.iter().position(|n| n == name).map(|i| GenId::new(d, i))
        })
    }

    pub fn set_group(
        &mut self,
        degree: usize,
        group: FgAbGroup,
        names: Vec<String>,
    ) -> Result<&mut Self, RingError> {
        if degree > self.dimension {
            return Err(RingError::Degree {
                degree,
                dimension: self.dimension,
            });
        }
        if names.len() != group.len() {
            return Err(RingError::Mismatch(format!(
                "H^{degree} = {group} has {} generators but {} names were given",
                group.len(),
                names.len()
            )));
        }
        if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
            return Err(RingError::InvalidName(bad.clone()));
        }
        self.products
            .retain(|(a, b), _| a.degree != degree && b.degree != degree && a.degree + b.degree != degree);
        self.pieces[degree] = GradedPiece { group, names };
        Ok(self)
    }

    /// Stores an entry for the ordered pair `(a, b)`. Known values are reduced
    /// into the target group; a conflicting second entry is an error.
    pub fn set_product(&mut self, a: GenId, b: GenId, entry: ProductEntry) -> Result<&mut Self, RingError> {
        for id in [a, b] {
            if self.pieces.get(id.degree).is_none_or(|p| id.index >= p.group.len()) {
                return Err(RingError::Mismatch(format!(
                    "no generator {} in degree {}",
                    id.index, id.degree
                )));
            }
        }
        let degree = a.degree + b.degree;
        if degree > self.dimension {
            return Err(RingError::Degree {
                degree,
                dimension: self.dimension,
            });
        }
        let entry = match entry {
            ProductEntry::Known(v) => {
                ProductEntry::Known(self.pieces[degree].group.element(v.coords().to_vec())?)
            }
            ProductEntry::Unknown => ProductEntry::Unknown,
        };
        if let Some(old) = self.products.get(&(a, b)) {
            if *old != entry {
                return Err(RingError::Mismatch(format!(
                    "conflicting entries for {} * {}",
                    self.pieces[a.degree].names[a.index], self.pieces[b.degree].names[b.index]
                )));
            }
        }
        self.products.insert((a, b), entry);
        Ok(self)
    }

    pub fn set_product_coords(&mut self, a: GenId, b: GenId, coords: &[BigInt]) -> Result<&mut Self, RingError> {
        let v = self
            .group(a.degree + b.degree)
            .ok_or(RingError::Degree {
                degree: a.degree + b.degree,
                dimension: self.dimension,
            })?
            .element(coords.to_vec())?;
        self.set_product(a, b, ProductEntry::Known(v))
    }

    /// Checks structural requirements and produces the model. Algebraic
    /// consistency is checked separately by [`validate`](super::validate).
    pub fn build(self) -> Result<CohomologyModel, RingError> {
        let mut seen = BTreeMap::new();
        for (d, p) in self.pieces.iter().enumerate() {
            for n in &p.names {
                if let Some(prev) = seen.insert(n.clone(), d) {
                    return Err(RingError::InvalidName(format!(
                        "{n} names generators in degrees {prev} and {d}"
                    )));
                }
            }
        }
        let h0 = &self.pieces[0].group;
        if h0.factors() != [self.ring.free_factor()] {
            return Err(RingError::Mismatch(format!(
                "H^0 must be {} for a connected manifold, got {h0}",
                self.ring
            )));
        }
        if self.ring.modulus() > &BigInt::zero() {
            let k = self.ring.modulus();
            for (d, p) in self.pieces.iter().enumerate() {
                if let Some(f) = p.group.factors().iter().find(|f| f.is_zero() || !(k % *f).is_zero()) {
                    return Err(RingError::Mismatch(format!(
                        "H^{d} has a factor of order {f}, which is not a Z/{k}-module"
                    )));
                }
            }
        }
        Ok(CohomologyModel {
            dimension: self.dimension,
            orientable: self.orientable,
            simply_connected: self.simply_connected,
            ring: self.ring,
            pieces: self.pieces,
            products: self.products,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::testing::{cp, s2xs2};

    #[test]
    fn unit_law() {
        let m = s2xs2();
        let a = m.parse_class(None, "a").unwrap();
        assert_eq!(m.cup(&m.unit(), &a).unwrap(), CupValue::Known(a.clone()));
        assert_eq!(m.cup(&a, &m.unit()).unwrap(), CupValue::Known(a));
        let u = m.unit();
        assert_eq!(m.cup_sequence(&[u.clone(), u.clone(), u.clone()]).unwrap(), CupValue::Known(u));
    }

    #[test]
    fn cp2_square_is_top() {
        let m = cp(2);
        let g = m.parse_class(None, "g").unwrap();
        let top = m.generator(GenId::new(4, 0));
        assert_eq!(m.cup(&g, &g).unwrap(), CupValue::Known(top));
    }

    #[test]
    fn cp3_cube() {
        let m = cp(3);
        let g = m.parse_class(None, "g").unwrap();
        let top = m.generator(GenId::new(6, 0));
        assert_eq!(m.cup_sequence(&[g.clone(), g.clone(), g]).unwrap(), CupValue::Known(top));
    }

    #[test]
    fn sphere_product_squares_vanish() {
        let m = s2xs2();
        let a = m.parse_class(None, "a").unwrap();
        let b = m.parse_class(None, "b").unwrap();
        assert!(m.cup(&a, &a).unwrap().known().unwrap().is_zero());
        assert_eq!(m.format(m.cup(&b, &a).unwrap().known().unwrap()), "top");
        let seq = m.cup_sequence(&[a.clone(), b, a]).unwrap();
        assert_eq!(seq.known().unwrap().degree(), 6);
        assert!(seq.known().unwrap().is_zero());
        // (a + 2b)^2 = 4 top
        let x = m.parse_class(None, "a + 2*b").unwrap();
        assert_eq!(m.format(m.cup(&x, &x).unwrap().known().unwrap()), "4*top");
    }

    #[test]
    fn degree_errors() {
        let m = s2xs2();
        assert!(matches!(m.class(5, vec![]), Err(RingError::Degree { .. })));
        let bogus = CohomologyModel::class_unchecked(7, FgAbGroup::trivial().zero());
        assert!(m.cup(&bogus, &m.unit()).is_err());
    }

    #[test]
    fn unknown_propagates_only_with_nonzero_coefficient() {
        let mut b = ModelBuilder::new(4, CoefficientRing::new(2).unwrap());
        let two = BigInt::from(2);
        b.set_group(2, FgAbGroup::cyclic(&two), vec!["x".into()]).unwrap();
        b.set_group(4, FgAbGroup::cyclic(&two), vec!["t".into()]).unwrap();
        b.set_product(GenId::new(2, 0), GenId::new(2, 0), ProductEntry::Unknown).unwrap();
        let m = b.build().unwrap();
        let x = m.parse_class(None, "x").unwrap();
        assert_eq!(m.cup(&x, &x).unwrap(), CupValue::Unknown);
        let z = m.zero(2);
        assert!(m.cup(&z, &x).unwrap().known().is_some());
        assert!(m.has_unknown_products());
    }

    #[test]
    fn format_and_parse_round_trip() {
        let m = s2xs2();
        for text in ["0", "a", "-a", "2*a - 3*b", "-b + a"] {
            let c = m.parse_class(Some(2), text).unwrap();
            let again = m.parse_class(Some(2), &m.format(&c)).unwrap();
            assert_eq!(c, again);
        }
        assert_eq!(m.format(&m.parse_class(None, "-b + a").unwrap()), "a - b");
        assert!(m.parse_class(None, "a + top").is_err());
        assert!(m.parse_class(None, "nope").is_err());
        assert!(m.parse_class(None, "0").is_err());
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = ModelBuilder::new(2, CoefficientRing::integers());
        assert!(b.set_group(2, FgAbGroup::integers(), vec!["a b".into()]).is_err());
        assert!(b.set_group(2, FgAbGroup::integers(), vec![]).is_err());
        assert!(b.set_group(3, FgAbGroup::integers(), vec!["x".into()]).is_err());
        b.set_group(2, FgAbGroup::integers(), vec!["1".into()]).unwrap();
        assert!(b.build().is_err());

        let mut b = ModelBuilder::new(2, CoefficientRing::new(4).unwrap());
        b.set_group(2, FgAbGroup::cyclic(&BigInt::from(3)), vec!["y".into()]).unwrap();
        assert!(b.build().is_err());
    }

    #[test]
    fn ranks_and_euler_characteristic() {
        let m = s2xs2();
        assert_eq!(m.ranks(), vec![1, 0, 2, 0, 1]);
        assert_eq!(m.euler_characteristic(), 4);
    }
}
