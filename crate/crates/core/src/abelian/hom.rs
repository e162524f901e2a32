use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::group::{cokernel, FgAbGroup, GroupElement};
use super::matrix::IntMatrix;
use super::snf::smith_decomposition;
use super::AbelianError;

/// A homomorphism between finitely generated abelian groups, given by the
/// images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    /// `target.len() x source.len()`; column `j` is the image of generator `j`.
    matrix: IntMatrix,
}

/// `base + span(kernel_generators)` inside one group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub base: GroupElement,
    pub kernel_generators: Vec<GroupElement>,
}

impl GroupHom {
    /// Checks shape and well-definedness: a generator of finite order `d` must
    /// map to an element killed by `d`.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self, AbelianError> {
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(AbelianError::Shape(format!(
                "homomorphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.len(),
                source.len()
            )));
        }
        let mut reduced = IntMatrix::zeros(target.len(), source.len());
        for j in 0..source.len() {
            let image = target.reduce(matrix.column(j));
            let d = &source.factors()[j];
            if !d.is_zero() && !target.scale(d, &image).is_zero() {
                return Err(AbelianError::IllDefined(format!(
                    "generator {j} has order {d} but its image {image:?} is not killed by {d}"
                )));
            }
            for (i, c) in image.coords().iter().enumerate() {
                reduced.set(i, j, c.clone());
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix: reduced,
        })
    }

    pub fn identity(group: &FgAbGroup) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(group.len()),
        }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.len(), source.len()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement, AbelianError> {
        self.source.check(x)?;
        Ok(self.apply_raw(x.coords()))
    }

    /// Applies the matrix to unreduced source coordinates.
    pub fn apply_raw(&self, coords: &[BigInt]) -> GroupElement {
        self.target.reduce(self.matrix.apply(coords))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, AbelianError> {
        if inner.target != self.source {
            return Err(AbelianError::Shape("composition of mismatched homomorphisms".into()));
        }
        GroupHom::new(
            inner.source.clone(),
            self.target.clone(),
            &self.matrix * &inner.matrix,
        )
    }

    /// Integer system `[M | D_target] z = v` whose solutions, projected to
    /// the first `source.len()` coordinates, are exactly the preimages of `v`.
    fn lifted_system(&self) -> IntMatrix {
        let t = &self.target;
        let finite: Vec<usize> = (0..t.len()).filter(|&i| !t.factors()[i].is_zero()).collect();
        let mut rel = IntMatrix::zeros(t.len(), finite.len());
        for (c, &i) in finite.iter().enumerate() {
            rel.set(i, c, t.factors()[i].clone());
        }
        self.matrix.hcat(&rel)
    }

    /// The full preimage of `v` as a coset, or `None` when it is empty.
    pub fn solve(&self, v: &GroupElement) -> Result<Option<Coset>, AbelianError> {
        self.target.check(v)?;
        let a = self.lifted_system();
        let s = smith_decomposition(&a);
        let rhs = s.u.apply(v.coords());
        let diag = s.diagonal();
        let n = a.cols();
        let mut w = vec![BigInt::zero(); n];
        for (i, r) in rhs.iter().enumerate() {
            let d = diag.get(i).cloned().unwrap_or_default();
            if d.is_zero() {
                if !r.is_zero() {
                    return Ok(None);
                }
            } else {
                let (q, rem) = r.div_rem(&d);
                if !rem.is_zero() {
                    return Ok(None);
                }
                w[i] = q;
            }
        }
        let particular = s.v.apply(&w);
        let src_len = self.source.len();
        let base = self.source.reduce(particular[..src_len].to_vec());
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let mut kernel_generators = Vec::new();
        for j in rank..n {
            let col = s.v.column(j);
            let k = self.source.reduce(col[..src_len].to_vec());
            if !k.is_zero() && !kernel_generators.contains(&k) {
                kernel_generators.push(k);
            }
        }
        Ok(Some(Coset {
            base,
            kernel_generators,
        }))
    }

    /// `target / image`.
    pub fn cokernel(&self) -> FgAbGroup {
        let a = self.lifted_system();
        let c = cokernel(self.target.len(), &a.transpose()).expect("column count matches");
        c.group
    }

    /// Order of the image subgroup when the target is finite.
    pub fn image_order(&self) -> Option<BigInt> {
        let t = self.target.order()?;
        let c = self.cokernel().order()?;
        Some(t / c)
    }

    pub fn in_image(&self, v: &GroupElement) -> Result<bool, AbelianError> {
        Ok(self.solve(v)?.is_some())
    }
}

impl Coset {
    pub fn contains(&self, group: &FgAbGroup, x: &GroupElement) -> Result<bool, AbelianError> {
        group.check(x)?;
        let diff = group.sub(x, &self.base);
        let gens: Vec<&GroupElement> = self.kernel_generators.iter().collect();
        let span = span_hom(group, &gens)?;
        span.in_image(&diff)
    }
}

fn span_hom(group: &FgAbGroup, gens: &[&GroupElement]) -> Result<GroupHom, AbelianError> {
    let mut m = IntMatrix::zeros(group.len(), gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (i, c) in g.coords().iter().enumerate() {
            m.set(i, j, c.clone());
        }
    }
    GroupHom::new(FgAbGroup::free(gens.len()), group.clone(), m)
}

/// Whether some member of the coset has infinite order. Decided through the
/// torsion quotient: a member has infinite order iff its free part is
/// nonzero, and the free parts of the coset form `q(base) + span q(kernel)`.
pub fn coset_contains_infinite_order(group: &FgAbGroup, c: &Coset) -> Result<bool, AbelianError> {
    group.check(&c.base)?;
    for k in &c.kernel_generators {
        group.check(k)?;
    }
    let nonzero = |x: &GroupElement| group.free_part(x).iter().any(|v| !v.is_zero());
    Ok(nonzero(&c.base) || c.kernel_generators.iter().any(nonzero))
}
