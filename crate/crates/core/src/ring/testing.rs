//! Small hand-built models shared by unit tests.

use num_bigint::BigInt;

use super::{CoefficientRing, CohomologyModel, GenId, ModelBuilder};
use crate::abelian::FgAbGroup;

pub(crate) fn cp(n: usize) -> CohomologyModel {
    let mut b = ModelBuilder::new(2 * n, CoefficientRing::integers());
    for i in 1..=n {
        let name = if i == 1 { "g".to_string() } else { format!("g{i}") };
        b.set_group(2 * i, FgAbGroup::integers(), vec![name]).unwrap();
    }
    for i in 1..=n {
        for j in i..=n - i {
            b.set_product_coords(GenId::new(2 * i, 0), GenId::new(2 * j, 0), &[BigInt::from(1)])
                .unwrap();
        }
    }
    b.build().unwrap()
}

pub(crate) fn s2xs2() -> CohomologyModel {
    let mut b = ModelBuilder::new(4, CoefficientRing::integers());
    b.set_group(2, FgAbGroup::free(2), vec!["a".into(), "b".into()]).unwrap();
    b.set_group(4, FgAbGroup::integers(), vec!["top".into()]).unwrap();
    b.set_product_coords(GenId::new(2, 0), GenId::new(2, 1), &[BigInt::from(1)])
        .unwrap();
    b.build().unwrap()
}

/// Integral `H^0 = Z`, `H^2 = Z`, `H^3 = Z/2`, `H^5 = Z` with trivial
/// products; not a manifold, only exercises the coefficient sequence.
pub(crate) fn torsion_toy() -> CohomologyModel {
    let mut b = ModelBuilder::new(5, CoefficientRing::integers());
    b.set_group(2, FgAbGroup::integers(), vec!["x".into()]).unwrap();
    b.set_group(3, FgAbGroup::cyclic(&BigInt::from(2)), vec!["c".into()]).unwrap();
    b.set_group(5, FgAbGroup::integers(), vec!["top".into()]).unwrap();
    b.build().unwrap()
}

/// Integral cohomology of the Wu manifold `SU(3)/SO(3)`.
pub(crate) fn wu() -> CohomologyModel {
    let mut b = ModelBuilder::new(5, CoefficientRing::integers());
    b.set_group(3, FgAbGroup::cyclic(&BigInt::from(2)), vec!["z3".into()]).unwrap();
    b.set_group(5, FgAbGroup::integers(), vec!["top".into()]).unwrap();
    b.build().unwrap()
}
