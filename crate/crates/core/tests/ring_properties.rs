mod common;

use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;
use sgm_core::builder::{evaluate, CatalogEntry, ManifoldDescription as D};
use sgm_core::ring::{validate, Class, CohomologyModel, CupValue};

#[test]
fn reduction_is_natural_on_the_catalog() {
    common::catalog_naturality().unwrap();
}

#[test]
fn every_catalog_model_validates() {
    for entry in common::catalog_entries() {
        let f = evaluate(&D::Catalog(entry.clone()), &common::ks(&[2, 3, 4])).unwrap();
        for k in [0, 2, 3, 4] {
            let model = f.model(&BigInt::from(k)).unwrap();
            assert!(validate(model).is_empty(), "{entry} over k = {k}");
        }
    }
}

fn models() -> &'static [CohomologyModel] {
    static MODELS: OnceLock<Vec<CohomologyModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        let descs = [
            D::Catalog(CatalogEntry::ComplexProjective(3)),
            D::Product(vec![D::Sphere(2), D::Sphere(2), D::Sphere(3)]),
            D::Product(vec![D::Sphere(2), D::Catalog(CatalogEntry::Wu)]),
            D::Product(vec![D::Sphere(3), D::Sphere(3), D::Sphere(1)]),
            D::Catalog(CatalogEntry::RealProjective(6)),
        ];
        let mut out = Vec::new();
        for d in descs {
            let f = evaluate(&d, &common::ks(&[2, 3])).unwrap();
            out.push(f.integral().clone());
            for k in [2, 3] {
                out.push(f.model(&BigInt::from(k)).unwrap().clone());
            }
        }
        out
    })
}

fn random_class(model: &CohomologyModel, degree: usize, seed: &[i64]) -> Class {
    let len = model.group(degree).len();
    let coords = (0..len).map(|i| BigInt::from(seed[i % seed.len()] * (i as i64 + 1) % 7)).collect();
    model.class(degree, coords).unwrap()
}

fn known(v: CupValue) -> Option<Class> {
    v.known().cloned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cup_is_bilinear(
        which in 0usize..15,
        p in 0usize..=4, q in 0usize..=4,
        s1 in proptest::collection::vec(-5i64..=5, 1..4),
        s2 in proptest::collection::vec(-5i64..=5, 1..4),
        s3 in proptest::collection::vec(-5i64..=5, 1..4),
    ) {
        let model = &models()[which];
        let x = random_class(model, p, &s1);
        let y = random_class(model, p, &s2);
        let z = random_class(model, q, &s3);
        let lhs = known(model.cup(&model.add(&x, &y).unwrap(), &z).unwrap());
        let a = known(model.cup(&x, &z).unwrap());
        let b = known(model.cup(&y, &z).unwrap());
        if let (Some(lhs), Some(a), Some(b)) = (lhs, a, b) {
            prop_assert_eq!(lhs, model.add(&a, &b).unwrap());
        }
    }

    #[test]
    fn cup_is_graded_commutative(
        which in 0usize..15,
        p in 0usize..=4, q in 0usize..=4,
        s1 in proptest::collection::vec(-5i64..=5, 1..4),
        s2 in proptest::collection::vec(-5i64..=5, 1..4),
    ) {
        let model = &models()[which];
        let x = random_class(model, p, &s1);
        let y = random_class(model, q, &s2);
        if let (Some(xy), Some(yx)) = (known(model.cup(&x, &y).unwrap()), known(model.cup(&y, &x).unwrap())) {
            let sign = if p * q % 2 == 1 { BigInt::from(-1) } else { BigInt::from(1) };
            prop_assert_eq!(xy, model.scale(&sign, &yx));
        }
    }

    #[test]
    fn cup_is_associative(
        which in 0usize..15,
        p in 0usize..=3, q in 0usize..=3, r in 0usize..=3,
        s in proptest::collection::vec(-5i64..=5, 1..4),
    ) {
        let model = &models()[which];
        let x = random_class(model, p, &s);
        let y = random_class(model, q, &[s[0] + 1]);
        let z = random_class(model, r, &[s[0] - 2, 3]);
        let left = model.cup(&x, &y).unwrap().known().cloned().map(|xy| model.cup(&xy, &z).unwrap());
        let right = model.cup(&y, &z).unwrap().known().cloned().map(|yz| model.cup(&x, &yz).unwrap());
        if let (Some(CupValue::Known(l)), Some(CupValue::Known(r))) = (left, right) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn formatting_round_trips(
        which in 0usize..15,
        p in 0usize..=7,
        s in proptest::collection::vec(-5i64..=5, 1..4),
    ) {
        let model = &models()[which];
        prop_assume!(p <= model.dimension());
        let x = random_class(model, p, &s);
        prop_assert_eq!(model.parse_class(Some(p), &model.format(&x)).unwrap(), x);
    }
}
