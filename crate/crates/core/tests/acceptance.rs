//! Acceptance suite: one line per criterion. Run with
//! `cargo test -p sgm-core --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use sgm_core::builder::{evaluate, CatalogEntry, ManifoldDescription as D, ModelFamily};
use sgm_core::obstruction::{
    analyze, six_dimensional, square_not_divisible, torsion_product, BoundJustification, Certificate,
    ObstructionReport, Predicate, SearchOptions,
};

type Check = fn() -> Result<(), String>;

const TIME_LIMIT: Duration = Duration::from_secs(10);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn build(desc: &D) -> Result<ModelFamily, String> {
    evaluate(desc, &common::ks(&[2, 3])).map_err(|e| e.to_string())
}

fn run(f: &ModelFamily) -> Result<ObstructionReport, String> {
    let r = analyze(f, &SearchOptions::default()).map_err(|e| e.to_string())?;
    common::replay_report(f, &r)?;
    Ok(r)
}

fn s2s2s3() -> D {
    D::Product(vec![D::Sphere(2), D::Sphere(2), D::Sphere(3)])
}

fn predicates_at(r: &ObstructionReport, n: usize) -> Vec<Predicate> {
    r.verdict(n).map(|v| v.witnesses().iter().map(|w| w.predicate).collect()).unwrap_or_default()
}

fn criterion_1() -> Result<(), String> {
    let f = build(&D::Catalog(CatalogEntry::ComplexProjective(3)))?;
    let r = run(&f)?;
    ensure(r.dimension == 6 && r.verdicts.len() == 5, "expected targets 1..5")?;
    for n in 1..=4 {
        let v = r.verdict(n).unwrap();
        let w = v
            .witnesses()
            .iter()
            .find(|w| w.predicate == Predicate::CupLength)
            .ok_or(format!("n = {n}: no cup-length witness"))?;
        ensure(
            w.elements.len() <= 3 && w.elements.iter().all(|e| e.expression == "g"),
            format!("n = {n}: witness is not a power of g"),
        )?;
    }
    ensure(
        predicates_at(&r, 5) == [Predicate::ProjectiveCatalog],
        format!("n = 5: {:?}", predicates_at(&r, 5)),
    )
}

fn criterion_2() -> Result<(), String> {
    let f = build(&s2s2s3())?;
    let r = run(&f)?;
    ensure(!r.verdict(5).unwrap().is_excluded(), "n = 5 is not Unknown")?;
    let opts = SearchOptions::default();
    ensure(square_not_divisible(&f, &opts).map_err(|e| e.to_string())?.witness.is_none(), "square-parity fired")?;
    for k in [0, 2, 3] {
        let s = torsion_product(&f, &BigInt::from(k), &opts).map_err(|e| e.to_string())?;
        ensure(s.witness.is_none(), format!("torsion-product fired for k = {k}"))?;
    }
    ensure(predicates_at(&r, 4).contains(&Predicate::CupLength), "n = 4 not excluded by cup-length")?;
    ensure(r.component_bound.value == 2, format!("bound {}", r.component_bound.value))
}

fn criterion_3() -> Result<(), String> {
    for l0 in [2, 3] {
        let f = build(&D::ConnectedSum(vec![s2s2s3(); l0]))?;
        let r = run(&f)?;
        let b = &r.component_bound;
        ensure(b.value == l0 + 1, format!("l0 = {l0}: bound {}", b.value))?;
        ensure(
            matches!(&b.justification, BoundJustification::IndependentProducts { classes } if classes.len() == l0),
            format!("l0 = {l0}: justification {:?}", b.justification),
        )?;
    }
    Ok(())
}

fn criterion_4() -> Result<(), String> {
    let f = build(&D::Product(vec![D::Sphere(2), D::Catalog(CatalogEntry::Wu)]))?;
    let r = run(&f)?;
    ensure(f.integral().group(4).is_trivial(), "H^4(Z) is not zero")?;
    for n in 1..=5 {
        let ws = r.verdict(n).unwrap().witnesses();
        let ok = ws.iter().any(|w| {
            w.predicate == Predicate::TorsionProduct
                && w.modulus == BigInt::from(2)
                && w.certificate == Some(Certificate::EmptyPreimage)
                && w.product.as_ref().is_some_and(|p| p.degree == 4)
        });
        ensure(ok, format!("n = {n}: no mod-2 torsion-product witness with empty preimage"))?;
    }
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    let f = build(&D::Catalog(CatalogEntry::M0))?;
    let r = run(&f)?;
    let s = six_dimensional(&f, &BigInt::from(2), &SearchOptions::default()).map_err(|e| e.to_string())?;
    ensure(s.witness.is_none(), "six-dimensional fired for k = 2")?;
    ensure(!r.verdict(5).unwrap().is_excluded(), "n = 5 is Excluded")?;
    for v in &r.verdicts {
        // Only cup-length can speak here, and only below 5: the manifold
        // maps to R^5, and the targets below 5 are ruled out by degrees.
        for w in v.verdict.witnesses() {
            ensure(
                w.predicate == Predicate::CupLength && v.n < 5,
                format!("n = {}: unexpected {} witness", v.n, w.predicate),
            )?;
        }
    }
    match &r.component_bound.justification {
        BoundJustification::NonzeroProduct { modulus, factors, product } => {
            ensure(*modulus == BigInt::from(2), "product is not mod 2")?;
            ensure(
                factors[0].expression == "e2" && factors[1].expression == "e4" && product.expression == "t4",
                format!("product {} * {} = {}", factors[0].expression, factors[1].expression, product.expression),
            )?;
        }
        j => return Err(format!("justification {j:?}")),
    }
    ensure(r.component_bound.value == 2, format!("bound {}", r.component_bound.value))
}

fn criterion_6() -> Result<(), String> {
    let f = build(&D::Product(vec![D::Catalog(CatalogEntry::ComplexProjective(2)), D::Sphere(3)]))?;
    let r = run(&f)?;
    ensure(predicates_at(&r, 5).contains(&Predicate::SquareNotDivisible), "n = 5 lacks square-parity")?;
    for n in 1..=4 {
        ensure(predicates_at(&r, n).contains(&Predicate::CupLength), format!("n = {n} lacks cup-length"))?;
    }
    Ok(())
}

fn criterion_7() -> Result<(), String> {
    common::snf_oracle(500, 0x5eed_0001).map_err(|e| format!("snf: {e}"))?;
    common::coset_bruteforce(200, 0x5eed_0002).map_err(|e| format!("coset: {e}"))?;
    common::catalog_naturality().map_err(|e| format!("naturality: {e}"))?;
    common::poincare_identity(100, 0x5eed_0003).map_err(|e| format!("kunneth: {e}"))?;
    for c in [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6] {
        c().map_err(|e| format!("replay: {e}"))?;
    }
    common::bound_monotonicity().map_err(|e| format!("monotonicity: {e}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check); 7] = [
        ("CP3: cup-length for n <= 4, projective-space rule for n = 5", criterion_1),
        ("S2xS2xS3: n = 5 Unknown, n = 4 Excluded, component bound 2", criterion_2),
        ("#l0 (S2xS2xS3), l0 = 2, 3: component bound l0 + 1", criterion_3),
        ("S2 x Wu: n = 1..5 Excluded by torsion-product mod 2, empty preimage", criterion_4),
        ("M0: no obstruction at n = 5, six-dimensional rule silent, bound 2", criterion_5),
        ("CP2xS3: square-parity for n = 5, cup-length for n <= 4", criterion_6),
        ("property suites: SNF, cosets, naturality, Kunneth, replay, monotonicity", criterion_7),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > TIME_LIMIT {
            result = Err(format!("took {elapsed:?}"));
        }
        let status = if result.is_ok() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} {title} ({} ms)", i + 1, elapsed.as_millis());
        if let Err(e) = result {
            println!("    {e}");
            failed += 1;
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
