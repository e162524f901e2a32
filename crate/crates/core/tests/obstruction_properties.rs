mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sgm_core::builder::{evaluate, parse_explicit, CatalogEntry};
use sgm_core::obstruction::{analyze, component_bound, SearchOptions};

#[test]
fn verdicts_are_monotone_in_the_bound() {
    common::bound_monotonicity().unwrap();
}

#[test]
fn every_witness_replays() {
    let mut total = 0;
    for (_, f) in common::corpus() {
        let r = analyze(&f, &SearchOptions::default()).unwrap();
        total += common::replay_report(&f, &r).unwrap();
    }
    assert!(total > 20);
}

#[test]
fn component_bound_is_capped_by_rank() {
    // Where R^5 is already excluded the bound is vacuous, and a nonzero
    // product alone yields 2 even when H^4 has rank 0.
    for (name, f) in common::corpus() {
        let Ok(b) = component_bound(&f, &SearchOptions::default()) else { continue };
        let r = analyze(&f, &SearchOptions::default()).unwrap();
        if r.verdict(5).is_some_and(|v| v.is_excluded()) {
            continue;
        }
        let rank = f.integral().group(4).free_rank();
        assert!(b.value >= 1 && b.value <= rank + 1, "{name}: {} > 1 + {rank}", b.value);
    }
}

#[test]
fn analysis_is_deterministic() {
    for (name, f) in common::corpus() {
        let a = analyze(&f, &SearchOptions::default()).unwrap();
        let b = analyze(&f, &SearchOptions::default()).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

/// Zeroing any subset of the undetermined integral products in the M0 data
/// must keep every Excluded verdict, whenever the result is still a valid
/// family.
#[test]
fn zeroing_unknowns_keeps_exclusions() {
    let text = CatalogEntry::M0.data_file().unwrap();
    let moduli = common::ks(&[2, 3]);
    let base = parse_explicit(text, "m0", &moduli).unwrap();
    let before = analyze(&base, &SearchOptions::default()).unwrap();
    let unknown_lines: Vec<usize> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| l.trim_end().ends_with("= ?"))
        .map(|(i, _)| i)
        .collect();
    assert_eq!(unknown_lines.len(), 6);
    let mut valid = 0;
    for mask in 1u32..(1 << unknown_lines.len()) {
        let edited: Vec<String> = text
            .lines()
            .enumerate()
            .map(|(i, l)| match unknown_lines.iter().position(|&u| u == i) {
                Some(bit) if mask & (1 << bit) != 0 => l.replace("= ?", "= 0"),
                _ => l.to_string(),
            })
            .collect();
        let Ok(f) = parse_explicit(&edited.join("\n"), "m0-zeroed", &moduli) else { continue };
        valid += 1;
        let after = analyze(&f, &SearchOptions::default()).unwrap();
        common::replay_report(&f, &after).unwrap();
        for (a, b) in before.verdicts.iter().zip(&after.verdicts) {
            assert!(!a.verdict.is_excluded() || b.verdict.is_excluded(), "mask {mask:b}, n = {}", a.n);
        }
    }
    assert!(valid > 0);
}

#[test]
fn caps_are_reported() {
    let f = evaluate(&sgm_core::builder::ManifoldDescription::Catalog(CatalogEntry::ComplexProjective(4)), &[])
        .unwrap();
    let opts = SearchOptions {
        enum_cap: 0,
        ..SearchOptions::default()
    };
    let r = analyze(&f, &opts).unwrap();
    assert!(r.notices.iter().any(|n| n.contains("enumeration cap")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_on_random_products_replay(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (desc, _) = common::random_sphere_tree(&mut rng, 9, 2);
        let f = evaluate(&desc, &common::ks(&[2, 3])).unwrap();
        prop_assume!(f.dimension() >= 2);
        let r = analyze(&f, &SearchOptions::default()).unwrap();
        prop_assert!(common::replay_report(&f, &r).is_ok());
        prop_assert_eq!(r.verdicts.len(), f.dimension() - 1);
    }
}
