//! Independent oracles shared by the property suites and the acceptance
//! target. Each check returns `Err` with a description of the first failure.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sgm_core::abelian::{coset_contains_infinite_order, smith_decomposition, FgAbGroup, GroupHom, IntMatrix};
use sgm_core::builder::{evaluate, parse_explicit, CatalogEntry, ManifoldDescription as D, ModelFamily};
use sgm_core::obstruction::{analyze, replay, ObstructionReport, SearchOptions};
use sgm_core::ring::naturality;

pub fn ks(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&k| BigInt::from(k)).collect()
}

pub const SIX_DIMENSIONAL: &str = include_str!("../fixtures/six_dimensional.sgm");

// ---------------------------------------------------------------- SNF oracle

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for (j, &a) in m[0].iter().enumerate() {
        if a == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * a * det(&minor);
    }
    total
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_i = D_i / D_{i-1}` with
/// `D_i` the gcd of all `i x i` minors.
pub fn invariant_factors_by_minors(a: &[Vec<i128>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1;
    for i in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in combinations(rows, i) {
            for cs in combinations(cols, i) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

fn to_matrix(a: &[Vec<i128>], cols: usize) -> IntMatrix {
    let rows = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    IntMatrix::from_rows(cols, rows).unwrap()
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.determinant().abs() == BigInt::from(1)
}

pub fn check_snf(a: &[Vec<i128>], cols: usize) -> Result<(), String> {
    let m = to_matrix(a, cols);
    let s = smith_decomposition(&m);
    if &(&s.u * &m) * &s.v != s.d || !s.d.is_diagonal() {
        return Err(format!("d != u a v for {a:?}"));
    }
    if !is_unimodular(&s.u) || !is_unimodular(&s.v) {
        return Err(format!("non-unimodular factor for {a:?}"));
    }
    let got: Vec<i128> = s
        .diagonal()
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| d.to_i128().unwrap())
        .collect();
    let want = invariant_factors_by_minors(a);
    if got != want {
        return Err(format!("{a:?}: snf {got:?}, minors {want:?}"));
    }
    Ok(())
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> (Vec<Vec<i128>>, usize) {
    let rows = rng.gen_range(1..=6);
    let cols = rng.gen_range(1..=6);
    let a = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    (a, cols)
}

pub fn snf_oracle(count: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let (a, cols) = random_matrix(&mut rng);
        check_snf(&a, cols)?;
    }
    Ok(())
}

// ------------------------------------------------------- coset brute force

/// A random well-defined homomorphism between small groups and a target
/// element in its range of interest.
pub fn random_hom(rng: &mut ChaCha8Rng) -> GroupHom {
    // Canonical form: a divisibility chain of finite orders, then zeros.
    let mut factors = |max_len: usize| -> Vec<i64> {
        let len = rng.gen_range(1..=max_len);
        let free = (0..len).filter(|_| rng.gen_bool(0.35)).count();
        let mut out = Vec::new();
        let mut d = rng.gen_range(2..=3);
        for _ in free..len {
            out.push(d);
            d *= rng.gen_range(1..=2);
        }
        out.extend(std::iter::repeat(0).take(free));
        out
    };
    let src = factors(3);
    let tgt = factors(2);
    let mut matrix = IntMatrix::zeros(tgt.len(), src.len());
    for (j, &d) in src.iter().enumerate() {
        for (i, &e) in tgt.iter().enumerate() {
            // A generator of order d must land on an element killed by d.
            let step = match (d, e) {
                (0, _) => 1,
                (_, 0) => 0,
                (d, e) => e / num_integer::gcd(d, e),
            };
            let c = if step == 0 { 0 } else { step * rng.gen_range(-3..=3) };
            matrix.set(i, j, BigInt::from(c));
        }
    }
    let source = FgAbGroup::from_i64(&src).unwrap();
    let target = FgAbGroup::from_i64(&tgt).unwrap();
    GroupHom::new(source, target, matrix).unwrap()
}

/// Every source element whose free coordinates lie in `[-r, r]`.
fn box_elements(g: &FgAbGroup, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for d in g.factors() {
        let range: Vec<i64> = if d.is_zero() { (-r..=r).collect() } else { (0..d.to_i64().unwrap()).collect() };
        out = out
            .into_iter()
            .flat_map(|p| {
                range.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Compares `solve` and the infinite-order test against enumeration of a
/// box of source elements. Box hits must agree with the coset; an
/// infinite-order claim must be realised inside a (larger) box.
/// Returns how many cases had an empty preimage, a torsion-only coset, and
/// an infinite-order lift.
pub fn coset_bruteforce(count: usize, seed: u64) -> Result<[usize; 3], String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = [0; 3];
    for case in 0..count {
        let hom = random_hom(&mut rng);
        let source = hom.source().clone();
        let target = hom.target();
        // Aim at the image half of the time.
        let v = if rng.gen_bool(0.5) {
            let x: Vec<BigInt> = source
                .factors()
                .iter()
                .map(|d| BigInt::from(if d.is_zero() { rng.gen_range(-2..=2) } else { rng.gen_range(0..6) }))
                .collect();
            hom.apply_raw(&x)
        } else {
            let coords = target
                .factors()
                .iter()
                .map(|d| BigInt::from(if d.is_zero() { rng.gen_range(-4..=4) } else { rng.gen_range(0..6) }))
                .collect();
            target.element(coords).map_err(|e| e.to_string())?
        };
        let coset = hom.solve(&v).map_err(|e| e.to_string())?;
        let hits: Vec<Vec<i64>> = box_elements(&source, 8)
            .into_iter()
            .filter(|x| {
                let x: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
                hom.apply_raw(&x) == v
            })
            .collect();
        let ctx = || format!("case {case}: {:?} -> {:?}, v = {:?}", source, target, v.coords());
        match &coset {
            None => {
                if !hits.is_empty() {
                    return Err(format!("{}: solve says empty, box has {:?}", ctx(), hits[0]));
                }
                tally[0] += 1;
            }
            Some(c) => {
                if hom.apply(&c.base).map_err(|e| e.to_string())? != v {
                    return Err(format!("{}: base does not map to v", ctx()));
                }
                for h in &hits {
                    let x = source.element(h.iter().map(|&c| BigInt::from(c)).collect()).unwrap();
                    if !c.contains(&source, &x).map_err(|e| e.to_string())? {
                        return Err(format!("{}: preimage {h:?} outside coset", ctx()));
                    }
                }
                let claimed = coset_contains_infinite_order(&source, c).map_err(|e| e.to_string())?;
                let free_idx: Vec<usize> = (0..source.len()).filter(|&i| source.factors()[i].is_zero()).collect();
                let brute = hits.iter().any(|h| free_idx.iter().any(|&i| h[i] != 0));
                if brute && !claimed {
                    return Err(format!("{}: box holds an infinite-order lift, engine says none", ctx()));
                }
                if claimed && !brute {
                    return Err(format!("{}: engine claims an infinite-order lift the box lacks", ctx()));
                }
                tally[if claimed { 2 } else { 1 }] += 1;
            }
        }
    }
    Ok(tally)
}

// ------------------------------------------------------ catalog naturality

pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut v: Vec<CatalogEntry> = (1..=4).map(CatalogEntry::ComplexProjective).collect();
    v.extend((1..=7).map(CatalogEntry::RealProjective));
    v.push(CatalogEntry::Wu);
    v.push(CatalogEntry::M0);
    v
}

pub fn catalog_naturality() -> Result<(), String> {
    for entry in catalog_entries() {
        let f = evaluate(&D::Catalog(entry.clone()), &ks(&[2, 3])).map_err(|e| format!("{entry}: {e}"))?;
        for k in [2, 3] {
            let red = f
                .reduction(&BigInt::from(k))
                .ok_or_else(|| format!("{entry}: no Z/{k} model"))?;
            let diags = naturality(f.integral(), red);
            if !diags.is_empty() {
                return Err(format!("{entry} mod {k}: {diags:?}"));
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------- Poincaré identity

/// A random tree of products of spheres with total dimension at most
/// `budget` and at most five leaves, plus the dimensions of its leaves.
pub fn random_sphere_tree(rng: &mut ChaCha8Rng, budget: usize, depth: usize) -> (D, Vec<usize>) {
    tree(rng, budget, 5, depth)
}

fn tree(rng: &mut ChaCha8Rng, budget: usize, max_leaves: usize, depth: usize) -> (D, Vec<usize>) {
    if budget < 2 || max_leaves < 2 || depth == 0 || rng.gen_bool(0.3) {
        let n = rng.gen_range(1..=budget.clamp(1, 5));
        return (D::Sphere(n), vec![n]);
    }
    let arity = rng.gen_range(2..=3usize.min(budget).min(max_leaves));
    let (mut dims_left, mut leaves_left) = (budget, max_leaves);
    let mut kids = Vec::new();
    let mut leaves = Vec::new();
    for i in 0..arity {
        let reserve = arity - i - 1;
        let share = if reserve == 0 { dims_left } else { rng.gen_range(1..=dims_left - reserve) };
        let cap = if reserve == 0 { leaves_left } else { rng.gen_range(1..=leaves_left - reserve) };
        let (d, l) = tree(rng, share, cap, depth - 1);
        dims_left -= l.iter().sum::<usize>();
        leaves_left -= l.len();
        kids.push(d);
        leaves.extend(l);
    }
    (D::Product(kids), leaves)
}

pub fn poincare_polynomial(leaves: &[usize]) -> Vec<usize> {
    let mut p = vec![1usize];
    for &n in leaves {
        let mut q = vec![0; p.len() + n];
        for (i, &c) in p.iter().enumerate() {
            q[i] += c;
            q[i + n] += c;
        }
        p = q;
    }
    p
}

pub fn poincare_identity(count: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let (desc, leaves) = random_sphere_tree(&mut rng, 12, 3);
        let f = evaluate(&desc, &ks(&[2, 3])).map_err(|e| format!("{desc}: {e}"))?;
        let want = poincare_polynomial(&leaves);
        for k in [0, 2, 3] {
            let model = f.model(&BigInt::from(k)).unwrap();
            if model.ranks() != want {
                return Err(format!("{desc} over k = {k}: ranks {:?}, expected {want:?}", model.ranks()));
            }
        }
        if (0..=f.dimension()).any(|j| f.integral().group(j).free_rank() != f.integral().group(j).len()) {
            return Err(format!("{desc}: torsion in a product of spheres"));
        }
        let flat = D::Product(leaves.iter().map(|&n| D::Sphere(n)).collect());
        if leaves.len() >= 2 {
            let g = evaluate(&flat, &ks(&[2])).map_err(|e| e.to_string())?;
            if g.integral().ranks() != want {
                return Err(format!("flattened {flat} disagrees"));
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------- obstruction corpus

pub fn corpus() -> Vec<(String, ModelFamily)> {
    let moduli = ks(&[2, 3]);
    let s2s2s3 = || D::Product(vec![D::Sphere(2), D::Sphere(2), D::Sphere(3)]);
    let descs = vec![
        D::Catalog(CatalogEntry::ComplexProjective(2)),
        D::Catalog(CatalogEntry::ComplexProjective(3)),
        D::Catalog(CatalogEntry::RealProjective(4)),
        D::Catalog(CatalogEntry::RealProjective(5)),
        D::Catalog(CatalogEntry::Wu),
        D::Catalog(CatalogEntry::M0),
        D::Sphere(7),
        D::Product(vec![D::Sphere(2), D::Sphere(2)]),
        s2s2s3(),
        D::ConnectedSum(vec![s2s2s3(), s2s2s3()]),
        D::ConnectedSum(vec![s2s2s3(), s2s2s3(), s2s2s3()]),
        D::Product(vec![D::Sphere(2), D::Catalog(CatalogEntry::Wu)]),
        D::Product(vec![D::Catalog(CatalogEntry::ComplexProjective(2)), D::Sphere(3)]),
        D::Product(vec![D::Sphere(3), D::Sphere(4)]),
    ];
    let mut out: Vec<(String, ModelFamily)> = descs
        .into_iter()
        .map(|d| (d.to_string(), evaluate(&d, &moduli).unwrap()))
        .collect();
    out.push((
        "six_dimensional.sgm".into(),
        parse_explicit(SIX_DIMENSIONAL, "six_dimensional.sgm", &moduli).unwrap(),
    ));
    out
}

pub fn options(bound: u32) -> SearchOptions {
    SearchOptions {
        bound,
        ..SearchOptions::default()
    }
}

pub fn replay_report(family: &ModelFamily, report: &ObstructionReport) -> Result<usize, String> {
    let mut count = 0;
    for v in &report.verdicts {
        for w in v.verdict.witnesses() {
            replay(family, w).map_err(|e| format!("{}: n = {}: {e}", report.input, v.n))?;
            if !w.excludes.contains(&v.n) {
                return Err(format!("{}: witness attached to n = {} it does not exclude", report.input, v.n));
            }
            count += 1;
        }
    }
    sgm_core::obstruction::replay_bound(family, &report.component_bound).map_err(|e| e.to_string())?;
    Ok(count)
}

/// Excluded verdicts persist as the search bound grows.
pub fn bound_monotonicity() -> Result<(), String> {
    for (name, f) in corpus() {
        let mut prev: Option<ObstructionReport> = None;
        for b in 1..=3 {
            let r = analyze(&f, &options(b)).map_err(|e| format!("{name}: {e}"))?;
            replay_report(&f, &r)?;
            if let Some(p) = &prev {
                for (a, c) in p.verdicts.iter().zip(&r.verdicts) {
                    if a.verdict.is_excluded() && !c.verdict.is_excluded() {
                        return Err(format!("{name}: n = {} flips to Unknown at B = {b}", a.n));
                    }
                }
                if r.component_bound.value < p.component_bound.value {
                    return Err(format!("{name}: component bound drops at B = {b}"));
                }
            }
            prev = Some(r);
        }
    }
    Ok(())
}
