use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use sgm_core::builder::ModelFamily;
use sgm_core::obstruction::{
    replay, BoundJustification, Certificate, ObstructionReport, Predicate, Verdict, Witness, WitnessClass,
};

use crate::CliConfig;

fn ring(k: &BigInt) -> String {
    if k.is_zero() {
        "Z".into()
    } else {
        format!("Z/{k}")
    }
}

fn status(v: &Verdict) -> &'static str {
    if v.is_excluded() {
        "Excluded"
    } else {
        "Unknown"
    }
}

#[derive(Serialize)]
struct JsonClass<'a> {
    degree: usize,
    expression: &'a str,
}

impl<'a> From<&'a WitnessClass> for JsonClass<'a> {
    fn from(c: &'a WitnessClass) -> Self {
        JsonClass {
            degree: c.degree,
            expression: &c.expression,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum JsonCertificate<'a> {
    EmptyPreimage,
    TorsionOnlyCoset { base: JsonClass<'a>, kernel: Vec<JsonClass<'a>> },
}

#[derive(Serialize)]
struct JsonWitness<'a> {
    predicate: &'static str,
    excludes: &'a [usize],
    coefficients: String,
    elements: Vec<JsonClass<'a>>,
    product: Option<JsonClass<'a>>,
    certificate: Option<JsonCertificate<'a>>,
}

impl<'a> From<&'a Witness> for JsonWitness<'a> {
    fn from(w: &'a Witness) -> Self {
        JsonWitness {
            predicate: w.predicate.name(),
            excludes: &w.excludes,
            coefficients: ring(&w.modulus),
            elements: w.elements.iter().map(JsonClass::from).collect(),
            product: w.product.as_ref().map(JsonClass::from),
            certificate: w.certificate.as_ref().map(|c| match c {
                Certificate::EmptyPreimage => JsonCertificate::EmptyPreimage,
                Certificate::TorsionOnlyCoset { base, kernel } => JsonCertificate::TorsionOnlyCoset {
                    base: base.into(),
                    kernel: kernel.iter().map(JsonClass::from).collect(),
                },
            }),
        }
    }
}

#[derive(Serialize)]
struct JsonVerdict<'a> {
    n: usize,
    status: &'static str,
    witnesses: Vec<JsonWitness<'a>>,
}

#[derive(Serialize)]
struct JsonProduct<'a> {
    coefficients: String,
    factors: [JsonClass<'a>; 2],
    product: JsonClass<'a>,
}

#[derive(Serialize)]
struct JsonIndependent<'a> {
    integral: JsonClass<'a>,
    #[serde(flatten)]
    product: JsonProduct<'a>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum JsonJustification<'a> {
    IndependentProducts { l: usize, classes: Vec<JsonIndependent<'a>> },
    NonzeroProduct(JsonProduct<'a>),
    Trivial,
}

#[derive(Serialize)]
struct JsonBound<'a> {
    value: usize,
    justification: JsonJustification<'a>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    dimension: usize,
    input: &'a str,
    verdicts: Vec<JsonVerdict<'a>>,
    component_lower_bound: JsonBound<'a>,
    notices: &'a [String],
}

fn product<'a>(k: &BigInt, f: &'a [WitnessClass; 2], p: &'a WitnessClass) -> JsonProduct<'a> {
    JsonProduct {
        coefficients: ring(k),
        factors: [(&f[0]).into(), (&f[1]).into()],
        product: p.into(),
    }
}

pub fn json_report(report: &ObstructionReport) -> String {
    let b = &report.component_bound;
    let justification = match &b.justification {
        BoundJustification::IndependentProducts { classes } => JsonJustification::IndependentProducts {
            l: classes.len(),
            classes: classes
                .iter()
                .map(|c| JsonIndependent {
                    integral: (&c.integral).into(),
                    product: product(&c.modulus, &c.factors, &c.product),
                })
                .collect(),
        },
        BoundJustification::NonzeroProduct {
            modulus,
            factors,
            product: p,
        } => JsonJustification::NonzeroProduct(product(modulus, factors, p)),
        BoundJustification::Trivial => JsonJustification::Trivial,
    };
    let json = JsonReport {
        dimension: report.dimension,
        input: &report.input,
        verdicts: report
            .verdicts
            .iter()
            .map(|v| JsonVerdict {
                n: v.n,
                status: status(&v.verdict),
                witnesses: v.verdict.witnesses().iter().map(JsonWitness::from).collect(),
            })
            .collect(),
        component_lower_bound: JsonBound {
            value: b.value,
            justification,
        },
        notices: &report.notices,
    };
    let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
    s.push('\n');
    s
}

fn reasons(v: &Verdict) -> String {
    let mut seen: Vec<String> = Vec::new();
    for w in v.witnesses() {
        let r = match w.predicate {
            Predicate::ProjectiveCatalog => w.predicate.name().to_string(),
            p => format!("{p} over {}", ring(&w.modulus)),
        };
        if !seen.contains(&r) {
            seen.push(r);
        }
    }
    seen.join(", ")
}

fn explain(out: &mut String, family: &ModelFamily, w: &Witness) {
    let elements: Vec<&str> = w.elements.iter().map(|e| e.expression.as_str()).collect();
    match (&w.product, w.predicate) {
        (_, Predicate::ProjectiveCatalog) => {
            let top = w.excludes.last().copied().unwrap_or(0);
            let _ = writeln!(out, "      complex projective space: no such map into R^n for n <= {top}");
        }
        (Some(p), _) => {
            let _ = writeln!(
                out,
                "      {} = {} in degree {} over {}",
                elements.join(" * "),
                p.expression,
                p.degree,
                ring(&w.modulus)
            );
        }
        (None, _) => {}
    }
    match &w.certificate {
        Some(Certificate::EmptyPreimage) => {
            let _ = writeln!(out, "      no integral class reduces to the product");
        }
        Some(Certificate::TorsionOnlyCoset { base, kernel }) => {
            let k: Vec<&str> = kernel.iter().map(|c| c.expression.as_str()).collect();
            let _ = writeln!(
                out,
                "      integral lifts: {} + <{}>, all of finite order",
                base.expression,
                k.join(", ")
            );
        }
        None => {}
    }
    if w.predicate == Predicate::SquareNotDivisible {
        let _ = writeln!(out, "      the square is not divisible by 2 in H^4(Z)");
    }
    let verdict = match replay(family, w) {
        Ok(()) => "ok".to_string(),
        Err(e) => format!("FAILED ({e})"),
    };
    let _ = writeln!(out, "      replay: {verdict}");
}

pub fn text_report(family: &ModelFamily, report: &ObstructionReport, config: &CliConfig) -> String {
    let mut out = String::new();
    let rings: Vec<String> = config.moduli.iter().map(ring).collect();
    let _ = writeln!(out, "input:        {}", report.input);
    let _ = writeln!(out, "dimension:    {}", report.dimension);
    let _ = writeln!(out, "coefficients: {}", rings.join(", "));
    let _ = writeln!(out, "bound:        {}", config.bound);
    let _ = writeln!(out);
    let _ = writeln!(out, "{:>3}  {:<9} obstructions", "n", "verdict");
    for v in &report.verdicts {
        let _ = writeln!(out, "{:>3}  {:<9} {}", v.n, status(&v.verdict), reasons(&v.verdict));
        if config.explain {
            for w in v.verdict.witnesses() {
                let _ = writeln!(out, "    - {}", w.predicate);
                explain(&mut out, family, w);
            }
        }
    }
    let _ = writeln!(out);
    let b = &report.component_bound;
    let why = match &b.justification {
        BoundJustification::IndependentProducts { classes } => {
            format!("independent-products, l = {}", classes.len())
        }
        BoundJustification::NonzeroProduct { modulus, factors, product } => format!(
            "nonzero-product: {} * {} = {} over {}",
            factors[0].expression,
            factors[1].expression,
            product.expression,
            ring(modulus)
        ),
        BoundJustification::Trivial => "no certificate".into(),
    };
    let _ = writeln!(out, "singular set components for maps into R^5: at least {} ({why})", b.value);
    if config.explain {
        if let BoundJustification::IndependentProducts { classes } = &b.justification {
            for c in classes {
                let _ = writeln!(
                    out,
                    "    - {} reduces to {} * {} = {} over {}",
                    c.integral.expression,
                    c.factors[0].expression,
                    c.factors[1].expression,
                    c.product.expression,
                    ring(&c.modulus)
                );
            }
        }
    }
    if !report.notices.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "notices:");
        for n in &report.notices {
            let _ = writeln!(out, "  - {n}");
        }
    }
    out
}
