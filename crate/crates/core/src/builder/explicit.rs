//! Line-oriented model files.
//!
//! ```text
//! dimension 5
//! orientable true
//! simply_connected true
//!
//! [coefficients 0]
//! H 3 = 2
//! gen 3 z3
//! H 5 = 0
//! gen 5 top
//!
//! [coefficients 2]
//! H 2 = 2
//! gen 2 z2
//! ...
//! reduction 3: 1
//! cup z2 z3 = top
//! ```
//!
//! Integral cup products that are not listed are zero. Modular products that
//! are not listed are derived from the integral table where a lift exists and
//! are undetermined otherwise; `= ?` marks a product as undetermined.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::family::{normalize_moduli, ModelFamily};
use super::BuilderError;
use crate::abelian::{FgAbGroup, IntMatrix};
use crate::ring::{
    parse_combination, reduce_model, validate, CoefficientRing, CohomologyModel, GenId,
    ModelBuilder, ModularSupplement, ProductEntry, RingError,
};

struct Ctx<'a> {
    source: &'a str,
}

impl Ctx<'_> {
    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> BuilderError {
        BuilderError::Syntax {
            source_name: self.source.to_string(),
            line,
            column,
            message: message.into(),
        }
    }
}

/// A token with its 1-based column.
#[derive(Clone, Copy, Debug)]
struct Tok<'a> {
    text: &'a str,
    column: usize,
}

#[derive(Clone, Debug)]
struct Line<'a> {
    number: usize,
    body: &'a str,
}

impl<'a> Line<'a> {
    /// Column of a subslice of `body`.
    fn column_of(&self, part: &str) -> usize {
        let offset = part.as_ptr() as usize - self.body.as_ptr() as usize;
        self.body[..offset].chars().count() + 1
    }

    fn tok(&self, part: &'a str) -> Tok<'a> {
        let trimmed = part.trim();
        let column = if trimmed.is_empty() {
            self.column_of(part)
        } else {
            self.column_of(trimmed)
        };
        Tok { text: trimmed, column }
    }
}

/// Strips a comment: `#` at the start of the line or after whitespace.
fn strip_comment(line: &str) -> &str {
    let mut prev_ws = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_ws {
            return &line[..i];
        }
        prev_ws = c.is_whitespace();
    }
    line
}

struct CupLine<'a> {
    line: usize,
    left: Tok<'a>,
    right: Tok<'a>,
    value: Tok<'a>,
}

struct Block<'a> {
    modulus: BigInt,
    line: usize,
    groups: BTreeMap<usize, (Vec<BigInt>, usize, Tok<'a>)>,
    gens: BTreeMap<usize, (Vec<String>, usize, Tok<'a>)>,
    cups: Vec<CupLine<'a>>,
    reductions: BTreeMap<usize, (Vec<Vec<BigInt>>, usize, Tok<'a>)>,
}

struct Header {
    dimension: usize,
    orientable: bool,
    simply_connected: bool,
}

fn parse_int(ctx: &Ctx, line: usize, t: Tok) -> Result<BigInt, BuilderError> {
    t.text
        .parse::<BigInt>()
        .map_err(|_| ctx.err(line, t.column, format!("expected an integer, found `{}`", t.text)))
}

fn parse_degree(ctx: &Ctx, line: usize, t: Tok, dimension: usize) -> Result<usize, BuilderError> {
    let d = t
        .text
        .parse::<usize>()
        .map_err(|_| ctx.err(line, t.column, format!("expected a degree, found `{}`", t.text)))?;
    if d > dimension {
        return Err(ctx.err(line, t.column, format!("degree {d} exceeds the dimension {dimension}")));
    }
    Ok(d)
}

fn parse_bool(ctx: &Ctx, line: usize, t: Tok) -> Result<bool, BuilderError> {
    match t.text {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(ctx.err(line, t.column, format!("expected `true` or `false`, found `{other}`"))),
    }
}

/// Splits `key rest` at the first run of whitespace.
fn split_key(body: &str) -> (&str, &str) {
    let body = body.trim_start();
    match body.find(char::is_whitespace) {
        Some(i) => (&body[..i], &body[i..]),
        None => (body, ""),
    }
}

/// Parses a model file. Reductions are built for every coefficient block in
/// the file and for every requested modulus.
pub fn parse_explicit(text: &str, source_name: &str, moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    let ctx = Ctx { source: source_name };
    let moduli = normalize_moduli(moduli)?;
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            body: strip_comment(l),
        })
        .filter(|l| !l.body.trim().is_empty())
        .collect();

    let mut dimension = None;
    let mut orientable = None;
    let mut simply_connected = None;
    let mut blocks: Vec<Block> = Vec::new();

    for line in &lines {
        let n = line.number;
        let trimmed = line.body.trim();
        if trimmed.starts_with('[') {
            let t = line.tok(trimmed);
            let inner = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| ctx.err(n, t.column, "expected `[coefficients <k>]`"))?;
            let (key, rest) = split_key(inner);
            if key != "coefficients" {
                return Err(ctx.err(n, line.column_of(key), format!("unknown block `{key}`")));
            }
            let kt = line.tok(rest);
            let k = parse_int(&ctx, n, kt)?;
            let ring = CoefficientRing::new(k.clone()).map_err(|e| ctx.err(n, kt.column, e.to_string()))?;
            if blocks.is_empty() && !ring.is_integral() {
                return Err(ctx.err(n, t.column, "the first block must be `[coefficients 0]`"));
            }
            if blocks.iter().any(|b| &b.modulus == ring.modulus()) {
                return Err(ctx.err(n, t.column, format!("duplicate block for {ring}")));
            }
            if dimension.is_none() {
                return Err(ctx.err(n, 1, "`dimension` must precede the first block"));
            }
            blocks.push(Block {
                modulus: ring.modulus().clone(),
                line: n,
                groups: BTreeMap::new(),
                gens: BTreeMap::new(),
                cups: Vec::new(),
                reductions: BTreeMap::new(),
            });
            continue;
        }
        let (key, rest) = split_key(line.body);
        let key_col = line.column_of(key);
        let Some(block) = blocks.last_mut() else {
            let t = line.tok(rest);
            let slot = match key {
                "dimension" => {
                    let d = t.text.parse::<usize>().ok().filter(|d| *d >= 1).ok_or_else(|| {
                        ctx.err(n, t.column, format!("expected a positive dimension, found `{}`", t.text))
                    })?;
                    if dimension.replace(d).is_some() {
                        return Err(ctx.err(n, key_col, "duplicate `dimension`"));
                    }
                    continue;
                }
                "orientable" => &mut orientable,
                "simply_connected" => &mut simply_connected,
                other => return Err(ctx.err(n, key_col, format!("unknown header key `{other}`"))),
            };
            if slot.replace(parse_bool(&ctx, n, t)?).is_some() {
                return Err(ctx.err(n, key_col, format!("duplicate `{key}`")));
            }
            continue;
        };
        let m = dimension.expect("checked at block start");
        match key {
            "H" | "gen" | "reduction" => {
                let (deg_part, value) = if key == "reduction" {
                    let Some(i) = rest.find(':') else {
                        return Err(ctx.err(n, key_col, "expected `reduction <j>: <matrix>`"));
                    };
                    (&rest[..i], &rest[i + 1..])
                } else if key == "H" {
                    let Some(i) = rest.find('=') else {
                        return Err(ctx.err(n, key_col, "expected `H <j> = <factors>`"));
                    };
                    (&rest[..i], &rest[i + 1..])
                } else {
                    let r = rest.trim_start();
                    match r.find(char::is_whitespace) {
                        Some(i) => (&r[..i], &r[i..]),
                        None => (r, ""),
                    }
                };
                let dt = line.tok(deg_part);
                let j = parse_degree(&ctx, n, dt, m)?;
                let vt = line.tok(value);
                match key {
                    "H" => {
                        let mut factors = Vec::new();
                        if !vt.text.is_empty() {
                            for part in value.split(',') {
                                factors.push(parse_int(&ctx, n, line.tok(part))?);
                            }
                        }
                        if block.groups.insert(j, (factors, n, vt)).is_some() {
                            return Err(ctx.err(n, key_col, format!("duplicate `H {j}`")));
                        }
                    }
                    "gen" => {
                        let mut names = Vec::new();
                        if !vt.text.is_empty() {
                            for part in value.split(',') {
                                let t = line.tok(part);
                                if !crate::ring::valid_name(t.text) {
                                    return Err(ctx.err(n, t.column, format!("invalid generator name `{}`", t.text)));
                                }
                                names.push(t.text.to_string());
                            }
                        }
                        if block.gens.insert(j, (names, n, vt)).is_some() {
                            return Err(ctx.err(n, key_col, format!("duplicate `gen {j}`")));
                        }
                    }
                    _ => {
                        if block.modulus.is_zero() {
                            return Err(ctx.err(n, key_col, "`reduction` belongs in a modular block"));
                        }
                        let mut rows = Vec::new();
                        if !vt.text.is_empty() {
                            for row in value.split(';') {
                                let mut r = Vec::new();
                                for part in row.split(',') {
                                    r.push(parse_int(&ctx, n, line.tok(part))?);
                                }
                                rows.push(r);
                            }
                        }
                        if block.reductions.insert(j, (rows, n, vt)).is_some() {
                            return Err(ctx.err(n, key_col, format!("duplicate `reduction {j}`")));
                        }
                    }
                }
            }
            "cup" => {
                let Some(eq) = rest.find('=') else {
                    return Err(ctx.err(n, key_col, "expected `cup <x> <y> = <value>`"));
                };
                let lhs = &rest[..eq];
                let parts: Vec<&str> = lhs.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(ctx.err(n, line.tok(lhs).column, "expected two generator names before `=`"));
                }
                let value = line.tok(&rest[eq + 1..]);
                if value.text.is_empty() {
                    return Err(ctx.err(n, value.column, "expected a value or `?` after `=`"));
                }
                block.cups.push(CupLine {
                    line: n,
                    left: line.tok(parts[0]),
                    right: line.tok(parts[1]),
                    value,
                });
            }
            other => return Err(ctx.err(n, key_col, format!("unknown key `{other}`"))),
        }
    }

    let header = Header {
        dimension: dimension.ok_or_else(|| ctx.err(1, 1, "missing `dimension`"))?,
        orientable: orientable.ok_or_else(|| ctx.err(1, 1, "missing `orientable`"))?,
        simply_connected: simply_connected.ok_or_else(|| ctx.err(1, 1, "missing `simply_connected`"))?,
    };
    let Some((first, rest)) = blocks.split_first() else {
        return Err(ctx.err(lines.last().map_or(1, |l| l.number), 1, "missing `[coefficients 0]` block"));
    };
    let integral = integral_model(&ctx, &header, first)?;
    let mut reductions = BTreeMap::new();
    for block in rest {
        let supplement = supplement(&ctx, &header, &integral, block)?;
        let red = reduce_model(&integral, block.modulus.clone(), Some(&supplement)).map_err(|e| match e {
            RingError::Validation(diagnostics) => BuilderError::Validation {
                source_name: source_name.to_string(),
                line: Some(block.line),
                diagnostics,
            },
            other => ctx.err(block.line, 1, other.to_string()),
        })?;
        reductions.insert(block.modulus.clone(), red);
    }
    for k in moduli {
        if !reductions.contains_key(&k) {
            let red = reduce_model(&integral, k.clone(), None)?;
            reductions.insert(k, red);
        }
    }
    ModelFamily::assemble(source_name.to_string(), integral, reductions)
}

/// Groups and names of one block, with `H^0` defaulting to the coefficient
/// ring generated by `1`.
fn block_groups(
    ctx: &Ctx,
    block: &Block,
) -> Result<BTreeMap<usize, (FgAbGroup, Vec<String>)>, BuilderError> {
    let mut out = BTreeMap::new();
    for (&j, (factors, line, t)) in &block.groups {
        let group = FgAbGroup::new(factors.clone()).map_err(|e| ctx.err(*line, t.column, e.to_string()))?;
        let names = match block.gens.get(&j) {
            Some((names, _, _)) => names.clone(),
            None if group.is_trivial() => Vec::new(),
            None if j == 0 && group.len() == 1 => vec!["1".to_string()],
            None => return Err(ctx.err(*line, 1, format!("missing `gen {j}` line"))),
        };
        if names.len() != group.len() {
            let (_, gl, gt) = &block.gens[&j];
            return Err(ctx.err(
                *gl,
                gt.column,
                format!("H^{j} has {} generators but {} names are given", group.len(), names.len()),
            ));
        }
        out.insert(j, (group, names));
    }
    for (&j, (_, line, t)) in &block.gens {
        if !block.groups.contains_key(&j) {
            return Err(ctx.err(*line, t.column, format!("`gen {j}` without a matching `H {j}`")));
        }
    }
    let ring = CoefficientRing::new(block.modulus.clone()).expect("checked when the block opened");
    out.entry(0)
        .or_insert_with(|| (FgAbGroup::cyclic(&ring.free_factor()), vec!["1".to_string()]));
    Ok(out)
}

fn lookup(
    ctx: &Ctx,
    groups: &BTreeMap<usize, (FgAbGroup, Vec<String>)>,
    line: usize,
    t: Tok,
) -> Result<GenId, BuilderError> {
    groups
        .iter()
        .find_map(|(&d, (_, names))| names.iter().position(|x| x == t.text).map(|i| GenId::new(d, i)))
        .ok_or_else(|| ctx.err(line, t.column, format!("unknown generator `{}`", t.text)))
}

fn cup_value(
    ctx: &Ctx,
    groups: &BTreeMap<usize, (FgAbGroup, Vec<String>)>,
    dimension: usize,
    cup: &CupLine,
) -> Result<(GenId, GenId, ProductEntry), BuilderError> {
    let a = lookup(ctx, groups, cup.line, cup.left)?;
    let b = lookup(ctx, groups, cup.line, cup.right)?;
    let degree = a.degree + b.degree;
    if degree > dimension {
        return Err(ctx.err(
            cup.line,
            cup.left.column,
            format!("{} * {} lands in degree {degree} above the dimension", cup.left.text, cup.right.text),
        ));
    }
    if cup.value.text == "?" {
        return Ok((a, b, ProductEntry::Unknown));
    }
    let terms = parse_combination(cup.value.text).map_err(|e| ctx.err(cup.line, cup.value.column, e.to_string()))?;
    let target = groups
        .get(&degree)
        .map(|(g, _)| g.clone())
        .unwrap_or_else(FgAbGroup::trivial);
    let mut coords = vec![BigInt::zero(); target.len()];
    for (coef, name) in terms {
        let id = lookup(ctx, groups, cup.line, Tok { text: &name, column: cup.value.column })?;
        if id.degree != degree {
            return Err(ctx.err(
                cup.line,
                cup.value.column,
                format!("`{name}` has degree {}, but the product has degree {degree}", id.degree),
            ));
        }
        coords[id.index] += coef;
    }
    let v = target.element(coords).expect("length matches");
    Ok((a, b, ProductEntry::Known(v)))
}

fn integral_model(ctx: &Ctx, header: &Header, block: &Block) -> Result<CohomologyModel, BuilderError> {
    let groups = block_groups(ctx, block)?;
    let mut builder = ModelBuilder::new(header.dimension, CoefficientRing::integers())
        .orientable(header.orientable)
        .simply_connected(header.simply_connected);
    for (&j, (g, names)) in &groups {
        builder
            .set_group(j, g.clone(), names.clone())
            .map_err(|e| ctx.err(block.groups.get(&j).map_or(block.line, |x| x.1), 1, e.to_string()))?;
    }
    for cup in &block.cups {
        let (a, b, e) = cup_value(ctx, &groups, header.dimension, cup)?;
        builder
            .set_product(a, b, e)
            .map_err(|e| ctx.err(cup.line, cup.left.column, e.to_string()))?;
    }
    let model = builder.build().map_err(|e| ctx.err(block.line, 1, e.to_string()))?;
    let diagnostics = validate(&model);
    if !diagnostics.is_empty() {
        return Err(BuilderError::Validation {
            source_name: ctx.source.to_string(),
            line: Some(block.line),
            diagnostics,
        });
    }
    Ok(model)
}

fn supplement(
    ctx: &Ctx,
    header: &Header,
    integral: &CohomologyModel,
    block: &Block,
) -> Result<ModularSupplement, BuilderError> {
    let groups = block_groups(ctx, block)?;
    let mut s = ModularSupplement {
        groups: groups.clone(),
        ..Default::default()
    };
    for j in 0..=header.dimension {
        let rows = integral.group(j).len();
        let cols = groups.get(&j).map_or(0, |(g, _)| g.len());
        match block.reductions.get(&j) {
            Some((entries, line, t)) => {
                let shape_ok = entries.len() == rows && entries.iter().all(|r| r.len() == cols);
                if !shape_ok {
                    return Err(ctx.err(
                        *line,
                        t.column,
                        format!("reduction {j} must be a {rows} x {cols} matrix (rows are integral generators)"),
                    ));
                }
                s.reductions
                    .insert(j, IntMatrix::from_rows(cols, entries.clone()).expect("shape checked"));
            }
            None if j == 0 && rows == 1 && cols == 1 => {
                s.reductions.insert(0, IntMatrix::from_rows(1, vec![vec![BigInt::one()]]).unwrap());
            }
            None if rows == 0 || cols == 0 => {}
            None => {
                return Err(ctx.err(block.line, 1, format!("missing `reduction {j}` in this block")));
            }
        }
    }
    for cup in &block.cups {
        s.products.push(cup_value(ctx, &groups, header.dimension, cup)?);
    }
    Ok(s)
}

/// Reads and parses a model file.
pub fn load_explicit(path: &Path, moduli: &[BigInt]) -> Result<ModelFamily, BuilderError> {
    let text = std::fs::read_to_string(path).map_err(|e| BuilderError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_explicit(&text, &path.display().to_string(), moduli)
}
