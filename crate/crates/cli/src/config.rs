use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Obstructions to special generic maps, read off cohomology rings.
#[derive(Debug, Parser)]
#[command(name = "sgm", version)]
pub struct Cli {
    /// Manifold expression, e.g. `product(sphere(2), sphere(2), sphere(3))`.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub expression: Option<String>,
    /// Read an explicit model file instead of an expression.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Coefficient moduli; 0 stands for the integers.
    #[arg(long, default_value = "0,2,3")]
    pub coefficients: String,
    /// Coefficient and multiplicity bound for witness searches.
    #[arg(long, default_value_t = 3)]
    pub bound: u32,
    /// Largest number of elements enumerated per search.
    #[arg(long, default_value_t = 4096)]
    pub enum_cap: usize,
    /// Target dimensions as `a..b` or a single `n`; defaults to 1..m-1.
    #[arg(long)]
    pub targets: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Show each witness and its replay.
    #[arg(long)]
    pub explain: bool,
    /// Reject inputs with undetermined cup products.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Expression(String),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub input: Input,
    pub moduli: Vec<BigInt>,
    pub bound: u32,
    pub enum_cap: usize,
    pub targets: Option<(usize, usize)>,
    pub format: Format,
    pub explain: bool,
    pub strict: bool,
}

pub fn parse_moduli(text: &str) -> Result<Vec<BigInt>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let k: BigInt = part
            .parse()
            .map_err(|_| CliError::Input(format!("--coefficients: `{part}` is not an integer")))?;
        if k.is_negative() || k.is_one() {
            return Err(CliError::Input(format!("--coefficients: {k} is not 0 or at least 2")));
        }
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out.sort();
    Ok(out)
}

pub fn parse_targets(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Input(format!("--targets: expected `a..b` or `n`, got `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let n = num(text)?;
            (n, n)
        }
    };
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

impl Cli {
    pub fn into_config(self) -> Result<CliConfig, CliError> {
        if self.bound == 0 {
            return Err(CliError::Input("--bound must be at least 1".into()));
        }
        let input = match (self.expression, self.file) {
            (Some(e), None) => Input::Expression(e),
            (None, Some(f)) => Input::File(f),
            _ => return Err(CliError::Input("give either an expression or --file".into())),
        };
        Ok(CliConfig {
            input,
            moduli: parse_moduli(&self.coefficients)?,
            bound: self.bound,
            enum_cap: self.enum_cap,
            targets: self.targets.as_deref().map(parse_targets).transpose()?,
            format: self.format,
            explain: self.explain,
            strict: self.strict,
        })
    }
}
