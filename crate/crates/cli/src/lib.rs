//! Command-line front end: reads a manifold expression or an explicit model
//! file, runs the obstruction analysis and prints a text or JSON report.

mod config;
pub mod dsl;
mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use sgm_core::builder::{evaluate, load_explicit, BuilderError, ModelFamily};
use sgm_core::obstruction::{analyze, ObstructionError, ObstructionReport, SearchOptions};
use sgm_core::ring::RingError;
use thiserror::Error;

pub use config::{parse_moduli, parse_targets, Cli, CliConfig, Format, Input};
pub use dsl::{parse_expression, ParseError};
pub use render::{json_report, text_report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<BuilderError> for CliError {
    fn from(e: BuilderError) -> Self {
        match &e {
            BuilderError::Validation { .. }
            | BuilderError::Ring(RingError::Validation(_) | RingError::Supplement(_)) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Builds the model family named by the configuration.
pub fn load_family(config: &CliConfig) -> Result<ModelFamily, CliError> {
    let moduli: Vec<_> = config.moduli.iter().filter(|k| **k != 0.into()).cloned().collect();
    let family = match &config.input {
        Input::Expression(text) => {
            let desc = parse_expression(text).map_err(|e| CliError::Input(format!("expression:{e}")))?;
            evaluate(&desc, &moduli)?
        }
        Input::File(path) => load_explicit(path, &moduli)?,
    };
    if config.strict {
        let unknown = std::iter::once(family.integral())
            .chain(family.reductions().values().map(|r| r.modular()))
            .any(|m| m.has_unknown_products());
        if unknown {
            return Err(CliError::Validation(
                "input has undetermined cup products (rejected by --strict)".into(),
            ));
        }
    }
    Ok(family)
}

pub fn analyze_config(config: &CliConfig) -> Result<(ModelFamily, ObstructionReport), CliError> {
    let family = load_family(config)?;
    let opts = SearchOptions {
        moduli: config.moduli.clone(),
        bound: config.bound,
        enum_cap: config.enum_cap,
        targets: config.targets,
    };
    let report = analyze(&family, &opts).map_err(|e| match e {
        ObstructionError::TargetOutOfRange { .. } => CliError::Input(format!("--targets: {e}")),
        e => CliError::Validation(e.to_string()),
    })?;
    Ok((family, report))
}

/// Runs one configuration, writing the report to `out`.
pub fn run(config: &CliConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (family, report) = analyze_config(config)?;
    let text = match config.format {
        Format::Text => text_report(&family, &report, config),
        Format::Json => json_report(&report),
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Input(format!("cannot write report: {e}")))
}

/// Entry point shared by the binary and tests; returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = cli.into_config().and_then(|c| run(&c, out));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
