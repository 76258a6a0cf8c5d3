//! `gspn-grid`: emit, validate, simulate and analyze GSPN models.
//!
//! Exit codes: 0 success, 1 findings (failed or unknown checks, invalid
//! nets, livelock or non-ergodic chains), 2 usage or input errors.

mod analyze;
mod simulate;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gspn::io::{parse_net, parse_net_unchecked, serialize_net, ParseError};
use gspn::smartgrid::{build_smartgrid, SmartGridConfig};
use gspn::Net;

#[derive(Parser)]
#[command(name = "gspn-grid", version, about = "GSPN engine and analyzer for the SG-1 smart-grid model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the SG-1 net in the textual net format.
    Emit {
        /// `defaults`, a settings file, or inline `key=value,...` pairs.
        #[arg(long, default_value = "defaults")]
        config: String,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a net file and report structural diagnostics.
    Validate { net: PathBuf },
    /// Run seeded simulations and emit CSV/SVG reports.
    Simulate(simulate::Args),
    /// Check boundedness, safeness and deadlock freedom; solve the steady state.
    Analyze(analyze::Args),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Random,
    Stochastic,
}

/// Non-error result of a subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    Findings,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Emit { config, out } => emit(&config, out.as_deref()),
        Command::Validate { net } => validate(&net),
        Command::Simulate(args) => simulate::run(&args),
        Command::Analyze(args) => analyze::run(&args),
    };
    match result {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Findings) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_config(spec: &str) -> Result<SmartGridConfig> {
    let mut config = SmartGridConfig::default();
    if spec == "defaults" {
        return Ok(config);
    }
    let path = Path::new(spec);
    let text = if path.is_file() {
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?
    } else if spec.contains('=') {
        spec.to_string()
    } else {
        bail!("config {spec:?} is neither `defaults`, a readable file, nor key=value pairs");
    };
    config.parse_settings(&text)?;
    config.validate()?;
    Ok(config)
}

fn emit(config: &str, out: Option<&Path>) -> Result<Outcome> {
    let config = load_config(config)?;
    let net: Net = build_smartgrid(&config)?;
    let text = serialize_net(&net);
    write_output(out, &text)?;
    eprintln!(
        "{}: {} places, {} transitions, {} arcs",
        net.name(),
        net.place_count(),
        net.transition_count(),
        net.arcs().len()
    );
    Ok(Outcome::Clean)
}

fn validate(path: &Path) -> Result<Outcome> {
    let text = read_text(path)?;
    let net: Net = parse_net_unchecked(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let diagnostics = net.validate();
    if diagnostics.is_empty() {
        println!(
            "ok: {} ({} places, {} transitions, {} arcs)",
            net.name(),
            net.place_count(),
            net.transition_count(),
            net.arcs().len()
        );
        return Ok(Outcome::Clean);
    }
    for d in &diagnostics {
        println!("{d}");
    }
    eprintln!("{}: {} diagnostic(s)", path.display(), diagnostics.len());
    Ok(Outcome::Findings)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Reads, parses and validates a net; any failure is an input error.
pub fn load_net(path: &Path) -> Result<Net> {
    let text = read_text(path)?;
    parse_net(&text).map_err(|e| match e {
        ParseError::Syntax { .. } => anyhow::anyhow!("{}: {e}", path.display()),
        ParseError::Invalid(_) => anyhow::anyhow!("{}: {e}", path.display()),
    })
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
