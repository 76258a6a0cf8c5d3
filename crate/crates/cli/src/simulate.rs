use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use gspn::io::{render_chart_svg, write_report_csv, ChartSpec};
use gspn::sim::{self, Budget, SimConfig, SimulationReport};
use gspn::smartgrid::{PhaseMap, NET_NAME};
use gspn::Net;

use crate::{load_net, write_output, Mode, Outcome};

/// Budgets and replication count of the `--paper` preset.
pub const PRESET_BUDGETS: [u64; 5] = [100, 300, 500, 700, 1000];
pub const PRESET_REPLICATIONS: usize = 5;

#[derive(clap::Args)]
pub struct Args {
    net: PathBuf,
    #[arg(long, value_enum, default_value = "random")]
    mode: Mode,
    /// Firing budget per replication.
    #[arg(long, conflicts_with = "horizon")]
    firings: Option<u64>,
    /// Simulated time horizon (stochastic mode).
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV report path; with a sweep, one file per budget (`<stem>_N<budget>.csv`).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Comma-separated firing budgets, each run as its own experiment.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["firings", "horizon"])]
    sweep: Option<Vec<u64>>,
    /// Budgets 100,300,500,700,1000 with 5 replications.
    #[arg(long, conflicts_with_all = ["sweep", "firings", "horizon"])]
    paper: bool,
}

const DEFAULT_FIRINGS: u64 = 1000;
const DEFAULT_REPLICATIONS: usize = 5;

fn config(args: &Args, budget: Budget, replications: usize) -> SimConfig {
    match args.mode {
        Mode::Random => SimConfig { budget, ..SimConfig::random(0, replications, args.seed) },
        Mode::Stochastic => SimConfig::stochastic(budget, replications, args.seed),
    }
}

fn phases_for(net: &Net) -> Option<PhaseMap> {
    (net.name() == NET_NAME).then(PhaseMap::smartgrid)
}

fn report_halts(report: &SimulationReport, label: &str) {
    for (r, step) in report.halted_replications() {
        eprintln!("{label}: replication {r} reached a dead marking after {step} firings");
    }
}

pub fn run_sweep(net: &Net, args: &Args, budgets: &[u64], replications: usize) -> Result<Vec<(u64, SimulationReport)>> {
    budgets
        .iter()
        .map(|&n| Ok((n, sim::run(net, &config(args, Budget::Firings(n), replications))?)))
        .collect()
}

fn sweep_csv_path(base: &Path, budget: u64) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = base.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    base.with_file_name(format!("{stem}_N{budget}.{ext}"))
}

pub fn run(args: &Args) -> Result<Outcome> {
    let net = load_net(&args.net)?;
    let phases = phases_for(&net);
    let budgets: Option<Vec<u64>> = if args.paper { Some(PRESET_BUDGETS.to_vec()) } else { args.sweep.clone() };

    if let Some(budgets) = budgets {
        if budgets.is_empty() {
            bail!("--sweep needs at least one budget");
        }
        let default_reps = if args.paper { PRESET_REPLICATIONS } else { DEFAULT_REPLICATIONS };
        let replications = args.replications.unwrap_or(default_reps);
        let sweep = run_sweep(&net, args, &budgets, replications)?;
        for (n, report) in &sweep {
            report_halts(report, &format!("N={n}"));
            if let Some(base) = &args.csv {
                write_output(Some(&sweep_csv_path(base, *n)), &write_report_csv(report, phases.as_ref()))?;
            }
        }
        if let Some(svg) = &args.svg {
            let spec = ChartSpec::from_sweep(format!("{}: mean tokens per place", net.name()), &sweep);
            write_output(Some(svg), &render_chart_svg(&spec))?;
        }
        println!("budget,peak_place,peak_mean");
        for (n, report) in &sweep {
            let (i, mean) = report
                .means()
                .into_iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, m)| if m > best.1 { (i, m) } else { best });
            let name = report.place_names.get(i).map_or("-", String::as_str);
            println!("{n},{name},{mean:.6}");
        }
        return Ok(Outcome::Clean);
    }

    let budget = match (args.firings, args.horizon) {
        (_, Some(t)) => Budget::Horizon(t),
        (Some(n), None) => Budget::Firings(n),
        (None, None) => Budget::Firings(DEFAULT_FIRINGS),
    };
    let report = sim::run(&net, &config(args, budget, args.replications.unwrap_or(DEFAULT_REPLICATIONS)))?;
    report_halts(&report, "run");
    let csv = write_report_csv(&report, phases.as_ref());
    if let Some(svg) = &args.svg {
        let label = match budget {
            Budget::Firings(n) => format!("N={n}"),
            Budget::Horizon(t) => format!("T={t}"),
        };
        let mut spec = ChartSpec::from_sweep(format!("{}: mean tokens per place", net.name()), &[(0, report.clone())]);
        spec.series[0].label = label;
        write_output(Some(svg), &render_chart_svg(&spec))?;
    }
    match &args.csv {
        Some(path) => write_output(Some(path), &csv)?,
        None if args.svg.is_none() => write_output(None, &csv)?,
        None => {}
    }
    Ok(Outcome::Clean)
}
