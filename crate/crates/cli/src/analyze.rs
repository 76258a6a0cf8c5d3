use std::path::PathBuf;

use anyhow::Result;
use gspn::analysis::{
    build_ctmc, check_properties, coverability_with_limit, explore_reachability, steady_state, Exploration, PlaceBound,
    PropertyReport, Verdict, DEFAULT_COVERABILITY_LIMIT,
};
use gspn::{ArcKind, Net};

use crate::{load_net, Outcome};

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Bounded,
    Safe,
    Deadlock,
}

#[derive(clap::Args)]
pub struct Args {
    net: PathBuf,
    /// Reachability limit in markings.
    #[arg(long, default_value_t = 100_000)]
    max_states: usize,
    /// Properties to check; all three when neither --check nor --steady-state is given.
    #[arg(long, value_enum, value_delimiter = ',')]
    check: Vec<Check>,
    /// Coverability tree limit in nodes.
    #[arg(long, default_value_t = DEFAULT_COVERABILITY_LIMIT)]
    max_nodes: usize,
    /// Solve the embedded CTMC and print expected tokens per place.
    #[arg(long)]
    steady_state: bool,
}

fn describe(status: Exploration) -> String {
    match status {
        Exploration::Complete => "complete".into(),
        Exploration::Truncated(n) => format!("truncated at {n}"),
    }
}

fn source_transitions(net: &Net) -> Vec<String> {
    net.transitions()
        .iter()
        .filter(|t| !net.arcs().iter().any(|a| a.transition == t.id && a.kind == ArcKind::Input))
        .map(|t| t.name.clone())
        .collect()
}

fn print_checks(net: &Net, checks: &[Check], report: &PropertyReport, reach_status: Exploration) -> bool {
    let names = |ids: &[gspn::PlaceId]| ids.iter().map(|p| net.place(*p).name.clone()).collect::<Vec<_>>().join(", ");
    let mut all_pass = true;
    for check in checks {
        let (label, verdict) = match check {
            Check::Bounded => ("bounded", report.bounded),
            Check::Safe => ("safe", report.safe),
            Check::Deadlock => ("deadlock", report.deadlock_free),
        };
        all_pass &= verdict == Verdict::Holds;
        let detail = match (check, verdict) {
            (Check::Bounded, Verdict::Fails) => format!(" (unbounded; ω at {})", names(&report.unbounded_places)),
            (Check::Bounded, Verdict::Unknown) => " (coverability tree truncated)".into(),
            (Check::Safe, Verdict::Fails) => {
                let over: Vec<_> = report
                    .place_bounds
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| !matches!(b, PlaceBound::Bounded(k) if *k <= 1))
                    .map(|(p, _)| net.places()[p].name.clone())
                    .collect();
                format!(" (more than one token possible at {})", over.join(", "))
            }
            (Check::Deadlock, Verdict::Fails) => {
                format!(" (dead marking {})", report.dead_markings.first().map(ToString::to_string).unwrap_or_default())
            }
            (Check::Deadlock, Verdict::Unknown) => format!(" (reachability {})", describe(reach_status)),
            _ => String::new(),
        };
        println!("{label}: {verdict}{detail}");
    }
    if checks.contains(&Check::Bounded) && report.bounded == Verdict::Fails {
        let sources = source_transitions(net);
        if !sources.is_empty() {
            println!("note: transitions with empty preset ({}) can fire forever, so the net cannot be bounded", sources.join(", "));
        }
    }
    all_pass
}

pub fn run(args: &Args) -> Result<Outcome> {
    let net = load_net(&args.net)?;
    let checks: Vec<Check> = if args.check.is_empty() && !args.steady_state {
        vec![Check::Bounded, Check::Safe, Check::Deadlock]
    } else {
        args.check.clone()
    };
    println!(
        "net: {} ({} places, {} transitions, {} arcs)",
        net.name(),
        net.place_count(),
        net.transition_count(),
        net.arcs().len()
    );

    let tree = coverability_with_limit(&net, args.max_nodes)?;
    println!("coverability: {} nodes, {}", tree.nodes.len(), describe(tree.status));
    let graph = explore_reachability(&net, args.max_states)?;
    println!("reachability: {} markings, {} edges, {}", graph.len(), graph.edges.len(), describe(graph.status));

    let report = check_properties(&tree, Some(&graph));
    let mut all_pass = print_checks(&net, &checks, &report, graph.status);

    if args.steady_state {
        match build_ctmc(&graph, &net).and_then(|ctmc| steady_state(&ctmc).map(|ss| (ctmc.len(), ss))) {
            Ok((states, ss)) => {
                println!("steady-state: {states} tangible states, residual {:.3e}", ss.residual);
                for (place, e) in net.places().iter().zip(&ss.expected_tokens) {
                    println!("E[{}]={e:.6}", place.name);
                }
            }
            Err(err) => {
                println!("steady-state: {err}");
                all_pass = false;
            }
        }
    }
    Ok(if all_pass { Outcome::Clean } else { Outcome::Findings })
}
