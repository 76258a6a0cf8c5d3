//! Qualitative orderings of the SG-1 token-distribution experiment.

use gspn::sim::{run_random, SimConfig, SimulationReport};
use gspn::smartgrid::{Phase, PhaseMap};
use gspn::Net;

pub const BUDGETS: [u64; 5] = [100, 300, 500, 700, 1000];
pub const REPLICATIONS: usize = 5;

pub const ORDERINGS: [&str; 7] = [
    "P11 strict global max, > 40",
    "P5 second in generation",
    "P12 < P11",
    "transmission means < 2",
    "P31, P32 < 0.6",
    "P36 in [0, 1]",
    "P37 nondecreasing in N",
];

pub fn sweep(net: &Net, seed: u64) -> Vec<SimulationReport> {
    BUDGETS.iter().map(|&n| run_random(net, &SimConfig::random(n, REPLICATIONS, seed)).unwrap()).collect()
}

/// Evaluates the seven orderings on one seed's sweep; (a)-(f) on the largest budget.
pub fn orderings(sweep: &[SimulationReport]) -> [bool; 7] {
    let phases = PhaseMap::smartgrid();
    let last = sweep.last().unwrap();
    let mean = |name: &str| last.mean_of(name).unwrap();
    let means = last.means();
    let p11 = mean("P11");
    let in_phase = |phase: Phase| -> Vec<(String, f64)> {
        last.place_names
            .iter()
            .zip(&means)
            .filter(|(n, _)| phases.phase_of(n) == Some(phase))
            .map(|(n, &m)| (n.clone(), m))
            .collect()
    };
    let global_rest = last.place_names.iter().zip(&means).filter(|(n, _)| *n != "P11").map(|(_, &m)| m);
    let generation = in_phase(Phase::Generation);
    let mut ranked: Vec<&(String, f64)> = generation.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    let p37: Vec<f64> = sweep.iter().map(|r| r.mean_of("P37").unwrap()).collect();
    [
        p11 > 40.0 && global_rest.fold(f64::NEG_INFINITY, f64::max) < p11,
        ranked.len() > 2 && ranked[1].0 == "P5" && ranked[1].1 > ranked[2].1,
        mean("P12") < p11,
        in_phase(Phase::Transmission).iter().all(|(_, m)| *m < 2.0),
        mean("P31") < 0.6 && mean("P32") < 0.6,
        (0.0..=1.0).contains(&mean("P36")),
        p37.windows(2).all(|w| w[0] <= w[1]),
    ]
}
