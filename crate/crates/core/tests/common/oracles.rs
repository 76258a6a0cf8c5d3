//! Per-net comparisons between the library and the reference implementations.

use std::collections::BTreeSet;

use gspn::analysis::{build_ctmc, explore_reachability};
use gspn::Error;

use super::{brute_force_reachability, enumerate_absorption, random_net, EdgeSet, Incidence, Shape};

pub const REACH_LIMIT: usize = 10_000;

/// `None` when the net has more than [`REACH_LIMIT`] reachable markings.
/// Even seeds draw conservative nets, which are bounded and have larger state spaces.
pub fn reachability_case(seed: u64) -> Option<Result<usize, String>> {
    let shape = if seed.is_multiple_of(2) {
        Shape { conservative: true, max_places: 7, max_transitions: 8, max_initial: 8, ..Shape::default() }
    } else {
        Shape::default()
    };
    let net = random_net(seed, shape);
    let (states, edges) = brute_force_reachability(&net, REACH_LIMIT)?;
    let graph = match explore_reachability(&net, REACH_LIMIT) {
        Ok(g) => g,
        Err(e) => return Some(Err(e.to_string())),
    };
    if !graph.status.is_complete() {
        return Some(Err(format!("explorer truncated at {} markings, oracle found {}", graph.len(), states.len())));
    }
    let got_states: BTreeSet<Vec<u64>> = graph.markings.iter().map(|m| m.0.clone()).collect();
    let got_edges: EdgeSet = graph
        .edges
        .iter()
        .map(|e| (graph.markings[e.source].0.clone(), e.transition.0, graph.markings[e.target].0.clone()))
        .collect();
    if got_states.len() != graph.len() {
        return Some(Err("explorer returned duplicate markings".into()));
    }
    if got_edges.len() != graph.edges.len() {
        return Some(Err("explorer returned duplicate edges".into()));
    }
    if got_states != states {
        return Some(Err(format!("marking sets differ: {} vs {}", got_states.len(), states.len())));
    }
    if got_edges != edges {
        return Some(Err(format!("edge sets differ: {} vs {}", got_edges.len(), edges.len())));
    }
    Some(Ok(states.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elimination {
    /// Row sums checked; `true` when the vanishing region was acyclic and
    /// every branch was also compared against path enumeration.
    Checked(bool),
    Livelock,
}

/// `None` for nets outside the test domain (too large, or no tangible marking).
pub fn elimination_case(seed: u64) -> Option<Result<Elimination, String>> {
    let shape = Shape { immediate_share: 0.5, max_initial: 2, ..Shape::default() };
    let net = random_net(seed, shape);
    let graph = explore_reachability(&net, 2_000).ok()?;
    if !graph.status.is_complete() {
        return None;
    }
    let ctmc = match build_ctmc(&graph, &net) {
        Ok(c) => c,
        Err(Error::VanishingLivelock { .. }) => return Some(Ok(Elimination::Livelock)),
        Err(Error::NoTangibleState) => return None,
        Err(e) => return Some(Err(e.to_string())),
    };
    let inc = Incidence::of(&net);
    let mut enumerated = true;
    for branch in &ctmc.branches {
        let sum: f64 = branch.targets.iter().map(|x| x.1).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Some(Err(format!("branch {} from state {} sums to {sum}", branch.transition, branch.source)));
        }
        let after = inc.fire(branch.transition.0, &ctmc.states[branch.source].0);
        match enumerate_absorption(&net, &inc, &after, 64) {
            Some(expected) => {
                for (m, p) in &expected {
                    let j = ctmc.states.iter().position(|s| &s.0 == m);
                    let got = j.and_then(|j| branch.targets.iter().find(|x| x.0 == j)).map_or(0.0, |x| x.1);
                    if (got - p).abs() > 1e-9 {
                        return Some(Err(format!("branch {} into {m:?}: {got} vs enumerated {p}", branch.transition)));
                    }
                }
                if expected.len() != branch.targets.iter().filter(|x| x.1 > 0.0).count() {
                    return Some(Err(format!("branch {} has extra targets", branch.transition)));
                }
            }
            None => enumerated = false,
        }
    }
    for i in 0..ctmc.len() {
        let row: f64 = (0..ctmc.len()).map(|j| ctmc.generator()[(i, j)]).sum();
        if row.abs() > 1e-9 {
            return Some(Err(format!("generator row {i} sums to {row}")));
        }
    }
    Some(Ok(Elimination::Checked(enumerated)))
}
