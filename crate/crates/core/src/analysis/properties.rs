use std::fmt;

use crate::analysis::coverability::{CoverabilityTree, PlaceBound};
use crate::analysis::reachability::ReachabilityGraph;
use crate::net::{Marking, PlaceId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl Verdict {
    fn from_option(v: Option<bool>) -> Self {
        match v {
            Some(true) => Verdict::Holds,
            Some(false) => Verdict::Fails,
            None => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "PASS",
            Verdict::Fails => "FAIL",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub bounded: Verdict,
    pub safe: Verdict,
    pub deadlock_free: Verdict,
    pub place_bounds: Vec<PlaceBound>,
    pub unbounded_places: Vec<PlaceId>,
    /// Reachable dead markings found in the reachability graph.
    pub dead_markings: Vec<Marking>,
}

impl PropertyReport {
    /// Largest token count per place, when known.
    pub fn k_bound(&self, p: PlaceId) -> Option<u64> {
        match self.place_bounds[p.0] {
            PlaceBound::Bounded(k) => Some(k),
            _ => None,
        }
    }
}

/// Combines the coverability tree and an optional reachability graph.
///
/// Boundedness comes from the tree. When the graph is complete its exact
/// maxima replace the tree's bounds, since it respects priorities. Deadlock
/// freedom needs a complete graph; a dead marking found in a truncated graph
/// is still a witness of deadlock.
pub fn check_properties(tree: &CoverabilityTree, graph: Option<&ReachabilityGraph>) -> PropertyReport {
    let mut place_bounds = tree.place_bounds.clone();
    let bounded = Verdict::from_option(tree.is_bounded());

    if let Some(g) = graph.filter(|g| g.status.is_complete()) {
        for (p, bound) in place_bounds.iter_mut().enumerate() {
            let max = g.markings.iter().map(|m| m[p]).max().unwrap_or(0);
            *bound = PlaceBound::Bounded(max);
        }
    }
    let exact_unsafe = graph.is_some_and(|g| g.markings.iter().any(|m| m.0.iter().any(|&k| k > 1)));
    let safe = match bounded {
        Verdict::Fails => Verdict::Fails,
        _ if exact_unsafe => Verdict::Fails,
        Verdict::Holds => {
            if place_bounds.iter().all(|b| matches!(b, PlaceBound::Bounded(k) if *k <= 1)) {
                Verdict::Holds
            } else {
                Verdict::Fails
            }
        }
        Verdict::Unknown => Verdict::from_option(tree.is_safe()),
    };

    let dead_markings: Vec<Marking> = graph.map(|g| g.dead_markings().cloned().collect()).unwrap_or_default();
    let deadlock_free = match graph {
        _ if !dead_markings.is_empty() => Verdict::Fails,
        Some(g) if g.status.is_complete() => Verdict::Holds,
        _ => Verdict::Unknown,
    };

    PropertyReport {
        bounded,
        safe,
        deadlock_free,
        unbounded_places: tree.unbounded_places(),
        place_bounds,
        dead_markings,
    }
}
