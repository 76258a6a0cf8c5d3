use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::net::{Marking, PetriNet, TransitionId};
use crate::scalar::Scalar;
use crate::semantics::{apply, enabled_unchecked};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exploration {
    Complete,
    /// Stopped because the node limit was reached with work left.
    Truncated(usize),
}

impl Exploration {
    pub fn is_complete(self) -> bool {
        self == Exploration::Complete
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub transition: TransitionId,
    pub target: usize,
}

/// Exact reachable markings of a net under GSPN priority semantics.
#[derive(Debug, Clone)]
pub struct ReachabilityGraph {
    pub markings: Vec<Marking>,
    pub edges: Vec<Edge>,
    pub initial: usize,
    pub tangible: Vec<bool>,
    /// `true` where nothing is enabled.
    pub dead: Vec<bool>,
    pub status: Exploration,
}

impl ReachabilityGraph {
    pub fn len(&self) -> usize {
        self.markings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markings.is_empty()
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.markings.iter().position(|x| x == m)
    }

    pub fn dead_markings(&self) -> impl Iterator<Item = &Marking> {
        self.markings.iter().zip(&self.dead).filter(|(_, d)| **d).map(|(m, _)| m)
    }

    pub fn successors(&self) -> Vec<Vec<Edge>> {
        let mut out = vec![Vec::new(); self.len()];
        for e in &self.edges {
            out[e.source].push(*e);
        }
        out
    }
}

/// Breadth-first exploration from the initial marking.
///
/// Vanishing markings expand only their top-priority immediate successors and
/// tangible markings their timed successors; transitions are tried in id
/// order. The graph is `Complete` iff the frontier empties without needing
/// more than `max_states` nodes.
pub fn explore_reachability<R: Scalar>(net: &PetriNet<R>, max_states: usize) -> Result<ReachabilityGraph> {
    let diags = net.validate();
    if !diags.is_empty() {
        return Err(Error::InvalidNet(diags));
    }
    if max_states == 0 {
        return Err(Error::InvalidConfig("max_states must be positive".into()));
    }
    let initial = net.initial_marking();
    let mut index: HashMap<Marking, usize> = HashMap::new();
    let mut markings = vec![initial.clone()];
    index.insert(initial, 0);
    let mut tangible = Vec::new();
    let mut dead = Vec::new();
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;

    while let Some(i) = queue.pop_front() {
        let m = markings[i].clone();
        let set = enabled_unchecked(net, &m);
        tangible.push(!set.is_vanishing());
        dead.push(set.is_dead());
        for t in set.transitions() {
            let next = apply(net, &m, t);
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if markings.len() >= max_states {
                        truncated = true;
                        continue;
                    }
                    let j = markings.len();
                    markings.push(next.clone());
                    index.insert(next, j);
                    queue.push_back(j);
                    j
                }
            };
            edges.push(Edge { source: i, transition: t, target: j });
        }
    }

    Ok(ReachabilityGraph {
        markings,
        edges,
        initial: 0,
        tangible,
        dead,
        status: if truncated { Exploration::Truncated(max_states) } else { Exploration::Complete },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::NetBuilder;

    #[test]
    fn two_place_cycle() {
        let mut b = NetBuilder::<f64>::new("c");
        let a = b.place("A", 1);
        let c = b.place("B", 0);
        let t0 = b.timed("T0", 1.0);
        let t1 = b.timed("T1", 1.0);
        b.input(t0, a, 1).output(t0, c, 1).input(t1, c, 1).output(t1, a, 1);
        let g = explore_reachability(&b.build(), 100).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.edges.len(), 2);
        assert!(g.status.is_complete());
        assert!(g.tangible.iter().all(|&x| x));
    }

    #[test]
    fn source_transition_truncates() {
        let mut b = NetBuilder::<f64>::new("src");
        let p = b.place("P", 0);
        let t = b.timed("T", 1.0);
        b.output(t, p, 1);
        let g = explore_reachability(&b.build(), 10).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g.status, Exploration::Truncated(10));
        assert_eq!(g.markings[9], Marking(vec![9]));
    }

    #[test]
    fn exact_state_count_is_complete() {
        let mut b = NetBuilder::<f64>::new("c");
        let a = b.place("A", 1);
        let c = b.place("B", 0);
        let t0 = b.timed("T0", 1.0);
        b.input(t0, a, 1).output(t0, c, 1);
        let g = explore_reachability(&b.build(), 2).unwrap();
        assert!(g.status.is_complete());
        assert_eq!(g.dead, vec![false, true]);
    }

    #[test]
    fn vanishing_nodes_expand_only_immediates() {
        let mut b = NetBuilder::<f64>::new("v");
        let p = b.place("P", 1);
        let q = b.place("Q", 0);
        let r = b.place("R", 0);
        let imm = b.immediate("I", 1.0, 1);
        let timed = b.timed("T", 1.0);
        b.input(imm, p, 1).output(imm, q, 1).input(timed, p, 1).output(timed, r, 1);
        let g = explore_reachability(&b.build(), 10).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.edges, vec![Edge { source: 0, transition: imm, target: 1 }]);
        assert_eq!(g.tangible, vec![false, true]);
    }
}
