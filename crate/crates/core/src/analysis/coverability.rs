//! Karp–Miller coverability tree.
//!
//! The tree is built over the untimed net: priorities and timing are ignored,
//! so every GSPN-reachable marking is covered by some node. Inhibitor arcs are
//! honoured exactly by restricting acceleration: a place read by an inhibitor
//! is only pumped to ω when the covered ancestor already holds at least the
//! largest inhibitor multiplicity on it, at which point every inhibitor test
//! on that place is false for all larger values too. ω at such a place
//! therefore blocks its inhibited transitions.
//!
//! Nodes whose ω-marking already occurs elsewhere in the tree are leaves.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::analysis::reachability::Exploration;
use crate::error::{Error, Result};
use crate::net::{PetriNet, PlaceId, TransitionId};
use crate::scalar::Scalar;

pub const DEFAULT_COVERABILITY_LIMIT: usize = 50_000;

/// Token count that may be ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tokens {
    Finite(u64),
    Omega,
}

impl Tokens {
    pub fn is_omega(self) -> bool {
        self == Tokens::Omega
    }
}

impl fmt::Display for Tokens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tokens::Finite(k) => write!(f, "{k}"),
            Tokens::Omega => write!(f, "ω"),
        }
    }
}

const OMEGA: u64 = u64::MAX;

/// Marking whose entries may be ω (stored as `u64::MAX`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaMarking(Vec<u64>);

impl OmegaMarking {
    pub fn get(&self, p: usize) -> Tokens {
        match self.0[p] {
            OMEGA => Tokens::Omega,
            k => Tokens::Finite(k),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = Tokens> + '_ {
        (0..self.0.len()).map(|p| self.get(p))
    }

    pub fn has_omega(&self) -> bool {
        self.0.contains(&OMEGA)
    }
}

impl fmt::Display for OmegaMarking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.entries().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Successors were generated.
    Expanded,
    /// Marking already present at an earlier node; not expanded.
    Duplicate,
    /// No transition has concession.
    Dead,
    /// Left unexpanded because the node limit was hit.
    Frontier,
}

#[derive(Debug, Clone)]
pub struct CoverNode {
    pub marking: OmegaMarking,
    pub parent: Option<(usize, TransitionId)>,
    pub kind: NodeKind,
}

/// Boundedness of a single place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceBound {
    Bounded(u64),
    Unbounded,
    /// Tree truncated before a verdict; carries the largest count seen.
    Unknown(u64),
}

#[derive(Debug, Clone)]
pub struct CoverabilityTree {
    pub nodes: Vec<CoverNode>,
    pub status: Exploration,
    pub place_bounds: Vec<PlaceBound>,
}

impl CoverabilityTree {
    pub fn unbounded_places(&self) -> Vec<PlaceId> {
        self.place_bounds
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == PlaceBound::Unbounded)
            .map(|(p, _)| PlaceId(p))
            .collect()
    }

    /// `Some(true)` bounded, `Some(false)` unbounded, `None` undecided.
    pub fn is_bounded(&self) -> Option<bool> {
        if self.place_bounds.contains(&PlaceBound::Unbounded) {
            Some(false)
        } else if self.status.is_complete() {
            Some(true)
        } else {
            None
        }
    }

    pub fn is_safe(&self) -> Option<bool> {
        match self.is_bounded() {
            Some(false) => Some(false),
            _ if self.place_bounds.iter().any(|b| matches!(b, PlaceBound::Bounded(k) | PlaceBound::Unknown(k) if *k > 1)) => {
                Some(false)
            }
            Some(true) => Some(true),
            None => None,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, TransitionId, usize)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.parent.map(|(p, t)| (p, t, i)))
    }
}

fn has_concession<R: Scalar>(net: &PetriNet<R>, m: &[u64], t: TransitionId) -> bool {
    let arcs = net.arc_index(t);
    arcs.inputs.iter().all(|&(p, k)| m[p] >= k)
        && arcs.inhibitors.iter().all(|&(p, k)| m[p] != OMEGA && m[p] < k)
}

fn fire<R: Scalar>(net: &PetriNet<R>, m: &[u64], t: TransitionId) -> Vec<u64> {
    let arcs = net.arc_index(t);
    let mut next = m.to_vec();
    for &(p, k) in &arcs.inputs {
        if next[p] != OMEGA {
            next[p] -= k;
        }
    }
    for &(p, k) in &arcs.outputs {
        if next[p] != OMEGA {
            next[p] = next[p].saturating_add(k).min(OMEGA - 1);
        }
    }
    next
}

/// Widens `m` to ω wherever it strictly exceeds an admissible covered ancestor.
fn accelerate(m: &mut [u64], ancestor: &[u64], thresholds: &[Option<u64>]) -> bool {
    let mut strict = false;
    for p in 0..m.len() {
        if m[p] < ancestor[p] {
            return false;
        }
        if m[p] > ancestor[p] {
            strict = true;
            if let Some(k) = thresholds[p] {
                if ancestor[p] < k {
                    return false;
                }
            }
        }
    }
    if !strict {
        return false;
    }
    let mut changed = false;
    for p in 0..m.len() {
        if m[p] > ancestor[p] && m[p] != OMEGA {
            m[p] = OMEGA;
            changed = true;
        }
    }
    changed
}

/// Karp–Miller tree with [`DEFAULT_COVERABILITY_LIMIT`] nodes.
pub fn coverability<R: Scalar>(net: &PetriNet<R>) -> Result<CoverabilityTree> {
    coverability_with_limit(net, DEFAULT_COVERABILITY_LIMIT)
}

/// Karp–Miller tree, built breadth first, stopping after `max_nodes` nodes.
///
/// ω markers found before the limit are genuine: each stems from a pumpable
/// firing sequence. Places without ω get a bound only when the tree is complete.
pub fn coverability_with_limit<R: Scalar>(net: &PetriNet<R>, max_nodes: usize) -> Result<CoverabilityTree> {
    let diags = net.validate();
    if !diags.is_empty() {
        return Err(Error::InvalidNet(diags));
    }
    if max_nodes == 0 {
        return Err(Error::InvalidConfig("max_nodes must be positive".into()));
    }
    let thresholds = net.inhibitor_thresholds();
    let root = net.initial_marking().0;
    let mut nodes = vec![CoverNode { marking: OmegaMarking(root.clone()), parent: None, kind: NodeKind::Frontier }];
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::from([(root, 0)]);
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;

    while let Some(i) = queue.pop_front() {
        if nodes.len() >= max_nodes {
            truncated = true;
            break;
        }
        let m = nodes[i].marking.0.clone();
        let mut any = false;
        for tr in net.transitions() {
            if !has_concession(net, &m, tr.id) {
                continue;
            }
            any = true;
            if nodes.len() >= max_nodes {
                truncated = true;
                continue;
            }
            let mut next = fire(net, &m, tr.id);
            loop {
                let mut changed = false;
                let mut cursor = Some(i);
                while let Some(a) = cursor {
                    changed |= accelerate(&mut next, &nodes[a].marking.0, &thresholds);
                    cursor = nodes[a].parent.map(|(p, _)| p);
                }
                if !changed {
                    break;
                }
            }
            let j = nodes.len();
            let kind = if seen.contains_key(&next) {
                NodeKind::Duplicate
            } else {
                seen.insert(next.clone(), j);
                queue.push_back(j);
                NodeKind::Frontier
            };
            nodes.push(CoverNode { marking: OmegaMarking(next), parent: Some((i, tr.id)), kind });
        }
        nodes[i].kind = if any { NodeKind::Expanded } else { NodeKind::Dead };
    }
    if !queue.is_empty() {
        truncated = true;
    }

    let complete = !truncated;
    let place_bounds = (0..net.place_count())
        .map(|p| {
            let mut max = 0u64;
            for n in &nodes {
                match n.marking.0[p] {
                    OMEGA => return PlaceBound::Unbounded,
                    k => max = max.max(k),
                }
            }
            if complete {
                PlaceBound::Bounded(max)
            } else {
                PlaceBound::Unknown(max)
            }
        })
        .collect();

    Ok(CoverabilityTree {
        nodes,
        status: if complete { Exploration::Complete } else { Exploration::Truncated(max_nodes) },
        place_bounds,
    })
}
