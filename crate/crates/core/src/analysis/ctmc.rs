//! Tangible-marking CTMC by elimination of vanishing markings.
//!
//! For every tangible marking `i` and every timed transition `t` enabled
//! there, the firing lands either on a tangible marking directly or on a
//! vanishing one, from which immediate firings (branching by normalized
//! weight) eventually reach the tangible set. The absorption distribution of
//! each vanishing marking is computed strongly-connected-component by
//! component in reverse topological order: acyclic components reduce to
//! path-probability products, cyclic ones to a small linear solve (the closed
//! form of the geometric series over the cycle).

use std::collections::BTreeMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::analysis::linalg::DenseMatrix;
use crate::analysis::reachability::ReachabilityGraph;
use crate::error::{Error, Result};
use crate::net::{Marking, PetriNet, TransitionId, TransitionKind};
use crate::scalar::Scalar;
use crate::semantics::enabled_unchecked;

/// One timed firing out of a tangible state, resolved to tangible targets.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedBranch<R> {
    pub source: usize,
    pub transition: TransitionId,
    pub rate: R,
    /// Tangible state index and probability; probabilities sum to one.
    pub targets: Vec<(usize, R)>,
}

impl<R: Scalar> TimedBranch<R> {
    pub fn total_probability(&self) -> R {
        self.targets.iter().fold(R::zero(), |acc, (_, p)| acc + *p)
    }
}

#[derive(Debug, Clone)]
pub struct Ctmc<R> {
    /// Tangible markings, in reachability-graph order.
    pub states: Vec<Marking>,
    /// Reachability-graph node of each state.
    pub graph_nodes: Vec<usize>,
    /// Distribution over states entered from the initial marking.
    pub initial: Vec<(usize, R)>,
    /// Off-diagonal generator entries per row, keyed by column.
    pub rates: Vec<BTreeMap<usize, R>>,
    pub branches: Vec<TimedBranch<R>>,
}

impl<R: Scalar> Ctmc<R> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Generator entry `q(i, j)`; the diagonal is the negative row sum.
    pub fn rate(&self, i: usize, j: usize) -> R {
        if i == j {
            -self.exit_rate(i)
        } else {
            self.rates[i].get(&j).copied().unwrap_or_else(R::zero)
        }
    }

    pub fn exit_rate(&self, i: usize) -> R {
        self.rates[i].values().fold(R::zero(), |acc, r| acc + *r)
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.states.iter().position(|s| s == m)
    }

    /// Dense generator, row-major.
    pub fn generator(&self) -> DenseMatrix<R> {
        let n = self.len();
        let mut q = DenseMatrix::zeros(n);
        for i in 0..n {
            for (&j, &r) in &self.rates[i] {
                q[(i, j)] = r;
            }
            q[(i, i)] = -self.exit_rate(i);
        }
        q
    }
}

type Distribution<R> = BTreeMap<usize, R>;

fn add_into<R: Scalar>(acc: &mut Distribution<R>, src: &Distribution<R>, scale: R) {
    for (&k, &v) in src {
        let slot = acc.entry(k).or_insert_with(R::zero);
        *slot = *slot + scale * v;
    }
}

/// Builds the tangible CTMC of a complete reachability graph.
pub fn build_ctmc<R: Scalar>(graph: &ReachabilityGraph, net: &PetriNet<R>) -> Result<Ctmc<R>> {
    if !graph.status.is_complete() {
        return Err(Error::IncompleteGraph(graph.len()));
    }
    let n = graph.len();
    let mut state_of = vec![usize::MAX; n];
    let mut graph_nodes = Vec::new();
    for (v, slot) in state_of.iter_mut().enumerate() {
        if graph.tangible[v] {
            *slot = graph_nodes.len();
            graph_nodes.push(v);
        }
    }
    if graph_nodes.is_empty() {
        return Err(Error::NoTangibleState);
    }
    let successors = graph.successors();

    // Immediate branching probabilities out of each vanishing node.
    let mut branching: Vec<Vec<(usize, R)>> = vec![Vec::new(); n];
    for v in (0..n).filter(|&v| !graph.tangible[v]) {
        let set = enabled_unchecked(net, &graph.markings[v]);
        for e in &successors[v] {
            let p = set
                .immediate
                .iter()
                .find(|(t, _)| *t == e.transition)
                .map(|(_, p)| *p)
                .expect("graph edge out of a vanishing node is an enabled immediate");
            branching[v].push((e.target, p));
        }
    }

    let absorption = absorb(graph, &state_of, &branching)?;

    let mut rates = vec![BTreeMap::new(); graph_nodes.len()];
    let mut branches = Vec::new();
    for (i, &v) in graph_nodes.iter().enumerate() {
        for e in &successors[v] {
            let TransitionKind::Timed { rate } = net.transition(e.transition).kind else {
                unreachable!("tangible nodes only fire timed transitions");
            };
            let targets: Vec<(usize, R)> = if graph.tangible[e.target] {
                vec![(state_of[e.target], R::one())]
            } else {
                absorption[e.target].iter().map(|(&j, &p)| (j, p)).collect()
            };
            for &(j, p) in &targets {
                if j != i {
                    let slot = rates[i].entry(j).or_insert_with(R::zero);
                    *slot = *slot + rate * p;
                }
            }
            branches.push(TimedBranch { source: i, transition: e.transition, rate, targets });
        }
    }

    let initial = if graph.tangible[graph.initial] {
        vec![(state_of[graph.initial], R::one())]
    } else {
        absorption[graph.initial].iter().map(|(&j, &p)| (j, p)).collect()
    };

    Ok(Ctmc {
        states: graph_nodes.iter().map(|&v| graph.markings[v].clone()).collect(),
        graph_nodes,
        initial,
        rates,
        branches,
    })
}

/// Absorption distribution over tangible states for every vanishing node.
fn absorb<R: Scalar>(
    graph: &ReachabilityGraph,
    state_of: &[usize],
    branching: &[Vec<(usize, R)>],
) -> Result<Vec<Distribution<R>>> {
    let n = graph.len();
    let vanishing: Vec<usize> = (0..n).filter(|&v| !graph.tangible[v]).collect();
    let mut out: Vec<Distribution<R>> = vec![BTreeMap::new(); n];
    if vanishing.is_empty() {
        return Ok(out);
    }

    let mut local = vec![usize::MAX; n];
    let mut sub = DiGraph::<usize, ()>::with_capacity(vanishing.len(), 0);
    for &v in &vanishing {
        local[v] = sub.add_node(v).index();
    }
    for &v in &vanishing {
        for &(w, _) in &branching[v] {
            if !graph.tangible[w] {
                sub.add_edge(NodeIndex::new(local[v]), NodeIndex::new(local[w]), ());
            }
        }
    }

    // Tarjan yields components sinks-first, so successors are resolved before use.
    for component in tarjan_scc(&sub) {
        let members: Vec<usize> = component.iter().map(|ix| sub[*ix]).collect();
        let position: BTreeMap<usize, usize> = members.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let cyclic = members.len() > 1 || branching[members[0]].iter().any(|&(w, _)| w == members[0]);

        // Exit distribution of each member: mass leaving the component.
        let mut exits: Vec<Distribution<R>> = vec![BTreeMap::new(); members.len()];
        let mut escapes = false;
        for (k, &v) in members.iter().enumerate() {
            for &(w, p) in &branching[v] {
                if position.contains_key(&w) {
                    continue;
                }
                escapes = true;
                if graph.tangible[w] {
                    add_into(&mut exits[k], &BTreeMap::from([(state_of[w], R::one())]), p);
                } else {
                    let resolved = out[w].clone();
                    add_into(&mut exits[k], &resolved, p);
                }
            }
        }
        if !escapes {
            return Err(Error::VanishingLivelock { state: members[0] });
        }
        if members.iter().any(|&v| branching[v].is_empty()) {
            unreachable!("vanishing nodes always enable an immediate transition");
        }

        if !cyclic {
            out[members[0]] = exits.pop().expect("one member");
            continue;
        }

        // (I - P_cc) X = exits
        let size = members.len();
        let columns: Vec<usize> = {
            let mut cols: Vec<usize> = exits.iter().flat_map(|d| d.keys().copied()).collect();
            cols.sort_unstable();
            cols.dedup();
            cols
        };
        let mut a = DenseMatrix::identity(size);
        for (k, &v) in members.iter().enumerate() {
            for &(w, p) in &branching[v] {
                if let Some(&l) = position.get(&w) {
                    a[(k, l)] = a[(k, l)] - p;
                }
            }
        }
        let rhs: Vec<Vec<R>> = exits
            .iter()
            .map(|d| columns.iter().map(|c| d.get(c).copied().unwrap_or_else(R::zero)).collect())
            .collect();
        let solved = a.solve(rhs).map_err(|_| Error::VanishingLivelock { state: members[0] })?;
        for (k, &v) in members.iter().enumerate() {
            out[v] = columns
                .iter()
                .zip(&solved[k])
                .filter(|(_, p)| !p.is_zero())
                .map(|(&c, &p)| (c, p))
                .collect();
        }
    }

    // A component can escape only into components that never reach the
    // tangible set; that is still a time trap.
    for &v in &vanishing {
        if out[v].is_empty() {
            return Err(Error::VanishingLivelock { state: v });
        }
    }
    Ok(out)
}
