//! Shared fixtures: seeded random nets and reference implementations that do
//! not go through the library's semantics module.
#![allow(dead_code)]

pub mod oracles;
pub mod props;
pub mod sg1;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use gspn::{ArcKind, Marking, Net, NetBuilder, PetriNet, Scalar, TransitionId, TransitionKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_places: usize,
    pub max_transitions: usize,
    pub immediate_share: f64,
    pub inhibitor_share: f64,
    pub max_initial: u64,
    /// Every transition consumes as many tokens as it produces.
    pub conservative: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_places: 5,
            max_transitions: 6,
            immediate_share: 0.3,
            inhibitor_share: 0.1,
            max_initial: 3,
            conservative: false,
        }
    }
}

const VALUES: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];

/// Deterministic random net for `seed`.
pub fn random_net(seed: u64, shape: Shape) -> Net {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let np = rng.random_range(1..=shape.max_places);
    let nt = rng.random_range(1..=shape.max_transitions);
    let mut b = NetBuilder::<f64>::new(format!("rand-{seed}"));
    let places: Vec<_> = (0..np).map(|i| b.place(format!("P{i}"), rng.random_range(0..=shape.max_initial))).collect();
    for i in 0..nt {
        let t = if rng.random_bool(shape.immediate_share) {
            b.immediate(format!("T{i}"), VALUES[rng.random_range(0..VALUES.len())], rng.random_range(1..=2))
        } else {
            b.timed(format!("T{i}"), VALUES[rng.random_range(0..VALUES.len())])
        };
        if shape.conservative {
            let width = rng.random_range(1..=2.min(np));
            let mut inputs = places.clone();
            let mut outputs = places.clone();
            for _ in 0..width {
                let p = inputs.swap_remove(rng.random_range(0..inputs.len()));
                let q = outputs.swap_remove(rng.random_range(0..outputs.len()));
                let k = rng.random_range(1..=2);
                b.input(t, p, k).output(t, q, k);
            }
        } else {
            for &p in &places {
                if rng.random_bool(0.35) {
                    b.input(t, p, rng.random_range(1..=2));
                }
                if rng.random_bool(0.3) {
                    b.output(t, p, rng.random_range(1..=2));
                }
            }
        }
        for &p in &places {
            if rng.random_bool(shape.inhibitor_share) {
                b.inhibitor(t, p, rng.random_range(1..=3));
            }
        }
    }
    b.build()
}

/// Per-transition arc totals read straight from the arc list.
pub struct Incidence {
    pub pre: Vec<Vec<u64>>,
    pub post: Vec<Vec<u64>>,
    pub inhib: Vec<Vec<Option<u64>>>,
}

impl Incidence {
    pub fn of<R: Scalar>(net: &PetriNet<R>) -> Self {
        let (nt, np) = (net.transition_count(), net.place_count());
        let mut inc = Incidence { pre: vec![vec![0; np]; nt], post: vec![vec![0; np]; nt], inhib: vec![vec![None; np]; nt] };
        for a in net.arcs() {
            let (t, p) = (a.transition.0, a.place.0);
            match a.kind {
                ArcKind::Input => inc.pre[t][p] += a.multiplicity,
                ArcKind::Output => inc.post[t][p] += a.multiplicity,
                ArcKind::Inhibitor => {
                    let slot = &mut inc.inhib[t][p];
                    *slot = Some(slot.map_or(a.multiplicity, |k| k.min(a.multiplicity)));
                }
            }
        }
        inc
    }

    pub fn concession(&self, t: usize, m: &[u64]) -> bool {
        m.iter().enumerate().all(|(p, &k)| k >= self.pre[t][p] && self.inhib[t][p].is_none_or(|h| k < h))
    }

    pub fn fire(&self, t: usize, m: &[u64]) -> Vec<u64> {
        m.iter().enumerate().map(|(p, &k)| k - self.pre[t][p] + self.post[t][p]).collect()
    }
}

/// Reference enabling rule: top-priority immediates preempt timed ones.
/// Returns `(transition, normalized weight or raw rate)`.
pub fn reference_enabled<R: Scalar>(net: &PetriNet<R>, inc: &Incidence, m: &[u64]) -> Vec<(usize, f64)> {
    let with_concession: Vec<usize> = (0..net.transition_count()).filter(|&t| inc.concession(t, m)).collect();
    let immediates: Vec<(usize, u32, f64)> = with_concession
        .iter()
        .filter_map(|&t| match net.transitions()[t].kind {
            TransitionKind::Immediate { weight, priority } => Some((t, priority, weight.to_f64_lossy())),
            TransitionKind::Timed { .. } => None,
        })
        .collect();
    if let Some(top) = immediates.iter().map(|x| x.1).max() {
        let chosen: Vec<_> = immediates.into_iter().filter(|x| x.1 == top).collect();
        let total: f64 = chosen.iter().map(|x| x.2).sum();
        return chosen.into_iter().map(|(t, _, w)| (t, w / total)).collect();
    }
    with_concession
        .into_iter()
        .map(|t| match net.transitions()[t].kind {
            TransitionKind::Timed { rate } => (t, rate.to_f64_lossy()),
            TransitionKind::Immediate { .. } => unreachable!(),
        })
        .collect()
}

pub type EdgeSet = BTreeSet<(Vec<u64>, usize, Vec<u64>)>;

/// Brute-force reachable set and edge relation, by iterating
/// `S := S ∪ post(S)` to a fixpoint. `None` if it exceeds `limit` markings.
pub fn brute_force_reachability<R: Scalar>(net: &PetriNet<R>, limit: usize) -> Option<(BTreeSet<Vec<u64>>, EdgeSet)> {
    let inc = Incidence::of(net);
    let mut states: HashSet<Vec<u64>> = HashSet::from([net.initial_marking().0]);
    let mut edges = EdgeSet::new();
    let mut fresh: Vec<Vec<u64>> = states.iter().cloned().collect();
    while !fresh.is_empty() {
        let mut next = Vec::new();
        for m in &fresh {
            for (t, _) in reference_enabled(net, &inc, m) {
                let m2 = inc.fire(t, m);
                edges.insert((m.clone(), t, m2.clone()));
                if states.insert(m2.clone()) {
                    if states.len() > limit {
                        return None;
                    }
                    next.push(m2);
                }
            }
        }
        fresh = next;
    }
    Some((states.into_iter().collect(), edges))
}

/// Absorption distribution from a vanishing marking into tangible markings,
/// by enumerating every immediate firing path. `None` if a path revisits a
/// marking (cyclic vanishing region) or the depth exceeds `max_depth`.
pub fn enumerate_absorption<R: Scalar>(
    net: &PetriNet<R>,
    inc: &Incidence,
    m: &[u64],
    max_depth: usize,
) -> Option<BTreeMap<Vec<u64>, f64>> {
    fn walk<R: Scalar>(
        net: &PetriNet<R>,
        inc: &Incidence,
        m: &[u64],
        prob: f64,
        path: &mut Vec<Vec<u64>>,
        out: &mut BTreeMap<Vec<u64>, f64>,
        max_depth: usize,
    ) -> Option<()> {
        let enabled = reference_enabled(net, inc, m);
        let vanishing = enabled.iter().any(|&(t, _)| net.transitions()[t].kind.is_immediate());
        if !vanishing {
            *out.entry(m.to_vec()).or_insert(0.0) += prob;
            return Some(());
        }
        if path.len() >= max_depth || path.iter().any(|q| q == m) {
            return None;
        }
        path.push(m.to_vec());
        for (t, w) in enabled {
            walk(net, inc, &inc.fire(t, m), prob * w, path, out, max_depth)?;
        }
        path.pop();
        Some(())
    }
    let mut out = BTreeMap::new();
    walk(net, inc, m, 1.0, &mut Vec::new(), &mut out, max_depth)?;
    Some(out)
}

/// `T0: A → B` at rate `lambda`, `T1: B → A` at rate `mu`, one token at A.
pub fn birth_death<R: Scalar>(lambda: R, mu: R) -> PetriNet<R> {
    let mut b = NetBuilder::new("pair");
    let a = b.place("A", 1);
    let c = b.place("B", 0);
    let t0 = b.timed("T0", lambda);
    let t1 = b.timed("T1", mu);
    b.input(t0, a, 1).output(t0, c, 1).input(t1, c, 1).output(t1, a, 1);
    b.build()
}

/// Timed `T(λ)`: S → V, then immediates V → A (weight 2) and V → B (weight 1),
/// with timed returns A → S and B → S.
pub fn weighted_split<R: Scalar>(lambda: R) -> PetriNet<R> {
    let one = R::one();
    let two = one + one;
    let mut b = NetBuilder::new("split");
    let s = b.place("S", 1);
    let v = b.place("V", 0);
    let a = b.place("A", 0);
    let c = b.place("B", 0);
    let t = b.timed("T", lambda);
    let ia = b.immediate("IA", two, 1);
    let ib = b.immediate("IB", one, 1);
    let ra = b.timed("RA", one);
    let rb = b.timed("RB", one);
    b.input(t, s, 1).output(t, v, 1);
    b.input(ia, v, 1).output(ia, a, 1);
    b.input(ib, v, 1).output(ib, c, 1);
    b.input(ra, a, 1).output(ra, s, 1);
    b.input(rb, c, 1).output(rb, s, 1);
    b.build()
}

pub fn tid(t: usize) -> TransitionId {
    TransitionId(t)
}

pub fn marking(v: &[u64]) -> Marking {
    Marking(v.to_vec())
}
