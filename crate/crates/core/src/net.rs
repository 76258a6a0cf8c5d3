//! Net structure: places, transitions, arcs and markings.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::ops::Index;

use crate::scalar::Scalar;

/// Dense index of a place, `0..P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaceId(pub usize);

/// Dense index of a transition, `0..T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionId(pub usize);

impl PlaceId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl TransitionId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

impl fmt::Display for TransitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub id: PlaceId,
    pub name: String,
    pub initial_tokens: u64,
}

/// Timing class of a transition.
///
/// Timed transitions have an implicit priority of 0, strictly below every
/// immediate priority level (which start at 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransitionKind<R> {
    Timed { rate: R },
    Immediate { weight: R, priority: u32 },
}

impl<R: Scalar> TransitionKind<R> {
    pub const DEFAULT_PRIORITY: u32 = 1;

    pub fn timed() -> Self {
        TransitionKind::Timed { rate: R::one() }
    }

    pub fn immediate() -> Self {
        TransitionKind::Immediate { weight: R::one(), priority: Self::DEFAULT_PRIORITY }
    }

    pub fn is_immediate(&self) -> bool {
        matches!(self, TransitionKind::Immediate { .. })
    }

    /// 0 for timed transitions, the configured level for immediate ones.
    pub fn priority(&self) -> u32 {
        match *self {
            TransitionKind::Timed { .. } => 0,
            TransitionKind::Immediate { priority, .. } => priority,
        }
    }

    /// Rate for timed transitions, weight for immediate ones.
    pub fn intensity(&self) -> R {
        match *self {
            TransitionKind::Timed { rate } => rate,
            TransitionKind::Immediate { weight, .. } => weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition<R> {
    pub id: TransitionId,
    pub name: String,
    pub kind: TransitionKind<R>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcKind {
    Input,
    Output,
    Inhibitor,
}

impl ArcKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ArcKind::Input => "in",
            ArcKind::Output => "out",
            ArcKind::Inhibitor => "inhib",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub transition: TransitionId,
    pub place: PlaceId,
    pub kind: ArcKind,
    pub multiplicity: u64,
}

/// Per-transition arc lists, resolved once at construction.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct ArcIndex {
    pub(crate) inputs: Vec<(usize, u64)>,
    pub(crate) outputs: Vec<(usize, u64)>,
    pub(crate) inhibitors: Vec<(usize, u64)>,
}

/// An immutable generalized stochastic Petri net.
///
/// Construction never fails; structural problems are reported by
/// [`PetriNet::validate`]. Arcs that reference missing nodes are kept in
/// [`PetriNet::arcs`] but ignored by the firing rule.
#[derive(Debug, Clone)]
pub struct PetriNet<R> {
    name: String,
    places: Vec<Place>,
    transitions: Vec<Transition<R>>,
    arcs: Vec<Arc>,
    index: Vec<ArcIndex>,
}

impl<R: Scalar> PetriNet<R> {
    pub fn new(
        name: impl Into<String>,
        places: Vec<Place>,
        transitions: Vec<Transition<R>>,
        arcs: Vec<Arc>,
    ) -> Self {
        let mut index = vec![ArcIndex::default(); transitions.len()];
        for arc in &arcs {
            if arc.place.0 >= places.len() {
                continue;
            }
            let Some(entry) = index.get_mut(arc.transition.0) else {
                continue;
            };
            let slot = match arc.kind {
                ArcKind::Input => &mut entry.inputs,
                ArcKind::Output => &mut entry.outputs,
                ArcKind::Inhibitor => &mut entry.inhibitors,
            };
            slot.push((arc.place.0, arc.multiplicity));
        }
        PetriNet { name: name.into(), places, transitions, arcs, index }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn transitions(&self) -> &[Transition<R>] {
        &self.transitions
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn place(&self, id: PlaceId) -> &Place {
        &self.places[id.0]
    }

    pub fn transition(&self, id: TransitionId) -> &Transition<R> {
        &self.transitions[id.0]
    }

    pub fn place_by_name(&self, name: &str) -> Option<PlaceId> {
        self.places.iter().find(|p| p.name == name).map(|p| p.id)
    }

    pub fn transition_by_name(&self, name: &str) -> Option<TransitionId> {
        self.transitions.iter().find(|t| t.name == name).map(|t| t.id)
    }

    pub fn initial_marking(&self) -> Marking {
        Marking(self.places.iter().map(|p| p.initial_tokens).collect())
    }

    pub(crate) fn arc_index(&self, t: TransitionId) -> &ArcIndex {
        &self.index[t.0]
    }

    /// Multiplicity of the arc of `kind` between `t` and `p`, 0 if absent.
    pub fn multiplicity(&self, t: TransitionId, p: PlaceId, kind: ArcKind) -> u64 {
        let entry = self.arc_index(t);
        let list = match kind {
            ArcKind::Input => &entry.inputs,
            ArcKind::Output => &entry.outputs,
            ArcKind::Inhibitor => &entry.inhibitors,
        };
        list.iter().filter(|(q, _)| *q == p.0).map(|(_, k)| *k).sum()
    }

    /// Places read by at least one inhibitor arc, with the largest multiplicity.
    pub fn inhibitor_thresholds(&self) -> Vec<Option<u64>> {
        let mut out = vec![None; self.places.len()];
        for entry in &self.index {
            for &(p, k) in &entry.inhibitors {
                let slot: &mut Option<u64> = &mut out[p];
                *slot = Some(slot.map_or(k, |old| old.max(k)));
            }
        }
        out
    }

    /// Structural diagnostics; empty iff the net is well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.places.is_empty() && self.transitions.is_empty() {
            out.push(Diagnostic::EmptyNet);
        }
        if !is_valid_net_name(&self.name) {
            out.push(Diagnostic::InvalidName { name: self.name.clone() });
        }
        let mut names = HashSet::new();
        for (i, place) in self.places.iter().enumerate() {
            if place.id.0 != i {
                out.push(Diagnostic::PlaceIdMismatch { position: i, id: place.id.0 });
            }
            if !is_valid_name(&place.name) {
                out.push(Diagnostic::InvalidName { name: place.name.clone() });
            }
            if !names.insert(("place", place.name.as_str())) {
                out.push(Diagnostic::DuplicateName { name: place.name.clone() });
            }
        }
        for (i, transition) in self.transitions.iter().enumerate() {
            if transition.id.0 != i {
                out.push(Diagnostic::TransitionIdMismatch { position: i, id: transition.id.0 });
            }
            if !is_valid_name(&transition.name) {
                out.push(Diagnostic::InvalidName { name: transition.name.clone() });
            }
            if !names.insert(("transition", transition.name.as_str())) {
                out.push(Diagnostic::DuplicateName { name: transition.name.clone() });
            }
            match transition.kind {
                TransitionKind::Timed { rate } => {
                    if rate.partial_cmp(&R::zero()) != Some(Ordering::Greater) || rate.is_non_finite() {
                        out.push(Diagnostic::NonPositiveRate {
                            transition: transition.id,
                            value: rate.to_f64_lossy(),
                        });
                    }
                }
                TransitionKind::Immediate { weight, priority } => {
                    if weight.partial_cmp(&R::zero()) != Some(Ordering::Greater) || weight.is_non_finite() {
                        out.push(Diagnostic::NonPositiveWeight {
                            transition: transition.id,
                            value: weight.to_f64_lossy(),
                        });
                    }
                    if priority == 0 {
                        out.push(Diagnostic::InvalidPriority { transition: transition.id });
                    }
                }
            }
        }
        let mut seen = HashSet::new();
        for (i, arc) in self.arcs.iter().enumerate() {
            let mut dangling = false;
            if arc.place.0 >= self.places.len() {
                out.push(Diagnostic::DanglingPlace { arc: i, place: arc.place.0 });
                dangling = true;
            }
            if arc.transition.0 >= self.transitions.len() {
                out.push(Diagnostic::DanglingTransition { arc: i, transition: arc.transition.0 });
                dangling = true;
            }
            if arc.multiplicity == 0 {
                out.push(Diagnostic::ZeroMultiplicity { arc: i });
            }
            if !dangling && !seen.insert((arc.transition, arc.place, arc.kind)) {
                out.push(Diagnostic::DuplicateArc {
                    transition: arc.transition,
                    place: arc.place,
                    kind: arc.kind,
                });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Structural equality: same name, nodes and arc multiset (arc order ignored).
    pub fn structurally_eq(&self, other: &Self) -> bool {
        let sorted = |arcs: &[Arc]| {
            let mut v: Vec<_> = arcs
                .iter()
                .map(|a| (a.transition, a.place, a.kind, a.multiplicity))
                .collect();
            v.sort();
            v
        };
        self.name == other.name
            && self.places == other.places
            && self.transitions == other.transitions
            && sorted(&self.arcs) == sorted(&other.arcs)
    }
}

/// Names must be non-empty and free of whitespace so they survive the text format.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '#')
}

/// Net names may contain inner spaces but no comment marker or line break.
pub fn is_valid_net_name(name: &str) -> bool {
    !name.is_empty() && name.trim() == name && !name.contains(['#', '\n', '\r'])
}

/// One structural problem found by [`PetriNet::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    EmptyNet,
    PlaceIdMismatch { position: usize, id: usize },
    TransitionIdMismatch { position: usize, id: usize },
    InvalidName { name: String },
    DuplicateName { name: String },
    NonPositiveRate { transition: TransitionId, value: f64 },
    NonPositiveWeight { transition: TransitionId, value: f64 },
    InvalidPriority { transition: TransitionId },
    DanglingPlace { arc: usize, place: usize },
    DanglingTransition { arc: usize, transition: usize },
    ZeroMultiplicity { arc: usize },
    DuplicateArc { transition: TransitionId, place: PlaceId, kind: ArcKind },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::EmptyNet => write!(f, "empty net"),
            Diagnostic::PlaceIdMismatch { position, id } => {
                write!(f, "place at position {position} carries id {id}")
            }
            Diagnostic::TransitionIdMismatch { position, id } => {
                write!(f, "transition at position {position} carries id {id}")
            }
            Diagnostic::InvalidName { name } => write!(f, "invalid name {name:?}"),
            Diagnostic::DuplicateName { name } => write!(f, "duplicate name {name}"),
            Diagnostic::NonPositiveRate { transition, value } => {
                write!(f, "nonpositive rate {value} on {transition}")
            }
            Diagnostic::NonPositiveWeight { transition, value } => {
                write!(f, "nonpositive weight {value} on {transition}")
            }
            Diagnostic::InvalidPriority { transition } => {
                write!(f, "immediate priority must be >= 1 on {transition}")
            }
            Diagnostic::DanglingPlace { arc, place } => {
                write!(f, "dangling place reference p{place} in arc {arc}")
            }
            Diagnostic::DanglingTransition { arc, transition } => {
                write!(f, "dangling transition reference t{transition} in arc {arc}")
            }
            Diagnostic::ZeroMultiplicity { arc } => write!(f, "zero multiplicity on arc {arc}"),
            Diagnostic::DuplicateArc { transition, place, kind } => {
                write!(f, "duplicate {} arc between {transition} and {place}", kind.keyword())
            }
        }
    }
}

/// Token count per place.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking(pub Vec<u64>);

impl Marking {
    pub fn zeros(places: usize) -> Self {
        Marking(vec![0; places])
    }

    pub fn tokens(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl Index<PlaceId> for Marking {
    type Output = u64;

    fn index(&self, p: PlaceId) -> &u64 {
        &self.0[p.0]
    }
}

impl Index<usize> for Marking {
    type Output = u64;

    fn index(&self, p: usize) -> &u64 {
        &self.0[p]
    }
}

impl From<Vec<u64>> for Marking {
    fn from(v: Vec<u64>) -> Self {
        Marking(v)
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Incremental construction helper assigning dense ids in insertion order.
#[derive(Debug, Clone)]
pub struct NetBuilder<R> {
    name: String,
    places: Vec<Place>,
    transitions: Vec<Transition<R>>,
    arcs: Vec<Arc>,
}

impl<R: Scalar> NetBuilder<R> {
    pub fn new(name: impl Into<String>) -> Self {
        NetBuilder { name: name.into(), places: Vec::new(), transitions: Vec::new(), arcs: Vec::new() }
    }

    pub fn place(&mut self, name: impl Into<String>, initial_tokens: u64) -> PlaceId {
        let id = PlaceId(self.places.len());
        self.places.push(Place { id, name: name.into(), initial_tokens });
        id
    }

    pub fn transition(&mut self, name: impl Into<String>, kind: TransitionKind<R>) -> TransitionId {
        let id = TransitionId(self.transitions.len());
        self.transitions.push(Transition { id, name: name.into(), kind });
        id
    }

    pub fn timed(&mut self, name: impl Into<String>, rate: R) -> TransitionId {
        self.transition(name, TransitionKind::Timed { rate })
    }

    pub fn immediate(&mut self, name: impl Into<String>, weight: R, priority: u32) -> TransitionId {
        self.transition(name, TransitionKind::Immediate { weight, priority })
    }

    pub fn arc(&mut self, transition: TransitionId, place: PlaceId, kind: ArcKind, multiplicity: u64) -> &mut Self {
        self.arcs.push(Arc { transition, place, kind, multiplicity });
        self
    }

    pub fn input(&mut self, t: TransitionId, p: PlaceId, multiplicity: u64) -> &mut Self {
        self.arc(t, p, ArcKind::Input, multiplicity)
    }

    pub fn output(&mut self, t: TransitionId, p: PlaceId, multiplicity: u64) -> &mut Self {
        self.arc(t, p, ArcKind::Output, multiplicity)
    }

    pub fn inhibitor(&mut self, t: TransitionId, p: PlaceId, multiplicity: u64) -> &mut Self {
        self.arc(t, p, ArcKind::Inhibitor, multiplicity)
    }

    pub fn build(self) -> PetriNet<R> {
        PetriNet::new(self.name, self.places, self.transitions, self.arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle() -> PetriNet<f64> {
        let mut b = NetBuilder::new("cycle");
        let a = b.place("A", 1);
        let c = b.place("B", 0);
        let t0 = b.timed("T0", 1.0);
        let t1 = b.timed("T1", 1.0);
        b.input(t0, a, 1).output(t0, c, 1).input(t1, c, 1).output(t1, a, 1);
        b.build()
    }

    #[test]
    fn well_formed_cycle_has_no_diagnostics() {
        assert!(cycle().validate().is_empty());
    }

    #[test]
    fn dangling_place_is_reported() {
        let mut b = NetBuilder::<f64>::new("bad");
        for i in 0..3 {
            b.place(format!("P{i}"), 0);
        }
        let t = b.timed("T0", 1.0);
        b.input(t, PlaceId(99), 1);
        let diags = b.build().validate();
        assert_eq!(diags, vec![Diagnostic::DanglingPlace { arc: 0, place: 99 }]);
        assert!(diags[0].to_string().contains("dangling place reference"));
    }

    #[test]
    fn zero_rate_is_reported() {
        let mut b = NetBuilder::<f64>::new("bad");
        b.place("P0", 0);
        b.timed("T0", 0.0);
        let diags = b.build().validate();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].to_string().contains("nonpositive rate"));
    }

    #[test]
    fn duplicate_arcs_and_empty_nets() {
        let mut b = NetBuilder::<f64>::new("dup");
        let p = b.place("P0", 0);
        let t = b.timed("T0", 1.0);
        b.input(t, p, 1).input(t, p, 2).inhibitor(t, p, 1);
        let diags = b.build().validate();
        assert_eq!(diags.len(), 1);
        assert!(matches!(diags[0], Diagnostic::DuplicateArc { kind: ArcKind::Input, .. }));

        let empty = NetBuilder::<f64>::new("empty").build();
        assert_eq!(empty.validate(), vec![Diagnostic::EmptyNet]);
    }

    #[test]
    fn immediate_needs_positive_weight_and_priority() {
        let mut b = NetBuilder::<f64>::new("imm");
        b.place("P0", 0);
        b.immediate("T0", -1.0, 0);
        let diags = b.build().validate();
        assert_eq!(diags.len(), 2);
    }

    #[test]
    fn inhibitor_thresholds_take_the_maximum() {
        let mut b = NetBuilder::<f64>::new("inh");
        let p = b.place("P0", 0);
        let q = b.place("P1", 0);
        let t0 = b.timed("T0", 1.0);
        let t1 = b.timed("T1", 1.0);
        b.inhibitor(t0, p, 3).inhibitor(t1, p, 5);
        let net = b.build();
        assert_eq!(net.inhibitor_thresholds(), vec![Some(5), None]);
        assert_eq!(net.multiplicity(t1, p, ArcKind::Inhibitor), 5);
        assert_eq!(net.multiplicity(t1, q, ArcKind::Input), 0);
    }
}
