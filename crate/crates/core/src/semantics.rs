//! Enabling and firing rules.
//!
//! A transition has *concession* at a marking when every input place holds at
//! least the arc multiplicity and every inhibitor place holds strictly fewer
//! tokens than the inhibitor multiplicity. Among transitions with concession,
//! immediate transitions preempt timed ones and only the highest immediate
//! priority level is enabled.

use crate::error::{Error, Result};
use crate::net::{Marking, PetriNet, TransitionId, TransitionKind};
use crate::scalar::Scalar;

/// Transitions enabled at a marking after priority filtering.
#[derive(Debug, Clone, PartialEq)]
pub struct EnabledSet<R> {
    /// Top-priority immediates with weights normalized to sum to one.
    pub immediate: Vec<(TransitionId, R)>,
    /// Enabled timed transitions with raw rates; empty whenever `immediate` is not.
    pub timed: Vec<(TransitionId, R)>,
}

impl<R: Scalar> EnabledSet<R> {
    pub fn is_vanishing(&self) -> bool {
        !self.immediate.is_empty()
    }

    pub fn is_dead(&self) -> bool {
        self.immediate.is_empty() && self.timed.is_empty()
    }

    /// The candidates offered to a selection step: immediates at a vanishing
    /// marking, timed transitions otherwise.
    pub fn choices(&self) -> &[(TransitionId, R)] {
        if self.is_vanishing() {
            &self.immediate
        } else {
            &self.timed
        }
    }

    pub fn contains(&self, t: TransitionId) -> bool {
        self.choices().iter().any(|(u, _)| *u == t)
    }

    pub fn transitions(&self) -> impl Iterator<Item = TransitionId> + '_ {
        self.choices().iter().map(|(t, _)| *t)
    }

    /// Sum of the raw rates of the enabled timed transitions.
    pub fn total_rate(&self) -> R {
        self.timed.iter().fold(R::zero(), |acc, (_, r)| acc + *r)
    }
}

fn check_conforms<R: Scalar>(net: &PetriNet<R>, m: &Marking) -> Result<()> {
    if m.len() != net.place_count() {
        return Err(Error::MarkingMismatch { expected: net.place_count(), found: m.len() });
    }
    Ok(())
}

/// Input and inhibitor test for `t`, ignoring priorities.
pub fn has_concession<R: Scalar>(net: &PetriNet<R>, m: &Marking, t: TransitionId) -> bool {
    let arcs = net.arc_index(t);
    arcs.inputs.iter().all(|&(p, k)| m.0[p] >= k) && arcs.inhibitors.iter().all(|&(p, k)| m.0[p] < k)
}

pub(crate) fn enabled_unchecked<R: Scalar>(net: &PetriNet<R>, m: &Marking) -> EnabledSet<R> {
    let mut top = 0u32;
    let mut immediate = Vec::new();
    let mut timed = Vec::new();
    for tr in net.transitions() {
        if !has_concession(net, m, tr.id) {
            continue;
        }
        match tr.kind {
            TransitionKind::Immediate { weight, priority } => {
                if priority > top {
                    top = priority;
                    immediate.clear();
                }
                if priority == top {
                    immediate.push((tr.id, weight));
                }
            }
            TransitionKind::Timed { rate } => {
                if immediate.is_empty() {
                    timed.push((tr.id, rate));
                }
            }
        }
    }
    if !immediate.is_empty() {
        timed.clear();
        let total = immediate.iter().fold(R::zero(), |acc, (_, w)| acc + *w);
        for (_, w) in &mut immediate {
            *w = *w / total;
        }
    }
    EnabledSet { immediate, timed }
}

/// Priority-filtered enabled set at `m`.
pub fn enabled<R: Scalar>(net: &PetriNet<R>, m: &Marking) -> Result<EnabledSet<R>> {
    check_conforms(net, m)?;
    Ok(enabled_unchecked(net, m))
}

/// Applies the token-game update for `t`. The caller guarantees concession.
pub(crate) fn apply<R: Scalar>(net: &PetriNet<R>, m: &Marking, t: TransitionId) -> Marking {
    let arcs = net.arc_index(t);
    let mut next = m.clone();
    for &(p, k) in &arcs.inputs {
        debug_assert!(next.0[p] >= k, "firing {t} would drive place p{p} negative");
        next.0[p] -= k;
    }
    for &(p, k) in &arcs.outputs {
        next.0[p] += k;
    }
    next
}

/// Fires `t` at `m`, returning the successor marking.
pub fn fire<R: Scalar>(net: &PetriNet<R>, m: &Marking, t: TransitionId) -> Result<Marking> {
    check_conforms(net, m)?;
    if t.0 >= net.transition_count() {
        return Err(Error::UnknownTransition(t));
    }
    if !enabled_unchecked(net, m).contains(t) {
        return Err(Error::NotEnabled(t));
    }
    Ok(apply(net, m, t))
}

/// `true` iff no immediate transition is enabled; dead markings are tangible.
pub fn is_tangible<R: Scalar>(net: &PetriNet<R>, m: &Marking) -> Result<bool> {
    check_conforms(net, m)?;
    Ok(!net
        .transitions()
        .iter()
        .any(|tr| tr.kind.is_immediate() && has_concession(net, m, tr.id)))
}
