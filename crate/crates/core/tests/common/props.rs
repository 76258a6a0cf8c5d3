//! Semantic properties checked per random case. Each returns `Err` with a
//! description of the first violation.

use gspn::sim::{run_random, SimConfig};
use gspn::{enabled, fire, has_concession, Error, Marking, Net, PlaceId, TransitionId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{random_net, reference_enabled, Incidence, Shape};

pub type Check = fn(u64) -> Result<(), String>;

pub const ALL: [(&str, Check); 5] = [
    ("token conservation", token_conservation),
    ("no negative markings", no_negative_markings),
    ("inhibitor monotonicity", inhibitor_monotonicity),
    ("immediate priority soundness", priority_soundness),
    ("budget prefix monotonicity", budget_prefix),
];

const STEPS: u64 = 40;

fn traced(net: &Net, firings: u64, seed: u64) -> Vec<(TransitionId, Marking)> {
    let report = run_random(net, &SimConfig::random(firings, 1, seed).with_trace()).expect("random nets are valid");
    let trace = report.replications[0].trace.as_ref().unwrap();
    trace.steps.iter().map(|s| (s.transition, s.marking.clone())).collect()
}

fn random_marking(rng: &mut ChaCha8Rng, places: usize) -> Marking {
    Marking((0..places).map(|_| rng.random_range(0..=4)).collect())
}

/// Every step follows the marking equation; conservative nets keep their token total.
pub fn token_conservation(seed: u64) -> Result<(), String> {
    for conservative in [false, true] {
        let net = random_net(seed, Shape { conservative, ..Shape::default() });
        let inc = Incidence::of(&net);
        let mut m = net.initial_marking();
        let total = m.total();
        for (t, next) in traced(&net, STEPS, seed) {
            let expected = inc.fire(t.0, &m.0);
            if next.0 != expected {
                return Err(format!("{t} from {m} gave {next}, expected {expected:?}"));
            }
            if conservative && next.total() != total {
                return Err(format!("token total changed from {total} to {} at {t}", next.total()));
            }
            m = next;
        }
    }
    Ok(())
}

/// A transition only fires when its inputs are covered, and `fire` refuses otherwise.
pub fn no_negative_markings(seed: u64) -> Result<(), String> {
    let net = random_net(seed, Shape::default());
    let inc = Incidence::of(&net);
    let mut m = net.initial_marking();
    for (t, next) in traced(&net, STEPS, seed) {
        if (0..net.place_count()).any(|p| m[p] < inc.pre[t.0][p]) {
            return Err(format!("{t} fired at {m} without covering its inputs"));
        }
        m = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
    let probe = random_marking(&mut rng, net.place_count());
    let allowed = enabled(&net, &probe).map_err(|e| e.to_string())?;
    for t in 0..net.transition_count() {
        let t = TransitionId(t);
        match fire(&net, &probe, t) {
            Ok(next) if !allowed.contains(t) => return Err(format!("{t} fired at {probe} giving {next} while not enabled")),
            Err(Error::NotEnabled(_)) if !allowed.contains(t) => {}
            Ok(_) => {}
            Err(e) => return Err(format!("{t} at {probe}: {e}")),
        }
    }
    Ok(())
}

/// Adding tokens to an inhibitor-only place never creates concession;
/// adding tokens to an input-only place never removes it.
pub fn inhibitor_monotonicity(seed: u64) -> Result<(), String> {
    let net = random_net(seed, Shape { inhibitor_share: 0.4, ..Shape::default() });
    let inc = Incidence::of(&net);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_marking(&mut rng, net.place_count());
    for t in 0..net.transition_count() {
        let before = has_concession(&net, &m, TransitionId(t));
        if before != inc.concession(t, &m.0) {
            return Err(format!("concession of t{t} at {m} disagrees with the arc list"));
        }
        for p in 0..net.place_count() {
            let mut more = m.clone();
            more.0[p] += rng.random_range(1..=3);
            let after = has_concession(&net, &more, TransitionId(t));
            let inhibitor_only = inc.inhib[t][p].is_some() && inc.pre[t][p] == 0;
            let input_only = inc.inhib[t][p].is_none() && inc.pre[t][p] > 0;
            if inhibitor_only && after && !before {
                return Err(format!("tokens on inhibitor place {} enabled t{t} ({m} → {more})", PlaceId(p)));
            }
            if input_only && before && !after {
                return Err(format!("tokens on input place {} disabled t{t} ({m} → {more})", PlaceId(p)));
            }
        }
    }
    Ok(())
}

/// The enabled set matches the reference rule: immediates preempt timed
/// transitions, only the top priority level fires, weights are normalized.
pub fn priority_soundness(seed: u64) -> Result<(), String> {
    let net = random_net(seed, Shape { immediate_share: 0.5, ..Shape::default() });
    let inc = Incidence::of(&net);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let m = random_marking(&mut rng, net.place_count());
        let set = enabled(&net, &m).map_err(|e| e.to_string())?;
        let reference = reference_enabled(&net, &inc, &m.0);
        let got: Vec<(usize, f64)> = set.choices().iter().map(|(t, w)| (t.0, *w)).collect();
        if got.len() != reference.len()
            || got.iter().zip(&reference).any(|(a, b)| a.0 != b.0 || (a.1 - b.1).abs() > 1e-12)
        {
            return Err(format!("enabled set at {m}: {got:?}, reference {reference:?}"));
        }
        if set.is_vanishing() {
            if !set.timed.is_empty() {
                return Err(format!("timed transitions enabled at vanishing {m}"));
            }
            let sum: f64 = set.immediate.iter().map(|x| x.1).sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(format!("immediate weights at {m} sum to {sum}"));
            }
            let top = set.immediate.iter().map(|(t, _)| net.transition(*t).kind.priority()).max();
            let any_higher = (0..net.transition_count()).any(|t| {
                let tr = &net.transitions()[t];
                tr.kind.is_immediate() && inc.concession(t, &m.0) && Some(tr.kind.priority()) > top
            });
            if any_higher {
                return Err(format!("a higher-priority immediate was skipped at {m}"));
            }
        }
    }
    Ok(())
}

/// A shorter budget with the same seed replays a prefix of a longer run.
pub fn budget_prefix(seed: u64) -> Result<(), String> {
    let net = random_net(seed, Shape::default());
    let short_budget = seed % STEPS;
    let long = traced(&net, STEPS, seed);
    let short = traced(&net, short_budget, seed);
    if long.len() < short.len() || long[..short.len()] != short[..] {
        return Err(format!("trace for {short_budget} firings is not a prefix of the {STEPS}-firing trace"));
    }
    let end = |tr: &[(TransitionId, Marking)]| tr.last().map(|x| x.1.clone()).unwrap_or_else(|| net.initial_marking());
    let short_final = run_random(&net, &SimConfig::random(short_budget, 1, seed)).unwrap().replications[0].final_marking.clone();
    if short_final != end(&short) {
        return Err("final marking differs from the last traced marking".into());
    }
    Ok(())
}
