//! Seeded simulation of nets.
//!
//! Two semantics are offered. [`run_random`] plays the token game: every step
//! fires exactly one enabled transition, chosen by normalized weight at a
//! vanishing marking and with probability proportional to rate at a tangible
//! one. [`run_stochastic`] is a discrete-event simulation where all enabled
//! timed transitions race with fresh exponential delays after every firing.
//!
//! Replication `r` draws from a `ChaCha8Rng` seeded with
//! [`replication_seed`]`(base_seed, r)`, so reports depend only on the net and
//! the configuration. Replications run in parallel and are folded back in
//! index order.

mod config;
mod report;

pub use config::{replication_seed, Budget, SimConfig, SimMode, DEFAULT_VANISHING_CAP};
pub use report::{summarize, PlaceStats, ReplicationOutcome, SimulationReport, TraceStep, Trajectory};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::net::{Marking, PetriNet, TransitionId};
use crate::scalar::Scalar;
use crate::semantics::{apply, enabled_unchecked};

/// Result of a single token-game step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Fired(TransitionId),
    Halted,
}

/// Picks an index with probability proportional to `weights`, using one uniform draw.
fn pick_weighted<R: Scalar, G: Rng + ?Sized>(choices: &[(TransitionId, R)], rng: &mut G) -> TransitionId {
    let total: f64 = choices.iter().map(|(_, w)| w.to_f64_lossy()).sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for &(t, w) in choices {
        acc += w.to_f64_lossy();
        if target < acc {
            return t;
        }
    }
    choices[choices.len() - 1].0
}

/// One token-game step from `m`.
///
/// At a vanishing marking a top-priority immediate transition is chosen by
/// normalized weight; otherwise an enabled timed transition is chosen with
/// probability proportional to its rate. A dead marking yields
/// [`Step::Halted`] and `m` unchanged.
pub fn step_random<R: Scalar, G: Rng + ?Sized>(net: &PetriNet<R>, m: &Marking, rng: &mut G) -> (Step, Marking) {
    let set = enabled_unchecked(net, m);
    let choices = set.choices();
    if choices.is_empty() {
        return (Step::Halted, m.clone());
    }
    let t = pick_weighted(choices, rng);
    (Step::Fired(t), apply(net, m, t))
}

fn ensure_valid<R: Scalar>(net: &PetriNet<R>) -> Result<()> {
    let diags = net.validate();
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidNet(diags))
    }
}

fn assemble<R: Scalar>(net: &PetriNet<R>, config: &SimConfig, replications: Vec<ReplicationOutcome>) -> SimulationReport {
    let samples: Vec<Vec<f64>> = replications.iter().map(ReplicationOutcome::observation).collect();
    SimulationReport {
        net_name: net.name().to_string(),
        place_names: net.places().iter().map(|p| p.name.clone()).collect(),
        config: config.clone(),
        places: summarize(&samples),
        replications,
    }
}

/// Token-game experiment: each replication starts at the initial marking and
/// takes exactly the budgeted number of steps, stopping early only at a dead
/// marking (recorded in `halted_at`). The report aggregates final markings.
pub fn run_random<R: Scalar>(net: &PetriNet<R>, config: &SimConfig) -> Result<SimulationReport> {
    ensure_valid(net)?;
    config.validate()?;
    if config.mode != SimMode::Random {
        return Err(Error::InvalidConfig("run_random needs mode = random".into()));
    }
    let Budget::Firings(budget) = config.budget else {
        unreachable!("validated above");
    };
    let replications = (0..config.replications)
        .into_par_iter()
        .map(|r| random_replication(net, config, budget, r))
        .collect();
    Ok(assemble(net, config, replications))
}

fn random_replication<R: Scalar>(net: &PetriNet<R>, config: &SimConfig, budget: u64, r: usize) -> ReplicationOutcome {
    let seed = replication_seed(config.base_seed, r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = net.initial_marking();
    let mut steps = config.record_trace.then(Vec::new);
    let mut m = initial.clone();
    let mut firings = 0;
    let mut halted_at = None;
    while firings < budget {
        match step_random(net, &m, &mut rng) {
            (Step::Halted, _) => {
                halted_at = Some(firings);
                break;
            }
            (Step::Fired(t), next) => {
                firings += 1;
                if let Some(steps) = steps.as_mut() {
                    steps.push(TraceStep { step: firings, transition: t, marking: next.clone(), time: None });
                }
                m = next;
            }
        }
    }
    ReplicationOutcome {
        seed,
        final_marking: m,
        firings,
        halted_at,
        elapsed: None,
        time_averages: None,
        trace: steps.map(|steps| Trajectory { initial, steps }),
    }
}

/// Discrete-event experiment with exponential races.
///
/// At a vanishing marking a weight-chosen immediate transition fires in zero
/// time. At a tangible marking every enabled timed transition samples an
/// independent `Exp(rate)` delay and the minimum fires; delays are resampled
/// after every firing. The report aggregates time-averaged token counts.
///
/// With [`Budget::Firings`] the run stops after that many firings (or at a
/// dead marking); with [`Budget::Horizon`] it stops at the horizon, and a
/// dead marking simply persists until then.
pub fn run_stochastic<R: Scalar>(net: &PetriNet<R>, config: &SimConfig) -> Result<SimulationReport> {
    ensure_valid(net)?;
    config.validate()?;
    if config.mode != SimMode::Stochastic {
        return Err(Error::InvalidConfig("run_stochastic needs mode = stochastic".into()));
    }
    let replications = (0..config.replications)
        .into_par_iter()
        .map(|r| stochastic_replication(net, config, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(net, config, replications))
}

/// Runs either semantics according to `config.mode`.
pub fn run<R: Scalar>(net: &PetriNet<R>, config: &SimConfig) -> Result<SimulationReport> {
    match config.mode {
        SimMode::Random => run_random(net, config),
        SimMode::Stochastic => run_stochastic(net, config),
    }
}

fn accumulate(area: &mut [f64], m: &Marking, dt: f64) {
    for (a, &k) in area.iter_mut().zip(&m.0) {
        *a += k as f64 * dt;
    }
}

fn stochastic_replication<R: Scalar>(net: &PetriNet<R>, config: &SimConfig, r: usize) -> Result<ReplicationOutcome> {
    let seed = replication_seed(config.base_seed, r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (max_firings, horizon) = match config.budget {
        Budget::Firings(n) => (Some(n), None),
        Budget::Horizon(h) => (None, Some(h)),
    };
    let initial = net.initial_marking();
    let mut steps = config.record_trace.then(Vec::new);
    let mut area = vec![0.0; net.place_count()];
    let mut m = initial.clone();
    let mut now = 0.0f64;
    let mut firings = 0u64;
    let mut zero_time_streak = 0usize;
    let mut halted_at = None;

    loop {
        if max_firings.is_some_and(|n| firings >= n) {
            break;
        }
        let set = enabled_unchecked(net, &m);
        let fired = if set.is_vanishing() {
            if zero_time_streak >= config.vanishing_cap {
                return Err(Error::VanishingLoop { cap: config.vanishing_cap });
            }
            zero_time_streak += 1;
            pick_weighted(&set.immediate, &mut rng)
        } else if set.timed.is_empty() {
            halted_at = Some(firings);
            if let Some(h) = horizon {
                accumulate(&mut area, &m, h - now);
                now = h;
            }
            break;
        } else {
            zero_time_streak = 0;
            let (t, delay) = set
                .timed
                .iter()
                .map(|&(t, rate)| {
                    let e: f64 = Exp1.sample(&mut rng);
                    (t, e / rate.to_f64_lossy())
                })
                .fold((set.timed[0].0, f64::INFINITY), |best, cand| if cand.1 < best.1 { cand } else { best });
            if let Some(h) = horizon {
                if now + delay > h {
                    accumulate(&mut area, &m, h - now);
                    now = h;
                    break;
                }
            }
            accumulate(&mut area, &m, delay);
            now += delay;
            t
        };
        m = apply(net, &m, fired);
        firings += 1;
        if let Some(steps) = steps.as_mut() {
            steps.push(TraceStep { step: firings, transition: fired, marking: m.clone(), time: Some(now) });
        }
    }

    let time_averages = if now > 0.0 {
        area.iter().map(|a| a / now).collect()
    } else {
        m.0.iter().map(|&k| k as f64).collect()
    };
    Ok(ReplicationOutcome {
        seed,
        final_marking: m,
        firings,
        halted_at,
        elapsed: Some(now),
        time_averages: Some(time_averages),
        trace: steps.map(|steps| Trajectory { initial, steps }),
    })
}
