use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Token-game firing: each step fires one enabled transition chosen by
    /// weight (vanishing markings) or by rate (tangible markings).
    Random,
    /// Discrete-event simulation with exponential races.
    Stochastic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    /// Number of firings (steps in random mode, events in stochastic mode).
    Firings(u64),
    /// Simulated time horizon; stochastic mode only.
    Horizon(f64),
}

pub const DEFAULT_VANISHING_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mode: SimMode,
    pub budget: Budget,
    pub replications: usize,
    pub base_seed: u64,
    pub record_trace: bool,
    /// Consecutive zero-time firings tolerated before a stochastic run aborts.
    pub vanishing_cap: usize,
}

impl SimConfig {
    pub fn random(firings: u64, replications: usize, base_seed: u64) -> Self {
        SimConfig {
            mode: SimMode::Random,
            budget: Budget::Firings(firings),
            replications,
            base_seed,
            record_trace: false,
            vanishing_cap: DEFAULT_VANISHING_CAP,
        }
    }

    pub fn stochastic(budget: Budget, replications: usize, base_seed: u64) -> Self {
        SimConfig {
            mode: SimMode::Stochastic,
            budget,
            replications,
            base_seed,
            record_trace: false,
            vanishing_cap: DEFAULT_VANISHING_CAP,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be at least 1".into()));
        }
        match (self.mode, self.budget) {
            (SimMode::Random, Budget::Horizon(_)) => {
                Err(Error::InvalidConfig("random mode takes a firing budget, not a time horizon".into()))
            }
            (_, Budget::Horizon(h)) if !(h >= 0.0 && h.is_finite()) => {
                Err(Error::InvalidConfig(format!("time horizon must be finite and >= 0, got {h}")))
            }
            (SimMode::Stochastic, _) if self.vanishing_cap == 0 => {
                Err(Error::InvalidConfig("vanishing cap must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Seed of replication `r`: the SplitMix64 finalizer applied to
/// `base_seed + (r + 1) * 0x9E3779B97F4A7C15` (wrapping). Each replication
/// then drives its own `ChaCha8Rng` seeded with `seed_from_u64`.
pub fn replication_seed(base_seed: u64, replication: usize) -> u64 {
    let mut z = base_seed.wrapping_add((replication as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
