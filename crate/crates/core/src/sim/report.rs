use crate::net::{Marking, TransitionId};
use crate::sim::config::SimConfig;

/// Summary statistics of one place across replications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaceStats {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single sample.
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

/// One recorded firing.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: u64,
    pub transition: TransitionId,
    pub marking: Marking,
    /// Simulated time of the firing (stochastic mode only).
    pub time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub initial: Marking,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationOutcome {
    pub seed: u64,
    pub final_marking: Marking,
    pub firings: u64,
    /// Step count at which a dead marking stopped the run early.
    pub halted_at: Option<u64>,
    /// Simulated time covered (stochastic mode only).
    pub elapsed: Option<f64>,
    /// Time-averaged token count per place (stochastic mode only).
    pub time_averages: Option<Vec<f64>>,
    pub trace: Option<Trajectory>,
}

impl ReplicationOutcome {
    /// The per-place observation aggregated into the report.
    pub fn observation(&self) -> Vec<f64> {
        match &self.time_averages {
            Some(avg) => avg.clone(),
            None => self.final_marking.0.iter().map(|&k| k as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub net_name: String,
    pub place_names: Vec<String>,
    pub config: SimConfig,
    pub places: Vec<PlaceStats>,
    pub replications: Vec<ReplicationOutcome>,
}

impl SimulationReport {
    pub fn means(&self) -> Vec<f64> {
        self.places.iter().map(|s| s.mean).collect()
    }

    pub fn mean_of(&self, place_name: &str) -> Option<f64> {
        let i = self.place_names.iter().position(|n| n == place_name)?;
        Some(self.places[i].mean)
    }

    pub fn halted_replications(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.replications
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.halted_at.map(|h| (i, h)))
    }
}

/// Per-place mean, sample standard deviation, minimum and maximum.
///
/// `samples[r][p]` is the observation of place `p` in replication `r`. Panics
/// if `samples` is empty or ragged.
pub fn summarize(samples: &[Vec<f64>]) -> Vec<PlaceStats> {
    assert!(!samples.is_empty(), "summarize needs at least one replication");
    let places = samples[0].len();
    assert!(samples.iter().all(|s| s.len() == places), "ragged replication samples");
    let n = samples.len() as f64;
    (0..places)
        .map(|p| {
            let column = samples.iter().map(|s| s[p]);
            let mean = column.clone().sum::<f64>() / n;
            let stddev = if samples.len() > 1 {
                (column.clone().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            let min = column.clone().fold(f64::INFINITY, f64::min);
            let max = column.fold(f64::NEG_INFINITY, f64::max);
            if min == max {
                return PlaceStats { mean: min, stddev: 0.0, min, max };
            }
            PlaceStats { mean: mean.clamp(min, max), stddev, min, max }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_samples() {
        let stats = summarize(&[vec![2.0], vec![4.0]]);
        assert_eq!(stats[0].mean, 3.0);
        assert!((stats[0].stddev - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!((stats[0].min, stats[0].max), (2.0, 4.0));
    }

    #[test]
    fn single_and_identical_samples_have_zero_spread() {
        assert_eq!(summarize(&[vec![7.0, 1.0]])[1].stddev, 0.0);
        let same = vec![vec![0.3, 5.0]; 5];
        assert!(summarize(&same).iter().all(|s| s.stddev == 0.0));
    }

    #[test]
    #[should_panic]
    fn empty_input_panics() {
        summarize(&[]);
    }
}
