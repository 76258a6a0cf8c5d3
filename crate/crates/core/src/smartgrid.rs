//! SG-1: a reconstruction of a four-phase smart-grid GSPN.
//!
//! Places are `P0`..`P37`. Transitions keep their model numbers as names
//! (`T0`..`T52`); numbers 22–27, 34–36, 46 and 47 are reserved and absent, so
//! dense transition ids do not coincide with the numbers after `T21`.
//!
//! | group | wiring |
//! |-------|--------|
//! | harvesting | `T0`: ∅ → P0, P10; `T1`: ∅ → P1, P9; `T2`..`T4`: ∅ → P2..P4 (timed sources) |
//! | fossil processing | `T5`..`T7`: P6/P7/P8 → P5 |
//! | central generation | `T8`..`T12`: P0..P4 → P11; `T13`: P5 → P11; all inhibited by P11 at `K11` |
//! | on-site generation | `T14`: P10 → P12; `T15`: P9 → P12; inhibited by P12 at `K12` |
//! | generators | `T16`: P11 → P13; `T17`: P12 → P14 |
//! | line feed | `T18`/`T19`/`T20`: P13 → P15/P16/P17, zero-tested by P22/P23/P24 |
//! | monitoring | pass `T31`..`T33`: {line, sensor, viz} → {sensor, viz, utility}; fault `T28`..`T30`: {line, sensor} → {sensor, block} (immediate) |
//! | line clearing | `T48`..`T50`: P22/P23/P24 → ∅ |
//! | distribution | `T37`..`T39`: P29 → P31; `T40`: P31 → P32; `T41`: P32 → P33 |
//! | DER | `T21` (immediate): P14 → P18; `T42`: P18 → P34 |
//! | consumption | `T43`: P33 → P34; `T44`: P33 → P35; `T45`: P35 → P33 |
//! | metering | `T52`: {P34, P36} → {P36, P37}; `T51`: {P35, P36} → {P36, P37} (immediate) |
//!
//! Sensors P19..P21, visualization tools P25..P27 and the meter P36 are
//! single-token resources that only sit on self-loops.
//!
//! Calibration ledger (values not fixed by the model description):
//! - fossil stocks 20 tokens each; `K11` = 200; `K12` = 10;
//! - fault/pass weights 0.05/0.95;
//! - timed rates default to 1.0 except [`CALIBRATED_RATES`]: harvesting,
//!   fossil dispatch (`T13`), both generators and lines 1 and 3 are slow,
//!   while the PMU and substation stages (`T40`, `T41`) are fast;
//! - `T13` draws only from P5; `T28`..`T30` are immediate; `T16` has no
//!   demand-side inhibitor; `T17` and `T51` are inferred from numbering.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::net::{NetBuilder, PetriNet, PlaceId, TransitionId};
use crate::scalar::Scalar;
use crate::sim::{PlaceStats, SimulationReport};

pub const PLACE_COUNT: usize = 38;
pub const NET_NAME: &str = "SG-1";
/// Model numbers with no transition in SG-1.
pub const RESERVED_TRANSITIONS: [u32; 11] = [22, 23, 24, 25, 26, 27, 34, 35, 36, 46, 47];
/// Timed rates that differ from the 1.0 default.
pub const CALIBRATED_RATES: [(u32, f64); 12] = [
    (0, 0.05),
    (1, 0.05),
    (2, 0.05),
    (3, 0.05),
    (4, 0.05),
    (13, 0.02),
    (16, 0.08),
    (17, 0.05),
    (18, 0.01),
    (20, 0.01),
    (40, 4.0),
    (41, 4.0),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SmartGridConfig {
    /// Initial tokens at P6, P7 and P8.
    pub fossil_stock: u64,
    /// Inhibitor multiplicity of P11 on `T8`..`T13`.
    pub central_threshold: u64,
    /// Inhibitor multiplicity of P12 on `T14` and `T15`.
    pub distributed_threshold: u64,
    pub fault_weight: f64,
    pub pass_weight: f64,
    /// Timed rate per model number; numbers not listed use 1.0.
    pub rates: BTreeMap<u32, f64>,
}

impl Default for SmartGridConfig {
    fn default() -> Self {
        SmartGridConfig {
            fossil_stock: 20,
            central_threshold: 200,
            distributed_threshold: 10,
            fault_weight: 0.05,
            pass_weight: 0.95,
            rates: CALIBRATED_RATES.into_iter().collect(),
        }
    }
}

impl SmartGridConfig {
    /// Config with every timed rate at 1.0.
    pub fn uniform_rates() -> Self {
        SmartGridConfig { rates: BTreeMap::new(), ..Self::default() }
    }

    pub fn rate(&self, number: u32) -> f64 {
        self.rates.get(&number).copied().unwrap_or(1.0)
    }

    /// Applies one `key=value` setting.
    ///
    /// Keys: `fossil_stock`, `central_threshold` (or `k11`),
    /// `distributed_threshold` (or `k12`), `fault_weight`, `pass_weight`, and
    /// `rate.T<n>` for a timed transition.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidConfig(format!("{key}: expected {what}, got {value:?}"));
        let uint = || value.trim().parse::<u64>().map_err(|_| bad("a nonnegative integer"));
        let real = || value.trim().parse::<f64>().map_err(|_| bad("a number"));
        match key.trim() {
            "fossil_stock" => self.fossil_stock = uint()?,
            "central_threshold" | "k11" | "K11" => self.central_threshold = uint()?,
            "distributed_threshold" | "k12" | "K12" => self.distributed_threshold = uint()?,
            "fault_weight" => self.fault_weight = real()?,
            "pass_weight" => self.pass_weight = real()?,
            other => {
                let number = other
                    .strip_prefix("rate.")
                    .and_then(|t| t.strip_prefix(['T', 't']))
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown config key {other:?}")))?;
                if !TIMED.contains(&number) {
                    return Err(Error::InvalidConfig(format!("{other}: T{number} is not a timed transition of SG-1")));
                }
                self.rates.insert(number, real()?);
            }
        }
        Ok(())
    }

    /// Parses `key=value` pairs separated by commas or newlines; `#` starts a comment.
    pub fn parse_settings(&mut self, text: &str) -> Result<()> {
        for raw in text.split(['\n', ',']) {
            let item = raw.split('#').next().unwrap_or("").trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("expected key=value, got {item:?}")))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.central_threshold == 0 || self.distributed_threshold == 0 {
            return Err(Error::InvalidConfig("thresholds must be at least 1".into()));
        }
        for (name, w) in [("fault_weight", self.fault_weight), ("pass_weight", self.pass_weight)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {w}")));
            }
        }
        for (&n, &r) in &self.rates {
            if !TIMED.contains(&n) {
                return Err(Error::InvalidConfig(format!("T{n} is not a timed transition of SG-1")));
            }
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidConfig(format!("rate of T{n} must be positive, got {r}")));
            }
        }
        Ok(())
    }
}

const TIMED: [u32; 33] = [
    0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 37, 38, 39, 40, 41, 42, 43, 44, 45, 48,
    49, 50,
];
const IMMEDIATE: [u32; 9] = [21, 28, 29, 30, 31, 32, 33, 51, 52];

/// Builds SG-1 for `config`.
pub fn build_smartgrid<R: Scalar>(config: &SmartGridConfig) -> Result<PetriNet<R>> {
    config.validate()?;
    let scalar = |x: f64| R::from_f64(x).ok_or_else(|| Error::InvalidConfig(format!("{x} not representable")));

    let mut b = NetBuilder::<R>::new(NET_NAME);
    let p: Vec<PlaceId> = (0..PLACE_COUNT)
        .map(|i| {
            let init = match i {
                6..=8 => config.fossil_stock,
                19..=21 | 25..=27 | 36 => 1,
                _ => 0,
            };
            b.place(format!("P{i}"), init)
        })
        .collect();

    let mut numbers: Vec<u32> = TIMED.iter().chain(IMMEDIATE.iter()).copied().collect();
    numbers.sort_unstable();
    let mut t: BTreeMap<u32, TransitionId> = BTreeMap::new();
    for n in numbers {
        let id = if TIMED.contains(&n) {
            b.timed(format!("T{n}"), scalar(config.rate(n))?)
        } else {
            let weight = match n {
                28..=30 => config.fault_weight,
                31..=33 => config.pass_weight,
                _ => 1.0,
            };
            b.immediate(format!("T{n}"), scalar(weight)?, 1)
        };
        t.insert(n, id);
    }
    let tr = |n: u32| t[&n];

    // Harvesting sources.
    b.output(tr(0), p[0], 1).output(tr(0), p[10], 1);
    b.output(tr(1), p[1], 1).output(tr(1), p[9], 1);
    for i in 2..=4 {
        b.output(tr(i), p[i as usize], 1);
    }
    // Fossil processing.
    for (n, src) in [(5, 6), (6, 7), (7, 8)] {
        b.input(tr(n), p[src], 1).output(tr(n), p[5], 1);
    }
    // Central generation, halted while the storage holds K11 or more.
    for (n, src) in [(8, 0), (9, 1), (10, 2), (11, 3), (12, 4), (13, 5)] {
        b.input(tr(n), p[src], 1).output(tr(n), p[11], 1).inhibitor(tr(n), p[11], config.central_threshold);
    }
    // On-site generation.
    for (n, src) in [(14, 10), (15, 9)] {
        b.input(tr(n), p[src], 1).output(tr(n), p[12], 1).inhibitor(tr(n), p[12], config.distributed_threshold);
    }
    b.input(tr(16), p[11], 1).output(tr(16), p[13], 1);
    b.input(tr(17), p[12], 1).output(tr(17), p[14], 1);
    // Transmission lines with sensors, visualization and blocking.
    let lines = [(18, 15, 19, 25, 28, 22, 31, 28, 48), (19, 16, 20, 26, 29, 23, 32, 29, 49), (20, 17, 21, 27, 30, 24, 33, 30, 50)];
    for (feed, line, sensor, viz, utility, block, pass, fault, clear) in lines {
        b.input(tr(feed), p[13], 1).output(tr(feed), p[line], 1).inhibitor(tr(feed), p[block], 1);
        b.input(tr(pass), p[line], 1).input(tr(pass), p[sensor], 1).input(tr(pass), p[viz], 1);
        b.output(tr(pass), p[sensor], 1).output(tr(pass), p[viz], 1).output(tr(pass), p[utility], 1);
        b.input(tr(fault), p[line], 1).input(tr(fault), p[sensor], 1);
        b.output(tr(fault), p[sensor], 1).output(tr(fault), p[block], 1);
        b.input(tr(clear), p[block], 1);
    }
    // Distribution.
    for n in 37..=39 {
        b.input(tr(n), p[29], 1).output(tr(n), p[31], 1);
    }
    b.input(tr(40), p[31], 1).output(tr(40), p[32], 1);
    b.input(tr(41), p[32], 1).output(tr(41), p[33], 1);
    // DER micro-grid.
    b.input(tr(21), p[14], 1).output(tr(21), p[18], 1);
    b.input(tr(42), p[18], 1).output(tr(42), p[34], 1);
    // Consumption and metering.
    b.input(tr(43), p[33], 1).output(tr(43), p[34], 1);
    b.input(tr(44), p[33], 1).output(tr(44), p[35], 1);
    b.input(tr(45), p[35], 1).output(tr(45), p[33], 1);
    for (n, src) in [(52, 34), (51, 35)] {
        b.input(tr(n), p[src], 1).input(tr(n), p[36], 1);
        b.output(tr(n), p[36], 1).output(tr(n), p[37], 1);
    }

    Ok(b.build())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Generation,
    DistributedGeneration,
    Transmission,
    Distribution,
    Consumption,
}

impl Phase {
    pub const ALL: [Phase; 5] =
        [Phase::Generation, Phase::DistributedGeneration, Phase::Transmission, Phase::Distribution, Phase::Consumption];

    pub fn label(self) -> &'static str {
        match self {
            Phase::Generation => "generation",
            Phase::DistributedGeneration => "distributed_generation",
            Phase::Transmission => "transmission",
            Phase::Distribution => "distribution",
            Phase::Consumption => "consumption",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Phase tag per place name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseMap {
    entries: BTreeMap<String, Phase>,
}

impl PhaseMap {
    pub fn new(entries: impl IntoIterator<Item = (String, Phase)>) -> Self {
        PhaseMap { entries: entries.into_iter().collect() }
    }

    /// The SG-1 partition.
    pub fn smartgrid() -> Self {
        PhaseMap::new((0..PLACE_COUNT).map(|i| {
            let phase = match i {
                0..=12 => Phase::Generation,
                14 | 18 => Phase::DistributedGeneration,
                13 | 15..=17 | 19..=30 => Phase::Transmission,
                31..=33 => Phase::Distribution,
                _ => Phase::Consumption,
            };
            (format!("P{i}"), phase)
        }))
    }

    pub fn phase_of(&self, place_name: &str) -> Option<Phase> {
        self.entries.get(place_name).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEntry {
    pub index: usize,
    pub name: String,
    pub stats: PlaceStats,
}

/// Per-phase slice of a report, places in report order.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSlice {
    pub phase: Phase,
    pub places: Vec<PhaseEntry>,
}

impl PhaseSlice {
    /// Largest mean and the first place attaining it.
    pub fn peak(&self) -> Option<(&str, f64)> {
        self.places
            .iter()
            .fold(None, |best: Option<&PhaseEntry>, e| match best {
                Some(b) if b.stats.mean >= e.stats.mean => Some(b),
                _ => Some(e),
            })
            .map(|e| (e.name.as_str(), e.stats.mean))
    }

    pub fn names(&self) -> Vec<&str> {
        self.places.iter().map(|e| e.name.as_str()).collect()
    }
}

/// Partitions a report by phase. Every report place must be tagged.
pub fn phase_view(report: &SimulationReport, phases: &PhaseMap) -> Result<Vec<PhaseSlice>> {
    let mut slices: Vec<PhaseSlice> =
        Phase::ALL.iter().map(|&phase| PhaseSlice { phase, places: Vec::new() }).collect();
    for (index, (name, stats)) in report.place_names.iter().zip(&report.places).enumerate() {
        let phase = phases.phase_of(name).ok_or_else(|| Error::UnknownPlace(name.clone()))?;
        let slot = Phase::ALL.iter().position(|&p| p == phase).expect("phase listed in ALL");
        slices[slot].places.push(PhaseEntry { index, name: name.clone(), stats: *stats });
    }
    Ok(slices)
}
