use thiserror::Error;

use crate::net::{Diagnostic, TransitionId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("marking has {found} entries but the net has {expected} places")]
    MarkingMismatch { expected: usize, found: usize },
    #[error("transition {0} does not exist")]
    UnknownTransition(TransitionId),
    #[error("transition {0} is not enabled")]
    NotEnabled(TransitionId),
    #[error("invalid net: {}", join(.0))]
    InvalidNet(Vec<Diagnostic>),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("vanishing loop: {cap} consecutive zero-time firings without reaching a tangible marking")]
    VanishingLoop { cap: usize },
    #[error("vanishing livelock: immediate firings from marking #{state} never reach a tangible marking")]
    VanishingLivelock { state: usize },
    #[error("reachability graph is truncated at {0} states; CTMC requires a complete graph")]
    IncompleteGraph(usize),
    #[error("no tangible marking is reachable")]
    NoTangibleState,
    #[error("{states} tangible states exceed the dense solver cap of {cap}")]
    StateCapExceeded { states: usize, cap: usize },
    #[error("non-ergodic chain: {0} closed communicating classes")]
    NonErgodic(usize),
    #[error("singular linear system (pivot below tolerance at column {0})")]
    Singular(usize),
    #[error("steady-state residual {0:e} exceeds tolerance")]
    Residual(f64),
    #[error("unknown place {0}")]
    UnknownPlace(String),
}

fn join(diags: &[Diagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
