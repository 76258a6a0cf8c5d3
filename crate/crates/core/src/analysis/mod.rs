//! State-space analysis: reachability, coverability, structural properties
//! and the tangible CTMC with its steady state.

mod coverability;
mod ctmc;
pub mod linalg;
mod properties;
mod reachability;
mod steady;

pub use coverability::{
    coverability, coverability_with_limit, CoverNode, CoverabilityTree, NodeKind, OmegaMarking, PlaceBound, Tokens,
    DEFAULT_COVERABILITY_LIMIT,
};
pub use ctmc::{build_ctmc, Ctmc, TimedBranch};
pub use properties::{check_properties, PropertyReport, Verdict};
pub use reachability::{explore_reachability, Edge, Exploration, ReachabilityGraph};
pub use steady::{closed_classes, steady_state, steady_state_with_cap, SteadyState, DEFAULT_STATE_CAP};
