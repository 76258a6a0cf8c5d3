//! Generalized stochastic Petri nets.
//!
//! The engine is generic over the [`Scalar`] used for rates, weights and
//! probabilities; the aliases below fix the common choices.

pub mod analysis;
pub mod error;
pub mod io;
pub mod net;
pub mod scalar;
pub mod semantics;
pub mod sim;
pub mod smartgrid;

pub use error::{Error, Result};
pub use net::{Arc, ArcKind, Diagnostic, Marking, NetBuilder, PetriNet, Place, PlaceId, Transition, TransitionId, TransitionKind};
pub use num_rational::Rational64;
pub use scalar::Scalar;
pub use semantics::{enabled, fire, has_concession, is_tangible, EnabledSet};

/// Double-precision net, the default for simulation and file I/O.
pub type Net = PetriNet<f64>;
/// Single-precision net.
pub type NetF32 = PetriNet<f32>;
/// Net with exact rational rates and weights.
pub type ExactNet = PetriNet<Rational64>;

pub type Ctmc = analysis::Ctmc<f64>;
pub type ExactCtmc = analysis::Ctmc<Rational64>;
pub type SteadyState = analysis::SteadyState<f64>;
pub type ExactSteadyState = analysis::SteadyState<Rational64>;

/// Free-function form of [`PetriNet::validate`].
pub fn validate_net<R: Scalar>(net: &PetriNet<R>) -> Vec<Diagnostic> {
    net.validate()
}
