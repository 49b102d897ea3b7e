//! Bridge whose length `τ` and pin `Z` are random and independent of the
//! driving Brownian motion: sampling, posterior of `(τ, Z)` given one
//! observation, predictive laws, and the two-observation conditional.

mod functional;
mod model;
mod posterior;
mod two_time;

pub use functional::{FnPayoff, Observable, Payoff};
pub use model::{RandomBridgeModel, SampledPath};
pub use posterior::{posterior_tau_z, predict_future, PosteriorNode, PosteriorTable};
pub use two_time::{markov_gap, non_markov_gap, two_time_conditional, GapResult};
