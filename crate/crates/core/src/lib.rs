//! Bargaining over the achievable rate regions of the two-user Gaussian
//! interference channel.
//!
//! The crate builds Han-Kobayashi, multiple-access and time-division rate regions,
//! decides whether two selfish users gain by cooperating, and computes both the
//! Nash bargaining solution and the subgame-perfect equilibrium of the
//! alternating-offer bargaining game with exogenous breakdown risk. The
//! [`game_sim`] module plays that game out to check the equilibrium.

pub mod bargaining;
pub mod coordination;
pub mod error;
pub mod game_sim;
pub mod numeric;
pub mod rate_region;

pub use error::{Error, Result};
