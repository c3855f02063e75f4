//! Bargaining problems over rate regions and their solutions.

mod incentive;
mod nbs;
mod spe;

pub use incentive::{incentive_check, is_regular_ic, Agreement, DisagreeReason, Incentive, Scheme};
pub use nbs::nbs;
pub use spe::{spe, spe_mac, SPE_RESIDUAL_TOL};

use crate::error::{Error, Result};
use crate::rate_region::{
    disagreement_point, hk_polytope, ir_frontier, mac_polytope, tdm_region, ChannelParams, Frontier, PowerSplit,
    RatePair, RateRegion,
};

/// A feasible set together with the point reached when bargaining fails.
#[derive(Debug, Clone, PartialEq)]
pub struct BargainingProblem {
    region: RateRegion,
    disagreement: RatePair,
}

impl BargainingProblem {
    pub fn new(region: RateRegion, disagreement: RatePair) -> Result<Self> {
        if !region.contains(disagreement) {
            return Err(Error::Precondition(format!("disagreement point {disagreement:?} lies outside the region")));
        }
        Ok(Self { region, disagreement })
    }

    /// Multiple-access capacity region with the safe rates as disagreement point.
    pub fn mac(p1: f64, p2: f64) -> Result<Self> {
        let region = mac_polytope(p1, p2)?;
        let d = disagreement_point(region.params());
        Self::new(region, d)
    }

    /// Han-Kobayashi region for `split` with the treat-interference-as-noise rates.
    pub fn hk(params: &ChannelParams, split: &PowerSplit) -> Result<Self> {
        Self::new(hk_polytope(params, split), disagreement_point(params))
    }

    pub fn tdm(params: &ChannelParams) -> Result<Self> {
        Self::new(tdm_region(params), disagreement_point(params))
    }

    pub fn region(&self) -> &RateRegion {
        &self.region
    }

    pub fn disagreement(&self) -> RatePair {
        self.disagreement
    }

    /// Individually rational efficient frontier.
    pub fn frontier(&self) -> Result<Frontier> {
        ir_frontier(&self.region, self.disagreement)
    }
}

/// Some feasible point is strictly better than disagreement for both users.
pub fn is_essential(problem: &BargainingProblem) -> bool {
    problem.frontier().is_ok()
}

/// Essential, and the individually rational efficient frontier has no horizontal
/// or vertical piece.
pub fn is_regular_frontier(problem: &BargainingProblem) -> bool {
    problem.frontier().is_ok_and(|f| f.is_strictly_monotone())
}

/// Breakdown probabilities after a rejected offer of user 1 (`p1`) and of user 2 (`p2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownProbs {
    p1: f64,
    p2: f64,
}

impl BreakdownProbs {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Domain(format!("{name} must lie in (0, 1), got {p}")));
            }
        }
        Ok(Self { p1, p2 })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// Breakdown probability after `proposer`'s offer is rejected.
    pub fn after_rejection_of(&self, proposer: Player) -> f64 {
        match proposer {
            Player::User1 => self.p1,
            Player::User2 => self.p2,
        }
    }

    pub fn swapped(&self) -> Self {
        Self { p1: self.p2, p2: self.p1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    User1,
    User2,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Player::User1 => Player::User2,
            Player::User2 => Player::User1,
        }
    }

    /// This player's coordinate of `p`.
    pub fn rate(self, p: RatePair) -> f64 {
        match self {
            Player::User1 => p.r1,
            Player::User2 => p.r2,
        }
    }
}

/// Standing offers of the two users in the subgame-perfect equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpePair {
    /// User 1's offer.
    pub r_bar: RatePair,
    /// User 2's offer.
    pub r_tilde: RatePair,
    pub first_mover: Player,
    /// The offer of the first mover, accepted in round 1.
    pub outcome: RatePair,
}

impl SpePair {
    pub(crate) fn new(r_bar: RatePair, r_tilde: RatePair, first_mover: Player) -> Self {
        let outcome = match first_mover {
            Player::User1 => r_bar,
            Player::User2 => r_tilde,
        };
        Self { r_bar, r_tilde, first_mover, outcome }
    }

    /// Residuals of the two indifference conditions: user 1 is indifferent between
    /// accepting `r_tilde` and rejecting it, user 2 likewise for `r_bar`.
    pub fn residuals(&self, disagreement: RatePair, probs: &BreakdownProbs) -> (f64, f64) {
        let d = disagreement;
        let user1 = self.r_tilde.r1 - ((1.0 - probs.p2) * (self.r_bar.r1 - d.r1) + d.r1);
        let user2 = self.r_bar.r2 - ((1.0 - probs.p1) * (self.r_tilde.r2 - d.r2) + d.r2);
        (user1, user2)
    }
}
