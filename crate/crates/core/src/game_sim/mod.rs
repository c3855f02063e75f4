//! Extensive-form alternating-offer game with chance breakdowns.
//!
//! Player 1 proposes in odd rounds and player 2 in even rounds when player 1 moves
//! first (the other way round otherwise). After a rejected offer, a chance move
//! ends the game in disagreement with the breakdown probability attached to the
//! proposer. Only stationary strategies are modelled: a fixed offer and a fixed
//! acceptance threshold per player.

mod deviation;
mod monte_carlo;

pub use deviation::{deviation_gain, deviation_gain_against, DeviationReport};
pub use monte_carlo::{monte_carlo, MonteCarloSummary};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bargaining::{spe, BargainingProblem, BreakdownProbs, Player, SpePair};
use crate::error::{Error, Result};
use crate::rate_region::RatePair;

pub const DEFAULT_MAX_ROUNDS: u64 = 10_000;

/// Stationary behaviour: always propose `offer`, accept any offer whose own
/// coordinate is at least `accept_threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strategy {
    pub offer: RatePair,
    pub accept_threshold: f64,
}

impl Strategy {
    pub fn new(offer: RatePair, accept_threshold: f64) -> Self {
        Self { offer, accept_threshold }
    }

    fn accepts(&self, me: Player, offer: RatePair) -> bool {
        me.rate(offer) >= self.accept_threshold
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ending {
    Agreement(RatePair),
    Breakdown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayOutcome {
    pub ending: Ending,
    /// Round in which the game ended, starting at 1.
    pub round: u64,
    pub payoffs: RatePair,
    /// The round cap was hit before agreement or breakdown.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    pub problem: BargainingProblem,
    pub probs: BreakdownProbs,
    pub first_mover: Player,
    pub max_rounds: u64,
}

impl GameSpec {
    pub fn new(problem: BargainingProblem, probs: BreakdownProbs, first_mover: Player) -> Self {
        Self { problem, probs, first_mover, max_rounds: DEFAULT_MAX_ROUNDS }
    }

    pub fn with_max_rounds(mut self, max_rounds: u64) -> Self {
        self.max_rounds = max_rounds;
        self
    }

    fn proposer(&self, round: u64) -> Player {
        if round % 2 == 1 {
            self.first_mover
        } else {
            self.first_mover.other()
        }
    }

    fn validate(&self, s1: &Strategy, s2: &Strategy) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::Precondition("max_rounds must be at least 1".into()));
        }
        for (who, s) in [("player 1", s1), ("player 2", s2)] {
            if !self.problem.region().contains(s.offer) {
                return Err(Error::Precondition(format!("{who}'s offer {:?} is infeasible", s.offer)));
            }
            if s.accept_threshold.is_nan() || s.accept_threshold < 0.0 {
                return Err(Error::Precondition(format!("{who}'s threshold must be nonnegative")));
            }
        }
        Ok(())
    }
}

/// Builds the stationary strategies that support a pair of standing offers.
pub fn strategies_from_offers(r_bar: RatePair, r_tilde: RatePair) -> (Strategy, Strategy) {
    (Strategy::new(r_bar, r_tilde.r1), Strategy::new(r_tilde, r_bar.r2))
}

/// Subgame-perfect strategies: each user proposes its equilibrium offer and
/// accepts exactly what it would get from the other's equilibrium offer.
pub fn equilibrium_strategies(problem: &BargainingProblem, probs: &BreakdownProbs) -> Result<(Strategy, Strategy)> {
    let SpePair { r_bar, r_tilde, .. } = spe(problem, probs, Player::User1)?;
    Ok(strategies_from_offers(r_bar, r_tilde))
}

/// Plays one game; the chance moves are drawn from a generator seeded with `seed`.
pub fn play(spec: &GameSpec, s1: &Strategy, s2: &Strategy, seed: u64) -> Result<PlayOutcome> {
    spec.validate(s1, s2)?;
    Ok(play_with(spec, s1, s2, &mut ChaCha8Rng::seed_from_u64(seed)))
}

pub(crate) fn play_with<R: Rng>(spec: &GameSpec, s1: &Strategy, s2: &Strategy, rng: &mut R) -> PlayOutcome {
    let d = spec.problem.disagreement();
    let strategy = |p: Player| match p {
        Player::User1 => s1,
        Player::User2 => s2,
    };
    for round in 1..=spec.max_rounds {
        let proposer = spec.proposer(round);
        let responder = proposer.other();
        let offer = strategy(proposer).offer;
        if strategy(responder).accepts(responder, offer) {
            return PlayOutcome { ending: Ending::Agreement(offer), round, payoffs: offer, truncated: false };
        }
        if rng.gen::<f64>() < spec.probs.after_rejection_of(proposer) {
            return PlayOutcome { ending: Ending::Breakdown, round, payoffs: d, truncated: false };
        }
    }
    PlayOutcome { ending: Ending::Breakdown, round: spec.max_rounds, payoffs: d, truncated: true }
}

/// Exact expected payoffs of a stationary strategy pair, including the round cap.
pub fn expected_payoffs(spec: &GameSpec, s1: &Strategy, s2: &Strategy) -> RatePair {
    let d = spec.problem.disagreement();
    let strategy = |p: Player| match p {
        Player::User1 => s1,
        Player::User2 => s2,
    };
    let accepted = |p: Player| strategy(p.other()).accepts(p.other(), strategy(p).offer);
    if !accepted(Player::User1) && !accepted(Player::User2) {
        // every path ends in breakdown or at the cap
        return d;
    }
    let first = spec.first_mover;
    if accepted(first) {
        return strategy(first).offer;
    }
    // the second mover's offer is accepted in round 2, if the game gets there
    if spec.max_rounds < 2 {
        return d;
    }
    let p = spec.probs.after_rejection_of(first);
    let o = strategy(first.other()).offer;
    RatePair::new(p * d.r1 + (1.0 - p) * o.r1, p * d.r2 + (1.0 - p) * o.r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bargaining::nbs;

    fn mac_spec(p: f64, first_mover: Player) -> GameSpec {
        GameSpec::new(BargainingProblem::mac(100.0, 31.6228).unwrap(), BreakdownProbs::new(p, p).unwrap(), first_mover)
    }

    #[test]
    fn equilibrium_strategy_values() {
        let spec = mac_spec(0.5, Player::User1);
        let (s1, s2) = equilibrium_strategies(&spec.problem, &spec.probs).unwrap();
        assert!(s1.offer.dist_inf(RatePair::new(2.5568, 0.9691)) < 1e-3);
        assert!(s2.offer.dist_inf(RatePair::new(1.7842, 1.7417)) < 1e-3);
        assert!((s1.accept_threshold - 1.7842).abs() < 1e-3);
        assert!((s2.accept_threshold - 0.9691).abs() < 1e-3);
        // player 2 accepts R̄ because its threshold is R̄2 itself
        assert!(s2.accepts(Player::User2, s1.offer));
    }

    #[test]
    fn thresholds_approach_nbs() {
        let spec = mac_spec(1e-7, Player::User1);
        let (s1, s2) = equilibrium_strategies(&spec.problem, &spec.probs).unwrap();
        let target = nbs(&spec.problem).unwrap();
        assert!((s1.accept_threshold - target.r1).abs() < 1e-5);
        assert!((s2.accept_threshold - target.r2).abs() < 1e-5);
    }

    #[test]
    fn equilibrium_play_agrees_in_round_one() {
        for first in [Player::User1, Player::User2] {
            let spec = mac_spec(0.3, first);
            let (s1, s2) = equilibrium_strategies(&spec.problem, &spec.probs).unwrap();
            let expect = if first == Player::User1 { s1.offer } else { s2.offer };
            for seed in 0..50 {
                let out = play(&spec, &s1, &s2, seed).unwrap();
                assert_eq!(out.ending, Ending::Agreement(expect));
                assert_eq!(out.round, 1);
            }
            assert_eq!(expected_payoffs(&spec, &s1, &s2), expect);
        }
    }

    #[test]
    fn incompatible_demands_break_down() {
        let spec = mac_spec(0.5, Player::User1);
        let f = spec.problem.frontier().unwrap();
        let s1 = Strategy::new(f.end(), f.end().r1);
        let s2 = Strategy::new(f.start(), f.start().r2);
        let a = play(&spec, &s1, &s2, 42).unwrap();
        assert_eq!(a.ending, Ending::Breakdown);
        assert_eq!(a.payoffs, spec.problem.disagreement());
        assert_eq!(a, play(&spec, &s1, &s2, 42).unwrap());
        assert_eq!(expected_payoffs(&spec, &s1, &s2), spec.problem.disagreement());
    }

    #[test]
    fn truncation_is_flagged() {
        let spec = mac_spec(1e-12, Player::User1).with_max_rounds(3);
        let never = Strategy::new(spec.problem.disagreement(), 1e9);
        let out = play(&spec, &never, &never, 1).unwrap();
        assert!(out.truncated);
        assert_eq!(out.round, 3);
        assert_eq!(out.payoffs, spec.problem.disagreement());
    }

    #[test]
    fn one_step_chance_arithmetic() {
        // player 2 rejects R̄, player 1 accepts R̃
        let spec = mac_spec(0.5, Player::User1);
        let probs = BreakdownProbs::new(0.3, 0.6).unwrap();
        let spec = GameSpec { probs, ..spec };
        let (s1, s2) = equilibrium_strategies(&spec.problem, &spec.probs).unwrap();
        let picky2 = Strategy::new(s2.offer, s1.offer.r2 + 0.1);
        let d = spec.problem.disagreement();
        let got = expected_payoffs(&spec, &s1, &picky2);
        let expect = RatePair::new(0.7 * s2.offer.r1 + 0.3 * d.r1, 0.7 * s2.offer.r2 + 0.3 * d.r2);
        assert!(got.dist_inf(expect) < 1e-15);

        // round cap of one: the rejection is followed by truncation
        let capped = spec.clone().with_max_rounds(1);
        assert_eq!(expected_payoffs(&capped, &s1, &picky2), d);
    }

    #[test]
    fn infeasible_offer_rejected() {
        let spec = mac_spec(0.5, Player::User1);
        let bad = Strategy::new(RatePair::new(10.0, 10.0), 0.0);
        let ok = Strategy::new(spec.problem.disagreement(), 0.0);
        assert!(matches!(play(&spec, &bad, &ok, 0), Err(Error::Precondition(_))));
        assert!(matches!(play(&spec.clone().with_max_rounds(0), &ok, &ok, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn payoffs_are_offer_or_disagreement() {
        let spec = mac_spec(0.2, Player::User2);
        let f = spec.problem.frontier().unwrap();
        let pts = f.sample(7);
        for (i, o1) in pts.iter().enumerate() {
            for o2 in &pts {
                let s1 = Strategy::new(*o1, o2.r1 - 0.01 * i as f64);
                let s2 = Strategy::new(*o2, o1.r2 + 0.01);
                for seed in 0..5 {
                    let out = play(&spec, &s1, &s2, seed).unwrap();
                    match out.ending {
                        Ending::Agreement(p) => assert!(p == *o1 || p == *o2),
                        Ending::Breakdown => assert_eq!(out.payoffs, spec.problem.disagreement()),
                    }
                }
            }
        }
    }
}
