use super::{equilibrium_strategies, expected_payoffs, GameSpec, Strategy};
use crate::bargaining::Player;
use crate::error::{Error, Result};

/// Largest expected-payoff improvement each player finds by a unilateral
/// stationary deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationReport {
    pub user1: f64,
    pub user2: f64,
}

impl DeviationReport {
    pub fn max(&self) -> f64 {
        self.user1.max(self.user2)
    }
}

/// Deviation test of the equilibrium strategies of `spec`.
pub fn deviation_gain(spec: &GameSpec, grid_size: usize) -> Result<DeviationReport> {
    let (s1, s2) = equilibrium_strategies(&spec.problem, &spec.probs)?;
    deviation_gain_against(spec, &s1, &s2, grid_size)
}

/// Holds one player at its strategy and sweeps the other over `grid_size` offers
/// along the frontier times `grid_size` acceptance thresholds spanning
/// `[disagreement, frontier maximum]`. Payoffs are exact expectations.
pub fn deviation_gain_against(spec: &GameSpec, s1: &Strategy, s2: &Strategy, grid_size: usize) -> Result<DeviationReport> {
    if grid_size < 3 {
        return Err(Error::Precondition(format!("grid_size must be at least 3, got {grid_size}")));
    }
    spec.validate(s1, s2)?;
    let frontier = spec.problem.frontier()?;
    let d = spec.problem.disagreement();
    let offers = frontier.sample(grid_size);
    let top = (frontier.domain().1, frontier.range().1);
    let thresholds = |lo: f64, hi: f64| -> Vec<f64> {
        (0..grid_size).map(|k| lo + (hi - lo) * k as f64 / (grid_size - 1) as f64).collect()
    };
    let base = expected_payoffs(spec, s1, s2);

    let best_for = |me: Player| -> f64 {
        let (lo, hi) = match me {
            Player::User1 => (d.r1, top.0),
            Player::User2 => (d.r2, top.1),
        };
        let mut best = f64::NEG_INFINITY;
        for offer in &offers {
            for &t in &thresholds(lo, hi) {
                let dev = Strategy::new(*offer, t);
                let v = match me {
                    Player::User1 => expected_payoffs(spec, &dev, s2),
                    Player::User2 => expected_payoffs(spec, s1, &dev),
                };
                best = best.max(me.rate(v));
            }
        }
        best - me.rate(base)
    };
    Ok(DeviationReport { user1: best_for(Player::User1), user2: best_for(Player::User2) })
}
