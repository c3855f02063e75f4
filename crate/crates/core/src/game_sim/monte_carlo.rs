use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{play_with, Ending, GameSpec, PlayOutcome, Strategy};
use crate::error::{Error, Result};
use crate::rate_region::RatePair;

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: u64,
    pub mean: RatePair,
    /// Standard error of each mean.
    pub std_err: RatePair,
    /// Agreement counts keyed by round.
    pub agreement_rounds: BTreeMap<u64, u64>,
    pub breakdowns: u64,
    /// Mean round of breakdown, if any occurred.
    pub mean_breakdown_round: Option<f64>,
    pub truncated: u64,
}

/// Plays `trials` independent games. Trial `k` draws from stream `k` of a ChaCha
/// generator keyed by `seed`, so results do not depend on scheduling.
pub fn monte_carlo(spec: &GameSpec, s1: &Strategy, s2: &Strategy, trials: u64, seed: u64) -> Result<MonteCarloSummary> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    spec.validate(s1, s2)?;
    let outcomes: Vec<PlayOutcome> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            play_with(spec, s1, s2, &mut rng)
        })
        .collect();
    Ok(summarize(&outcomes))
}

fn summarize(outcomes: &[PlayOutcome]) -> MonteCarloSummary {
    let n = outcomes.len() as f64;
    let mean = |f: fn(&PlayOutcome) -> f64| outcomes.iter().map(f).sum::<f64>() / n;
    let m1 = mean(|o| o.payoffs.r1);
    let m2 = mean(|o| o.payoffs.r2);
    let se = |f: fn(&PlayOutcome) -> f64, m: f64| {
        if outcomes.len() < 2 {
            return 0.0;
        }
        let var = outcomes.iter().map(|o| (f(o) - m).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    };

    let mut agreement_rounds = BTreeMap::new();
    let (mut breakdowns, mut breakdown_round_sum, mut truncated) = (0u64, 0u64, 0u64);
    for o in outcomes {
        match o.ending {
            Ending::Agreement(_) => *agreement_rounds.entry(o.round).or_insert(0) += 1,
            Ending::Breakdown if o.truncated => truncated += 1,
            Ending::Breakdown => {
                breakdowns += 1;
                breakdown_round_sum += o.round;
            }
        }
    }
    MonteCarloSummary {
        trials: outcomes.len() as u64,
        mean: RatePair::new(m1, m2),
        std_err: RatePair::new(se(|o| o.payoffs.r1, m1), se(|o| o.payoffs.r2, m2)),
        agreement_rounds,
        breakdowns,
        mean_breakdown_round: (breakdowns > 0).then(|| breakdown_round_sum as f64 / breakdowns as f64),
        truncated,
    }
}
