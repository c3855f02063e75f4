use super::{is_regular_frontier, BargainingProblem, BreakdownProbs, Player, SpePair};
use crate::error::{Error, Result};
use crate::numeric::{bisect, BISECT_TOL};
use crate::rate_region::{cap, disagreement_point, ChannelParams, RatePair};

/// Bound on the indifference-condition residuals of a computed equilibrium.
pub const SPE_RESIDUAL_TOL: f64 = 1e-9;

/// Equilibrium offers of the bargaining game over the multiple-access capacity region.
///
/// Both offers lie on the sum-rate face, so the two indifference conditions and
/// the two efficiency conditions form a linear system solved here by elimination.
pub fn spe_mac(p1: f64, p2: f64, probs: &BreakdownProbs, first_mover: Player) -> Result<SpePair> {
    let params = ChannelParams::mac(p1, p2)?;
    let d = disagreement_point(&params);
    let sum = cap(p1 + p2);
    let (q1, q2) = (probs.p1(), probs.p2());

    let bar1 = (q1 * sum + (1.0 - q1) * q2 * d.r1 - q1 * d.r2) / (1.0 - (1.0 - q1) * (1.0 - q2));
    let tilde1 = (1.0 - q2) * bar1 + q2 * d.r1;
    Ok(SpePair::new(RatePair::new(bar1, sum - bar1), RatePair::new(tilde1, sum - tilde1), first_mover))
}

/// Equilibrium offers of the alternating-offer game on a regular problem.
///
/// Searches user 1's offer `x = R̄1` along the frontier. For each `x` user 2's
/// indifference fixes `R̃2`, the frontier gives `R̃1`, and the residual of user 1's
/// indifference is driven to zero by bisection.
pub fn spe(problem: &BargainingProblem, probs: &BreakdownProbs, first_mover: Player) -> Result<SpePair> {
    if !is_regular_frontier(problem) {
        return Err(Error::NonRegular);
    }
    let frontier = problem.frontier()?;
    let d = problem.disagreement();
    let (q1, q2) = (probs.p1(), probs.p2());
    let (_, x_hi) = frontier.domain();
    let (_, y_top) = frontier.range();

    let tilde_for = |x: f64| {
        let bar2 = frontier.eval(x);
        let tilde2 = ((bar2 - d.r2) / (1.0 - q1) + d.r2).min(y_top);
        RatePair::new(frontier.inverse(tilde2), tilde2)
    };
    let residual = |x: f64| tilde_for(x).r1 - ((1.0 - q2) * (x - d.r1) + d.r1);

    // below x_min user 2's counter-offer would leave the frontier
    let x_min = frontier.inverse(d.r2 + (1.0 - q1) * (y_top - d.r2));
    let x = bisect(residual, x_min, x_hi, BISECT_TOL)?;

    let pair = SpePair::new(RatePair::new(x, frontier.eval(x)), tilde_for(x), first_mover);
    let (e1, e2) = pair.residuals(d, probs);
    if e1.abs() > SPE_RESIDUAL_TOL || e2.abs() > SPE_RESIDUAL_TOL {
        return Err(Error::Numerical(format!(
            "equilibrium residuals ({e1:e}, {e2:e}) exceed {SPE_RESIDUAL_TOL:e} at R̄1 = {x}"
        )));
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bargaining::nbs;
    use crate::rate_region::{default_power_split, PowerSplit};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Gaussian elimination with partial pivoting on the 4x4 system
    /// `M·(R̄1, R̄2, R̃1, R̃2) = (-p2·R1⁰, p1·R2⁰, φ0, φ0)`.
    fn mac_linear_oracle(p1: f64, p2: f64, q1: f64, q2: f64) -> [f64; 4] {
        let d = disagreement_point(&ChannelParams::mac(p1, p2).unwrap());
        let s = cap(p1 + p2);
        let mut m = [
            [1.0 - q2, 0.0, -1.0, 0.0, -q2 * d.r1],
            [0.0, 1.0, 0.0, -(1.0 - q1), q1 * d.r2],
            [1.0, 1.0, 0.0, 0.0, s],
            [0.0, 0.0, 1.0, 1.0, s],
        ];
        for col in 0..4 {
            let piv = (col..4).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
            m.swap(col, piv);
            let pivot_row = m[col];
            for (row, line) in m.iter_mut().enumerate() {
                if row != col {
                    let f = line[col] / pivot_row[col];
                    for (x, p) in line.iter_mut().zip(pivot_row).skip(col) {
                        *x -= f * p;
                    }
                }
            }
        }
        [m[0][4] / m[0][0], m[1][4] / m[1][1], m[2][4] / m[2][2], m[3][4] / m[3][3]]
    }

    #[test]
    fn mac_matches_linear_oracle() {
        let probs = BreakdownProbs::new(0.5, 0.5).unwrap();
        let pair = spe_mac(100.0, 31.6228, &probs, Player::User1).unwrap();
        let o = mac_linear_oracle(100.0, 31.6228, 0.5, 0.5);
        assert!((pair.r_bar.r1 - o[0]).abs() < 1e-12);
        assert!((pair.r_bar.r2 - o[1]).abs() < 1e-12);
        assert!((pair.r_tilde.r1 - o[2]).abs() < 1e-12);
        assert!((pair.r_tilde.r2 - o[3]).abs() < 1e-12);
        assert!(pair.r_bar.dist_inf(RatePair::new(2.5568, 0.9691)) < 1e-3);
        assert!(pair.r_tilde.dist_inf(RatePair::new(1.7842, 1.7417)) < 1e-3);
        assert_eq!(pair.outcome, pair.r_bar);
    }

    #[test]
    fn mac_offers_are_efficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let (p1, p2) = (rng.gen_range(0.1..1000.0), rng.gen_range(0.1..1000.0));
            let probs = BreakdownProbs::new(rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99)).unwrap();
            let pair = spe_mac(p1, p2, &probs, Player::User2).unwrap();
            let s = cap(p1 + p2);
            assert!((pair.r_bar.r1 + pair.r_bar.r2 - s).abs() < 1e-9);
            assert!((pair.r_tilde.r1 + pair.r_tilde.r2 - s).abs() < 1e-9);
            assert_eq!(pair.outcome, pair.r_tilde);
        }
    }

    #[test]
    fn mac_vanishing_breakdown_reaches_nbs() {
        let probs = BreakdownProbs::new(1e-9, 1e-9).unwrap();
        let pair = spe_mac(100.0, 31.6228, &probs, Player::User1).unwrap();
        let target = nbs(&BargainingProblem::mac(100.0, 31.6228).unwrap()).unwrap();
        assert!(pair.r_bar.dist_inf(target) < 1e-6);
        assert!(pair.r_tilde.dist_inf(target) < 1e-6);
    }

    #[test]
    fn generic_path_matches_mac_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let (p1, p2) = (rng.gen_range(0.1..1000.0), rng.gen_range(0.1..1000.0));
            let probs = BreakdownProbs::new(rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99)).unwrap();
            let closed = spe_mac(p1, p2, &probs, Player::User1).unwrap();
            let generic = spe(&BargainingProblem::mac(p1, p2).unwrap(), &probs, Player::User1).unwrap();
            assert!(closed.r_bar.dist_inf(generic.r_bar) < 1e-8, "{p1} {p2} {probs:?}");
            assert!(closed.r_tilde.dist_inf(generic.r_tilde) < 1e-8);
        }
    }

    #[test]
    fn reference_offers_approach_nbs() {
        let params = ChannelParams::new(0.2, 1.2, 10.0, 100.0).unwrap();
        let problem = BargainingProblem::hk(&params, &default_power_split(&params)).unwrap();
        let target = nbs(&problem).unwrap();
        let frontier = problem.frontier().unwrap();
        let mut last = f64::INFINITY;
        for p in [0.5, 0.1] {
            let pair = spe(&problem, &BreakdownProbs::new(p, p).unwrap(), Player::User1).unwrap();
            for q in [pair.r_bar, pair.r_tilde] {
                assert!((frontier.eval(q.r1) - q.r2).abs() < 1e-9);
            }
            let gap = pair.r_bar.dist_inf(target).max(pair.r_tilde.dist_inf(target));
            assert!(gap < last);
            last = gap;
        }
        let pair = spe(&problem, &BreakdownProbs::new(1e-9, 1e-9).unwrap(), Player::User1).unwrap();
        assert!(pair.r_bar.dist_inf(target) <= 1e-5);
    }

    #[test]
    fn tdm_equilibrium_satisfies_conditions() {
        let params = ChannelParams::new(0.2, 1.2, 100.0, 1000.0).unwrap();
        let problem = BargainingProblem::tdm(&params).unwrap();
        let probs = BreakdownProbs::new(0.3, 0.6).unwrap();
        let pair = spe(&problem, &probs, Player::User1).unwrap();
        let (e1, e2) = pair.residuals(problem.disagreement(), &probs);
        assert!(e1.abs() <= 1e-9 && e2.abs() <= 1e-9);
        assert!(problem.region().contains(pair.r_bar) && problem.region().contains(pair.r_tilde));
        assert!(pair.r_bar.r1 >= pair.r_tilde.r1 && pair.r_tilde.r2 >= pair.r_bar.r2);
    }

    #[test]
    fn non_regular_is_refused() {
        let params = ChannelParams::new(2.0, 2.0, 1.0, 1.0).unwrap();
        let problem = BargainingProblem::hk(&params, &PowerSplit::common_only()).unwrap();
        let probs = BreakdownProbs::new(0.5, 0.5).unwrap();
        assert_eq!(spe(&problem, &probs, Player::User1), Err(Error::NonRegular));
    }

    #[test]
    fn breakdown_risk_shifts_offer_toward_user1() {
        let params = ChannelParams::new(0.2, 1.2, 10.0, 100.0).unwrap();
        let problem = BargainingProblem::hk(&params, &default_power_split(&params)).unwrap();
        let mut prev: Option<RatePair> = None;
        for k in 1..=19 {
            let p1 = 0.05 * k as f64;
            let pair = spe(&problem, &BreakdownProbs::new(p1, 0.5).unwrap(), Player::User1).unwrap();
            if let Some(q) = prev {
                assert!(pair.r_bar.r1 >= q.r1 && pair.r_bar.r2 <= q.r2);
            }
            prev = Some(pair.r_bar);
        }
    }
}
