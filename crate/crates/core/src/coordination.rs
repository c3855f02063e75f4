//! Two-phase coordination: agree on a scheme, then bargain over its region.

use rayon::prelude::*;

use crate::bargaining::{
    incentive_check, is_regular_frontier, nbs, spe, Agreement, BargainingProblem, BreakdownProbs, DisagreeReason,
    Incentive, Player, Scheme, SpePair,
};
use crate::error::{Error, Result};
use crate::rate_region::{disagreement_point, ChannelParams, RatePair};

const VERDICT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solution {
    Spe,
    Nbs,
    Both,
}

impl Solution {
    fn wants_spe(self) -> bool {
        matches!(self, Solution::Spe | Solution::Both)
    }

    fn wants_nbs(self) -> bool {
        matches!(self, Solution::Nbs | Solution::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub params: ChannelParams,
    pub scheme: Scheme,
    pub probs: BreakdownProbs,
    pub first_mover: Player,
    pub solution: Solution,
}

impl Scenario {
    /// The same scenario with user labels exchanged.
    pub fn relabeled(&self) -> Self {
        Self {
            params: self.params.swapped(),
            probs: self.probs.swapped(),
            first_mover: self.first_mover.other(),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase1 {
    Agreed(Agreement),
    Disagreed(DisagreeReason),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinationOutcome {
    pub phase1: Phase1,
    pub disagreement: RatePair,
    /// Where the users end up: the disagreement point after a failed phase 1,
    /// otherwise the equilibrium outcome (or the NBS when only that was asked for).
    /// `None` when the requested equilibrium was refused.
    pub operating_point: Option<RatePair>,
    pub spe: Option<SpePair>,
    pub nbs: Option<RatePair>,
    pub regular: bool,
    /// Why the requested equilibrium is missing, e.g. [`Error::NonRegular`].
    pub refusal: Option<Error>,
}

/// The bargaining problem over the region the users agreed on.
pub fn agreed_problem(params: &ChannelParams, agreement: &Agreement) -> Result<BargainingProblem> {
    match agreement {
        Agreement::Hk(split) => BargainingProblem::hk(params, split),
        Agreement::Tdm => BargainingProblem::tdm(params),
    }
}

/// Runs both phases for one scenario. Failures are encoded in the outcome.
pub fn negotiate(scenario: &Scenario) -> CoordinationOutcome {
    let d = disagreement_point(&scenario.params);
    let agreement = match incentive_check(&scenario.params, scenario.scheme) {
        Incentive::Disagree(reason) => {
            return CoordinationOutcome {
                phase1: Phase1::Disagreed(reason),
                disagreement: d,
                operating_point: Some(d),
                spe: None,
                nbs: None,
                regular: false,
                refusal: None,
            }
        }
        Incentive::Proceed(agreement) => agreement,
    };
    let problem = agreed_problem(&scenario.params, &agreement);
    let mut out = CoordinationOutcome {
        phase1: Phase1::Agreed(agreement),
        disagreement: d,
        operating_point: None,
        spe: None,
        nbs: None,
        regular: false,
        refusal: None,
    };
    let problem = match problem {
        Ok(p) => p,
        Err(e) => {
            out.refusal = Some(e);
            return out;
        }
    };
    out.regular = is_regular_frontier(&problem);
    // the NBS is attached to a refused equilibrium for reference
    if scenario.solution.wants_nbs() || !out.regular {
        out.nbs = nbs(&problem).ok();
    }
    if scenario.solution.wants_spe() {
        match spe(&problem, &scenario.probs, scenario.first_mover) {
            Ok(pair) => {
                out.operating_point = Some(pair.outcome);
                out.spe = Some(pair);
            }
            Err(e) => out.refusal = Some(e),
        }
    } else {
        out.operating_point = out.nbs;
    }
    out
}

/// Which breakdown probabilities a sweep varies.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    /// Vary `p1` over the grid with `p2` held fixed.
    P1 { grid: Vec<f64>, p2: f64 },
    /// Vary `p1 = p2` jointly.
    Joint(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    pub outcome: Result<CoordinationOutcome>,
    /// `‖R̄ − NBS‖∞` when both are available.
    pub nbs_gap: Option<f64>,
}

impl SweepRow {
    pub fn spe(&self) -> Option<&SpePair> {
        self.outcome.as_ref().ok().and_then(|o| o.spe.as_ref())
    }
}

/// `p1` from 0.05 to 0.95 in steps of 0.05.
pub fn default_p1_grid() -> Vec<f64> {
    (1..=19).map(|k| k as f64 * 0.05).collect()
}

/// Evenly spaced grid `from, from + step, …` up to `to` (inclusive within rounding).
/// Values are rounded to 12 decimals so that decimal steps hit decimal values.
pub fn linear_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !step.is_finite() || step <= 0.0 || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::Domain(format!("invalid grid from={from} to={to} step={step}")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| ((from + k as f64 * step) * 1e12).round() / 1e12).collect())
}

/// Re-runs [`negotiate`] across breakdown probabilities; rows keep grid order.
pub fn sweep(scenario: &Scenario, axis: &SweepAxis) -> Vec<SweepRow> {
    let points: Vec<(f64, f64)> = match axis {
        SweepAxis::P1 { grid, p2 } => grid.iter().map(|&p1| (p1, *p2)).collect(),
        SweepAxis::Joint(grid) => grid.iter().map(|&p| (p, p)).collect(),
    };
    points
        .into_par_iter()
        .map(|(p1, p2)| {
            let outcome = BreakdownProbs::new(p1, p2).map(|probs| negotiate(&Scenario { probs, ..*scenario }));
            let nbs_gap = outcome
                .as_ref()
                .ok()
                .and_then(|o| Some(o.spe?.r_bar.dist_inf(o.nbs?)));
            SweepRow { p1, p2, outcome, nbs_gap }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Both users get strictly more under H-K.
    HkDominates,
    /// Both users get strictly more under TDM.
    TdmDominates,
    /// The users disagree on the scheme; `hk_preferred_by` is the user better off under H-K.
    Mixed { hk_preferred_by: Player },
    /// A tie in some coordinate, or an outcome is missing.
    Incomparable,
}

impl Verdict {
    pub fn relabeled(self) -> Self {
        match self {
            Verdict::Mixed { hk_preferred_by } => Verdict::Mixed { hk_preferred_by: hk_preferred_by.other() },
            v => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeComparison {
    pub hk: CoordinationOutcome,
    pub tdm: CoordinationOutcome,
    pub verdict: Verdict,
}

/// Negotiates under both schemes and compares the operating points componentwise.
pub fn compare_schemes(params: &ChannelParams, probs: &BreakdownProbs, first_mover: Player) -> SchemeComparison {
    let run = |scheme| negotiate(&Scenario { params: *params, scheme, probs: *probs, first_mover, solution: Solution::Both });
    let hk = run(Scheme::Hk);
    let tdm = run(Scheme::Tdm);
    let verdict = match (hk.operating_point, tdm.operating_point) {
        (Some(h), Some(t)) => verdict_for(h, t),
        _ => Verdict::Incomparable,
    };
    SchemeComparison { hk, tdm, verdict }
}

fn verdict_for(hk: RatePair, tdm: RatePair) -> Verdict {
    let sign = |x: f64| {
        if x > VERDICT_TOL {
            1
        } else if x < -VERDICT_TOL {
            -1
        } else {
            0
        }
    };
    match (sign(hk.r1 - tdm.r1), sign(hk.r2 - tdm.r2)) {
        (1, 1) => Verdict::HkDominates,
        (-1, -1) => Verdict::TdmDominates,
        (1, -1) => Verdict::Mixed { hk_preferred_by: Player::User1 },
        (-1, 1) => Verdict::Mixed { hk_preferred_by: Player::User2 },
        _ => Verdict::Incomparable,
    }
}
