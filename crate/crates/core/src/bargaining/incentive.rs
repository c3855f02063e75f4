use super::{is_essential, BargainingProblem};
use crate::rate_region::{
    classify_interference, default_power_split, disagreement_point, hk_bounds, ChannelParams, PowerSplit, Regime,
};

/// Cooperative transmission scheme negotiated in phase 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Hk,
    Tdm,
}

/// The scheme both users agreed on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Agreement {
    Hk(PowerSplit),
    Tdm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisagreeReason {
    /// A private message would arrive above the noise level at the other receiver
    /// (`a·P2 ≤ 1` or `b·P1 ≤ 1` where the split needs it).
    InterferenceBelowNoise,
    /// No rate pair of the scheme strictly improves both disagreement rates.
    NoMutualGain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Incentive {
    Proceed(Agreement),
    Disagree(DisagreeReason),
}

/// Phase-1 decision: do both users gain from cooperating with `scheme`?
pub fn incentive_check(params: &ChannelParams, scheme: Scheme) -> Incentive {
    match scheme {
        Scheme::Tdm => match BargainingProblem::tdm(params) {
            Ok(problem) if is_essential(&problem) => Incentive::Proceed(Agreement::Tdm),
            _ => Incentive::Disagree(DisagreeReason::NoMutualGain),
        },
        Scheme::Hk => {
            let regime = classify_interference(params);
            let needs_a = regime == Regime::Weak || (regime == Regime::Mixed && params.a() < 1.0);
            let needs_b = regime == Regime::Weak || (regime == Regime::Mixed && params.b() < 1.0);
            if (needs_a && params.a() * params.p2() <= 1.0) || (needs_b && params.b() * params.p1() <= 1.0) {
                return Incentive::Disagree(DisagreeReason::InterferenceBelowNoise);
            }
            let split = default_power_split(params);
            if regime == Regime::Strong {
                return Incentive::Proceed(Agreement::Hk(split));
            }
            match BargainingProblem::hk(params, &split) {
                Ok(problem) if is_essential(&problem) => Incentive::Proceed(Agreement::Hk(split)),
                _ => Incentive::Disagree(DisagreeReason::NoMutualGain),
            }
        }
    }
}

/// Closed-form regularity test for the Han-Kobayashi problem after a successful phase 1.
pub fn is_regular_ic(params: &ChannelParams, split: &PowerSplit) -> bool {
    let pos = |x: f64| x.max(0.0);
    let d = disagreement_point(params);
    let h = hk_bounds(params, split);
    match classify_interference(params) {
        Regime::Strong => params.a() == 1.0 && params.b() == 1.0,
        Regime::Weak => d.r1 >= pos(h.phi5 - 2.0 * h.phi2) && d.r2 >= pos(h.phi4 - 2.0 * h.phi1),
        Regime::Mixed => {
            d.r1 >= pos((h.phi5 - 2.0 * h.phi2).min(h.phi3 - h.phi2))
                && d.r2 >= pos((h.phi4 - 2.0 * h.phi1).min(h.phi3 - h.phi1))
        }
    }
}
