use super::{cap, ChannelParams, RatePair};
use crate::error::{Error, Result};
use crate::numeric::invert_increasing;

pub(crate) const RHO_TOL: f64 = 1e-15;

/// Rate of a user with power `power` transmitting alone for a fraction `rho` of the time.
///
/// Extended continuously to `0` at `rho = 0`.
pub fn tdm_rate(rho: f64, power: f64) -> f64 {
    if rho <= 0.0 {
        0.0
    } else {
        rho * cap(power / rho)
    }
}

/// Smallest time fraction giving `rate`, or `None` if `rate` exceeds the full-time capacity.
pub fn tdm_fraction_for_rate(rate: f64, power: f64) -> Option<f64> {
    if rate <= 0.0 {
        return Some(0.0);
    }
    if rate > cap(power) {
        return None;
    }
    Some(invert_increasing(|rho| tdm_rate(rho, power), rate, 0.0, 1.0, RHO_TOL))
}

/// Frontier point of the TDM region with user 1 active for a fraction `rho1`.
pub fn tdm_point(rho1: f64, params: &ChannelParams) -> Result<RatePair> {
    if !(0.0..=1.0).contains(&rho1) {
        return Err(Error::Domain(format!("time fraction must lie in [0, 1], got {rho1}")));
    }
    Ok(tdm_point_unchecked(rho1, params.p1(), params.p2()))
}

pub(crate) fn tdm_point_unchecked(rho1: f64, p1: f64, p2: f64) -> RatePair {
    RatePair::new(tdm_rate(rho1, p1), tdm_rate(1.0 - rho1, p2))
}
