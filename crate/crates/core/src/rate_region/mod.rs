//! Achievable rate regions of the two-user Gaussian interference channel.
//!
//! Everything here works in linear power units with unit noise variance, and all
//! rates are in bits per channel use.

mod frontier;
mod hk;
mod polytope;
mod tdm;

pub use frontier::{ir_frontier, Frontier, FrontierShape};
pub use hk::{hk_bounds, HkBounds};
pub use polytope::{hk_polytope, mac_polytope, tdm_region, HalfPlane, RateRegion, RegionKind};
pub use tdm::{tdm_fraction_for_rate, tdm_point, tdm_rate};

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Gaussian capacity `½·log₂(1 + x)`.
pub fn capacity(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("capacity argument must be finite and nonnegative, got {x}")));
    }
    Ok(cap(x))
}

#[inline]
pub(crate) fn cap(x: f64) -> f64 {
    0.5 * x.ln_1p() / LN_2
}

/// Converts an SNR in dB to linear power (noise variance is one).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Cross gains and power constraints of a two-user Gaussian interference channel.
///
/// `a` is the power gain of the link from transmitter 2 to receiver 1, `b` the gain
/// from transmitter 1 to receiver 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    a: f64,
    b: f64,
    p1: f64,
    p2: f64,
}

impl ChannelParams {
    pub fn new(a: f64, b: f64, p1: f64, p2: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("P1", p1), ("P2", p2)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(Self { a, b, p1, p2 })
    }

    /// Builds parameters from SNRs given in dB.
    pub fn from_db(a: f64, b: f64, snr1_db: f64, snr2_db: f64) -> Result<Self> {
        Self::new(a, b, db_to_linear(snr1_db), db_to_linear(snr2_db))
    }

    /// The multiple-access channel seen as an interference channel with unit cross gains.
    pub fn mac(p1: f64, p2: f64) -> Result<Self> {
        Self::new(1.0, 1.0, p1, p2)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// Same channel with the user labels exchanged.
    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a, p1: self.p2, p2: self.p1 }
    }
}

/// A pair of rates, user 1 first.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub const fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    pub fn swapped(self) -> Self {
        Self { r1: self.r2, r2: self.r1 }
    }

    pub fn dist_inf(self, other: Self) -> f64 {
        (self.r1 - other.r1).abs().max((self.r2 - other.r2).abs())
    }

    /// Componentwise `self >= other - tol`.
    pub fn dominates(self, other: Self, tol: f64) -> bool {
        self.r1 >= other.r1 - tol && self.r2 >= other.r2 - tol
    }

    /// Nash product of the gains over `origin`.
    pub fn nash_product(self, origin: Self) -> f64 {
        (self.r1 - origin.r1) * (self.r2 - origin.r2)
    }
}

/// Interference regime of a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Strong,
    Weak,
    Mixed,
}

pub fn classify_interference(params: &ChannelParams) -> Regime {
    match (params.a >= 1.0, params.b >= 1.0) {
        (true, true) => Regime::Strong,
        (false, false) => Regime::Weak,
        _ => Regime::Mixed,
    }
}

/// Fractions of each user's power spent on its private message.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    alpha: f64,
    beta: f64,
}

impl PowerSplit {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(Self { alpha, beta })
    }

    /// Common messages only.
    pub const fn common_only() -> Self {
        Self { alpha: 0.0, beta: 0.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn swapped(&self) -> Self {
        Self { alpha: self.beta, beta: self.alpha }
    }
}

/// The power split used for cooperation in each regime.
///
/// Strong interference sends common messages only. Weak interference sets each
/// private power so that it arrives at the unintended receiver at the noise level.
/// Mixed interference does the same for the weakly interfering user and sends
/// common messages only for the other.
pub fn default_power_split(params: &ChannelParams) -> PowerSplit {
    let private = |gain: f64, power: f64| (1.0 / (gain * power)).min(1.0);
    match classify_interference(params) {
        Regime::Strong => PowerSplit::common_only(),
        Regime::Weak => PowerSplit { alpha: private(params.b, params.p1), beta: private(params.a, params.p2) },
        Regime::Mixed if params.a < 1.0 => PowerSplit { alpha: 0.0, beta: private(params.a, params.p2) },
        Regime::Mixed => default_power_split(&params.swapped()).swapped(),
    }
}

/// Rates obtained when each receiver treats the other user's full-power signal as noise.
pub fn disagreement_point(params: &ChannelParams) -> RatePair {
    RatePair {
        r1: cap(params.p1 / (1.0 + params.a * params.p2)),
        r2: cap(params.p2 / (1.0 + params.b * params.p1)),
    }
}
