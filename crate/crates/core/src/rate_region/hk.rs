use super::{cap, ChannelParams, PowerSplit};

/// Bounds of the Han-Kobayashi region for a fixed power split without time sharing.
///
/// The region is `R1 ≤ phi1`, `R2 ≤ phi2`, `R1 + R2 ≤ phi3`, `2R1 + R2 ≤ phi4`,
/// `R1 + 2R2 ≤ phi5` intersected with the first quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HkBounds {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
    pub phi5: f64,
    pub phi31: f64,
    pub phi32: f64,
    pub phi33: f64,
    /// Sum-rate bound of the strong-interference capacity region, set only for
    /// the common-only split.
    pub phi6: Option<f64>,
}

pub fn hk_bounds(params: &ChannelParams, split: &PowerSplit) -> HkBounds {
    let (a, b, p1, p2) = (params.a(), params.b(), params.p1(), params.p2());
    let (alpha, beta) = (split.alpha(), split.beta());

    // private interference seen at each receiver, plus unit noise
    let noise1 = 1.0 + a * beta * p2;
    let noise2 = 1.0 + b * alpha * p1;

    let own_all_1 = cap((p1 + a * (1.0 - beta) * p2) / noise1);
    let own_priv_1 = cap(alpha * p1 / noise1);
    let cross_priv_1 = cap((alpha * p1 + a * (1.0 - beta) * p2) / noise1);
    let own_all_2 = cap((p2 + b * (1.0 - alpha) * p1) / noise2);
    let own_priv_2 = cap(beta * p2 / noise2);
    let cross_priv_2 = cap((beta * p2 + b * (1.0 - alpha) * p1) / noise2);

    let phi31 = own_all_1 + own_priv_2;
    let phi32 = own_priv_1 + own_all_2;
    let phi33 = cross_priv_1 + cross_priv_2;

    let phi6 = (alpha == 0.0 && beta == 0.0).then(|| cap(p1 + a * p2).min(cap(b * p1 + p2)));

    HkBounds {
        phi1: cap(p1 / noise1),
        phi2: cap(p2 / noise2),
        phi3: phi31.min(phi32).min(phi33),
        phi4: own_all_1 + own_priv_1 + cross_priv_2,
        phi5: own_all_2 + own_priv_2 + cross_priv_1,
        phi31,
        phi32,
        phi33,
        phi6,
    }
}
