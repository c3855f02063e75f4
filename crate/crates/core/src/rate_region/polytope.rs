use super::tdm::{tdm_point_unchecked, RHO_TOL};
use super::{cap, hk_bounds, ChannelParams, PowerSplit, RatePair};
use crate::numeric::{invert_increasing, GEOM_TOL};

/// The half-plane `c1·R1 + c2·R2 ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub coeffs: (f64, f64),
    pub bound: f64,
}

impl HalfPlane {
    pub const fn new(c1: f64, c2: f64, bound: f64) -> Self {
        Self { coeffs: (c1, c2), bound }
    }

    /// Signed violation; positive when `p` lies outside.
    pub fn slack(&self, p: RatePair) -> f64 {
        self.coeffs.0 * p.r1 + self.coeffs.1 * p.r2 - self.bound
    }

    fn intersect(&self, other: &Self) -> Option<RatePair> {
        let (a1, b1) = self.coeffs;
        let (a2, b2) = other.coeffs;
        let det = a1 * b2 - a2 * b1;
        if det.abs() < 1e-14 {
            return None;
        }
        Some(RatePair::new((self.bound * b2 - other.bound * b1) / det, (a1 * other.bound - a2 * self.bound) / det))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    HkPolytope,
    MacPolytope,
    Tdm,
}

/// A closed convex achievable rate region.
///
/// Polytope kinds carry their half-planes and the extreme points obtained from
/// them. The TDM kind carries no half-planes; its vertex list holds only the origin
/// and the two single-user corners, and the curved part of the boundary is
/// `rho ↦ tdm_point(rho)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion {
    kind: RegionKind,
    constraints: Vec<HalfPlane>,
    vertices: Vec<RatePair>,
    params: ChannelParams,
}

impl RateRegion {
    fn polytope(kind: RegionKind, params: ChannelParams, mut constraints: Vec<HalfPlane>) -> Self {
        constraints.push(HalfPlane::new(-1.0, 0.0, 0.0));
        constraints.push(HalfPlane::new(0.0, -1.0, 0.0));
        let vertices = enumerate_vertices(&constraints);
        Self { kind, constraints, vertices, params }
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn constraints(&self) -> &[HalfPlane] {
        &self.constraints
    }

    /// Extreme points sorted by increasing `R1`, ties by decreasing `R2`.
    pub fn vertices(&self) -> &[RatePair] {
        &self.vertices
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn is_polytope(&self) -> bool {
        self.kind != RegionKind::Tdm
    }

    /// Largest achievable rate of user 1 and of user 2.
    pub fn single_user_max(&self) -> RatePair {
        match self.kind {
            RegionKind::Tdm => RatePair::new(cap(self.params.p1()), cap(self.params.p2())),
            _ => self.vertices.iter().fold(RatePair::default(), |m, v| RatePair::new(m.r1.max(v.r1), m.r2.max(v.r2))),
        }
    }

    /// Membership test with tolerance [`GEOM_TOL`].
    pub fn contains(&self, p: RatePair) -> bool {
        if !(p.r1.is_finite() && p.r2.is_finite()) || p.r1 < -GEOM_TOL || p.r2 < -GEOM_TOL {
            return false;
        }
        match self.kind {
            RegionKind::Tdm => {
                let (p1, p2) = (self.params.p1(), self.params.p2());
                if p.r1 > cap(p1) + GEOM_TOL {
                    return false;
                }
                let rho1 = invert_increasing(|rho| super::tdm_rate(rho, p1), p.r1, 0.0, 1.0, RHO_TOL);
                p.r2 <= super::tdm_rate(1.0 - rho1, p2) + GEOM_TOL
            }
            _ => self.constraints.iter().all(|h| h.slack(p) <= GEOM_TOL),
        }
    }

    /// Weakly Pareto-efficient boundary of a polytope, from the top of the `R2` axis
    /// to the right end of the `R1` axis, as an ordered vertex chain.
    pub(crate) fn upper_chain(&self) -> Vec<RatePair> {
        self.vertices.iter().copied().filter(|v| v.r1 > GEOM_TOL || v.r2 > GEOM_TOL).collect()
    }

    /// Closed boundary polyline starting and ending at the origin; the TDM curve is
    /// sampled at `samples` points.
    pub fn outline(&self, samples: usize) -> Vec<RatePair> {
        let mut pts = vec![RatePair::default()];
        match self.kind {
            RegionKind::Tdm => {
                let n = samples.max(2);
                pts.extend(
                    (0..=n).map(|k| tdm_point_unchecked(k as f64 / n as f64, self.params.p1(), self.params.p2())),
                );
            }
            _ => pts.extend(self.upper_chain()),
        }
        pts.push(RatePair::default());
        pts
    }
}

/// Extreme points of a 2-D polytope by pairwise intersection of its half-planes.
fn enumerate_vertices(constraints: &[HalfPlane]) -> Vec<RatePair> {
    let mut out: Vec<RatePair> = Vec::new();
    for (i, h) in constraints.iter().enumerate() {
        for g in &constraints[i + 1..] {
            let Some(p) = h.intersect(g) else { continue };
            if constraints.iter().any(|c| c.slack(p) > GEOM_TOL) {
                continue;
            }
            if out.iter().all(|q| q.dist_inf(p) > GEOM_TOL) {
                out.push(p);
            }
        }
    }
    for v in &mut out {
        // snap round-off so first-quadrant points are exactly nonnegative
        v.r1 = v.r1.max(0.0);
        v.r2 = v.r2.max(0.0);
    }
    out.sort_by(|x, y| x.r1.total_cmp(&y.r1).then(y.r2.total_cmp(&x.r2)));
    out
}

/// Region of the Han-Kobayashi scheme with a fixed power split and no time sharing.
pub fn hk_polytope(params: &ChannelParams, split: &PowerSplit) -> RateRegion {
    let h = hk_bounds(params, split);
    RateRegion::polytope(
        RegionKind::HkPolytope,
        *params,
        vec![
            HalfPlane::new(1.0, 0.0, h.phi1),
            HalfPlane::new(0.0, 1.0, h.phi2),
            HalfPlane::new(1.0, 1.0, h.phi3),
            HalfPlane::new(2.0, 1.0, h.phi4),
            HalfPlane::new(1.0, 2.0, h.phi5),
        ],
    )
}

/// Capacity region of the two-user Gaussian multiple-access channel.
pub fn mac_polytope(p1: f64, p2: f64) -> crate::Result<RateRegion> {
    let params = ChannelParams::mac(p1, p2)?;
    Ok(RateRegion::polytope(
        RegionKind::MacPolytope,
        params,
        vec![
            HalfPlane::new(1.0, 0.0, cap(p1)),
            HalfPlane::new(0.0, 1.0, cap(p2)),
            HalfPlane::new(1.0, 1.0, cap(p1 + p2)),
        ],
    ))
}

/// Time-division region; its shape does not depend on the cross gains.
pub fn tdm_region(params: &ChannelParams) -> RateRegion {
    let corner = RatePair::new(cap(params.p1()), cap(params.p2()));
    RateRegion {
        kind: RegionKind::Tdm,
        constraints: Vec::new(),
        vertices: vec![RatePair::new(0.0, corner.r2), RatePair::default(), RatePair::new(corner.r1, 0.0)],
        params: *params,
    }
}
