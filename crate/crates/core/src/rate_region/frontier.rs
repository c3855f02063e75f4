use super::tdm::{tdm_rate, RHO_TOL};
use super::{RatePair, RateRegion, RegionKind};
use crate::error::{Error, Result};
use crate::numeric::{invert_increasing, GEOM_TOL};

/// Relative slope below which a frontier segment counts as horizontal or vertical.
const AXIS_SLOPE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum FrontierShape {
    /// Vertex chain ordered by increasing `R1` (and nonincreasing `R2`).
    PiecewiseLinear(Vec<RatePair>),
    /// TDM frontier `rho ↦ (rho·C(P1/rho), (1-rho)·C(P2/(1-rho)))` for `rho` in
    /// `[rho_lo, rho_hi]`.
    Parametric { p1: f64, p2: f64, rho_lo: f64, rho_hi: f64 },
}

/// Efficient frontier of the individually rational part of a rate region.
///
/// `eval` maps `R1` to the largest `R2` on the frontier and `inverse` maps `R2` to
/// the largest `R1`. Both clamp their argument into the frontier's range.
#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    shape: FrontierShape,
    disagreement: RatePair,
    domain: (f64, f64),
}

impl Frontier {
    pub fn shape(&self) -> &FrontierShape {
        &self.shape
    }

    pub fn disagreement(&self) -> RatePair {
        self.disagreement
    }

    /// `[r1_min, r1_max]`.
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Upper-left end of the frontier.
    pub fn start(&self) -> RatePair {
        match &self.shape {
            FrontierShape::PiecewiseLinear(pts) => pts[0],
            FrontierShape::Parametric { p1, p2, rho_lo, .. } => param_point(*rho_lo, *p1, *p2),
        }
    }

    /// Lower-right end of the frontier.
    pub fn end(&self) -> RatePair {
        match &self.shape {
            FrontierShape::PiecewiseLinear(pts) => pts[pts.len() - 1],
            FrontierShape::Parametric { p1, p2, rho_hi, .. } => param_point(*rho_hi, *p1, *p2),
        }
    }

    /// `[r2_min, r2_max]`.
    pub fn range(&self) -> (f64, f64) {
        (self.end().r2, self.start().r2)
    }

    pub fn eval(&self, r1: f64) -> f64 {
        let x = r1.clamp(self.domain.0, self.domain.1);
        match &self.shape {
            FrontierShape::PiecewiseLinear(pts) => {
                for w in pts.windows(2) {
                    let (u, v) = (w[0], w[1]);
                    if x <= v.r1 {
                        if v.r1 - u.r1 <= 0.0 {
                            return u.r2;
                        }
                        let t = ((x - u.r1) / (v.r1 - u.r1)).clamp(0.0, 1.0);
                        return u.r2 + t * (v.r2 - u.r2);
                    }
                }
                pts[pts.len() - 1].r2
            }
            FrontierShape::Parametric { p1, p2, rho_lo, rho_hi } => {
                let rho = invert_increasing(|rho| tdm_rate(rho, *p1), x, *rho_lo, *rho_hi, RHO_TOL);
                tdm_rate(1.0 - rho, *p2)
            }
        }
    }

    pub fn inverse(&self, r2: f64) -> f64 {
        let (lo, hi) = self.range();
        let y = r2.clamp(lo, hi);
        match &self.shape {
            FrontierShape::PiecewiseLinear(pts) => {
                for w in pts.windows(2).rev() {
                    let (u, v) = (w[0], w[1]);
                    if y <= u.r2 {
                        if u.r2 - v.r2 <= 0.0 {
                            return v.r1;
                        }
                        let t = ((u.r2 - y) / (u.r2 - v.r2)).clamp(0.0, 1.0);
                        return u.r1 + t * (v.r1 - u.r1);
                    }
                }
                pts[0].r1
            }
            FrontierShape::Parametric { p1, p2, rho_lo, rho_hi } => {
                let rho = invert_increasing(|rho| -tdm_rate(1.0 - rho, *p2), -y, *rho_lo, *rho_hi, RHO_TOL);
                tdm_rate(rho, *p1)
            }
        }
    }

    /// True when the frontier has no horizontal or vertical piece.
    pub fn is_strictly_monotone(&self) -> bool {
        match &self.shape {
            FrontierShape::PiecewiseLinear(pts) => pts.windows(2).all(|w| {
                let dx = w[1].r1 - w[0].r1;
                let dy = w[0].r2 - w[1].r2;
                dy > AXIS_SLOPE_TOL * dx && dx > AXIS_SLOPE_TOL * dy
            }),
            FrontierShape::Parametric { .. } => true,
        }
    }

    /// `n ≥ 2` points equally spaced in `R1` across the domain.
    pub fn sample(&self, n: usize) -> Vec<RatePair> {
        let n = n.max(2);
        let (lo, hi) = self.domain;
        (0..n)
            .map(|k| {
                let x = if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
                RatePair::new(x, self.eval(x))
            })
            .collect()
    }

    /// Polyline suitable for plotting.
    pub fn polyline(&self, samples: usize) -> Vec<RatePair> {
        match &self.shape {
            FrontierShape::PiecewiseLinear(pts) => pts.clone(),
            FrontierShape::Parametric { p1, p2, rho_lo, rho_hi } => {
                let n = samples.max(2);
                (0..=n).map(|k| param_point(rho_lo + (rho_hi - rho_lo) * k as f64 / n as f64, *p1, *p2)).collect()
            }
        }
    }
}

fn param_point(rho: f64, p1: f64, p2: f64) -> RatePair {
    RatePair::new(tdm_rate(rho, p1), tdm_rate(1.0 - rho, p2))
}

/// Efficient frontier of `region ∩ {R ≥ disagreement}`.
///
/// Fails with [`Error::Precondition`] if the disagreement point is outside the
/// region, and with [`Error::EmptyFrontier`] if no feasible point strictly
/// dominates it.
pub fn ir_frontier(region: &RateRegion, disagreement: RatePair) -> Result<Frontier> {
    if !region.contains(disagreement) {
        return Err(Error::Precondition(format!("disagreement point {disagreement:?} lies outside the region")));
    }
    let (x0, y0) = (disagreement.r1, disagreement.r2);
    match region.kind() {
        RegionKind::Tdm => {
            let (p1, p2) = (region.params().p1(), region.params().p2());
            let rho_lo = invert_increasing(|rho| tdm_rate(rho, p1), x0, 0.0, 1.0, RHO_TOL);
            let rho_hi = invert_increasing(|rho| -tdm_rate(1.0 - rho, p2), -y0, 0.0, 1.0, RHO_TOL);
            let start = param_point(rho_lo, p1, p2);
            let end = param_point(rho_hi, p1, p2);
            if rho_hi <= rho_lo || start.r2 <= y0 + GEOM_TOL || end.r1 <= x0 + GEOM_TOL {
                return Err(Error::EmptyFrontier);
            }
            Ok(Frontier {
                shape: FrontierShape::Parametric { p1, p2, rho_lo, rho_hi },
                disagreement,
                domain: (start.r1, end.r1),
            })
        }
        _ => clip_chain(&region.upper_chain(), disagreement).map(|pts| Frontier {
            domain: (pts[0].r1, pts[pts.len() - 1].r1),
            shape: FrontierShape::PiecewiseLinear(pts),
            disagreement,
        }),
    }
}

/// Restricts a monotone chain to the quadrant above `d`, dropping pieces shorter
/// than [`GEOM_TOL`].
fn clip_chain(chain: &[RatePair], d: RatePair) -> Result<Vec<RatePair>> {
    let n = chain.len();
    // entry: highest chain point with R1 = d.r1
    let i = chain.iter().position(|p| p.r1 >= d.r1).ok_or(Error::EmptyFrontier)?;
    let entry = if i == 0 {
        chain[0]
    } else {
        let (u, v) = (chain[i - 1], chain[i]);
        RatePair::new(d.r1, u.r2 + (d.r1 - u.r1) / (v.r1 - u.r1) * (v.r2 - u.r2))
    };
    // exit: right-most chain point with R2 = d.r2
    let j = chain.iter().rposition(|p| p.r2 >= d.r2).ok_or(Error::EmptyFrontier)?;
    let exit = if j + 1 == n {
        chain[n - 1]
    } else {
        let (u, v) = (chain[j], chain[j + 1]);
        RatePair::new(u.r1 + (d.r2 - u.r2) / (v.r2 - u.r2) * (v.r1 - u.r1), d.r2)
    };
    if entry.r2 <= d.r2 + GEOM_TOL || exit.r1 <= d.r1 + GEOM_TOL {
        return Err(Error::EmptyFrontier);
    }

    let mut pts = vec![entry];
    for p in chain.iter().skip(i).take(j + 1 - i.min(j + 1)) {
        if p.r1 > d.r1 && p.r2 > d.r2 && p.dist_inf(pts[pts.len() - 1]) > GEOM_TOL {
            pts.push(*p);
        }
    }
    let last = pts.len() - 1;
    if exit.dist_inf(pts[last]) > GEOM_TOL {
        pts.push(exit);
    } else if last > 0 {
        pts[last] = exit;
    } else {
        return Err(Error::EmptyFrontier);
    }
    Ok(pts)
}
