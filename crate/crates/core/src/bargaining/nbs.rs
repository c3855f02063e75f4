use super::BargainingProblem;
use crate::error::{Error, Result};
use crate::numeric::golden_max;
use crate::rate_region::{tdm_rate, FrontierShape, RatePair};

const GOLDEN_TOL: f64 = 1e-12;
const TIE_SLACK: f64 = 1e-12;

/// Nash bargaining solution: the feasible point maximising the product of gains
/// over the disagreement point.
pub fn nbs(problem: &BargainingProblem) -> Result<RatePair> {
    let frontier = problem.frontier().map_err(|e| match e {
        Error::EmptyFrontier => Error::NotEssential,
        other => other,
    })?;
    let d = problem.disagreement();
    match frontier.shape() {
        FrontierShape::PiecewiseLinear(pts) => Ok(best_on_chain(pts, d)),
        FrontierShape::Parametric { p1, p2, rho_lo, rho_hi } => {
            let point = |rho: f64| RatePair::new(tdm_rate(rho, *p1), tdm_rate(1.0 - rho, *p2));
            let rho = golden_max(|rho| point(rho).nash_product(d), *rho_lo, *rho_hi, GOLDEN_TOL);
            Ok(point(rho))
        }
    }
}

/// Maximises the Nash product segment by segment; along a segment it is a
/// quadratic in the interpolation parameter.
fn best_on_chain(pts: &[RatePair], d: RatePair) -> RatePair {
    let mut best = pts[0];
    let mut best_val = best.nash_product(d);
    let mut best_at_kink = true;
    for w in pts.windows(2) {
        let (u, v) = (w[0], w[1]);
        let (gx, gy) = (u.r1 - d.r1, u.r2 - d.r2);
        let (dx, dy) = (v.r1 - u.r1, v.r2 - u.r2);
        let curv = dx * dy;
        let mut candidates = vec![0.0, 1.0];
        if curv < 0.0 {
            let t = -(gx * dy + gy * dx) / (2.0 * curv);
            if t > 0.0 && t < 1.0 {
                candidates.push(t);
            }
        }
        for t in candidates {
            let p = RatePair::new(u.r1 + t * dx, u.r2 + t * dy);
            let val = p.nash_product(d);
            let at_kink = t == 0.0 || t == 1.0;
            let slack = TIE_SLACK * best_val.abs().max(1.0);
            if val > best_val + slack || (val >= best_val - slack && at_kink && !best_at_kink) {
                best = p;
                best_val = val;
                best_at_kink = at_kink;
            }
        }
    }
    best
}
