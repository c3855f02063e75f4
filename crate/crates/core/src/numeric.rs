//! Scalar root finding and maximisation on closed intervals.

use crate::error::{Error, Result};

/// Geometric tolerance for feasibility, deduplication and degeneracy tests.
pub const GEOM_TOL: f64 = 1e-9;

/// Bracket width at which bisection stops.
pub const BISECT_TOL: f64 = 1e-12;

const MAX_ITER: usize = 300;

/// Bisection for a root of `g` on `[lo, hi]`.
///
/// `g(lo)` and `g(hi)` must have opposite signs (or one of them be zero).
/// Iterates until the bracket is narrower than `tol` or can no longer be split.
pub fn bisect<F: FnMut(f64) -> f64>(mut g: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if !(g_lo.is_finite() && g_hi.is_finite()) || g_lo.signum() == g_hi.signum() {
        return Err(Error::Numerical(format!(
            "root not bracketed on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}"
        )));
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solves `h(x) = target` for a continuous nondecreasing `h` on `[lo, hi]`.
///
/// Targets outside `[h(lo), h(hi)]` clamp to the corresponding endpoint.
pub fn invert_increasing<F: FnMut(f64) -> f64>(mut h: F, target: f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    if target <= h(lo) {
        return lo;
    }
    if target >= h(hi) {
        return hi;
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for the maximiser of a unimodal `h` on `[lo, hi]`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut h: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut h1 = h(x1);
    let mut h2 = h(x2);
    for _ in 0..MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        if h1 < h2 {
            lo = x1;
            x1 = x2;
            h1 = h2;
            x2 = lo + inv_phi * (hi - lo);
            h2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            h2 = h1;
            x1 = hi - inv_phi * (hi - lo);
            h1 = h(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    // endpoints can win when the maximiser sits on the boundary
    [lo, mid, hi]
        .into_iter()
        .map(|x| (x, h(x)))
        .fold((mid, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
        .0
}
