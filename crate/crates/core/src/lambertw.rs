//! Real Lambert W function.
//!
//! `W(z)` solves `w·e^w = z` for `z ≥ -1/e`. The principal branch `W₀` is
//! increasing on `[-1/e, ∞)` with `W₀(-1/e) = -1`, `W₀(0) = 0`; the lower
//! branch `W₋₁` is decreasing on `[-1/e, 0)` from `-1` to `-∞`.
//!
//! Near the branch point the defining equation is ill conditioned in `z`,
//! so the solver works there with the offset `δ = z + 1/e` and the unknown
//! `u = 1 + W`, which satisfy `(u - 1)·e^u + 1 = e·δ`. This is also what the
//! h-function inverses use, since `h⁻¹(y) = exp(1 + W₀((y - 1)/e))` and the
//! offset is simply `y/e`.

use std::f64::consts::E;

use crate::error::{domain, Result};
use crate::numeric::bisect;

const INV_E: f64 = 1.0 / E;

/// Inputs this far below `-1/e` are clamped onto the branch point.
pub const BRANCH_POINT_SLACK: f64 = 1e-15;

/// Offsets below this use the branch-point formulation.
const NEAR_BRANCH: f64 = 0.25;

/// Branch selector for [`lambert_w`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WBranch {
    /// `W₀`, defined on `[-1/e, ∞)`.
    Principal,
    /// `W₋₁`, defined on `[-1/e, 0)`.
    MinusOne,
}

/// Evaluates the real Lambert W function on the requested branch.
///
/// The returned `w` satisfies `|w·e^w - z| ≤ 1e-12·max(1, |z|)`.
pub fn lambert_w(z: f64, branch: WBranch) -> Result<f64> {
    if z.is_nan() {
        return domain("Lambert W of NaN");
    }
    let delta = z + INV_E;
    if delta < -BRANCH_POINT_SLACK {
        return domain(format!("Lambert W requires z >= -1/e, got {z}"));
    }
    let delta = delta.max(0.0);
    match branch {
        WBranch::Principal => {
            if z == 0.0 {
                return Ok(0.0);
            }
            if z == f64::INFINITY {
                return Ok(f64::INFINITY);
            }
            if delta < NEAR_BRANCH {
                return Ok(branch_offset_solve(delta, WBranch::Principal) - 1.0);
            }
            Ok(principal_regular(z))
        }
        WBranch::MinusOne => {
            if z >= 0.0 {
                return domain(format!("Lambert W_-1 requires -1/e <= z < 0, got {z}"));
            }
            if delta < NEAR_BRANCH {
                return Ok(branch_offset_solve(delta, WBranch::MinusOne) - 1.0);
            }
            Ok(minus_one_regular(z))
        }
    }
}

/// Lower bound `W₀(z) ≥ (1 + log z)/2` for `z > 0`.
pub fn w_lower_bound(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return domain(format!("W lower bound requires z > 0, got {z}"));
    }
    Ok(0.5 * (1.0 + z.ln()))
}

/// `1 + W₀(-1/e + delta)` for `delta ≥ 0`, accurate to full relative
/// precision even when `delta` underflows relative to `1/e`.
pub(crate) fn one_plus_w0_offset(delta: f64) -> f64 {
    debug_assert!(delta >= 0.0);
    if delta < NEAR_BRANCH {
        branch_offset_solve(delta, WBranch::Principal)
    } else if delta.is_infinite() {
        f64::INFINITY
    } else {
        1.0 + principal_regular(delta - INV_E)
    }
}

/// `g(u) = (u - 1)e^u + 1`, computed without cancellation near `u = 0`.
fn offset_residual(u: f64) -> f64 {
    if u.abs() < 0.5 {
        // sum_{k>=2} (k-1) u^k / k!
        let mut term = u; // u^k / k! at k = 1
        let mut sum = 0.0;
        for k in 2..40 {
            term *= u / k as f64;
            let add = (k - 1) as f64 * term;
            sum += add;
            if add.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (u - 1.0) * u.exp() + 1.0
    }
}

/// Solves `(u - 1)e^u + 1 = e·delta` for `u = 1 + W` on the given branch.
fn branch_offset_solve(delta: f64, branch: WBranch) -> f64 {
    if delta == 0.0 {
        return 0.0;
    }
    let target = E * delta;
    let sign = match branch {
        WBranch::Principal => 1.0,
        WBranch::MinusOne => -1.0,
    };
    let p = sign * (2.0 * target).sqrt();
    // Puiseux series of W about the branch point.
    let mut u = p - p * p / 3.0 + 11.0 / 72.0 * p * p * p - 43.0 / 540.0 * p.powi(4);
    for _ in 0..60 {
        let f = offset_residual(u) - target;
        let eu = u.exp();
        let d1 = u * eu;
        let d2 = (u + 1.0) * eu;
        let denom = 2.0 * d1 * d1 - f * d2;
        if d1 == 0.0 || denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = 2.0 * f * d1 / denom;
        let next = u - step;
        if (next - u).abs() <= 4.0 * f64::EPSILON * next.abs() {
            return next;
        }
        if !next.is_finite() || next * sign < 0.0 {
            break;
        }
        u = next;
    }
    // Safeguard: g is monotone on each branch.
    match branch {
        WBranch::Principal => bisect(|v| offset_residual(v) - target, 0.0, 2.0, 0.0),
        WBranch::MinusOne => bisect(|v| offset_residual(v) - target, -60.0, 0.0, 0.0),
    }
}

fn principal_regular(z: f64) -> f64 {
    if z > 3.0 {
        // w + ln w = ln z avoids overflow of e^w.
        let lz = z.ln();
        let l2 = lz.ln();
        let mut w = lz - l2 + l2 / lz;
        for _ in 0..100 {
            let f = w + w.ln() - lz;
            let d1 = 1.0 + 1.0 / w;
            let d2 = -1.0 / (w * w);
            let step = 2.0 * f * d1 / (2.0 * d1 * d1 - f * d2);
            let next = w - step;
            if (next - w).abs() <= 4.0 * f64::EPSILON * next.abs() {
                return next;
            }
            w = next;
        }
        return bisect(|v| v + v.ln() - lz, 1.0, lz.max(2.0), 0.0);
    }
    let mut w = if z.abs() < 0.25 {
        z - z * z + 1.5 * z * z * z
    } else {
        z.ln_1p()
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - z;
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let next = w - f / denom;
        if (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE) {
            return next;
        }
        w = next;
    }
    bisect(|v| v * v.exp() - z, -1.0, 2.0, 0.0)
}

fn minus_one_regular(z: f64) -> f64 {
    // Solve w + ln(-w) = ln(-z) for w < -1.
    let lz = (-z).ln();
    let l2 = (-lz).ln();
    let mut w = lz - l2 + l2 / lz;
    if w > -1.0 {
        w = -2.0;
    }
    for _ in 0..100 {
        let f = w + (-w).ln() - lz;
        let d1 = 1.0 + 1.0 / w;
        let next = w - f / d1;
        if (next - w).abs() <= 4.0 * f64::EPSILON * next.abs() {
            return next;
        }
        w = if next < -1.0 { next } else { 0.5 * (w - 1.0) };
    }
    bisect(|v| v + (-v).ln() - lz, lz.min(-2.0) * 2.0 - 10.0, -1.0, 0.0)
}
