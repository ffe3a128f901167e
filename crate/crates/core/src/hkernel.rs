//! The h-function family behind Bernstein, Bennett, Prokhorov and Kruglov
//! type exponential bounds, their ratios to `x²/2`, and their inverses.
//!
//! ```text
//! h(x)  = x(log x - 1) + 1           h₀(x) = x² / (2(1 + x))
//! h₁(x) = 1 + x - √(1 + 2x)          h₂(x) = h(1 + x)
//! h₄(x) = (x/2)·asinh(x/2)           h₅(x) = x·asinh(x/2) - 2(cosh(asinh(x/2)) - 1)
//! ```
//!
//! There is no `h₃`; the names follow the usual indexing in the literature.
//!
//! Note on Prokhorov's bound: it is sometimes displayed with `=` between the
//! arcsinh form and `2exp(-(nσ²/b²)h₄(·))`. Only the inequality is meant,
//! and [`crate::bounds::prokhorov_tail`] treats it as an upper bound.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::lambertw::one_plus_w0_offset;
use crate::numeric::bisect;

/// Which h-function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HKind {
    H,
    H0,
    H1,
    H2,
    H4,
    H5,
}

impl HKind {
    pub const ALL: [HKind; 6] = [HKind::H, HKind::H0, HKind::H1, HKind::H2, HKind::H4, HKind::H5];
    /// The kinds that vanish at zero and can drive a Young modulus.
    pub const ZERO_AT_ORIGIN: [HKind; 5] = [HKind::H0, HKind::H1, HKind::H2, HKind::H4, HKind::H5];

    pub fn name(self) -> &'static str {
        match self {
            HKind::H => "h",
            HKind::H0 => "h0",
            HKind::H1 => "h1",
            HKind::H2 => "h2",
            HKind::H4 => "h4",
            HKind::H5 => "h5",
        }
    }
}

impl fmt::Display for HKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h" => Ok(HKind::H),
            "h0" => Ok(HKind::H0),
            "h1" => Ok(HKind::H1),
            "h2" => Ok(HKind::H2),
            "h4" => Ok(HKind::H4),
            "h5" => Ok(HKind::H5),
            other => Err(Error::Parse(format!("unknown h-function `{other}`"))),
        }
    }
}

/// `ψ₂ = 2h₂/x²`, `ψ₄ = 4h₄/x²`, `ψ₅ = 4h₅/x²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PsiRatioKind {
    Psi2Ratio,
    Psi4Ratio,
    Psi5Ratio,
}

impl FromStr for PsiRatioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "psi2" => Ok(PsiRatioKind::Psi2Ratio),
            "psi4" => Ok(PsiRatioKind::Psi4Ratio),
            "psi5" => Ok(PsiRatioKind::Psi5Ratio),
            other => Err(Error::Parse(format!("unknown psi ratio `{other}`"))),
        }
    }
}

fn check_nonneg(x: f64, what: &str) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        domain(format!("{what} requires a nonnegative argument, got {x}"))
    }
}

fn psi2(x: f64) -> f64 {
    if x < 0.1 {
        // sum_j 2(-x)^j / ((j+1)(j+2))
        let mut sum = 0.0;
        let mut pow = 1.0;
        for j in 0..30 {
            let term = 2.0 * pow / ((j + 1) as f64 * (j + 2) as f64);
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
            pow *= -x;
        }
        sum
    } else if x.is_infinite() {
        0.0
    } else {
        2.0 * ((1.0 + x) * x.ln_1p() - x) / (x * x)
    }
}

fn psi4(x: f64) -> f64 {
    let u = 0.5 * x;
    if u == 0.0 {
        1.0
    } else {
        u.asinh() / u
    }
}

fn psi5(x: f64) -> f64 {
    let u = 0.5 * x;
    if u == 0.0 {
        return 1.0;
    }
    2.0 * u.asinh() / u - 2.0 / (1f64.hypot(u) + 1.0)
}

/// `2h(x)/x²` for the kinds vanishing at zero, extended continuously at 0.
pub(crate) fn half_square_ratio(kind: HKind, x: f64) -> f64 {
    match kind {
        HKind::H0 => 1.0 / (1.0 + x),
        HKind::H1 => 2.0 / (1.0 + x + (1.0 + 2.0 * x).sqrt()),
        HKind::H2 => psi2(x),
        HKind::H4 => 0.5 * psi4(x),
        HKind::H5 => 0.5 * psi5(x),
        HKind::H => 2.0 * h_raw(x) / (x * x),
    }
}

fn h_raw(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x * (x.ln() - 1.0) + 1.0
    }
}

/// Evaluates `h_kind(x)` for `x ≥ 0`.
pub fn eval_h(kind: HKind, x: f64) -> Result<f64> {
    check_nonneg(x, kind.name())?;
    Ok(match kind {
        HKind::H => h_raw(x),
        HKind::H0 => x * x / (2.0 * (1.0 + x)),
        // 1 + x - √(1+2x) = x² / (1 + x + √(1+2x))
        HKind::H1 => x * x / (1.0 + x + (1.0 + 2.0 * x).sqrt()),
        HKind::H2 => {
            if x < 0.1 {
                0.5 * x * x * psi2(x)
            } else {
                (1.0 + x) * x.ln_1p() - x
            }
        }
        HKind::H4 => 0.5 * x * (0.5 * x).asinh(),
        HKind::H5 => {
            if x < 1.0 {
                0.25 * x * x * psi5(x)
            } else {
                let u = 0.5 * x;
                x * u.asinh() - 2.0 * (1f64.hypot(u) - 1.0)
            }
        }
    })
}

/// `h_kind(x) / (x²/2)`, the normalisation that sends `h₂` to 1 at 0.
pub fn h_over_half_square(kind: HKind, x: f64) -> Result<f64> {
    check_nonneg(x, kind.name())?;
    Ok(half_square_ratio(kind, x))
}

/// Evaluates a ψ-ratio; all three equal 1 at the origin.
pub fn eval_psi_ratio(kind: PsiRatioKind, x: f64) -> Result<f64> {
    check_nonneg(x, "psi ratio")?;
    Ok(match kind {
        PsiRatioKind::Psi2Ratio => psi2(x),
        PsiRatioKind::Psi4Ratio => psi4(x),
        PsiRatioKind::Psi5Ratio => psi5(x),
    })
}

/// Inverse of `h_kind` on `[0, ∞)`.
///
/// `h` is inverted on its increasing branch, so `eval_h_inverse(H, y) ≥ 1`.
/// `h` and `h₂` go through Lambert W (`h⁻¹(y) = exp(1 + W₀((y-1)/e))`),
/// `h₀` and `h₁` have explicit inverses, and `h₄`, `h₅` are bisected.
pub fn eval_h_inverse(kind: HKind, y: f64) -> Result<f64> {
    check_nonneg(y, "h inverse")?;
    if y.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(match kind {
        HKind::H0 => y + (y * y + 2.0 * y).sqrt(),
        HKind::H1 => y + (2.0 * y).sqrt(),
        HKind::H => one_plus_w0_offset(y / E).exp(),
        HKind::H2 => one_plus_w0_offset(y / E).exp_m1(),
        HKind::H4 | HKind::H5 => numeric_inverse(kind, y),
    })
}

fn numeric_inverse(kind: HKind, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let h = |x: f64| eval_h(kind, x).expect("nonnegative argument");
    let mut hi = 1.0;
    while h(hi) < y {
        hi *= 2.0;
    }
    bisect(|x| h(x) - y, 0.0, hi, 0.0)
}

/// Which closed-form upper bound on `h₂⁻¹` to use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum H2InverseBound {
    /// `2(y - 1)/log(y - 1) - 1`, valid for `y > 1 + e`.
    TailForm,
    /// `c·√y`, valid for `c > √2` and `0 ≤ y ≤ 9c⁻²(c²/2 - 1)²`.
    GaussForm(f64),
}

impl H2InverseBound {
    /// Largest `y` for which the Gaussian-form bound is guaranteed.
    pub fn gauss_form_limit(c: f64) -> f64 {
        let a = 0.5 * c * c - 1.0;
        9.0 * a * a / (c * c)
    }
}

/// Upper bound on `h₂⁻¹(y)` in one of its two closed forms.
pub fn h2_inverse_upper_bound(y: f64, variant: H2InverseBound) -> Result<f64> {
    match variant {
        H2InverseBound::TailForm => {
            if !(y > 1.0 + E) {
                return domain(format!("tail-form h2 inverse bound requires y > 1+e, got {y}"));
            }
            Ok(2.0 * (y - 1.0) / (y - 1.0).ln() - 1.0)
        }
        H2InverseBound::GaussForm(c) => {
            if !(c > std::f64::consts::SQRT_2) {
                return domain(format!("gauss-form h2 inverse bound requires c > sqrt(2), got {c}"));
            }
            let limit = H2InverseBound::gauss_form_limit(c);
            // admit round-off in the limit itself (c = 2 gives 9/4 only in exact arithmetic)
            if !(y >= 0.0 && y <= limit * (1.0 + 1e-15)) {
                return domain(format!(
                    "gauss-form h2 inverse bound with c = {c} requires 0 <= y <= {limit}, got {y}"
                ));
            }
            Ok(c * y.sqrt())
        }
    }
}

/// Margins of the pointwise h-function inequalities at one `x`.
///
/// Every field is "larger side minus smaller side" and is nonnegative up to
/// round-off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HInequalityMargins {
    pub x: f64,
    /// `9h₁(x/3) - 9h₀(x/3)`
    pub h1_third_over_h0_third: f64,
    /// `h₂(x) - 9h₁(x/3)`
    pub h2_over_h1_third: f64,
    /// `h₁ - h₀`
    pub h1_over_h0: f64,
    /// `2h₀ - h₁`
    pub twice_h0_over_h1: f64,
    /// `h₀(2x) - 2h₀(x)`
    pub h0_double_over_twice_h0: f64,
    /// `h₂ - h₅`
    pub h2_over_h5: f64,
    /// `h₅ - h₄`
    pub h5_over_h4: f64,
    /// `h₂(x) - (x/2)log(1+x)`
    pub h2_over_half_log: f64,
    /// `(x/2)log(1+x) - (x/2)log(1+x/2)`
    pub half_log_over_half_log_half: f64,
    /// `h₄(x) - (x/2)log(1+x/2)`
    pub h4_over_half_log_half: f64,
    /// `h₅(x) - (x/2)log(1+x/2)`
    pub h5_over_half_log_half: f64,
}

impl HInequalityMargins {
    pub fn named(&self) -> [(&'static str, f64); 11] {
        [
            ("9h0(x/3) <= 9h1(x/3)", self.h1_third_over_h0_third),
            ("9h1(x/3) <= h2(x)", self.h2_over_h1_third),
            ("h0 <= h1", self.h1_over_h0),
            ("h1 <= 2h0", self.twice_h0_over_h1),
            ("2h0(x) <= h0(2x)", self.h0_double_over_twice_h0),
            ("h2 >= h5", self.h2_over_h5),
            ("h5 >= h4", self.h5_over_h4),
            ("h2 >= (x/2)log(1+x)", self.h2_over_half_log),
            ("(x/2)log(1+x) >= (x/2)log(1+x/2)", self.half_log_over_half_log_half),
            ("h4 >= (x/2)log(1+x/2)", self.h4_over_half_log_half),
            ("h5 >= (x/2)log(1+x/2)", self.h5_over_half_log_half),
        ]
    }

    pub fn min_margin(&self) -> f64 {
        self.named().iter().map(|(_, m)| *m).fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates every pointwise inequality relating the h-functions at `x`.
pub fn check_h_inequalities(x: f64) -> Result<HInequalityMargins> {
    check_nonneg(x, "h inequality check")?;
    let h = |k, v| eval_h(k, v).expect("nonnegative argument");
    let h0 = h(HKind::H0, x);
    let h1 = h(HKind::H1, x);
    let h2 = h(HKind::H2, x);
    let h4 = h(HKind::H4, x);
    let h5 = h(HKind::H5, x);
    let half_log = 0.5 * x * x.ln_1p();
    let half_log_half = 0.5 * x * (0.5 * x).ln_1p();
    Ok(HInequalityMargins {
        x,
        h1_third_over_h0_third: 9.0 * (h(HKind::H1, x / 3.0) - h(HKind::H0, x / 3.0)),
        h2_over_h1_third: h2 - 9.0 * h(HKind::H1, x / 3.0),
        h1_over_h0: h1 - h0,
        twice_h0_over_h1: 2.0 * h0 - h1,
        h0_double_over_twice_h0: h(HKind::H0, 2.0 * x) - 2.0 * h0,
        h2_over_h5: h2 - h5,
        h5_over_h4: h5 - h4,
        h2_over_half_log: h2 - half_log,
        half_log_over_half_log_half: half_log - half_log_half,
        h4_over_half_log_half: h4 - half_log_half,
        h5_over_half_log_half: h5 - half_log_half,
    })
}

/// `x·ψ₂(x) - 2(log x - 1)`, which is nonnegative for every `x > 0`.
pub fn psi_log_lower_bound_margin(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("psi log lower bound requires x > 0, got {x}"));
    }
    Ok(x * psi2(x) - 2.0 * (x.ln() - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn spot_values() {
        assert_eq!(eval_h(HKind::H2, 0.0).unwrap(), 0.0);
        assert!(close(eval_h(HKind::H1, 4.0).unwrap(), 2.0, 1e-15));
        assert!(close(eval_h(HKind::H0, 2.0).unwrap(), 2.0 / 3.0, 1e-15));
        assert_eq!(eval_h(HKind::H4, 0.0).unwrap(), 0.0);
        assert_eq!(eval_h(HKind::H, 0.0).unwrap(), 1.0);
        assert_eq!(eval_h(HKind::H, 1.0).unwrap(), 0.0);
        assert!(eval_h(HKind::H0, -1.0).is_err());
    }

    #[test]
    fn direct_formulas_agree_away_from_zero() {
        for &x in &[0.05f64, 0.3, 1.0, 2.0, 7.5, 50.0] {
            let h2 = (1.0 + x) * (1.0 + x).ln() - x;
            assert!(close(eval_h(HKind::H2, x).unwrap(), h2, 1e-13));
            let h1 = 1.0 + x - (1.0 + 2.0 * x).sqrt();
            assert!(close(eval_h(HKind::H1, x).unwrap(), h1, 1e-13));
            let a = (x / 2.0).asinh();
            let h5 = x * a - 2.0 * (a.cosh() - 1.0);
            assert!(close(eval_h(HKind::H5, x).unwrap(), h5, 1e-12));
        }
    }

    #[test]
    fn small_x_is_quadratic() {
        let x = 1e-9;
        assert!(close(eval_h(HKind::H2, x).unwrap(), x * x / 2.0, 1e-8));
        assert!((eval_h(HKind::H2, x).unwrap() / (x * x / 2.0) - 1.0).abs() < 1e-8);
        assert!((eval_h(HKind::H4, x).unwrap() / (x * x / 4.0) - 1.0).abs() < 1e-8);
        assert!((eval_h(HKind::H5, x).unwrap() / (x * x / 4.0) - 1.0).abs() < 1e-8);
        assert!((eval_h(HKind::H1, x).unwrap() / (x * x / 2.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn psi_ratios() {
        assert_eq!(eval_psi_ratio(PsiRatioKind::Psi2Ratio, 0.0).unwrap(), 1.0);
        assert_eq!(eval_psi_ratio(PsiRatioKind::Psi4Ratio, 0.0).unwrap(), 1.0);
        assert_eq!(eval_psi_ratio(PsiRatioKind::Psi5Ratio, 0.0).unwrap(), 1.0);
        let want = 2.0 * (2.0 * 2f64.ln() - 1.0);
        assert!(close(eval_psi_ratio(PsiRatioKind::Psi2Ratio, 1.0).unwrap(), want, 1e-15));
        assert!((want - 0.772_588_722_239_781).abs() < 1e-14);
        // series/direct switch is seamless
        let a = eval_psi_ratio(PsiRatioKind::Psi2Ratio, 0.1 - 1e-12).unwrap();
        let b = eval_psi_ratio(PsiRatioKind::Psi2Ratio, 0.1 + 1e-12).unwrap();
        assert!((a - b).abs() < 1e-11);
        let mut prev = 1.0;
        for i in 1..2000 {
            let v = eval_psi_ratio(PsiRatioKind::Psi2Ratio, i as f64 * 0.05).unwrap();
            assert!(v <= prev + 1e-15 && v <= 1.0);
            prev = v;
        }
    }

    #[test]
    fn explicit_inverses() {
        assert!(close(eval_h_inverse(HKind::H1, 2.0).unwrap(), 4.0, 1e-15));
        assert_eq!(eval_h_inverse(HKind::H2, 0.0).unwrap(), 0.0);
        assert_eq!(eval_h_inverse(HKind::H, 0.0).unwrap(), 1.0);
        assert!(close(eval_h_inverse(HKind::H, 1.0).unwrap(), E, 1e-15));
        assert!(eval_h_inverse(HKind::H4, -1.0).is_err());
    }

    /// Bisection oracle on the forward function, independent of the solver paths.
    fn inverse_oracle(kind: HKind, y: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        while eval_h(kind, hi).unwrap() < y {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if eval_h(kind, mid).unwrap() < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn inverses_match_bisection_oracle() {
        for kind in HKind::ZERO_AT_ORIGIN {
            for &y in &[0.1, 1.0, 10.0] {
                let got = eval_h_inverse(kind, y).unwrap();
                let want = inverse_oracle(kind, y);
                assert!(close(got, want, 1e-12), "{kind} y={y}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn h2_inverse_is_accurate_for_tiny_y() {
        for &y in &[1e-30, 1e-18, 1e-10] {
            let x = eval_h_inverse(HKind::H2, y).unwrap();
            assert!((eval_h(HKind::H2, x).unwrap() - y).abs() <= 1e-10 * y);
            assert!((x / (2.0 * y).sqrt() - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn upper_bounds_on_h2_inverse() {
        assert!(close(h2_inverse_upper_bound(2.25, H2InverseBound::GaussForm(2.0)).unwrap(), 3.0, 1e-15));
        let y = 1.0 + E;
        let b = h2_inverse_upper_bound(y, H2InverseBound::GaussForm(2.2)).unwrap();
        assert!(close(b, 2.2 * y.sqrt(), 1e-15));
        assert!(eval_h_inverse(HKind::H2, y).unwrap() <= b);
        let t = h2_inverse_upper_bound(10.0, H2InverseBound::TailForm).unwrap();
        assert!((t - (18.0 / 9f64.ln() - 1.0)).abs() < 1e-14);
        assert!((t - 7.192_153_039_641_536).abs() < 1e-12);
        assert!(eval_h_inverse(HKind::H2, 10.0).unwrap() <= t);
        assert!(h2_inverse_upper_bound(3.0, H2InverseBound::TailForm).is_err());
        assert!(h2_inverse_upper_bound(1.0, H2InverseBound::GaussForm(1.4)).is_err());
        assert!(h2_inverse_upper_bound(2.3, H2InverseBound::GaussForm(2.0)).is_err());
    }

    #[test]
    fn figure_orderings() {
        let at = |x| {
            let v: Vec<f64> = [HKind::H2, HKind::H5, HKind::H4, HKind::H1, HKind::H0]
                .iter()
                .map(|&k| eval_h(k, x).unwrap())
                .collect();
            v
        };
        let v = at(2.0);
        assert!(v[0] > v[1] && v[1] > v[2] && v[2] > v[3] && v[3] > v[4]);
        let v = at(0.5);
        // h2 > h1 > h0 > h5 > h4
        assert!(v[0] > v[3] && v[3] > v[4] && v[4] > v[1] && v[1] > v[2]);
        let m = check_h_inequalities(0.0).unwrap();
        assert!(m.named().iter().all(|(_, v)| *v == 0.0));
    }

    #[test]
    fn eq13_margin_values() {
        let want = eval_psi_ratio(PsiRatioKind::Psi2Ratio, 1.0).unwrap() + 2.0;
        assert!(close(psi_log_lower_bound_margin(1.0).unwrap(), want, 1e-15));
        assert!((want - 2.772_588_722_239_781).abs() < 1e-14);
        let m = psi_log_lower_bound_margin(E).unwrap();
        assert!(close(m, E * eval_psi_ratio(PsiRatioKind::Psi2Ratio, E).unwrap(), 1e-15));
        assert!(m > 0.0);
        assert!(psi_log_lower_bound_margin(1e-12).unwrap() > 50.0);
        assert!(psi_log_lower_bound_margin(0.0).is_err());
    }
}
