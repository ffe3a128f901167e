//! Young-Orlicz moduli `Ψ = e^φ - 1`, their inverses, and Orlicz norms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{Distribution, Expectation};
use crate::error::{domain, Error, Result};
use crate::hkernel::{eval_h_inverse, h2_inverse_upper_bound, half_square_ratio, H2InverseBound, HKind};
use crate::numeric::ln_expm1;

/// Largest trial scale before a norm is declared infinite.
pub const NORM_SCALE_CAP: f64 = 1_152_921_504_606_846_976.0; // 2^60
/// Target accuracy of `E Ψ(|X|/‖X‖)` for exact engines.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// A Young modulus `Ψ(x) = exp(φ(x)) - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum YoungModulus {
    /// `φ(x) = x^p`.
    Power { p: f64 },
    /// `φ(x) = (2/L²) h₁(Lx)`.
    Bernstein { l: f64 },
    /// `φ(x) = (2/L²) h₂(Lx)`.
    Bennett { l: f64 },
    /// `φ(x) = (2/L²) h_kind(Lx)`.
    Scaled { kind: HKind, l: f64 },
    /// `φ(x) = (2/l²) φ_base(l x)`: the scaled version of an arbitrary base
    /// modulus, as produced by the generic excess-of-maximum bound.
    Rescaled { base: Box<YoungModulus>, l: f64 },
}

fn check_shape(l: f64) -> Result<()> {
    if !(l > 0.0) || !l.is_finite() {
        return domain(format!("modulus shape needs L > 0, got {l}"));
    }
    Ok(())
}

impl YoungModulus {
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return domain(format!("power modulus needs p >= 1, got {p}"));
        }
        Ok(YoungModulus::Power { p })
    }

    pub fn bernstein(l: f64) -> Result<Self> {
        check_shape(l)?;
        Ok(YoungModulus::Bernstein { l })
    }

    pub fn bennett(l: f64) -> Result<Self> {
        check_shape(l)?;
        Ok(YoungModulus::Bennett { l })
    }

    pub fn scaled(kind: HKind, l: f64) -> Result<Self> {
        check_shape(l)?;
        if kind == HKind::H {
            return domain("h does not vanish at 0 and cannot drive a modulus");
        }
        Ok(YoungModulus::Scaled { kind, l })
    }

    pub fn rescaled(base: YoungModulus, l: f64) -> Result<Self> {
        check_shape(l)?;
        Ok(YoungModulus::Rescaled { base: Box::new(base), l })
    }

    /// The h-function and shape when the modulus is `exp((2/L²)h(L·)) - 1`.
    pub fn h_form(&self) -> Option<(HKind, f64)> {
        match self {
            YoungModulus::Bernstein { l } => Some((HKind::H1, *l)),
            YoungModulus::Bennett { l } => Some((HKind::H2, *l)),
            YoungModulus::Scaled { kind, l } => Some((*kind, *l)),
            _ => None,
        }
    }

    /// The exponent `φ(x) = log(1 + Ψ(x))`, for `x ≥ 0`.
    pub fn exponent(&self, x: f64) -> f64 {
        match self {
            YoungModulus::Power { p } => x.powf(*p),
            YoungModulus::Rescaled { base, l } => 2.0 / (l * l) * base.exponent(l * x),
            _ => {
                let (kind, l) = self.h_form().expect("h-driven family");
                x * x * half_square_ratio(kind, l * x)
            }
        }
    }

    /// Inverse of [`YoungModulus::exponent`].
    pub fn exponent_inverse(&self, t: f64) -> f64 {
        match self {
            YoungModulus::Power { p } => t.powf(1.0 / p),
            YoungModulus::Bernstein { l } => t.sqrt() + 0.5 * l * t,
            YoungModulus::Rescaled { base, l } => base.exponent_inverse(0.5 * l * l * t) / l,
            _ => {
                let (kind, l) = self.h_form().expect("h-driven family");
                eval_h_inverse(kind, 0.5 * l * l * t).expect("nonnegative argument") / l
            }
        }
    }

    /// `log Ψ(x)`, finite far beyond the range where `Ψ` itself overflows.
    pub fn ln_eval(&self, x: f64) -> f64 {
        ln_expm1(self.exponent(x))
    }
}

impl fmt::Display for YoungModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YoungModulus::Power { p } => write!(f, "power:{p}"),
            YoungModulus::Bernstein { l } => write!(f, "bernstein:{l}"),
            YoungModulus::Bennett { l } => write!(f, "bennett:{l}"),
            YoungModulus::Scaled { kind, l } => write!(f, "scaled:{kind},{l}"),
            YoungModulus::Rescaled { base, l } => write!(f, "rescaled({base};{l})"),
        }
    }
}

impl FromStr for YoungModulus {
    type Err = Error;

    /// Parses `power:p`, `bernstein:L`, `bennett:L` or `scaled:kind,L`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("modulus spec `{s}` lacks `family:params`")))?;
        let num = |a: &str| {
            a.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{a}` in `{s}`")))
        };
        match name.trim().to_ascii_lowercase().as_str() {
            "power" => YoungModulus::power(num(args)?),
            "bernstein" => YoungModulus::bernstein(num(args)?),
            "bennett" => YoungModulus::bennett(num(args)?),
            "scaled" => {
                let (kind, l) = args
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("`scaled` takes `kind,L`, got `{args}`")))?;
                YoungModulus::scaled(kind.parse()?, num(l)?)
            }
            other => Err(Error::Parse(format!("unknown modulus family `{other}`"))),
        }
    }
}

/// `Ψ(x)`; `+∞` once the value leaves the floating-point range.
pub fn modulus_eval(m: &YoungModulus, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("modulus argument must be >= 0, got {x}"));
    }
    Ok(m.exponent(x).exp_m1())
}

/// `Ψ⁻¹(y) = φ⁻¹(log(1 + y))`.
pub fn modulus_inverse(m: &YoungModulus, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return domain(format!("modulus inverse needs y >= 0, got {y}"));
    }
    Ok(m.exponent_inverse(y.ln_1p()))
}

/// Closed-form upper bounds on the Bennett inverse `Ψ₂⁻¹(y; L)`, each
/// present only where its applicability condition holds. With
/// `s = (L²/2) log(1+y)`:
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BennettInverseBounds {
    pub y: f64,
    pub l: f64,
    pub exact: f64,
    /// `Ψ₁⁻¹(y; L/3) = √log(1+y) + (L/6) log(1+y)`, always.
    pub bernstein_third: f64,
    /// `L log(1+y) / log(s - 1)`, for `s > 2`.
    pub log_ratio: Option<f64>,
    /// `2L log(1+y) / log s`, for `s ≥ 5`.
    pub twice_log_ratio: Option<f64>,
    /// `2L log(1+y) / log log(1+y)`, for `s ≥ 5`, `L² ≥ 2` and `log(1+y) > 1`.
    pub loglog_ratio: Option<f64>,
    /// `√(2 log(1+y))`, for `s ≤ 9/4`.
    pub gaussian: Option<f64>,
    /// `(2.2/√2)√log(1+y)` for `s ≤ 1 + e`, else `(2(s-1)/log(s-1) - 1)/L`.
    pub piecewise: f64,
}

impl BennettInverseBounds {
    /// The applicable bounds, labelled.
    pub fn applicable(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("bernstein_third", self.bernstein_third)];
        let optional = [
            ("log_ratio", self.log_ratio),
            ("twice_log_ratio", self.twice_log_ratio),
            ("loglog_ratio", self.loglog_ratio),
            ("gaussian", self.gaussian),
        ];
        out.extend(optional.iter().filter_map(|&(n, v)| v.map(|v| (n, v))));
        out.push(("piecewise", self.piecewise));
        out
    }

    /// Smallest `bound - exact` over the applicable bounds.
    pub fn min_margin(&self) -> f64 {
        self.applicable()
            .iter()
            .map(|(_, b)| b - self.exact)
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn bennett_inverse_bounds(y: f64, l: f64) -> Result<BennettInverseBounds> {
    if !(y >= 0.0) {
        return domain(format!("Bennett inverse bounds need y >= 0, got {y}"));
    }
    check_shape(l)?;
    let lg = y.ln_1p();
    let s = 0.5 * l * l * lg;
    let exact = modulus_inverse(&YoungModulus::Bennett { l }, y)?;
    let piecewise = if s <= 1.0 + std::f64::consts::E {
        2.2 / std::f64::consts::SQRT_2 * lg.sqrt()
    } else {
        h2_inverse_upper_bound(s, H2InverseBound::TailForm)? / l
    };
    Ok(BennettInverseBounds {
        y,
        l,
        exact,
        bernstein_third: lg.sqrt() + l / 6.0 * lg,
        log_ratio: (s > 2.0).then(|| l * lg / (s - 1.0).ln()),
        twice_log_ratio: (s >= 5.0).then(|| 2.0 * l * lg / s.ln()),
        loglog_ratio: (s >= 5.0 && l * l >= 2.0 && lg > 1.0).then(|| 2.0 * l * lg / lg.ln()),
        gaussian: (s <= 2.25).then(|| (2.0 * lg).sqrt()),
        piecewise,
    })
}

/// How a norm was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormMethod {
    Closed,
    Bisection,
}

/// An Orlicz norm and the expectation `E Ψ(|X|/value)` at the reported value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub expectation_at_value: f64,
    pub std_error: f64,
    pub iterations: usize,
    pub method: NormMethod,
}

/// `E Ψ(|X|/c)`.
pub fn norm_membership(m: &YoungModulus, d: &Distribution, c: f64) -> Result<Expectation> {
    if !(c > 0.0) {
        return domain(format!("norm membership needs c > 0, got {c}"));
    }
    d.expect_ln(|x| m.ln_eval(x.abs() / c))
}

/// `‖X‖_Ψ = inf{c > 0 : E Ψ(|X|/c) ≤ 1}` by bisection on `c`.
///
/// Returns [`Error::Divergent`] when `E Ψ(|X|/c) > 1` for every `c` up to
/// [`NORM_SCALE_CAP`].
pub fn orlicz_norm(m: &YoungModulus, d: &Distribution) -> Result<NormResult> {
    if d.is_point_mass_at_zero() {
        return Ok(NormResult {
            value: 0.0,
            expectation_at_value: 0.0,
            std_error: 0.0,
            iterations: 0,
            method: NormMethod::Closed,
        });
    }
    // g(c) = E Ψ(|X|/c) - 1, with divergence counted as +∞
    let g = |c: f64| -> Result<(f64, Expectation)> {
        match norm_membership(m, d, c) {
            Ok(e) => Ok((e.value - 1.0, e)),
            Err(Error::Divergent(_)) => Ok((f64::INFINITY, Expectation { value: f64::INFINITY, std_error: 0.0 })),
            Err(e) => Err(e),
        }
    };
    let mut hi = (10.0 * d.second_moment().sqrt()).max(1.0);
    let mut at_hi = g(hi)?;
    while at_hi.0 > 0.0 {
        hi *= 2.0;
        if hi > NORM_SCALE_CAP {
            return Err(Error::Divergent(format!("E Ψ(|X|/c) > 1 for all c up to 2^60 ({m}, {d})")));
        }
        at_hi = g(hi)?;
    }
    let mut lo = 0.5 * hi;
    let mut at_lo = g(lo)?;
    while at_lo.0 <= 0.0 {
        if at_lo.0 == 0.0 {
            return Ok(finish(lo, at_lo.1, 0));
        }
        hi = lo;
        at_hi = at_lo;
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Ok(finish(hi, at_hi.1, 0));
        }
        at_lo = g(lo)?;
    }
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi {
            break;
        }
        iterations += 1;
        let at_mid = g(mid)?;
        if at_mid.0 == 0.0 {
            return Ok(finish(mid, at_mid.1, iterations));
        }
        if at_mid.0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
            at_hi = at_mid;
        }
    }
    Ok(finish(hi, at_hi.1, iterations))
}

fn finish(c: f64, e: Expectation, iterations: usize) -> NormResult {
    NormResult {
        value: c,
        expectation_at_value: e.value,
        std_error: e.std_error,
        iterations,
        method: NormMethod::Bisection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert_eq!(modulus_eval(&YoungModulus::bernstein(1.0).unwrap(), 0.0).unwrap(), 0.0);
        // exp(2 h₂(1)) - 1 = 16/e² - 1
        let b = modulus_eval(&YoungModulus::bennett(1.0).unwrap(), 1.0).unwrap();
        assert!((b - (16.0 * (-2.0f64).exp() - 1.0)).abs() < 1e-14);
        let b = modulus_eval(&YoungModulus::bennett(1.0).unwrap(), 2.0).unwrap();
        assert!(b <= 4f64.exp_m1());
        assert!(modulus_eval(&YoungModulus::power(2.0).unwrap(), -1.0).is_err());
        assert_eq!(modulus_eval(&YoungModulus::power(2.0).unwrap(), 40.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn bernstein_exponent_closed_form() {
        // ((√(1+2Lx) - 1)/L)²
        for &(l, x) in &[(0.5, 0.3), (1.0, 2.0), (3.0, 10.0)] {
            let m = YoungModulus::bernstein(l).unwrap();
            let want = (((1.0f64 + 2.0 * l * x).sqrt() - 1.0) / l).powi(2);
            assert!((m.exponent(x) / want - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_examples() {
        let e1 = std::f64::consts::E - 1.0;
        let v = modulus_inverse(&YoungModulus::bernstein(2.0).unwrap(), e1).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        assert_eq!(modulus_inverse(&YoungModulus::bennett(0.7).unwrap(), 0.0).unwrap(), 0.0);
        let v = modulus_inverse(&YoungModulus::power(2.0).unwrap(), e1).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!(modulus_inverse(&YoungModulus::power(2.0).unwrap(), -0.5).is_err());
    }

    #[test]
    fn rescaled_inverse_round_trip() {
        let m = YoungModulus::rescaled(YoungModulus::scaled(HKind::H5, 0.8).unwrap(), 6f64.sqrt()).unwrap();
        for &x in &[0.01, 0.5, 3.0, 20.0] {
            let back = modulus_inverse(&m, modulus_eval(&m, x).unwrap()).unwrap();
            assert!((back - x).abs() < 1e-10 * x.max(1.0), "{x} -> {back}");
        }
    }

    #[test]
    fn bennett_bounds_examples() {
        // (v) at its boundary s = 9/4
        let l = 1.0;
        let y = (4.5f64).exp_m1();
        let r = bennett_inverse_bounds(y, l).unwrap();
        let v = r.gaussian.unwrap();
        assert!(r.exact <= v);
        assert!((v - 3.0).abs() < 1e-15);
        // (iv) with L = √2, log(1+y) = 5
        let r = bennett_inverse_bounds(5f64.exp_m1(), 2f64.sqrt()).unwrap();
        let want = 2.0 * 2f64.sqrt() * 5.0 / 5f64.ln();
        assert!((r.twice_log_ratio.unwrap() - want).abs() < 1e-12);
        assert!(r.exact <= want);
        let r = bennett_inverse_bounds(0.0, 3.0).unwrap();
        assert_eq!(r.exact, 0.0);
        assert!(r.min_margin() >= 0.0);
    }

    #[test]
    fn point_mass_norm_is_zero() {
        let d = Distribution::empirical(vec![0.0]).unwrap();
        let r = orlicz_norm(&YoungModulus::bennett(1.0).unwrap(), &d).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.method, NormMethod::Closed);
        assert_eq!(norm_membership(&YoungModulus::power(1.0).unwrap(), &d, 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn gaussian_power2_norm() {
        let d = Distribution::gaussian(0.0, 1.0).unwrap();
        let r = orlicz_norm(&YoungModulus::power(2.0).unwrap(), &d).unwrap();
        assert!((r.value - (8.0f64 / 3.0).sqrt()).abs() < 1e-9, "{}", r.value);
        assert!((r.expectation_at_value - 1.0).abs() < NORM_TOLERANCE);
    }

    #[test]
    fn empirical_norm_closed_form() {
        // single atom a: Ψ(a/c) = 1 at c = a/Ψ⁻¹(1)
        let d = Distribution::empirical(vec![-3.0]).unwrap();
        let m = YoungModulus::power(1.0).unwrap();
        let r = orlicz_norm(&m, &d).unwrap();
        assert!((r.value - 3.0 / 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn parsing_round_trips() {
        for s in ["power:2", "bernstein:0.5", "bennett:1.2", "scaled:h4,2"] {
            let m: YoungModulus = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("scaled:h,1".parse::<YoungModulus>().is_err());
        assert!("power:0.5".parse::<YoungModulus>().is_err());
        assert!("bennett:-1".parse::<YoungModulus>().is_err());
    }
}
