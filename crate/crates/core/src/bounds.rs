//! Tail bounds, parameter conversions, norm certificates and maximal
//! inequalities, as explicit calculators.
//!
//! Every probability returned here is capped at 1.

use std::f64::consts::{E, SQRT_2};

use serde::Serialize;

use crate::error::{domain, Result};
use crate::hkernel::{eval_h, eval_h_inverse, HKind};
use crate::orlicz::{modulus_inverse, YoungModulus};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// `P(|Z| > z) ≤ 2 exp(-(2/L²) h_kind(Lz/τ))` for all `z > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailCertificate {
    pub tau: f64,
    pub l: f64,
    pub kind: HKind,
}

impl TailCertificate {
    pub fn new(tau: f64, l: f64, kind: HKind) -> Result<Self> {
        if !(tau > 0.0) || !(l > 0.0) || !tau.is_finite() || !l.is_finite() {
            return domain(format!("tail certificate needs tau > 0 and L > 0, got ({tau}, {l})"));
        }
        if kind == HKind::H {
            return domain("tail certificates use an h-function vanishing at 0");
        }
        Ok(TailCertificate { tau, l, kind })
    }

    /// The exponent `(2/L²) h_kind(Lz/τ)`.
    pub fn exponent(&self, z: f64) -> f64 {
        2.0 / (self.l * self.l) * eval_h(self.kind, self.l * z / self.tau).expect("nonnegative argument")
    }
}

/// Independent summands with average variance `sigma2_bar` and centered
/// values bounded by `b`, for the normalised sum `√n(X̄ₙ - μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BennettSumSpec {
    pub n: u64,
    pub sigma2_bar: f64,
    pub b: f64,
}

impl BennettSumSpec {
    pub fn new(n: u64, sigma2_bar: f64, b: f64) -> Result<Self> {
        if n < 1 || !(sigma2_bar > 0.0) || !(b > 0.0) {
            return domain(format!("sum spec needs n >= 1, sigma2 > 0, b > 0, got ({n}, {sigma2_bar}, {b})"));
        }
        Ok(BennettSumSpec { n, sigma2_bar, b })
    }

    /// The spec whose Bennett bound is the Poisson(ν) bound `2 exp(-ν h₂(z/ν))`.
    pub fn poisson(nu: f64) -> Result<Self> {
        BennettSumSpec::new(1, nu, 1.0)
    }

    /// `√n(X̄ₙ - p)` for i.i.d. Bernoulli(p).
    pub fn bernoulli(n: u64, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("bernoulli spec needs 0 < p < 1, got {p}"));
        }
        BennettSumSpec::new(n, p * (1.0 - p), 1.0)
    }

    /// `(nσ̄²/b²) h_kind(zb/(√n σ̄²))`.
    fn exponent(&self, kind: HKind, z: f64) -> f64 {
        let n = self.n as f64;
        let x = z * self.b / (n.sqrt() * self.sigma2_bar);
        n * self.sigma2_bar / (self.b * self.b) * eval_h(kind, x).expect("nonnegative argument")
    }

    /// The two-sided Bennett bound as an `h₂` tail certificate:
    /// `L = √2 b/(√n σ̄)`, `τ = √2 σ̄`.
    pub fn certificate(&self) -> TailCertificate {
        let sigma = self.sigma2_bar.sqrt();
        TailCertificate {
            tau: SQRT_2 * sigma,
            l: SQRT_2 * self.b / ((self.n as f64).sqrt() * sigma),
            kind: HKind::H2,
        }
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(z >= 0.0) {
        return domain(format!("tail argument must be >= 0, got {z}"));
    }
    Ok(())
}

fn capped(v: f64) -> f64 {
    v.min(1.0)
}

/// `min(1, 2 exp(-(2/L²) h_kind(Lz/τ)))`.
pub fn tail_bound(cert: &TailCertificate, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(capped(2.0 * (-cert.exponent(z)).exp()))
}

/// `(τ/L) h_kind⁻¹(L²t/2)`, the level exceeded with probability at most `2e^{-t}`.
pub fn tail_quantile(cert: &TailCertificate, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("tail quantile needs t > 0, got {t}"));
    }
    Ok(cert.tau / cert.l * eval_h_inverse(cert.kind, 0.5 * cert.l * cert.l * t)?)
}

/// `min(1, 2 exp(-z²/(2(A + Bz))))`.
pub fn bernstein_tail(a: f64, b: f64, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(capped(2.0 * (-z * z / (2.0 * (a + b * z))).exp()))
}

/// Converts the Bernstein form `2 exp(-z²/(2(A + Bz)))` to an `h₁`
/// certificate with `L = B√(2/A)` and `τ = 2^{3/2}√A`.
pub fn bernstein_to_h1(a: f64, b: f64) -> Result<TailCertificate> {
    if !(a > 0.0) || !(b > 0.0) {
        return domain(format!("Bernstein conversion needs A > 0 and B > 0, got ({a}, {b})"));
    }
    TailCertificate::new(2.0 * SQRT_2 * a.sqrt(), b * (2.0 / a).sqrt(), HKind::H1)
}

/// Bennett's bound `(1 or 2)·exp(-(nσ̄²/b²) h₂(zb/(√n σ̄²)))`.
pub fn bennett_tail(spec: &BennettSumSpec, z: f64, two_sided: bool) -> Result<f64> {
    check_z(z)?;
    let factor = if two_sided { 2.0 } else { 1.0 };
    Ok(capped(factor * (-spec.exponent(HKind::H2, z)).exp()))
}

/// The arcsinh-type bounds: Prokhorov's uses `h₄`, Kruglov's sharper one `h₅`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProkhorovVariant {
    Prokhorov,
    Kruglov,
}

/// `2 exp(-(nσ̄²/b²) h(zb/(√n σ̄²)))` with `h = h₄` or `h₅`. Read as an
/// upper bound on `P(|√n(X̄ₙ - μ)| ≥ z)`.
pub fn prokhorov_tail(spec: &BennettSumSpec, z: f64, variant: ProkhorovVariant) -> Result<f64> {
    check_z(z)?;
    let kind = match variant {
        ProkhorovVariant::Prokhorov => HKind::H4,
        ProkhorovVariant::Kruglov => HKind::H5,
    };
    Ok(capped(2.0 * (-spec.exponent(kind, z)).exp()))
}

/// Poisson(ν): `2 exp(-ν h₂(z/ν))` bounds `P(|X - ν| ≥ z)`.
pub fn poisson_tail(nu: f64, z: f64) -> Result<f64> {
    bennett_tail(&BennettSumSpec::poisson(nu)?, z, true)
}

/// The weaker `h₁` form of the Poisson bound: `τ = √(2ν)`, `L = √(2/(9ν))`.
pub fn poisson_h1_certificate(nu: f64) -> Result<TailCertificate> {
    if !(nu > 0.0) {
        return domain(format!("poisson certificate needs nu > 0, got {nu}"));
    }
    TailCertificate::new((2.0 * nu).sqrt(), (2.0 / (9.0 * nu)).sqrt(), HKind::H1)
}

/// The `h₂` form of the Poisson bound: `τ = √(2ν)`, `L = √(2/ν)`.
pub fn poisson_h2_certificate(nu: f64) -> Result<TailCertificate> {
    Ok(BennettSumSpec::poisson(nu)?.certificate())
}

fn h_modulus(kind: HKind, l: f64) -> Result<YoungModulus> {
    match kind {
        HKind::H1 => YoungModulus::bernstein(l),
        HKind::H2 => YoungModulus::bennett(l),
        _ => YoungModulus::scaled(kind, l),
    }
}

/// A tail certificate `(τ, L)` gives `‖Z‖ ≤ √3 τ` in the modulus of the same
/// kind with shape `√3 L`.
pub fn certificate_to_norm(cert: &TailCertificate) -> Result<(YoungModulus, f64)> {
    Ok((h_modulus(cert.kind, SQRT_3 * cert.l)?, SQRT_3 * cert.tau))
}

/// Bounds on `E max_{j≤m} |Z_j|` when every `‖Z_j‖_Ψ ≤ τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxExpectationBounds {
    /// `τ Ψ⁻¹(m)`.
    pub exact: f64,
    /// Bernstein modulus, `m ≥ 2`: `2 max{τ, Lτ/2} log(1+m)`.
    pub log_linear: Option<f64>,
    /// Bennett modulus, `L² ≥ 2` and `log(1+m) ≥ 5`: `2τL log(1+m)/log log(1+m)`.
    pub poisson_rate: Option<f64>,
    /// Bennett modulus, `log(1+m) ≥ 5`:
    /// `2τ{L log(1+m)/log log(1+m) + √log(1+m)}`.
    pub gauss_poisson_tradeoff: Option<f64>,
}

impl MaxExpectationBounds {
    pub fn closed_forms(&self) -> Vec<(&'static str, f64)> {
        [
            ("log_linear", self.log_linear),
            ("poisson_rate", self.poisson_rate),
            ("gauss_poisson_tradeoff", self.gauss_poisson_tradeoff),
        ]
        .iter()
        .filter_map(|&(n, v)| v.map(|v| (n, v)))
        .collect()
    }
}

pub fn max_expectation_bound(modulus: &YoungModulus, tau: f64, m: f64) -> Result<MaxExpectationBounds> {
    if !(m >= 1.0) {
        return domain(format!("maximal bound needs m >= 1, got {m}"));
    }
    if !(tau > 0.0) {
        return domain(format!("maximal bound needs tau > 0, got {tau}"));
    }
    let lg = m.ln_1p();
    let mut out = MaxExpectationBounds {
        exact: tau * modulus_inverse(modulus, m)?,
        log_linear: None,
        poisson_rate: None,
        gauss_poisson_tradeoff: None,
    };
    match *modulus {
        YoungModulus::Bernstein { l } if m >= 2.0 => {
            out.log_linear = Some(2.0 * tau.max(0.5 * l * tau) * lg);
        }
        YoungModulus::Bennett { l } if lg >= 5.0 => {
            let rate = l * lg / lg.ln();
            out.gauss_poisson_tradeoff = Some(2.0 * tau * (rate + lg.sqrt()));
            if l * l >= 2.0 {
                out.poisson_rate = Some(2.0 * tau * rate);
            }
        }
        _ => {}
    }
    Ok(out)
}

/// `P(max_{j≤m} |Z_j| ≥ threshold) ≤ prob` for `m` variables sharing a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxTailBound {
    pub threshold: f64,
    pub prob: f64,
}

/// `threshold = (τ/L)(h⁻¹(L²t/2) + h⁻¹(L² log(1+m)/2))`, `prob = 2e^{-t}`.
pub fn max_tail_bound(cert: &TailCertificate, m: f64, t: f64) -> Result<MaxTailBound> {
    if !(m >= 1.0) {
        return domain(format!("maximal tail bound needs m >= 1, got {m}"));
    }
    if !(t > 0.0) {
        return domain(format!("maximal tail bound needs t > 0, got {t}"));
    }
    Ok(MaxTailBound {
        threshold: tail_quantile(cert, t)? + tail_quantile(cert, m.ln_1p())?,
        prob: capped(2.0 * (-t).exp()),
    })
}

/// Which argument produced an excess-of-maximum norm bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExcessRoute {
    /// Re-certify the excess with the original `(τ, L)` and convert:
    /// shape `√3 L`, constant `√3`.
    Certificate,
    /// The modulus-agnostic argument: `Ψ(·; √6)` built on the certificate's
    /// own exponent, constant `√6`.
    Generic,
}

/// `‖(max_{j≤m}|Z_j| - center)₊‖_modulus ≤ norm_bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcessMaxBound {
    pub route: ExcessRoute,
    pub center: f64,
    pub modulus: YoungModulus,
    pub norm_bound: f64,
}

/// Both routes; `center = (τ/L) h⁻¹((L²/2) log(1+m))` in each.
pub fn excess_max_norm_bound(cert: &TailCertificate, m: f64) -> Result<[ExcessMaxBound; 2]> {
    if !(m >= 1.0) {
        return domain(format!("excess bound needs m >= 1, got {m}"));
    }
    let center = tail_quantile(cert, m.ln_1p())?;
    let (direct_modulus, direct_bound) = certificate_to_norm(cert)?;
    let base = YoungModulus::scaled(cert.kind, cert.l)?;
    Ok([
        ExcessMaxBound { route: ExcessRoute::Certificate, center, modulus: direct_modulus, norm_bound: direct_bound },
        ExcessMaxBound {
            route: ExcessRoute::Generic,
            center,
            modulus: YoungModulus::rescaled(base, 6f64.sqrt())?,
            norm_bound: 6f64.sqrt() * cert.tau,
        },
    ])
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return domain(format!("{name} must be > 0, got {v}"));
    }
    Ok(())
}

/// `φ_{L,S}(x)`: `x²/(L²S)` up to `x = LS`, then `(x/L)√log(ex/(LS))`.
pub fn talagrand_phi(l: f64, s: f64, x: f64) -> Result<f64> {
    check_positive("L", l)?;
    check_positive("S", s)?;
    if !(x >= 0.0) {
        return domain(format!("x must be >= 0, got {x}"));
    }
    Ok(if x <= l * s {
        x * x / (l * l * s)
    } else {
        x / l * (E * x / (l * s)).ln().sqrt()
    })
}

/// Log-probability bounds for `P(Z ≥ z)`, `z ≥ K₂ E(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaTail {
    /// `-(z/K₂) log(ez/(K₂ E Z))`.
    pub log_bound_direct: f64,
    /// `-E(Z) h(1 + z/(K₂ E Z))`.
    pub log_bound_bennett: f64,
}

pub fn talagrand_theta_tail(ez: f64, k2: f64, z: f64) -> Result<ThetaTail> {
    check_positive("E(Z)", ez)?;
    check_positive("K2", k2)?;
    if !(z >= k2 * ez) {
        return domain(format!("theta tail needs z >= K2 E(Z) = {}, got {z}", k2 * ez));
    }
    let u = z / (k2 * ez);
    Ok(ThetaTail {
        log_bound_direct: -(z / k2) * (E * u).ln(),
        log_bound_bennett: -ez * eval_h(HKind::H, 1.0 + u)?,
    })
}

/// `u log(eu) - h(1 + u)` for `u ≥ 1`: the Bennett-form exponent is the
/// smaller one when this is nonnegative.
pub fn theta_comparison_margin(u: f64) -> Result<f64> {
    if !(u >= 1.0) {
        return domain(format!("comparison needs u >= 1, got {u}"));
    }
    Ok(u * (E * u).ln() - eval_h(HKind::H, 1.0 + u)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn tail_bound_caps_at_one() {
        let c = TailCertificate::new(1.0, 1.0, HKind::H1).unwrap();
        assert_eq!(tail_bound(&c, 0.0).unwrap(), 1.0);
        assert!(tail_bound(&c, -1.0).is_err());
    }

    #[test]
    fn h1_quantile_matches_closed_form() {
        let (tau, l) = (1.7, 0.6);
        let c = TailCertificate::new(tau, l, HKind::H1).unwrap();
        for &t in &[1e-6, 0.3, 1.0, 7.0, 50.0] {
            let want = tau * (f64::sqrt(t) + 0.5 * l * t);
            assert!(close(tail_quantile(&c, t).unwrap(), want, 1e-13));
        }
        assert_eq!(tail_quantile(&c, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn quantile_inverts_tail_bound() {
        for kind in HKind::ZERO_AT_ORIGIN {
            let c = TailCertificate::new(2.0, 0.8, kind).unwrap();
            for &t in &[0.5, 1.0, 3.0, 10.0] {
                let z = tail_quantile(&c, t).unwrap();
                let p = tail_bound(&c, z).unwrap();
                assert!((p - (2.0 * (-t).exp()).min(1.0)).abs() <= 1e-12, "{kind} {t}");
            }
        }
    }

    #[test]
    fn h2_quantile_example() {
        let c = TailCertificate::new(1.0, 1.0, HKind::H2).unwrap();
        let q = tail_quantile(&c, 2.0).unwrap();
        assert!((eval_h(HKind::H2, q).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn conversion_examples() {
        let c = bernstein_to_h1(1.0, 1.0).unwrap();
        assert!(close(c.l, SQRT_2, 1e-15) && close(c.tau, 2.0 * SQRT_2, 1e-15));
        let c = bernstein_to_h1(4.0, 1.0).unwrap();
        assert!(close(c.l, 1.0 / SQRT_2, 1e-15) && close(c.tau, 4.0 * SQRT_2, 1e-15));
        assert!(bernstein_to_h1(0.0, 1.0).is_err());
    }

    #[test]
    fn poisson_bound_is_bennett_with_unit_sum() {
        let nu = 5.0;
        let z = 3.3;
        let direct = 2.0 * (-nu * eval_h(HKind::H2, z / nu).unwrap()).exp();
        assert!(close(poisson_tail(nu, z).unwrap(), direct, 1e-15));
        let c = poisson_h2_certificate(nu).unwrap();
        assert!(close(tail_bound(&c, z).unwrap(), direct, 1e-14));
    }

    #[test]
    fn poisson_certificates_give_expected_norms() {
        let nu = 5.0;
        let (m, b) = certificate_to_norm(&poisson_h1_certificate(nu).unwrap()).unwrap();
        assert_eq!(m, YoungModulus::Bernstein { l: SQRT_3 * (2.0f64 / 45.0).sqrt() });
        assert!(close(b, 30f64.sqrt(), 1e-15));
        let (m, b) = certificate_to_norm(&poisson_h2_certificate(nu).unwrap()).unwrap();
        match m {
            YoungModulus::Bennett { l } => assert!(close(l, (6.0f64 / 5.0).sqrt(), 1e-15)),
            other => panic!("{other:?}"),
        }
        assert!(close(b, 30f64.sqrt(), 1e-15));
        let (_, b) = certificate_to_norm(&BennettSumSpec::bernoulli(100, 0.3).unwrap().certificate()).unwrap();
        assert!(close(b, (6.0f64 * 0.21).sqrt(), 1e-15));
    }

    #[test]
    fn ordering_at_five() {
        let s = BennettSumSpec::new(100, 1.0, 1.0).unwrap();
        let b = bennett_tail(&s, 5.0, true).unwrap();
        let k = prokhorov_tail(&s, 5.0, ProkhorovVariant::Kruglov).unwrap();
        let p = prokhorov_tail(&s, 5.0, ProkhorovVariant::Prokhorov).unwrap();
        assert!(b <= k && k <= p, "{b} {k} {p}");
        assert_eq!(prokhorov_tail(&s, 0.0, ProkhorovVariant::Prokhorov).unwrap(), 1.0);
    }

    #[test]
    fn h2_bound_below_h1_bound_at_three_tau_over_l() {
        let (tau, l) = (1.3, 0.9);
        let c1 = TailCertificate::new(tau, l, HKind::H1).unwrap();
        let c2 = TailCertificate::new(tau, l, HKind::H2).unwrap();
        let z = 3.0 * tau / l;
        assert!(tail_bound(&c2, z).unwrap() <= tail_bound(&c1, z).unwrap());
    }

    #[test]
    fn max_expectation_examples() {
        let l = 0.8;
        let r = max_expectation_bound(&YoungModulus::bernstein(l).unwrap(), 2.0, E - 1.0).unwrap();
        assert!(close(r.exact, 2.0 * (1.0 + l / 2.0), 1e-14));
        assert!(r.log_linear.is_none());
        // Poisson case of the log-linear form
        let nu: f64 = 5.0;
        let c = poisson_h1_certificate(nu).unwrap();
        let r = max_expectation_bound(&YoungModulus::bernstein(c.l).unwrap(), c.tau, 100.0).unwrap();
        let want = 2.0 * (2.0 * nu).sqrt().max(1.0 / 3.0) * 101f64.ln();
        assert!(close(r.log_linear.unwrap(), want, 1e-14));
        assert!(r.exact <= want);
        let r = max_expectation_bound(&YoungModulus::bennett(2.0).unwrap(), 1.0, 1e6).unwrap();
        assert!(r.exact <= r.poisson_rate.unwrap());
        assert!(r.exact <= r.gauss_poisson_tradeoff.unwrap());
        assert!(max_expectation_bound(&YoungModulus::bennett(2.0).unwrap(), 1.0, 0.5).is_err());
    }

    #[test]
    fn max_tail_with_single_variable() {
        let (tau, l, t) = (1.5, 0.7, 2.0);
        let c = TailCertificate::new(tau, l, HKind::H1).unwrap();
        let r = max_tail_bound(&c, 1.0, t).unwrap();
        let lg2 = 2f64.ln();
        let want = tau * (t.sqrt() + l * t / 2.0) + tau * (lg2.sqrt() + l / 2.0 * lg2);
        assert!(close(r.threshold, want, 1e-13));
        assert!(close(r.prob, 2.0 * (-t).exp(), 1e-15));
        assert!(max_tail_bound(&c, 1.0, 60.0).unwrap().prob < 1e-25);
    }

    #[test]
    fn excess_routes() {
        let c = TailCertificate::new(1.2, 0.5, HKind::H2).unwrap();
        let [a, b] = excess_max_norm_bound(&c, 1.0).unwrap();
        let center = 1.2 / 0.5 * eval_h_inverse(HKind::H2, 0.125 * 2f64.ln()).unwrap();
        assert!(close(a.center, center, 1e-14) && close(b.center, center, 1e-14));
        assert!(close(a.norm_bound, SQRT_3 * 1.2, 1e-15));
        assert!(close(b.norm_bound, 6f64.sqrt() * 1.2, 1e-15));
        assert_eq!(a.route, ExcessRoute::Certificate);
        assert_eq!(b.route, ExcessRoute::Generic);
    }

    #[test]
    fn talagrand_phi_examples() {
        assert_eq!(talagrand_phi(1.0, 1.0, 0.0).unwrap(), 0.0);
        let (l, s) = (0.7, 2.5);
        let knee = talagrand_phi(l, s, l * s).unwrap();
        assert!(close(knee, s, 1e-15));
        let above = (l * s / l) * (E * (l * s) / (l * s)).ln().sqrt();
        assert!(close(above, s, 1e-15));
        assert!(close(talagrand_phi(1.0, 1.0, E).unwrap(), E * SQRT_2, 1e-15));
        assert!(talagrand_phi(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn theta_tail_examples() {
        let r = talagrand_theta_tail(2.0, 1.5, 3.0).unwrap();
        assert!(close(r.log_bound_direct, -2.0, 1e-15));
        let r = talagrand_theta_tail(1.0, 1.0, E).unwrap();
        assert!(r.log_bound_bennett >= r.log_bound_direct);
        assert!(talagrand_theta_tail(1.0, 1.0, 0.5).is_err());
    }
}
