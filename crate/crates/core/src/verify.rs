//! Empirical certification of every lemma against exact oracles, dense
//! grids and seeded Monte Carlo.
//!
//! Each registry entry owns a fixed RNG stream family derived from its
//! position in [`LEMMA_IDS`], so a check gives the same report whether it
//! runs alone or inside the full suite.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    bennett_tail, bernstein_tail, bernstein_to_h1, certificate_to_norm, excess_max_norm_bound,
    max_expectation_bound, max_tail_bound, poisson_h1_certificate, poisson_h2_certificate, prokhorov_tail,
    tail_bound, BennettSumSpec, ExcessRoute, ProkhorovVariant, TailCertificate,
};
use crate::distributions::{stream_rng, Distribution, Expectation};
use crate::error::{Error, Result};
use crate::hkernel::{
    check_h_inequalities, eval_h, eval_h_inverse, h2_inverse_upper_bound, psi_log_lower_bound_margin,
    H2InverseBound, HKind,
};
use crate::lambertw::{lambert_w, w_lower_bound, WBranch};
use crate::orlicz::{bennett_inverse_bounds, norm_membership, orlicz_norm, YoungModulus};

pub const DEFAULT_SEED: u64 = 42;
/// Replications for Monte Carlo checks.
pub const DEFAULT_SAMPLES: usize = 100_000;
/// Slack for checks computed exactly.
pub const EXACT_SLACK: f64 = 1e-10;
/// Slack for tail-dominance checks.
pub const DOMINANCE_SLACK: f64 = 1e-12;

const CHUNK: usize = 1000;

/// Registered lemma ids, in report order.
pub const LEMMA_IDS: [&str; 28] = [
    "Lemma1",
    "Lemma2",
    "Lemma3",
    "Corollary1",
    "Example1",
    "Prop1",
    "Prop2",
    "Prop3",
    "Prop4",
    "Lemma1A",
    "Lemma2A",
    "Lemma3A",
    "Lemma4A",
    "Lemma5A",
    "Corollary2i",
    "Corollary2ii",
    "Corollary2iii",
    "Prop5",
    "Lemma8",
    "Eq13",
    "LemmaA1",
    "LemmaA2",
    "LemmaA3",
    "Lemma9",
    "Lemma10",
    "Lemma11",
    "Lemma12",
    "Lemma13",
];

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lemma_id: String,
    pub check: String,
    pub distribution: String,
    pub samples: usize,
    pub seed: u64,
    pub statistic: f64,
    pub bound: f64,
    /// `bound - statistic`.
    pub margin: f64,
    pub standard_error: f64,
    pub pass: bool,
}

impl VerificationReport {
    fn new(lemma_id: &str, check: &str, distribution: &str, seed: u64) -> Self {
        VerificationReport {
            lemma_id: lemma_id.into(),
            check: check.into(),
            distribution: distribution.into(),
            samples: 0,
            seed,
            statistic: 0.0,
            bound: 0.0,
            margin: 0.0,
            standard_error: 0.0,
            pass: false,
        }
    }

    /// `statistic ≤ bound`, judged exactly or against three standard errors.
    fn judged(mut self, statistic: f64, bound: f64, se: f64, samples: usize) -> Self {
        self.statistic = statistic;
        self.bound = bound;
        self.margin = bound - statistic;
        self.standard_error = se;
        self.samples = samples;
        self.pass = if se > 0.0 { self.margin >= -3.0 * se } else { self.margin >= -EXACT_SLACK };
        self
    }

    /// A grid check whose statistic is the worst violation (positive = bad).
    fn grid(mut self, worst_violation: f64, points: usize) -> Self {
        self.statistic = worst_violation;
        self.bound = 0.0;
        self.margin = -worst_violation;
        self.samples = points;
        self.pass = self.margin >= -EXACT_SLACK;
        self
    }
}

/// `E Ψ(|X|/claimed) ≤ 1`.
pub fn verify_norm_certificate(
    lemma_id: &str,
    d: &Distribution,
    modulus: &YoungModulus,
    claimed: f64,
    seed: u64,
) -> Result<VerificationReport> {
    if !(claimed > 0.0) {
        return Err(Error::Domain(format!("claimed norm must be > 0, got {claimed}")));
    }
    let e = norm_membership(modulus, d, claimed)?;
    let samples = if e.is_exact() { 0 } else { crate::distributions::FALLBACK_SAMPLES };
    let check = format!("E Psi(|X|/{claimed}) <= 1 for {modulus}");
    Ok(VerificationReport::new(lemma_id, &check, &d.spec_string(), seed).judged(e.value, 1.0, e.std_error, samples))
}

/// A norm bound `‖Z_j‖_modulus ≤ tau` shared by i.i.d. copies.
#[derive(Debug, Clone, PartialEq)]
pub struct NormBound {
    pub modulus: YoungModulus,
    pub tau: f64,
}

/// Monte Carlo `E max_{j≤m} |Z_j|` against `τ Ψ⁻¹(m)`.
pub fn verify_max_expectation(
    lemma_id: &str,
    d: &Distribution,
    m: usize,
    norm: &NormBound,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let bound = max_expectation_bound(&norm.modulus, norm.tau, m as f64)?.exact;
    let stat = simulate_max(d, m, samples, seed, stream_base(lemma_id), |x| x);
    let check = format!("E max of {m} |Z_j| <= tau Psi^-1(m), tau = {}, {}", norm.tau, norm.modulus);
    Ok(VerificationReport::new(lemma_id, &check, &d.spec_string(), seed).judged(
        stat.value,
        bound,
        stat.std_error,
        samples,
    ))
}

/// `max_z (P(|X - mean| ≥ z) - bound(z))` over the grid; passes when ≤ 1e-12.
pub fn verify_tail_dominance(
    lemma_id: &str,
    d: &Distribution,
    bound_fn: &dyn Fn(f64) -> Result<f64>,
    z_grid: &[f64],
) -> Result<VerificationReport> {
    let mut worst = f64::NEG_INFINITY;
    for &z in z_grid {
        worst = worst.max(d.exact_tail(z)? - bound_fn(z)?);
    }
    let mut r = VerificationReport::new(lemma_id, "exact tail <= bound on z-grid", &d.spec_string(), 0);
    r.statistic = worst;
    r.bound = 0.0;
    r.margin = -worst;
    r.samples = z_grid.len();
    r.pass = worst <= DOMINANCE_SLACK;
    Ok(r)
}

/// Runs the selected checks; `"all"` selects the whole registry. Reports
/// come back in registry order.
pub fn run_suite(selection: &[&str], seed: u64, samples: usize) -> Result<Vec<VerificationReport>> {
    if selection.is_empty() {
        return Err(Error::Domain("empty lemma selection".into()));
    }
    let mut chosen = vec![false; LEMMA_IDS.len()];
    for &id in selection {
        if id.eq_ignore_ascii_case("all") {
            chosen.iter_mut().for_each(|c| *c = true);
            continue;
        }
        let i = LEMMA_IDS
            .iter()
            .position(|known| known.eq_ignore_ascii_case(id))
            .ok_or_else(|| Error::UnknownLemma(id.to_string()))?;
        chosen[i] = true;
    }
    let ids: Vec<&str> = LEMMA_IDS.iter().zip(&chosen).filter(|(_, &c)| c).map(|(id, _)| *id).collect();
    ids.par_iter()
        .map(|id| run_check(id, seed, samples).map(|r| VerificationReport { seed, ..r }))
        .collect()
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

fn stream_base(lemma_id: &str) -> u64 {
    let i = LEMMA_IDS.iter().position(|k| *k == lemma_id).unwrap_or(LEMMA_IDS.len());
    (i as u64 + 1) << 32
}

/// Mean and standard error of `f(rng)` over `samples` draws, sharded over
/// chunks with one RNG stream each and merged in chunk order.
fn simulate<F>(samples: usize, seed: u64, base: u64, f: F) -> Expectation
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<(f64, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, base + i as u64);
            let count = CHUNK.min(samples - i * CHUNK);
            let (mut mean, mut m2) = (0.0, 0.0);
            for k in 0..count {
                let v = f(&mut rng);
                let d = v - mean;
                mean += d / (k + 1) as f64;
                m2 += d * (v - mean);
            }
            (count as f64, mean, m2)
        })
        .collect();
    let (mut n, mut mean, mut m2) = (0.0, 0.0, 0.0);
    for (nb, mb, m2b) in parts {
        let total = n + nb;
        let d = mb - mean;
        mean += d * nb / total;
        m2 += m2b + d * d * n * nb / total;
        n = total;
    }
    let var = if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
    Expectation { value: mean, std_error: (var / n).sqrt() }
}

/// Monte Carlo mean of `g(max_{j≤m} |Z_j|)`.
fn simulate_max(
    d: &Distribution,
    m: usize,
    samples: usize,
    seed: u64,
    base: u64,
    g: impl Fn(f64) -> f64 + Sync,
) -> Expectation {
    let sampler = d.sampler();
    simulate(samples, seed, base, |rng| {
        let mut mx = 0.0f64;
        for _ in 0..m {
            mx = mx.max(sampler.draw(rng).abs());
        }
        g(mx)
    })
}

/// `points` equally spaced levels over `[0, 12 sd]`.
pub fn z_grid(d: &Distribution, points: usize) -> Vec<f64> {
    let m = d.mean();
    let sd = (d.second_moment() - m * m).max(0.0).sqrt();
    linspace(0.0, 12.0 * sd, points)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `(small - big)/max(1, |big|)`: positive when `small ≤ big` is violated.
fn violation(small: f64, big: f64) -> f64 {
    (small - big) / big.abs().max(1.0)
}

fn cpoisson5() -> Distribution {
    Distribution::centered_poisson(5.0).expect("valid")
}

fn gaussian() -> Distribution {
    Distribution::gaussian(0.0, 1.0).expect("valid")
}

fn run_check(id: &str, seed: u64, samples: usize) -> Result<VerificationReport> {
    let base = stream_base(id);
    match id {
        "Lemma1" => {
            // ‖Z‖ in Ψ₁(·;L) gives the h₁ tail with the same (τ, L)
            let l = (2.0f64 / 15.0).sqrt();
            let d = cpoisson5();
            let tau = orlicz_norm(&YoungModulus::bernstein(l)?, &d)?.value;
            let cert = TailCertificate::new(tau, l, HKind::H1)?;
            verify_tail_dominance(id, &d, &|z| tail_bound(&cert, z), &z_grid(&d, 200))
        }
        "Lemma2" => {
            let (n, p) = (100u64, 0.3f64);
            let sigma = (p * (1.0 - p)).sqrt();
            let l = (2.0f64 / 9.0).sqrt() / ((n as f64).sqrt() * sigma);
            let cert = TailCertificate::new(2f64.sqrt() * sigma, l, HKind::H1)?;
            let (modulus, claimed) = certificate_to_norm(&cert)?;
            verify_norm_certificate(id, &Distribution::bernoulli_mean(n, p)?, &modulus, claimed, seed)
        }
        "Lemma3" => {
            let norm = NormBound { modulus: YoungModulus::bernstein((2.0f64 / 15.0).sqrt())?, tau: 30f64.sqrt() };
            verify_max_expectation(id, &cpoisson5(), 100, &norm, samples, seed)
        }
        "Corollary1" => {
            let (tau, l) = (30f64.sqrt(), (2.0f64 / 15.0).sqrt());
            let bounds = max_expectation_bound(&YoungModulus::bernstein(l)?, tau, 100.0)?;
            let bound = bounds.log_linear.expect("m >= 2");
            let stat = simulate_max(&cpoisson5(), 100, samples, seed, base, |x| x);
            let check = "E max of 100 |Z_j| <= 2 max(tau, L tau/2) log(1+m)";
            Ok(VerificationReport::new(id, check, "cpoisson:5", seed).judged(stat.value, bound, stat.std_error, samples))
        }
        "Example1" => {
            let nu = 5.0;
            let d = Distribution::poisson(nu)?;
            let h2 = poisson_h2_certificate(nu)?;
            let h1 = poisson_h1_certificate(nu)?;
            // exact ≤ h₂ form ≤ h₁ form
            let bound = |z: f64| -> Result<f64> {
                let b2 = tail_bound(&h2, z)?;
                let b1 = tail_bound(&h1, z)?;
                Ok(b2 - (b2 - b1).max(0.0))
            };
            verify_tail_dominance(id, &d, &bound, &z_grid(&d, 200))
        }
        "Prop1" => {
            let mut worst = f64::NEG_INFINITY;
            let mut points = 0;
            for &a in &[0.1, 1.0, 4.0, 25.0] {
                for &b in &[0.05, 0.5, 1.0, 3.0] {
                    let cert = bernstein_to_h1(a, b)?;
                    for z in linspace(0.0, 100.0, 1001) {
                        worst = worst.max(bernstein_tail(a, b, z)? - tail_bound(&cert, z)?);
                        points += 1;
                    }
                }
            }
            let r = VerificationReport::new(id, "Bernstein form <= converted h1 form", "grid", seed);
            Ok(r.grid(worst, points))
        }
        "Prop2" => {
            let (n, p) = (100u64, 0.3f64);
            let spec = BennettSumSpec::bernoulli(n, p)?;
            let d = Distribution::bernoulli_mean(n, p)?;
            verify_tail_dominance(id, &d, &|z| bennett_tail(&spec, z, true), &z_grid(&d, 200))
        }
        "Prop3" => {
            let mut worst = f64::NEG_INFINITY;
            let mut points = 0;
            for &l in &[0.1, 0.5, 1.0, 2.0, 5.0] {
                let bennett = YoungModulus::bennett(l)?;
                let bernstein = YoungModulus::bernstein(l / 3.0)?;
                for x in linspace(0.0, 20.0, 2001) {
                    let e = bennett.exponent(x);
                    worst = worst.max(violation(e, x * x)).max(violation(bernstein.exponent(x), e));
                    points += 1;
                }
            }
            let r = VerificationReport::new(id, "Bernstein(L/3) <= Bennett(L) <= exp(x^2)-1", "grid", seed);
            Ok(r.grid(worst, points))
        }
        "Prop4" => {
            let mut worst = f64::NEG_INFINITY;
            let mut points = 0;
            for &l in &[0.1, 0.5, 1.0, 2f64.sqrt(), 2.0, 5.0] {
                for y in std::iter::once(0.0).chain(logspace(1e-6, 1e12, 400)) {
                    let r = bennett_inverse_bounds(y, l)?;
                    worst = worst.max(-r.min_margin() / r.exact.max(1.0));
                    points += 1;
                }
            }
            let r = VerificationReport::new(id, "exact Bennett inverse <= each applicable bound", "grid", seed);
            Ok(r.grid(worst, points))
        }
        "Lemma1A" => {
            let l = (6.0f64 / 5.0).sqrt();
            let d = cpoisson5();
            let tau = orlicz_norm(&YoungModulus::bennett(l)?, &d)?.value;
            let cert = TailCertificate::new(tau, l, HKind::H2)?;
            verify_tail_dominance(id, &d, &|z| tail_bound(&cert, z), &z_grid(&d, 200))
        }
        "Lemma2A" => {
            let (n, p) = (1000u64, 0.5f64);
            let cert = BennettSumSpec::bernoulli(n, p)?.certificate();
            let (modulus, claimed) = certificate_to_norm(&cert)?;
            verify_norm_certificate(id, &Distribution::bernoulli_mean(n, p)?, &modulus, claimed, seed)
        }
        "Lemma3A" => {
            let norm = NormBound { modulus: YoungModulus::bennett((6.0f64 / 5.0).sqrt())?, tau: 30f64.sqrt() };
            verify_max_expectation(id, &cpoisson5(), 1000, &norm, samples, seed)
        }
        "Lemma4A" | "Lemma12" => {
            let (d, cert, label) = if id == "Lemma4A" {
                (cpoisson5(), TailCertificate::new(30f64.sqrt(), (6.0f64 / 5.0).sqrt(), HKind::H2)?, "cpoisson:5")
            } else {
                let l = 1.0;
                let tau = orlicz_norm(&YoungModulus::scaled(HKind::H4, l)?, &gaussian())?.value;
                (gaussian(), TailCertificate::new(tau, l, HKind::H4)?, "gaussian:0,1")
            };
            let (m, t) = (100usize, 1.0);
            let mt = max_tail_bound(&cert, m as f64, t)?;
            let stat = simulate_max(&d, m, samples, seed, base, |x| if x >= mt.threshold { 1.0 } else { 0.0 });
            let check = format!("P(max of {m} |Z_j| >= {}) <= 2e^-1", mt.threshold);
            Ok(VerificationReport::new(id, &check, label, seed).judged(stat.value, mt.prob, stat.std_error, samples))
        }
        "Lemma5A" | "Lemma13" => {
            let (d, cert, route, label) = if id == "Lemma5A" {
                let cert = TailCertificate::new(30f64.sqrt(), (6.0f64 / 5.0).sqrt(), HKind::H2)?;
                (cpoisson5(), cert, ExcessRoute::Certificate, "cpoisson:5")
            } else {
                let l = 1.0;
                let tau = orlicz_norm(&YoungModulus::scaled(HKind::H4, l)?, &gaussian())?.value;
                (gaussian(), TailCertificate::new(tau, l, HKind::H4)?, ExcessRoute::Generic, "gaussian:0,1")
            };
            let m = 100usize;
            let bound = excess_max_norm_bound(&cert, m as f64)?
                .into_iter()
                .find(|b| b.route == route)
                .expect("both routes present");
            let stat = simulate_max(&d, m, samples, seed, base, |x| {
                let excess = (x - bound.center).max(0.0);
                bound.modulus.ln_eval(excess / bound.norm_bound).exp()
            });
            let check = format!(
                "E Psi((max of {m} |Z_j| - {})+ / {}) <= 1 for {}",
                bound.center, bound.norm_bound, bound.modulus
            );
            Ok(VerificationReport::new(id, &check, label, seed).judged(stat.value, 1.0, stat.std_error, samples))
        }
        "Corollary2i" => {
            let nu = 5.0f64;
            let modulus = YoungModulus::bennett((6.0 / nu).sqrt())?;
            verify_norm_certificate(id, &cpoisson5(), &modulus, (6.0 * nu).sqrt(), seed)
        }
        "Corollary2ii" => {
            let (n, p) = (100u64, 0.3f64);
            let v = p * (1.0 - p);
            let modulus = YoungModulus::bennett(2f64.sqrt() / (n as f64 * v).sqrt())?;
            verify_norm_certificate(id, &Distribution::bernoulli_mean(n, p)?, &modulus, (6.0 * v).sqrt(), seed)
        }
        "Corollary2iii" => verify_norm_certificate(id, &gaussian(), &YoungModulus::bennett(1.0)?, 6f64.sqrt(), seed),
        "Prop5" => {
            let (n, p) = (100u64, 0.3f64);
            let spec = BennettSumSpec::bernoulli(n, p)?;
            // exact ≤ Bennett ≤ Kruglov ≤ Prokhorov, folded into one bound
            let bound = |z: f64| -> Result<f64> {
                let b = bennett_tail(&spec, z, true)?;
                let k = prokhorov_tail(&spec, z, ProkhorovVariant::Kruglov)?;
                let pr = prokhorov_tail(&spec, z, ProkhorovVariant::Prokhorov)?;
                Ok(k - (b - k).max(0.0) - (k - pr).max(0.0))
            };
            let d = Distribution::bernoulli_mean(n, p)?;
            verify_tail_dominance(id, &d, &bound, &z_grid(&d, 200))
        }
        "Lemma8" => {
            let mut worst = f64::NEG_INFINITY;
            let xs = linspace(0.0, 100.0, 10_000);
            for &x in &xs {
                let m = check_h_inequalities(x)?;
                worst = worst.max(-m.min_margin());
            }
            let ys = logspace(1e-8, 1e4, 2000);
            for &y in &ys {
                let i2 = eval_h_inverse(HKind::H2, y)?;
                let i5 = eval_h_inverse(HKind::H5, y)?;
                let i4 = eval_h_inverse(HKind::H4, y)?;
                worst = worst.max(violation(i2, i5)).max(violation(i5, i4));
            }
            let r = VerificationReport::new(id, "h2 >= h5 >= h4, log lower bounds, inverse ordering", "grid", seed);
            Ok(r.grid(worst, xs.len() + ys.len()))
        }
        "Eq13" => {
            let xs = logspace(1e-6, 1e6, 5000);
            let mut worst = f64::NEG_INFINITY;
            for &x in &xs {
                worst = worst.max(-psi_log_lower_bound_margin(x)?);
            }
            Ok(VerificationReport::new(id, "x psi(x) >= 2 log(x/e)", "grid", seed).grid(worst, xs.len()))
        }
        "LemmaA1" => {
            let ys = std::iter::once(0.0).chain(logspace(1e-10, 1e8, 3000)).collect::<Vec<_>>();
            let mut worst = 0.0f64;
            for &y in &ys {
                for kind in [HKind::H, HKind::H2] {
                    let x = eval_h_inverse(kind, y)?;
                    worst = worst.max((eval_h(kind, x)? - y).abs() / y.max(1.0));
                }
            }
            let r = VerificationReport::new(id, "h(h^-1(y)) = y and h2(h2^-1(y)) = y via W", "grid", seed);
            Ok(r.judged(worst, EXACT_SLACK, 0.0, ys.len()))
        }
        "LemmaA2" => {
            let zs = logspace(1e-8, 1e8, 5000);
            let mut worst = f64::NEG_INFINITY;
            for &z in &zs {
                worst = worst.max(violation(w_lower_bound(z)?, lambert_w(z, WBranch::Principal)?));
            }
            Ok(VerificationReport::new(id, "W(z) >= (1 + log z)/2", "grid", seed).grid(worst, zs.len()))
        }
        "LemmaA3" => {
            let mut worst = f64::NEG_INFINITY;
            let mut points = 0;
            for y in logspace(1.0 + std::f64::consts::E + 1e-9, 1e10, 2000) {
                let tail = h2_inverse_upper_bound(y, H2InverseBound::TailForm)?;
                worst = worst.max(violation(eval_h_inverse(HKind::H2, y)?, tail));
                worst = worst.max(violation(eval_h_inverse(HKind::H, y)?, tail + 1.0));
                points += 1;
            }
            for &c in &[1.5, 2.0, 2.2, 3.0] {
                let limit = H2InverseBound::gauss_form_limit(c);
                for y in linspace(0.0, limit, 1000) {
                    let b = h2_inverse_upper_bound(y, H2InverseBound::GaussForm(c))?;
                    worst = worst.max(violation(eval_h_inverse(HKind::H2, y)?, b));
                    points += 1;
                }
            }
            let r = VerificationReport::new(id, "h^-1 and h2^-1 below their closed-form bounds", "grid", seed);
            Ok(r.grid(worst, points))
        }
        "Lemma9" => {
            let l = 1.0;
            let d = gaussian();
            let tau = orlicz_norm(&YoungModulus::scaled(HKind::H4, l)?, &d)?.value;
            let cert = TailCertificate::new(tau, l, HKind::H4)?;
            verify_tail_dominance(id, &d, &|z| tail_bound(&cert, z), &linspace(0.0, 12.0, 200))
        }
        "Lemma10" => {
            // erfc(z/√2) ≤ 2 exp(-z²/2) ≤ 2 exp(-2 h₅(z)), a valid h₅ certificate
            let cert = TailCertificate::new(1.0, 1.0, HKind::H5)?;
            let (modulus, claimed) = certificate_to_norm(&cert)?;
            verify_norm_certificate(id, &gaussian(), &modulus, claimed, seed)
        }
        "Lemma11" => {
            let l = 1.0;
            let modulus = YoungModulus::scaled(HKind::H4, l)?;
            let tau = orlicz_norm(&modulus, &gaussian())?.value;
            verify_max_expectation(id, &gaussian(), 1000, &NormBound { modulus, tau }, samples, seed)
        }
        other => Err(Error::UnknownLemma(other.to_string())),
    }
}
