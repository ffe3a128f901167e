//! Random-variable models with exact expectation engines and seeded samplers.
//!
//! Expectations are accumulated in log space: integrands report `log f(x)`
//! and are combined with the log density/mass, so `E Ψ(|X|/c)` never turns
//! into `0·∞` when the modulus overflows where the mass underflows.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution as _, Normal, Poisson};
use serde::{Deserialize, Serialize};
use libm::{erfc, lgamma as ln_gamma};

use crate::error::{domain, Error, Result};
use crate::numeric::log_add_exp;

/// Largest `n` for which the standardized Bernoulli mean is summed exactly.
pub const EXACT_BINOMIAL_LIMIT: u64 = 1_000_000;
/// Draws used when an engine falls back to Monte Carlo.
pub const FALLBACK_SAMPLES: usize = 1_000_000;
/// Half-width, in standard deviations, of the core Gaussian quadrature window.
const GAUSS_CORE_HALF_WIDTH: f64 = 12.0;
const GAUSS_MAX_HALF_WIDTH: f64 = 32768.0;
/// How far the tail is probed pointwise for regrowth of the integrand.
const GAUSS_PROBE_HALF_WIDTH: f64 = 1e150;
/// Relative size below which a series term or quadrature segment is dropped.
const NEGLIGIBLE: f64 = 1e-17;
/// `log` of the largest expectation reported as finite.
const LN_OVERFLOW: f64 = 700.0;

/// A random-variable model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Distribution {
    Gaussian { mu: f64, sigma: f64 },
    Poisson { nu: f64 },
    /// `X - ν` for `X ~ Poisson(ν)`.
    CenteredPoisson { nu: f64 },
    /// `√n(X̄ₙ - p)` for i.i.d. Bernoulli(p) summands.
    StandardizedBernoulliMean { n: u64, p: f64 },
    Empirical { samples: Vec<f64> },
}

/// An expectation together with its Monte Carlo standard error (zero for
/// the exact engines).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectation {
    pub value: f64,
    pub std_error: f64,
}

impl Expectation {
    fn exact(value: f64) -> Self {
        Expectation { value, std_error: 0.0 }
    }

    pub fn is_exact(&self) -> bool {
        self.std_error == 0.0
    }
}

impl Distribution {
    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        Distribution::Gaussian { mu, sigma }.validated()
    }

    pub fn poisson(nu: f64) -> Result<Self> {
        Distribution::Poisson { nu }.validated()
    }

    pub fn centered_poisson(nu: f64) -> Result<Self> {
        Distribution::CenteredPoisson { nu }.validated()
    }

    pub fn bernoulli_mean(n: u64, p: f64) -> Result<Self> {
        Distribution::StandardizedBernoulliMean { n, p }.validated()
    }

    pub fn empirical(samples: Vec<f64>) -> Result<Self> {
        Distribution::Empirical { samples }.validated()
    }

    /// Checks the parameter invariants.
    pub fn validated(self) -> Result<Self> {
        match &self {
            Distribution::Gaussian { mu, sigma } => {
                if !mu.is_finite() || !(*sigma > 0.0) || !sigma.is_finite() {
                    return domain(format!("gaussian needs finite mu and sigma > 0, got ({mu}, {sigma})"));
                }
            }
            Distribution::Poisson { nu } | Distribution::CenteredPoisson { nu } => {
                if !(*nu > 0.0) || !nu.is_finite() {
                    return domain(format!("poisson needs nu > 0, got {nu}"));
                }
            }
            Distribution::StandardizedBernoulliMean { n, p } => {
                if *n < 1 || !(*p > 0.0 && *p < 1.0) {
                    return domain(format!("bernoulli mean needs n >= 1 and 0 < p < 1, got ({n}, {p})"));
                }
            }
            Distribution::Empirical { samples } => {
                if samples.is_empty() {
                    return domain("empirical distribution needs at least one sample");
                }
                if samples.iter().any(|v| !v.is_finite()) {
                    return domain("empirical samples must be finite");
                }
            }
        }
        Ok(self)
    }

    /// Reads an empirical distribution from a file with one value per line.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let mut samples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let field = line.split(',').next().unwrap_or(line).trim();
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("{}:{}: not a number: `{line}`", path.display(), i + 1)))?;
            samples.push(v);
        }
        Distribution::empirical(samples)
    }

    /// Mean of the model; the center used by [`Distribution::exact_tail`].
    pub fn mean(&self) -> f64 {
        match self {
            Distribution::Gaussian { mu, .. } => *mu,
            Distribution::Poisson { nu } => *nu,
            Distribution::CenteredPoisson { .. } | Distribution::StandardizedBernoulliMean { .. } => 0.0,
            Distribution::Empirical { samples } => samples.iter().sum::<f64>() / samples.len() as f64,
        }
    }

    /// `E X²`.
    pub fn second_moment(&self) -> f64 {
        match self {
            Distribution::Gaussian { mu, sigma } => mu * mu + sigma * sigma,
            Distribution::Poisson { nu } => nu + nu * nu,
            Distribution::CenteredPoisson { nu } => *nu,
            Distribution::StandardizedBernoulliMean { p, .. } => p * (1.0 - p),
            Distribution::Empirical { samples } => {
                samples.iter().map(|v| v * v).sum::<f64>() / samples.len() as f64
            }
        }
    }

    /// `true` when the model is almost surely zero.
    pub fn is_point_mass_at_zero(&self) -> bool {
        matches!(self, Distribution::Empirical { samples } if samples.iter().all(|&v| v == 0.0))
    }

    /// Canonical spec string, as accepted by the `FromStr` impl (empirical
    /// models are summarised rather than listed).
    pub fn spec_string(&self) -> String {
        match self {
            Distribution::Gaussian { mu, sigma } => format!("gaussian:{mu},{sigma}"),
            Distribution::Poisson { nu } => format!("poisson:{nu}"),
            Distribution::CenteredPoisson { nu } => format!("cpoisson:{nu}"),
            Distribution::StandardizedBernoulliMean { n, p } => format!("bmean:{n},{p}"),
            Distribution::Empirical { samples } => format!("empirical:<{} values>", samples.len()),
        }
    }

    /// `E f(X)` for a nonnegative integrand nondecreasing in `|x|`.
    pub fn expect(&self, f: impl Fn(f64) -> f64) -> Result<Expectation> {
        let invalid = std::cell::Cell::new(None);
        let ln_f = |x: f64| {
            let v = f(x);
            if !(v >= 0.0) {
                invalid.set(Some(x));
                return f64::NEG_INFINITY;
            }
            v.ln()
        };
        let out = self.expect_ln(ln_f);
        if let Some(x) = invalid.get() {
            return Err(Error::InvalidIntegrand(format!("negative or NaN value at x = {x}")));
        }
        out
    }

    /// `E f(X)` where the closure returns `log f(x)` (`-∞` where `f` is zero).
    pub fn expect_ln(&self, ln_f: impl Fn(f64) -> f64) -> Result<Expectation> {
        match self {
            Distribution::Gaussian { mu, sigma } => gaussian_expect(*mu, *sigma, &ln_f).map(Expectation::exact),
            Distribution::Poisson { nu } => poisson_expect(*nu, 0.0, &ln_f).map(Expectation::exact),
            Distribution::CenteredPoisson { nu } => poisson_expect(*nu, *nu, &ln_f).map(Expectation::exact),
            Distribution::StandardizedBernoulliMean { n, p } => {
                if *n <= EXACT_BINOMIAL_LIMIT {
                    binomial_expect(*n, *p, &ln_f).map(Expectation::exact)
                } else {
                    let draws = self.sample(FALLBACK_SAMPLES, 0x5eed_0fb1);
                    Ok(monte_carlo_mean(draws.iter().map(|&x| ln_f(x).exp())))
                }
            }
            Distribution::Empirical { samples } => {
                let mut lse = f64::NEG_INFINITY;
                for &x in samples {
                    let t = ln_f(x);
                    if t.is_nan() {
                        return Err(Error::InvalidIntegrand(format!("NaN log-value at x = {x}")));
                    }
                    lse = log_add_exp(lse, t);
                }
                Ok(Expectation::exact(finish_lse(lse - (samples.len() as f64).ln())?))
            }
        }
    }

    /// `P(|X - mean| ≥ z)`, exactly.
    pub fn exact_tail(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) {
            return domain(format!("exact tail needs z >= 0, got {z}"));
        }
        if z == 0.0 {
            if let Distribution::Empirical { .. } = self {
                return Err(Error::Unsupported("exact tail of an empirical distribution".into()));
            }
            return Ok(1.0);
        }
        match self {
            Distribution::Gaussian { sigma, .. } => Ok(erfc(z / (sigma * SQRT_2))),
            Distribution::Poisson { nu } | Distribution::CenteredPoisson { nu } => Ok(poisson_two_sided_tail(*nu, z)),
            Distribution::StandardizedBernoulliMean { n, p } => Ok(binomial_two_sided_tail(*n, *p, z)),
            Distribution::Empirical { .. } => Err(Error::Unsupported("exact tail of an empirical distribution".into())),
        }
    }

    /// `count` draws from the model, reproducible from `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<f64> {
        self.sample_stream(count, seed, 0)
    }

    /// Like [`Distribution::sample`] but on an independent stream of the same
    /// root seed, for sharded simulations.
    pub fn sample_stream(&self, count: usize, seed: u64, stream: u64) -> Vec<f64> {
        let mut rng = stream_rng(seed, stream);
        let sampler = self.sampler();
        (0..count).map(|_| sampler.draw(&mut rng)).collect()
    }

    /// A reusable sampler for tight simulation loops.
    pub fn sampler(&self) -> Sampler {
        match self {
            Distribution::Gaussian { mu, sigma } => {
                Sampler::Gaussian(Normal::new(*mu, *sigma).expect("validated sigma"))
            }
            Distribution::Poisson { nu } => Sampler::Poisson(Poisson::new(*nu).expect("validated nu"), 0.0),
            Distribution::CenteredPoisson { nu } => Sampler::Poisson(Poisson::new(*nu).expect("validated nu"), *nu),
            Distribution::StandardizedBernoulliMean { n, p } => Sampler::BernoulliMean {
                dist: Binomial::new(*n, *p).expect("validated p"),
                n: *n as f64,
                p: *p,
            },
            Distribution::Empirical { samples } => Sampler::Empirical(samples.clone()),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    /// Parses `gaussian:mu,sigma`, `poisson:nu`, `cpoisson:nu`, `bmean:n,p`
    /// or `empirical:@file`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("distribution spec `{s}` lacks `name:params`")))?;
        let nums = |expected: usize| -> Result<Vec<f64>> {
            let v: Vec<f64> = args
                .split(',')
                .map(|a| a.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("bad numbers in `{s}`")))?;
            if v.len() != expected {
                return Err(Error::Parse(format!("`{name}` takes {expected} parameter(s), got `{args}`")));
            }
            Ok(v)
        };
        match name.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => {
                let v = nums(2)?;
                Distribution::gaussian(v[0], v[1])
            }
            "poisson" => Distribution::poisson(nums(1)?[0]),
            "cpoisson" => Distribution::centered_poisson(nums(1)?[0]),
            "bmean" => {
                let v = nums(2)?;
                if v[0] < 1.0 || v[0].fract() != 0.0 {
                    return Err(Error::Parse(format!("bmean needs an integer n >= 1, got {}", v[0])));
                }
                Distribution::bernoulli_mean(v[0] as u64, v[1])
            }
            "empirical" => {
                let path = args
                    .strip_prefix('@')
                    .ok_or_else(|| Error::Parse("empirical spec must be `empirical:@file`".into()))?;
                Distribution::from_file(path)
            }
            other => Err(Error::Parse(format!("unknown distribution `{other}`"))),
        }
    }
}

/// Sampling state for one model.
#[derive(Debug, Clone)]
pub enum Sampler {
    Gaussian(Normal<f64>),
    /// Poisson draw minus the stored offset.
    Poisson(Poisson<f64>, f64),
    BernoulliMean { dist: Binomial, n: f64, p: f64 },
    Empirical(Vec<f64>),
}

impl Sampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Gaussian(d) => d.sample(rng),
            Sampler::Poisson(d, offset) => d.sample(rng) - offset,
            Sampler::BernoulliMean { dist, n, p } => {
                let k = dist.sample(rng) as f64;
                n.sqrt() * (k / n - p)
            }
            Sampler::Empirical(v) => v[rng.random_range(0..v.len())],
        }
    }
}

/// ChaCha8 generator on `stream` of the root `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mean and standard error of i.i.d. values (Welford).
pub fn monte_carlo_mean(values: impl Iterator<Item = f64>) -> Expectation {
    let mut n = 0.0;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for v in values {
        n += 1.0;
        let d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
    let var = if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
    Expectation { value: mean, std_error: (var / n).sqrt() }
}

fn finish_lse(lse: f64) -> Result<f64> {
    if lse.is_nan() {
        return Err(Error::InvalidIntegrand("NaN encountered in expectation".into()));
    }
    if lse > LN_OVERFLOW {
        return Err(Error::Divergent(format!("expectation exceeds e^{LN_OVERFLOW}")));
    }
    Ok(lse.exp())
}

fn ln_poisson_pmf(nu: f64, k: f64) -> f64 {
    k * nu.ln() - nu - ln_gamma(k + 1.0)
}

/// Log-space sum of `p_k f(k - offset)` over Poisson(nu) mass points.
fn poisson_expect(nu: f64, offset: f64, ln_f: &dyn Fn(f64) -> f64) -> Result<f64> {
    let window_end = (nu + 40.0 * nu.sqrt() + 50.0).ceil() as u64;
    let mode = nu.floor();
    let ln_nu = nu.ln();
    // pmf by recurrence outward from the mode
    let ln_p_mode = ln_poisson_pmf(nu, mode);
    let mode = mode as u64;
    let mut ln_mass = f64::NEG_INFINITY;
    let mut lse = f64::NEG_INFINITY;
    let add = |k: u64, ln_p: f64, ln_mass: &mut f64, lse: &mut f64| -> Result<f64> {
        let lf = ln_f(k as f64 - offset);
        if lf.is_nan() {
            return Err(Error::InvalidIntegrand(format!("NaN log-value at k = {k}")));
        }
        *ln_mass = log_add_exp(*ln_mass, ln_p);
        let t = ln_p + lf;
        *lse = log_add_exp(*lse, t);
        Ok(t)
    };
    let mut ln_p = ln_p_mode;
    for k in (0..mode).rev() {
        ln_p += ((k + 1) as f64).ln() - ln_nu;
        add(k, ln_p, &mut ln_mass, &mut lse)?;
    }
    ln_p = ln_p_mode;
    let mut prev_term = add(mode, ln_p, &mut ln_mass, &mut lse)?;
    let mut k = mode;
    let mut checkpoint = lse;
    let cap = window_end + 10_000_000;
    loop {
        k += 1;
        ln_p += ln_nu - (k as f64).ln();
        let t = add(k, ln_p, &mut ln_mass, &mut lse)?;
        if k > window_end {
            if t < lse + NEGLIGIBLE.ln() && t <= prev_term {
                break;
            }
            if (k - window_end).is_multiple_of(10) {
                if lse - checkpoint > 1e6f64.ln() {
                    return Err(Error::Divergent(format!(
                        "Poisson series grows by more than 1e6 over ten terms near k = {k}"
                    )));
                }
                checkpoint = lse;
            }
            if k >= cap || lse > LN_OVERFLOW {
                return Err(Error::Divergent(format!("Poisson series not summable (stopped at k = {k})")));
            }
        }
        prev_term = t;
    }
    finish_lse(lse - ln_mass)
}

fn ln_binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    ln_gamma(nf + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0) + kf * p.ln() + (nf - kf) * (-p).ln_1p()
}

fn binomial_expect(n: u64, p: f64, ln_f: &dyn Fn(f64) -> f64) -> Result<f64> {
    let nf = n as f64;
    let scale = nf.sqrt();
    let mut lse = f64::NEG_INFINITY;
    let mut ln_mass = f64::NEG_INFINITY;
    for k in 0..=n {
        let ln_p = ln_binomial_pmf(n, p, k);
        let x = scale * (k as f64 / nf - p);
        let lf = ln_f(x);
        if lf.is_nan() {
            return Err(Error::InvalidIntegrand(format!("NaN log-value at x = {x}")));
        }
        ln_mass = log_add_exp(ln_mass, ln_p);
        lse = log_add_exp(lse, ln_p + lf);
    }
    finish_lse(lse - ln_mass)
}

/// Whether lattice point `dev` (a distance from the mean) counts toward
/// `P(|X - mean| ≥ z)`; atoms sitting on `z` up to round-off are included.
fn reaches(dev: f64, z: f64) -> bool {
    dev >= z * (1.0 - 1e-12) - 1e-12
}

fn poisson_two_sided_tail(nu: f64, z: f64) -> f64 {
    // upper: k >= nu + z
    let mut k = (nu + z).floor().max(0.0) as u64;
    while !reaches(k as f64 - nu, z) {
        k += 1;
    }
    let mut ln_p = ln_poisson_pmf(nu, k as f64);
    let mut upper = f64::NEG_INFINITY;
    loop {
        upper = log_add_exp(upper, ln_p);
        k += 1;
        ln_p += nu.ln() - (k as f64).ln();
        if ln_p < upper + NEGLIGIBLE.ln() && k as f64 > nu {
            break;
        }
    }
    // lower: k <= nu - z
    let mut lower = f64::NEG_INFINITY;
    let top = (nu - z).ceil();
    if top >= 0.0 {
        let mut k = top as u64;
        while k > 0 && !reaches(nu - k as f64, z) {
            k -= 1;
        }
        if reaches(nu - k as f64, z) {
            let mut ln_p = ln_poisson_pmf(nu, k as f64);
            loop {
                lower = log_add_exp(lower, ln_p);
                if k == 0 {
                    break;
                }
                ln_p += (k as f64).ln() - nu.ln();
                k -= 1;
                if ln_p < lower + NEGLIGIBLE.ln() {
                    break;
                }
            }
        }
    }
    log_add_exp(upper, lower).exp().min(1.0)
}

fn binomial_two_sided_tail(n: u64, p: f64, z: f64) -> f64 {
    let nf = n as f64;
    let threshold = z * nf.sqrt();
    let mut tail = f64::NEG_INFINITY;
    let mut mass = f64::NEG_INFINITY;
    for k in 0..=n {
        let ln_p = ln_binomial_pmf(n, p, k);
        mass = log_add_exp(mass, ln_p);
        if reaches((k as f64 - nf * p).abs(), threshold) {
            tail = log_add_exp(tail, ln_p);
        }
    }
    (tail - mass).exp().min(1.0)
}

// --- Gaussian quadrature -----------------------------------------------------

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Gauss-Kronrod rule with its embedded 7-point Gauss estimate.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod on `[a, b]` to relative tolerance `rel_tol`.
pub(crate) fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (v, e) = gk15(f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    for _ in 0..4000 {
        if err <= rel_tol * total.abs() || !total.is_finite() {
            break;
        }
        // split the interval with the largest error estimate
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty");
        let (lo, hi, v, e) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            intervals.push((lo, hi, v, 0.0));
            continue;
        }
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        total += v1 + v2 - v;
        err += e1 + e2 - e;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    intervals.iter().map(|iv| iv.2).sum()
}

fn gaussian_expect(mu: f64, sigma: f64, ln_f: &dyn Fn(f64) -> f64) -> Result<f64> {
    let ln_norm = -(sigma * (2.0 * PI).sqrt()).ln();
    let nan_seen = std::cell::Cell::new(false);
    let ln_integrand = |x: f64| {
        let z = (x - mu) / sigma;
        ln_f(x) - 0.5 * z * z + ln_norm
    };
    let integrand = |x: f64| {
        let t = ln_integrand(x);
        if t.is_nan() {
            nan_seen.set(true);
            return 0.0;
        }
        t.exp()
    };
    let mut breaks = vec![mu - GAUSS_CORE_HALF_WIDTH * sigma, mu, mu + GAUSS_CORE_HALF_WIDTH * sigma];
    if breaks[0] < 0.0 && 0.0 < breaks[2] && mu != 0.0 {
        breaks.push(0.0);
        breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    }
    let rel_tol = 1e-13;
    let mut total: f64 = breaks.windows(2).map(|w| integrate(&integrand, w[0], w[1], rel_tol)).sum();
    let mut radius = GAUSS_CORE_HALF_WIDTH;
    // a negligible segment can sit in a dip of an integrand that regrows further out
    let mass_beyond = |radius: f64, total: f64| {
        let cutoff = (NEGLIGIBLE * total.max(f64::MIN_POSITIVE)).ln();
        let mut r = radius;
        while r < GAUSS_PROBE_HALF_WIDTH {
            r *= 1.5;
            let width = (0.5 * r * sigma).ln();
            // an overflowed f says nothing about the true integrand
            let t = [ln_integrand(mu + r * sigma), ln_integrand(mu - r * sigma)]
                .into_iter()
                .filter(|t| t.is_finite())
                .fold(f64::NEG_INFINITY, f64::max);
            if t + width > cutoff {
                return true;
            }
        }
        false
    };
    loop {
        if nan_seen.get() {
            return Err(Error::InvalidIntegrand("NaN in Gaussian integrand".into()));
        }
        if !total.is_finite() || total > LN_OVERFLOW.exp() {
            return Err(Error::Divergent("Gaussian expectation overflows".into()));
        }
        let next = radius * 1.5;
        let seg = integrate(&integrand, mu + radius * sigma, mu + next * sigma, rel_tol)
            + integrate(&integrand, mu - next * sigma, mu - radius * sigma, rel_tol);
        total += seg;
        radius = next;
        if !total.is_finite() || total > LN_OVERFLOW.exp() {
            return Err(Error::Divergent("Gaussian expectation overflows".into()));
        }
        if (seg == 0.0 || seg <= NEGLIGIBLE * total) && !mass_beyond(radius, total) {
            break;
        }
        if radius > GAUSS_MAX_HALF_WIDTH {
            return Err(Error::Divergent(format!(
                "Gaussian tail contribution still {seg:e} at {radius} standard deviations"
            )));
        }
    }
    if nan_seen.get() {
        return Err(Error::InvalidIntegrand("NaN in Gaussian integrand".into()));
    }
    Ok(total)
}
