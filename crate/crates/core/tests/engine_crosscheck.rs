use orlicz::distributions::{monte_carlo_mean, Distribution};

#[test]
fn exact_engines_agree_with_ten_million_draws() {
    let models = [
        Distribution::gaussian(0.5, 1.3).unwrap(),
        Distribution::poisson(5.0).unwrap(),
        Distribution::centered_poisson(3.0).unwrap(),
        Distribution::bernoulli_mean(50, 0.3).unwrap(),
    ];
    let f = |x: f64| (x * x).min(100.0);
    for (i, d) in models.iter().enumerate() {
        let exact = d.expect(f).unwrap();
        assert!(exact.is_exact());
        let mc = monte_carlo_mean(d.sample_stream(10_000_000, 42, i as u64).into_iter().map(f));
        let z = (mc.value - exact.value) / mc.std_error;
        assert!(z.abs() <= 4.0, "{d}: exact {} vs mc {} +/- {}", exact.value, mc.value, mc.std_error);
    }
}

#[test]
fn poisson_sample_mean() {
    let s = Distribution::poisson(5.0).unwrap().sample(1_000_000, 42);
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    assert!((mean - 5.0).abs() <= 5.0 * (5.0f64 / 1e6).sqrt(), "{mean}");
}

#[test]
fn gaussian_sample_variance() {
    let s = Distribution::gaussian(0.0, 1.0).unwrap().sample(1_000_000, 42);
    let n = s.len() as f64;
    let mean = s.iter().sum::<f64>() / n;
    let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((var - 1.0).abs() <= 0.01, "{var}");
}

#[test]
fn large_binomial_falls_back_to_sampling() {
    let d = Distribution::bernoulli_mean(2_000_000, 0.4).unwrap();
    let e = d.expect(|x| x * x).unwrap();
    assert!(!e.is_exact());
    assert!((e.value - 0.24).abs() <= 4.0 * e.std_error + 1e-3, "{e:?}");
}
