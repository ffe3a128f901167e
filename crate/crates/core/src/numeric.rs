//! Small numerical helpers shared across modules.

/// Bisection for the root of a monotone function on `[lo, hi]`.
///
/// `f(lo)` and `f(hi)` must have opposite signs (zero counts as either).
/// Iterates until the bracket cannot be split further in floating point or
/// its relative width drops below `rel_tol`.
pub(crate) fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * hi.abs().max(lo.abs()) {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Natural log of `exp(t) - 1` without overflow for large `t`.
pub(crate) fn ln_expm1(t: f64) -> f64 {
    if t <= 0.0 {
        f64::NEG_INFINITY
    } else if t > 36.0 {
        t + (-(-t).exp()).ln_1p()
    } else {
        t.exp_m1().ln()
    }
}

/// `log(exp(a) + exp(b))`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Formats `v` with `sig` significant digits, `%g` style.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ln_expm1_matches_direct() {
        for t in [1e-8f64, 0.5, 3.0, 30.0, 40.0] {
            let direct = t.exp_m1().ln();
            assert!((ln_expm1(t) - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
        assert_eq!(ln_expm1(0.0), f64::NEG_INFINITY);
        assert!((ln_expm1(1000.0) - 1000.0).abs() < 1e-12);
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(fmt_sig(2.0, 15), "2");
        assert_eq!(fmt_sig(0.0, 15), "0");
        assert_eq!(fmt_sig(1.632993161855452, 15), "1.63299316185545");
        assert_eq!(fmt_sig(1e-7, 15), "1e-07");
        assert_eq!(fmt_sig(-2.5, 15), "-2.5");
        assert_eq!(fmt_sig(1e20, 15), "1e+20");
        let v = 0.1 + 0.2;
        assert_eq!(fmt_sig(v, 15), "0.3");
    }
}
