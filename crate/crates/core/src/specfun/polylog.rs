//! Polylogarithms on the negative real axis and the real dilogarithm.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_traits::ToPrimitive;

use crate::specfun::zeta::bernoulli_over_factorial;

/// `Li_s(-e^(-w))` for integer `s ≥ 1` and `w ≥ 0`.
///
/// When `e^(-w) ≤ 1/2` the alternating defining series is summed directly.
/// Closer to the branch point `-1` the series is accelerated with the
/// Cohen-Rodriguez Villegas-Zagier scheme, which applies because the terms
/// `x^q / q^s` are moments of a positive measure on `[0, 1]`.
pub fn polylog_neg_exp(s: u32, w: f64) -> f64 {
    assert!(s >= 1, "polylog order must be at least 1");
    assert!(w >= 0.0, "w must be non-negative");
    let x = (-w).exp();
    if x == 0.0 {
        return 0.0;
    }
    let sf = s as i32;
    if x <= 0.5 {
        let mut acc = 0.0;
        let mut pw = 1.0;
        for q in 1..200 {
            pw *= -x;
            let term = pw / (q as f64).powi(sf);
            acc += term;
            if term.abs() < 1e-18 * acc.abs() {
                break;
            }
        }
        acc
    } else {
        // S = Σ_{k≥0} (-1)^k a_k with a_k = x^(k+1) / (k+1)^s; Li_s(-x) = -S.
        const N: i64 = 40;
        let mut d = (3.0 + 8f64.sqrt()).powi(N as i32);
        d = 0.5 * (d + 1.0 / d);
        let mut b = -1.0;
        let mut c = -d;
        let mut sum = 0.0;
        let mut pw = 1.0;
        for k in 0..N {
            pw *= x;
            let a_k = pw / ((k + 1) as f64).powi(sf);
            c = b - c;
            sum += c * a_k;
            let kf = k as f64;
            let nf = N as f64;
            b = (kf + nf) * (kf - nf) * b / ((kf + 0.5) * (kf + 1.0));
        }
        -(sum / d)
    }
}

/// `B_(2k) / (2k+1)!` for the dilogarithm's Bernoulli series.
fn dilog_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        (1..=22)
            .map(|k| {
                let b = bernoulli_over_factorial(2 * k).expect("tabulated").to_f64().unwrap();
                b / (2 * k + 1) as f64
            })
            .collect()
    })
}

/// Bernoulli series in `u = -ln(1-y)`, accurate for `-1 ≤ y ≤ 1/2`.
fn dilog_core(y: f64) -> f64 {
    let u = -(-y).ln_1p();
    let u2 = u * u;
    let mut acc = u - 0.25 * u2;
    let mut pw = u;
    for c in dilog_coefficients() {
        pw *= u2;
        acc += c * pw;
    }
    acc
}

/// The dilogarithm `Li₂(y)` for real `y ≤ 1`.
pub fn dilog(y: f64) -> f64 {
    assert!(y <= 1.0, "dilog needs y <= 1, use re_dilog above");
    let zeta2 = PI * PI / 6.0;
    if y == 1.0 {
        zeta2
    } else if y > 0.5 {
        zeta2 - y.ln() * (1.0 - y).ln() - dilog_core(1.0 - y)
    } else if y >= -1.0 {
        dilog_core(y)
    } else {
        let l = (-y).ln();
        -zeta2 - 0.5 * l * l - dilog_core(1.0 / y)
    }
}

/// `Re Li₂(y)` for real `y > 1`, from `π²/3 - (ln y)²/2 - Li₂(1/y)`.
pub fn re_dilog(y: f64) -> f64 {
    assert!(y > 1.0, "re_dilog needs y > 1");
    let l = y.ln();
    PI * PI / 3.0 - 0.5 * l * l - dilog(1.0 / y)
}
