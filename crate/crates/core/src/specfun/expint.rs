//! Exponential integral, its derivatives, the upper incomplete gamma function of
//! integer order, and the hyperbolic sine and cosine integrals.

use crate::constants::EULER_GAMMA;
use crate::error::{Error, Result};

/// `E1(z) = ∫₁^∞ e^(-zt)/t dt` for `z > 0`.
pub fn e1(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("e1", format!("z must be positive, got {z}")));
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    if z <= 1.0 {
        let mut term = 1.0;
        let mut acc = 0.0;
        for k in 1..100 {
            let kf = k as f64;
            term *= -z / kf;
            let t = -term / kf;
            acc += t;
            if t.abs() < 1e-17 * acc.abs() {
                break;
            }
        }
        Ok(acc - EULER_GAMMA - z.ln())
    } else {
        // Modified Lentz on the continued fraction for e^z E1(z).
        const TINY: f64 = 1e-300;
        let mut b = z + 1.0;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok(h * (-z).exp())
    }
}

/// `Γ(n, z) = ∫_z^∞ t^(n-1) e^(-t) dt` for integer `n ≥ 1`, `z ≥ 0`.
pub fn upper_gamma(n: u32, z: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("upper_gamma", "n must be at least 1"));
    }
    if z.is_nan() || z < 0.0 {
        return Err(Error::domain("upper_gamma", format!("z must be non-negative, got {z}")));
    }
    // (n-1)! e^-z Σ_{k<n} z^k / k!
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 1..n {
        term *= z / k as f64;
        acc += term;
    }
    let mut fact = 1.0;
    for k in 2..n {
        fact *= k as f64;
    }
    Ok(fact * (-z).exp() * acc)
}

/// `dⁿE1/dzⁿ = (-1/z)ⁿ Γ(n, z)` for `n ≥ 1`, `z > 0`.
pub fn e1_derivative(n: u32, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("e1_derivative", format!("z must be positive, got {z}")));
    }
    let g = upper_gamma(n, z)?;
    Ok((-1.0 / z).powi(n as i32) * g)
}

/// `(Shi(z), Chi(z))` for `z > 0`.
///
/// The Taylor series is used up to `z = 40`; above that `Ei(z)` comes from its
/// asymptotic series and `Shi = (Ei + E1)/2`, `Chi = (Ei - E1)/2`.
pub fn shi_chi(z: f64) -> Result<(f64, f64)> {
    if !(z > 0.0) {
        return Err(Error::domain("shi_chi", format!("z must be positive, got {z}")));
    }
    if z > 700.0 {
        return Err(Error::range("shi_chi", format!("Shi({z}) overflows")));
    }
    if z <= 40.0 {
        Ok(shi_chi_series(z))
    } else {
        shi_chi_asymptotic(z)
    }
}

fn shi_chi_series(z: f64) -> (f64, f64) {
    // Shi = Σ z^(2k+1) / ((2k+1)(2k+1)!), Chi - γ - ln z = Σ z^(2k) / (2k (2k)!)
    let mut p = z; // z^(2k+1)/(2k+1)!
    let mut shi = z;
    let mut chi = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let q = p * z / (2.0 * kf); // z^(2k)/(2k)!
        p = q * z / (2.0 * kf + 1.0);
        let ts = p / (2.0 * kf + 1.0);
        let tc = q / (2.0 * kf);
        shi += ts;
        chi += tc;
        if ts < 1e-18 * shi && tc < 1e-18 * chi.abs().max(1e-300) {
            break;
        }
    }
    (shi, chi + EULER_GAMMA + z.ln())
}

fn shi_chi_asymptotic(z: f64) -> Result<(f64, f64)> {
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 1..100 {
        let next = term * k as f64 / z;
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        acc += term;
        if term < 1e-18 * acc {
            break;
        }
    }
    let ei = z.exp() / z * acc;
    let e = e1(z)?;
    Ok((0.5 * (ei + e), 0.5 * (ei - e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accuracy::AccuracyControl;
    use crate::quadrature::integrate_to_infinity;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn e1_limits() {
        for z in [1e-8, 1e-10] {
            assert!((e1(z).unwrap() + EULER_GAMMA + z.ln()).abs() < 1e-7);
        }
        let z = 600.0;
        assert!((e1(z).unwrap() * z * z.exp() - 1.0).abs() < 2e-3);
    }

    #[test]
    fn e1_matches_oracle() {
        let ctrl = AccuracyControl::with_tol(1e-14).unwrap();
        for z in [0.1, 0.9, 1.0, 1.1, 2.0, 7.5, 30.0] {
            let o = integrate_to_infinity(|t| (-z * t).exp() / t, 1.0, &ctrl)
                .unwrap()
                .value;
            assert!(rel(e1(z).unwrap(), o) < 1e-13, "z={z}");
        }
    }

    #[test]
    fn upper_gamma_values() {
        assert!((upper_gamma(1, 0.7).unwrap() - (-0.7f64).exp()).abs() < 1e-16);
        assert_eq!(upper_gamma(4, 0.0).unwrap(), 6.0);
        let ctrl = AccuracyControl::with_tol(1e-14).unwrap();
        let o = integrate_to_infinity(|t| t * t * (-t).exp(), 1.0, &ctrl)
            .unwrap()
            .value;
        assert!(rel(upper_gamma(3, 1.0).unwrap(), o) < 1e-13);
        assert!(upper_gamma(0, 1.0).is_err());
    }

    #[test]
    fn e1_derivative_low_orders() {
        let z = 1.3f64;
        assert!(rel(e1_derivative(1, z).unwrap(), -(-z).exp() / z) < 1e-15);
        assert!(rel(e1_derivative(2, z).unwrap(), (-z).exp() * (1.0 + z) / (z * z)) < 1e-15);
    }

    #[test]
    fn e1_derivative_finite_difference() {
        let z = 1.5;
        let h = 1e-3;
        let f = |x: f64| e1(x).unwrap();
        let fd3 = (f(z + 2.0 * h) - 2.0 * f(z + h) + 2.0 * f(z - h) - f(z - 2.0 * h)) / (2.0 * h * h * h);
        assert!(rel(e1_derivative(3, z).unwrap(), fd3) < 1e-5);
    }

    #[test]
    fn shi_chi_limits_and_identity() {
        let z = 1e-6;
        let (s, c) = shi_chi(z).unwrap();
        assert!((s / z - 1.0).abs() < 1e-12);
        assert!((c - EULER_GAMMA - z.ln()).abs() < 1e-12);
        for z in [0.01, 0.5, 2.0, 10.0, 30.0, 39.9, 40.1, 100.0] {
            let (s, c) = shi_chi(z).unwrap();
            let e = e1(z).unwrap();
            let scale = s.abs().max(c.abs());
            assert!(((s - c) - e).abs() < 1e-14 * scale + 1e-11 * e, "z={z}");
        }
        assert!(shi_chi(800.0).is_err());
    }

    #[test]
    fn shi_chi_continuous_at_switch() {
        let (s1, c1) = shi_chi_series(40.0);
        let (s2, c2) = shi_chi_asymptotic(40.0).unwrap();
        assert!(rel(s1, s2) < 1e-12 && rel(c1, c2) < 1e-12, "{s1} {s2} {c1} {c2}");
    }
}
