//! Modified Bessel functions of the second kind for integer order.
//!
//! `K0` and `K1` come from their ascending series for `z <= 2` and from
//! Steed's evaluation of Temme's second continued fraction above. Higher
//! orders follow from the upward recurrence `K(n+1) = K(n-1) + 2n/z K(n)`,
//! which is stable for the second kind.

use crate::constants::EULER_GAMMA;
use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 2.0;

fn series_k0_k1(z: f64) -> (f64, f64) {
    let q = 0.25 * z * z;
    let ln_half = (0.5 * z).ln();

    // I0, I1 and the harmonic-number sums, accumulated together.
    let mut term0 = 1.0; // q^k / (k!)^2
    let mut term1 = 1.0; // q^k / (k! (k+1)!)
    let mut i0 = 0.0;
    let mut i1 = 0.0;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut harmonic = 0.0; // H_k
    for k in 0..60 {
        let kf = k as f64;
        if k > 0 {
            harmonic += 1.0 / kf;
            term0 *= q / (kf * kf);
            term1 *= q / (kf * (kf + 1.0));
        }
        let psi_k1 = -EULER_GAMMA + harmonic;
        let psi_k2 = psi_k1 + 1.0 / (kf + 1.0);
        i0 += term0;
        i1 += term1;
        s0 += term0 * psi_k1;
        s1 += term1 * (psi_k1 + psi_k2);
        if term0 < 1e-18 * i0 && term1 < 1e-18 * i1 {
            break;
        }
    }
    let i1 = 0.5 * z * i1;
    let k0 = -ln_half * i0 + s0;
    let k1 = 1.0 / z + ln_half * i1 - 0.25 * z * s1;
    (k0, k1)
}

fn continued_fraction_k0_k1(z: f64) -> (f64, f64) {
    const EPS: f64 = 1e-17;
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp() / s;
    let k1 = k0 * (z + 0.5 - h) / z;
    (k0, k1)
}

/// `(K0(z), K1(z))` for `z > 0`.
pub fn bessel_k0_k1(z: f64) -> Result<(f64, f64)> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("bessel_k", format!("z must be positive, got {z}")));
    }
    let pair = if z <= SERIES_LIMIT {
        series_k0_k1(z)
    } else {
        continued_fraction_k0_k1(z)
    };
    if !pair.1.is_finite() {
        return Err(Error::range("bessel_k", format!("K1({z}) overflows")));
    }
    Ok(pair)
}

/// `K_nu(z)` for non-negative integer `nu` and `z > 0`.
pub fn bessel_k(nu: u32, z: f64) -> Result<f64> {
    let (k0, k1) = bessel_k0_k1(z)?;
    match nu {
        0 => Ok(k0),
        1 => Ok(k1),
        _ => {
            let seq = upward(k0, k1, nu, z);
            let v = seq[nu as usize];
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::range("bessel_k", format!("K_{nu}({z}) overflows")))
            }
        }
    }
}

/// `[K0(z), ..., K_nmax(z)]`.
pub fn bessel_k_sequence(nmax: u32, z: f64) -> Result<Vec<f64>> {
    let (k0, k1) = bessel_k0_k1(z)?;
    let seq = upward(k0, k1, nmax.max(1), z);
    if seq.iter().any(|v| !v.is_finite()) {
        return Err(Error::range("bessel_k", format!("K_{nmax}({z}) overflows")));
    }
    Ok(seq[..=nmax as usize].to_vec())
}

fn upward(k0: f64, k1: f64, nmax: u32, z: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax as usize + 1);
    out.push(k0);
    out.push(k1);
    for n in 1..nmax {
        let next = out[n as usize - 1] + 2.0 * n as f64 / z * out[n as usize];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_log_singularity() {
        for z in [1e-6, 1e-8, 1e-10] {
            let v = bessel_k(0, z).unwrap() + (0.5 * z).ln() + EULER_GAMMA;
            assert!(v.abs() < 1e-9, "z={z} residual={v}");
        }
    }

    #[test]
    fn k1_pole_residue() {
        for z in [1e-6, 1e-9] {
            let v = z * bessel_k(1, z).unwrap();
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn series_and_fraction_agree_at_switch() {
        for (z, tol) in [(1.5, 5e-15), (2.0, 5e-15), (2.5, 5e-14), (3.0, 5e-14)] {
            let (a0, a1) = series_k0_k1(z);
            let (b0, b1) = continued_fraction_k0_k1(z);
            assert!((a0 / b0 - 1.0).abs() < tol, "K0 {z}: {a0} {b0}");
            assert!((a1 / b1 - 1.0).abs() < tol, "K1 {z}: {a1} {b1}");
        }
    }

    #[test]
    fn wronskian_like_identity() {
        // K2 = K0 + 2/z K1
        let z = 0.7;
        let k2 = bessel_k(2, z).unwrap();
        let (k0, k1) = bessel_k0_k1(z).unwrap();
        assert!((k2 - (k0 + 2.0 / z * k1)).abs() < 1e-14 * k2);
    }

    #[test]
    fn domain_and_range() {
        assert!(matches!(bessel_k(0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_k(0, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_k(1, 1e-320), Err(Error::Range { .. })));
        assert_eq!(bessel_k(0, 800.0).unwrap(), 0.0);
    }
}
