//! Bickley-Naylor functions `Ki_n(z) = ∫₀^∞ e^(-z cosh t) sech^n t dt`.
//!
//! Three regimes:
//!
//! * `z <= 2`: the ascending series, whose logarithmic part is
//!   `(-z)^n Σ_k (z/2)^(2k) (2k)! / ((k!)² (n+2k)!) [Φ(k+1) - Φ(2k+1) + Φ(2k+n+1) - γ - ln(z/2)]`;
//! * `z >= 40 + 3n`: the asymptotic expansion in `1/z`, truncated at its
//!   smallest term;
//! * in between, for `z <= 10` and `n <= 12`: `Ki_1` by the trapezoidal rule on
//!   the defining integral, `K0` and `K1` from [`bessel_k0_k1`], and the
//!   three-term recurrence `(n-1) Ki_n = (n-2) Ki_(n-2) + z (Ki_(n-3) - Ki_(n-1))`
//!   run upward with `Ki_(-1) = K1`, `Ki_0 = K0`;
//! * elsewhere in between: the trapezoidal rule for `Ki_n` itself. The
//!   integrand is analytic in a strip around the real axis and decays
//!   double-exponentially, so the rule converges geometrically.

use crate::constants::EULER_GAMMA;
use crate::error::{Error, Result};
use crate::specfun::bessel::bessel_k0_k1;

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_FLOOR: f64 = 40.0;
/// Orders above this are evaluated directly by the trapezoidal rule in the
/// middle regime instead of by a long recurrence.
const MAX_RECURRENCE_ORDER: u32 = 12;
/// Above this the recurrence loses digits to cancellation in `Ki_(n-3) - Ki_(n-1)`.
const MAX_RECURRENCE_Z: f64 = 10.0;

/// Evaluation route for [`bickley_with_route`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BickleyRoute {
    Series,
    Recurrence,
    Asymptotic,
    Quadrature,
}

/// `Ki_n(0) = 2^(n-2) Γ(n/2)² / (n-1)!` for `n ≥ 1`.
pub fn ki_at_zero(n: u32) -> f64 {
    assert!(n >= 1, "Ki_0(0) diverges");
    let mut v = if n % 2 == 1 { std::f64::consts::FRAC_PI_2 } else { 1.0 };
    let mut m = if n % 2 == 1 { 1 } else { 2 };
    while m < n {
        m += 2;
        v *= (m - 2) as f64 / (m - 1) as f64;
    }
    v
}

/// Smallest `z` at which the truncated asymptotic series reaches full precision
/// for order `n`. The expansion's terms behave like `j^(n-1) j! / z^j`, so the
/// threshold grows with `n`.
fn asymptotic_threshold(n: u32) -> f64 {
    ASYMPTOTIC_FLOOR + 3.0 * n as f64
}

/// The route [`bickley`] uses for `(n, z)`.
pub fn bickley_regime(n: u32, z: f64) -> BickleyRoute {
    if z <= SERIES_LIMIT {
        BickleyRoute::Series
    } else if z >= asymptotic_threshold(n) {
        BickleyRoute::Asymptotic
    } else if n <= MAX_RECURRENCE_ORDER && z <= MAX_RECURRENCE_Z {
        BickleyRoute::Recurrence
    } else {
        BickleyRoute::Quadrature
    }
}

fn check_args(n: u32, z: f64) -> Result<()> {
    if z.is_nan() || z < 0.0 {
        return Err(Error::domain("bickley", format!("z must be non-negative, got {z}")));
    }
    if n == 0 && z == 0.0 {
        return Err(Error::domain("bickley", "Ki_0(0) diverges"));
    }
    Ok(())
}

/// `Ki_n(z)` for `z ≥ 0` (`z > 0` when `n = 0`).
pub fn bickley(n: u32, z: f64) -> Result<f64> {
    check_args(n, z)?;
    if z == 0.0 {
        return Ok(ki_at_zero(n));
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    if n == 0 {
        return Ok(bessel_k0_k1(z)?.0);
    }
    match bickley_regime(n, z) {
        BickleyRoute::Asymptotic => {
            let (v, err) = asymptotic(n, z);
            if err <= 1e-14 * v.abs() {
                Ok(v)
            } else {
                bickley_with_route(n, z, BickleyRoute::Quadrature)
            }
        }
        route => bickley_with_route(n, z, route),
    }
}


/// `Ki_n(z)` through an explicitly chosen route, regardless of regime.
///
/// Useful for checking that neighbouring regimes agree; outside its natural
/// regime a route may be inaccurate.
pub fn bickley_with_route(n: u32, z: f64, route: BickleyRoute) -> Result<f64> {
    check_args(n, z)?;
    if z == 0.0 {
        return Ok(ki_at_zero(n));
    }
    match route {
        BickleyRoute::Series => {
            if n == 0 {
                Ok(bessel_k0_k1(z)?.0)
            } else {
                Ok(series(n, z))
            }
        }
        BickleyRoute::Asymptotic => Ok(asymptotic(n, z).0),
        BickleyRoute::Recurrence => {
            let seq = recurrence(n, z)?;
            Ok(seq[n as usize])
        }
        BickleyRoute::Quadrature => Ok(trapezoid(n, z)),
    }
}

/// `[Ki_0(z), ..., Ki_nmax(z)]` for `z > 0`.
pub fn bickley_sequence(nmax: u32, z: f64) -> Result<Vec<f64>> {
    if !(z > 0.0) {
        return Err(Error::domain("bickley", format!("z must be positive, got {z}")));
    }
    if z > SERIES_LIMIT && z <= MAX_RECURRENCE_Z && nmax <= MAX_RECURRENCE_ORDER {
        let mut seq = recurrence(nmax.max(1), z)?;
        seq.truncate(nmax as usize + 1);
        return Ok(seq);
    }
    (0..=nmax).map(|n| bickley(n, z)).collect()
}

fn series(n: u32, z: f64) -> f64 {
    // Polynomial part: Σ_{k<n} (-z)^k / k! Ki_(n-k)(0).
    let mut poly = 0.0;
    let mut pw = 1.0;
    for k in 0..n {
        if k > 0 {
            pw *= -z / k as f64;
        }
        poly += pw * ki_at_zero(n - k);
    }

    let nf = n as f64;
    let log_term = EULER_GAMMA + (0.5 * z).ln();
    // c_k = (2k)! / (4^k (k!)² (n+2k)!) z^(2k)
    let mut c = 1.0;
    for j in 2..=n {
        c /= j as f64;
    }
    let mut h_k = 0.0; // Φ(k+1)
    let mut h_2k = 0.0; // Φ(2k+1)
    let mut h_2kn: f64 = (1..=n).map(|j| 1.0 / j as f64).sum(); // Φ(2k+n+1)
    let z2 = z * z;
    let mut acc = 0.0;
    for k in 0..200u32 {
        let kf = k as f64;
        if k > 0 {
            h_k += 1.0 / kf;
            h_2k += 1.0 / (2.0 * kf - 1.0) + 1.0 / (2.0 * kf);
            h_2kn += 1.0 / (nf + 2.0 * kf - 1.0) + 1.0 / (nf + 2.0 * kf);
            c *= z2 * (2.0 * kf - 1.0) / (2.0 * kf * (nf + 2.0 * kf - 1.0) * (nf + 2.0 * kf));
        }
        let term = c * (h_k - h_2k + h_2kn - log_term);
        acc += term;
        if term.abs() < 1e-18 * acc.abs() && k > 2 {
            break;
        }
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    poly + sign * z.powi(n as i32) * acc
}

/// Asymptotic value and the magnitude of the smallest term retained.
pub(crate) fn asymptotic(n: u32, z: f64) -> (f64, f64) {
    // sqrt(2) × coefficients of (2+u)^(-1/2) (1+u)^(-n), convolved on the fly.
    const MAX_J: usize = 120;
    let mut a = [0.0f64; MAX_J];
    let mut b = [0.0f64; MAX_J];
    a[0] = 1.0;
    b[0] = 1.0;
    let nf = n as f64;
    let mut terms = Vec::with_capacity(MAX_J);
    terms.push(1.0);
    let mut poch = 1.0; // Γ(j+1/2)/Γ(1/2)
    let mut zpow = 1.0;
    let mut smallest = 1.0f64;
    let mut best = 0;
    for j in 1..MAX_J {
        let jf = j as f64;
        a[j] = a[j - 1] * (-(jf - 0.5)) / (2.0 * jf);
        b[j] = b[j - 1] * (-(nf + jf - 1.0)) / jf;
        let cj: f64 = (0..=j).map(|i| a[i] * b[j - i]).sum();
        poch *= jf - 0.5;
        zpow /= z;
        let term = cj * poch * zpow;
        terms.push(term);
        if term.abs() < smallest {
            smallest = term.abs();
            best = j;
        } else if term.abs() > 1e3 * smallest {
            break;
        }
    }
    let acc: f64 = terms[..best].iter().sum();
    let prefactor = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp();
    (prefactor * acc, prefactor * smallest)
}

fn recurrence(n: u32, z: f64) -> Result<Vec<f64>> {
    let (k0, k1) = bessel_k0_k1(z)?;
    // seq[i] holds Ki_(i-1).
    let mut seq = vec![k1, k0, trapezoid(1, z)];
    for m in 2..=n as usize {
        let mf = m as f64;
        let v = ((mf - 2.0) * seq[m - 1] + z * (seq[m - 2] - seq[m])) / (mf - 1.0);
        seq.push(v);
    }
    seq.remove(0);
    Ok(seq)
}

/// Trapezoidal rule on the defining integral. The integrand is even in `t`
/// and analytic in the strip `|Im t| < π/2`, so the error falls like
/// `exp(-2π d/h)` for a usable strip half-width `d`. Within the strip the
/// integrand grows by about `exp((z + n) d²/2)`, which limits `d` to roughly
/// `sqrt(10/(z+n))`; the step is chosen from that.
fn trapezoid(n: u32, z: f64) -> f64 {
    let h = (0.4 / (z + n as f64).sqrt()).min(0.1);
    // Truncate once e^(-z (cosh t - 1)) < e^-45.
    let t_max = (1.0 + 45.0 / z).acosh();
    let steps = (t_max / h).ceil() as usize;
    let scale = (-z).exp();
    let f = |t: f64| {
        let c = t.cosh();
        (-z * (c - 1.0)).exp() / c.powi(n as i32)
    };
    let mut acc = 0.5 * f(0.0);
    for k in 1..=steps {
        acc += f(k as f64 * h);
    }
    scale * h * acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accuracy::AccuracyControl;
    use crate::quadrature::integrate_to_infinity;
    use std::f64::consts::PI;

    fn oracle(n: u32, z: f64) -> f64 {
        let ctrl = AccuracyControl::with_tol(1e-14).unwrap();
        integrate_to_infinity(
            |t| {
                if t > 700.0 {
                    0.0
                } else {
                    (-z * t.cosh()).exp() / t.cosh().powi(n as i32)
                }
            },
            0.0,
            &ctrl,
        )
        .unwrap()
        .value
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn values_at_zero() {
        assert!((bickley(1, 0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((bickley(2, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((bickley(3, 0.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((bickley(4, 0.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bickley(0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bickley(2, -1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn matches_quadrature_oracle() {
        for n in 0..=8 {
            for z in [0.01, 0.3, 1.0, 1.99, 2.01, 4.0, 9.0, 14.9, 15.1, 25.0, 40.0] {
                let v = bickley(n, z).unwrap();
                let o = oracle(n, z);
                assert!(rel(v, o) < 1e-12, "Ki_{n}({z}) = {v}, oracle {o}");
            }
        }
    }

    #[test]
    fn ki5_at_one() {
        assert!(rel(bickley(5, 1.0).unwrap(), oracle(5, 1.0)) < 1e-12);
    }

    #[test]
    fn routes_agree_near_boundaries() {
        for n in 1..=10 {
            for z in [1.5, 2.0, 2.5] {
                let s = bickley_with_route(n, z, BickleyRoute::Series).unwrap();
                let r = bickley_with_route(n, z, BickleyRoute::Recurrence).unwrap();
                let q = bickley_with_route(n, z, BickleyRoute::Quadrature).unwrap();
                assert!(rel(s, r) < 1e-10 && rel(s, q) < 1e-10, "n={n} z={z}: {s} {r} {q}");
            }
            for z in [9.0, 10.0, 11.0] {
                let r = bickley_with_route(n, z, BickleyRoute::Recurrence).unwrap();
                let q = bickley_with_route(n, z, BickleyRoute::Quadrature).unwrap();
                assert!(rel(r, q) < 1e-10, "n={n} z={z}: {r} {q}");
            }
            let lo = asymptotic_threshold(n);
            for z in [lo, lo + 2.5, lo + 5.0] {
                let a = bickley_with_route(n, z, BickleyRoute::Asymptotic).unwrap();
                let q = bickley_with_route(n, z, BickleyRoute::Quadrature).unwrap();
                assert!(rel(a, q) < 1e-10, "n={n} z={z}: {a} {q}");
            }
        }
    }

    #[test]
    fn high_orders() {
        for n in [20, 30] {
            for z in [0.5, 5.0, 30.0, 70.0] {
                let v = bickley(n, z).unwrap();
                let o = oracle(n, z);
                assert!(rel(v, o) < 1e-11, "Ki_{n}({z}) = {v}, oracle {o}");
            }
        }
    }

    #[test]
    fn underflow_is_zero() {
        assert_eq!(bickley(3, 1000.0).unwrap(), 0.0);
    }

    #[test]
    fn recursion_residual() {
        for z in [0.1, 1.0, 10.0] {
            for n in 3..=8u32 {
                let k = |m: u32| bickley(m, z).unwrap();
                let nf = n as f64;
                let res = (nf - 1.0) * k(n) - (nf - 2.0) * k(n - 2) - z * (k(n - 3) - k(n - 1));
                assert!(res.abs() <= 1e-10 * k(n), "n={n} z={z} residual={res}");
            }
        }
    }

    #[test]
    fn ki2_closed_relation() {
        for i in 0..=40 {
            let z = 1e-3 * (3e4f64).powf(i as f64 / 40.0);
            let (_, k1) = bessel_k0_k1(z).unwrap();
            let lhs = bickley(2, z).unwrap();
            let rhs = z * (k1 - bickley(1, z).unwrap());
            assert!(rel(rhs, lhs) < 1e-10, "z={z}: {lhs} {rhs}");
        }
    }

    #[test]
    fn integral_rule() {
        use crate::quadrature::integrate;
        let ctrl = AccuracyControl::with_tol(1e-13).unwrap();
        for n in 0..=4 {
            for (z1, z2) in [(0.2, 1.5), (1.0, 6.0), (5.0, 30.0)] {
                let q = integrate(|y| bickley(n, y).unwrap(), z1, z2, &ctrl).unwrap();
                let d = bickley(n + 1, z1).unwrap() - bickley(n + 1, z2).unwrap();
                assert!((q.value - d).abs() <= 1e-12 * d.abs(), "n={n} [{z1},{z2}]");
            }
        }
    }
}
