//! `I(p,q) = ∫_γ^δ y^p Ki_q(y) dy` and `L(p,q) = ∫_γ^δ y^p e^(-λy) Ki_q(y) dy`.

use crate::accuracy::AccuracyControl;
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::specfun::{bessel_k0_k1, bickley};

fn check_interval(func: &'static str, gamma: f64, delta: f64) -> Result<()> {
    if !(gamma > 0.0) || !(delta > gamma) {
        return Err(Error::domain(
            func,
            format!("need 0 < gamma < delta, got ({gamma}, {delta})"),
        ));
    }
    Ok(())
}

/// `y^p Ki_q(y)`, zero at `y = ∞`.
fn weighted(p: u32, q: u32, y: f64) -> Result<f64> {
    if y.is_infinite() {
        return Ok(0.0);
    }
    let k = bickley(q, y)?;
    Ok(if k == 0.0 { 0.0 } else { y.powi(p as i32) * k })
}

/// `[-y^m K1 - (m-1) y^(m-1) K0]` evaluated at `y` (zero at infinity).
fn k0_ladder_boundary(m: u32, y: f64) -> Result<f64> {
    if y.is_infinite() {
        return Ok(0.0);
    }
    let (k0, k1) = bessel_k0_k1(y)?;
    let mf = m as f64;
    let mut v = -y.powi(m as i32) * k1;
    if m >= 1 {
        v -= (mf - 1.0) * y.powi(m as i32 - 1) * k0;
    }
    Ok(v)
}

/// `∫_γ^δ y^m K0(y) dy`.
fn k0_moment(m: u32, gamma: f64, delta: f64) -> Result<f64> {
    let mut val = if m.is_multiple_of(2) {
        bickley(1, gamma)? - bickley(1, delta)?
    } else {
        let at = |y: f64| -> Result<f64> {
            if y.is_infinite() {
                Ok(0.0)
            } else {
                Ok(y * bessel_k0_k1(y)?.1)
            }
        };
        at(gamma)? - at(delta)?
    };
    let mut j = 2 + m % 2;
    while j <= m {
        let jf = j as f64;
        val = k0_ladder_boundary(j, delta)? - k0_ladder_boundary(j, gamma)? + (jf - 1.0).powi(2) * val;
        j += 2;
    }
    Ok(val)
}

/// `I(p,q) = ∫_γ^δ y^p Ki_q(y) dy` for `0 < γ < δ ≤ ∞`.
///
/// Descends in `q` with `I(p,q) = [δ^(p+1) Ki_q(δ) - γ^(p+1) Ki_q(γ) + I(p+1,q-1)]/(p+1)`
/// down to `I(p+q, 0)`, which comes from the `∫ y^m K0` ladder.
pub fn i_pq(p: u32, q: u32, gamma: f64, delta: f64) -> Result<f64> {
    check_interval("i_pq", gamma, delta)?;
    let mut val = k0_moment(p + q, gamma, delta)?;
    for s in 1..=q {
        let pp = p + q - s;
        let boundary = weighted(pp + 1, s, delta)? - weighted(pp + 1, s, gamma)?;
        val = (boundary + val) / (pp as f64 + 1.0);
    }
    Ok(val)
}

/// `L(p,q) = ∫_γ^δ y^p e^(-λy) Ki_q(y) dy` for `λ > 0`, `0 < γ < δ < ∞`.
///
/// `L(j,0)` comes from quadrature and the rest from
/// `L(p,q) = [e^(-λγ) γ^p Ki_q(γ) - e^(-λδ) δ^p Ki_q(δ) + p L(p-1,q) - L(p,q-1)]/λ`.
/// For `λδ ≤ 1` the recurrence loses accuracy and the convergent expansion
/// `Σ_j (-λ)^j/j! I(p+j,q)` is used instead.
pub fn l_npq(p: u32, q: u32, lambda: f64, gamma: f64, delta: f64) -> Result<f64> {
    check_interval("l_npq", gamma, delta)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain("l_npq", format!("lambda must be positive, got {lambda}")));
    }
    if !delta.is_finite() {
        return Err(Error::domain("l_npq", "delta must be finite"));
    }
    if lambda * delta <= 1.0 {
        return l_series(p, q, lambda, gamma, delta);
    }
    let ctrl = AccuracyControl::with_tol(1e-13)?;
    // table[q'][p'] for p' ≤ p, q' ≤ q
    let mut table = vec![vec![0.0; p as usize + 1]; q as usize + 1];
    for j in 0..=p {
        table[0][j as usize] = integrate(
            |y| y.powi(j as i32) * (-lambda * y).exp() * bessel_k0_k1(y).map_or(f64::NAN, |k| k.0),
            gamma,
            delta,
            &ctrl,
        )?
        .checked("l_npq")?;
    }
    let (eg, ed) = ((-lambda * gamma).exp(), (-lambda * delta).exp());
    for qq in 1..=q {
        for pp in 0..=p {
            let boundary = eg * weighted(pp, qq, gamma)? - ed * weighted(pp, qq, delta)?;
            let lower_p = if pp > 0 {
                pp as f64 * table[qq as usize][pp as usize - 1]
            } else {
                0.0
            };
            table[qq as usize][pp as usize] =
                (boundary + lower_p - table[qq as usize - 1][pp as usize]) / lambda;
        }
    }
    Ok(table[q as usize][p as usize])
}

fn l_series(p: u32, q: u32, lambda: f64, gamma: f64, delta: f64) -> Result<f64> {
    let mut acc = 0.0;
    let mut coeff = 1.0;
    for j in 0..60u32 {
        let term = coeff * i_pq(p + j, q, gamma, delta)?;
        acc += term;
        if term.abs() <= 1e-17 * acc.abs() {
            return Ok(acc);
        }
        coeff *= -lambda / (j as f64 + 1.0);
    }
    Err(Error::NoConvergence {
        func: "l_npq",
        est_error: f64::NAN,
        evaluations: 60,
    })
}
