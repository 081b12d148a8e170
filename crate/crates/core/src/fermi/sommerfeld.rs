//! Sommerfeld-type development of `∫₀^∞ f(y) H(y) dy` with the Fermi weight
//! `f(y) = 1 / (1 + e^((y-ξ)/a))`.

use serde::Serialize;

use crate::accuracy::AccuracyControl;
use crate::error::{Error, Result};
use crate::fermi::fermi_weight;
use crate::quadrature::{integrate_piecewise, integrate_to_infinity_abs, IntegrationResult};
use crate::specfun::zeta_even;

/// A function together with its derivatives, integrated against the Fermi weight.
pub trait SmoothFunctionBundle {
    /// `H(y)`. Must accept negative `y`: the exact residual samples `H` there.
    fn value(&self, y: f64) -> f64;

    /// `H^(m)(y)` for `m ≤ max_order()`.
    fn derivative(&self, m: u32, y: f64) -> Result<f64>;

    /// Highest derivative order available.
    fn max_order(&self) -> u32;

    /// Points where `H` is not smooth.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }

    /// `∫_lo^hi H`, when a closed form is known.
    fn integral(&self, _lo: f64, _hi: f64) -> Option<Result<f64>> {
        None
    }
}

/// `Σ c_k y^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }

    fn antiderivative(&self, y: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (k, c)| acc * y + c / (k as f64 + 1.0))
            * y
    }
}

impl SmoothFunctionBundle for Polynomial {
    fn value(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }

    fn derivative(&self, m: u32, y: f64) -> Result<f64> {
        let m = m as usize;
        let mut acc = 0.0;
        for (k, c) in self.coeffs.iter().enumerate().skip(m).rev() {
            let falling: f64 = ((k - m + 1)..=k).map(|j| j as f64).product();
            acc = acc * y + c * falling;
        }
        Ok(acc)
    }

    fn max_order(&self) -> u32 {
        u32::MAX
    }

    fn integral(&self, lo: f64, hi: f64) -> Option<Result<f64>> {
        Some(Ok(self.antiderivative(hi) - self.antiderivative(lo)))
    }
}

/// Breakdown of [`sommerfeld_integrate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SommerfeldResult {
    pub value: f64,
    /// `∫₀^ξ H`.
    pub base: f64,
    /// `a^(2n+2) (2 - 4^(-n)) ζ(2n+2) H^(2n+1)(ξ)` for `n = 0..=n_max`.
    pub terms: Vec<f64>,
    /// Exponentially small correction that makes the development exact.
    pub residual: f64,
}

impl SommerfeldResult {
    /// `base + residual + Σ_(j ≤ n) terms[j]` for each `n`.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut acc = self.base + self.residual;
        self.terms
            .iter()
            .map(|t| {
                acc += t;
                acc
            })
            .collect()
    }
}

/// Breakdown of [`sommerfeld_windowed`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowedResult {
    pub value: f64,
    pub base: f64,
    pub window: f64,
    /// `2 H^(2n+1)(ξ) M_(2n+1)(S) / (2n+1)!`.
    pub terms: Vec<f64>,
    /// `∫_S^∞ φ(s) H(ξ+s) ds`.
    pub upper_tail: f64,
    /// `∫_S^ξ φ(s) H(ξ-s) ds`, subtracted.
    pub lower_tail: f64,
}

fn check_params(func: &'static str, xi: f64, a: f64) -> Result<()> {
    if !(xi > 0.0 && a > 0.0) || !xi.is_finite() || !a.is_finite() {
        return Err(Error::domain(func, format!("need xi, a > 0, got ({xi}, {a})")));
    }
    Ok(())
}

fn check_order<H: SmoothFunctionBundle + ?Sized>(func: &'static str, h: &H, n_max: u32) -> Result<()> {
    let need = 2 * n_max + 1;
    if need > h.max_order() {
        return Err(Error::contract(
            func,
            format!("needs derivatives to order {need}, bundle provides {}", h.max_order()),
        ));
    }
    Ok(())
}

/// Ascending breakpoints: `lo`, the kinks strictly inside, `hi`.
fn breakpoints(lo: f64, hi: f64, kinks: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo];
    let mut inner: Vec<f64> = kinks.iter().copied().filter(|&k| k > lo && k < hi).collect();
    inner.sort_by(f64::total_cmp);
    pts.extend(inner);
    pts.push(hi);
    pts
}

fn base_integral<H: SmoothFunctionBundle + ?Sized>(
    h: &H,
    xi: f64,
    ctrl: &AccuracyControl,
) -> Result<f64> {
    match h.integral(0.0, xi) {
        Some(v) => v,
        None => integrate_piecewise(|y| h.value(y), &breakpoints(0.0, xi, &h.kinks()), ctrl)?
            .checked("sommerfeld"),
    }
}

/// `∫_lo^∞ g(t) dt` where `g` decays on the scale `scale`; `g` has kinks at `kinks`.
fn decaying_integral<G: Fn(f64) -> f64>(
    g: G,
    lo: f64,
    scale: f64,
    kinks: &[f64],
    ctrl: &AccuracyControl,
) -> Result<IntegrationResult> {
    let end = lo + 60.0 * scale;
    let main = integrate_piecewise(&g, &breakpoints(lo, end, kinks), ctrl)?;
    let mut tail_kinks: Vec<f64> = kinks.iter().copied().filter(|&k| k > end).collect();
    tail_kinks.sort_by(f64::total_cmp);
    let abs_tol = ctrl.rel_tol * main.value.abs().max(f64::MIN_POSITIVE);
    let mut acc = main;
    let mut start = end;
    for k in tail_kinks {
        acc = acc + integrate_piecewise(&g, &[start, k], ctrl)?;
        start = k;
    }
    Ok(acc + integrate_to_infinity_abs(&g, start, ctrl, abs_tol)?)
}

/// `∫₀^∞ H(y) / (1 + e^((y-ξ)/a)) dy` by adaptive quadrature.
pub fn fermi_weighted_integral<H: SmoothFunctionBundle + ?Sized>(
    h: &H,
    xi: f64,
    a: f64,
    ctrl: &AccuracyControl,
) -> Result<IntegrationResult> {
    check_params("fermi_weighted_integral", xi, a)?;
    let mut kinks = h.kinks();
    kinks.push(xi);
    decaying_integral(
        |y| h.value(y) * fermi_weight((y - xi) / a),
        0.0,
        (xi + 60.0 * a) / 60.0,
        &kinks,
        ctrl,
    )
}

/// The development
/// `∫₀^ξ H + Σ_(n=0)^(n_max) a^(2n+2) (2 - 4^(-n)) ζ(2n+2) H^(2n+1)(ξ) + R`
/// with `R = Σ_(n=1)^(residual_terms) (-1)^(n-1) e^(-nξ/a) ∫₀^∞ H(-v) e^(-nv/a) dv`.
///
/// With all residual terms kept, the only approximation is the truncation of
/// the (asymptotic) derivative series; it is exact for polynomials.
pub fn sommerfeld_integrate<H: SmoothFunctionBundle + ?Sized>(
    h: &H,
    xi: f64,
    a: f64,
    n_max: u32,
    residual_terms: u32,
    ctrl: &AccuracyControl,
) -> Result<SommerfeldResult> {
    check_params("sommerfeld_integrate", xi, a)?;
    check_order("sommerfeld_integrate", h, n_max)?;
    let base = base_integral(h, xi, ctrl)?;
    let mut terms = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let coeff = (2.0 - 0.25f64.powi(n as i32)) * zeta_even(n + 1) * a.powi(2 * n as i32 + 2);
        terms.push(coeff * h.derivative(2 * n + 1, xi)?);
    }
    let mirrored: Vec<f64> = h.kinks().iter().filter(|&&k| k < 0.0).map(|k| -k).collect();
    let mut residual = 0.0;
    for n in 1..=residual_terms {
        let damp = (-(n as f64) * xi / a).exp();
        if damp == 0.0 {
            break;
        }
        let lam = n as f64 / a;
        let integral = decaying_integral(
            |v| h.value(-v) * (-lam * v).exp(),
            0.0,
            1.0 / lam,
            &mirrored,
            ctrl,
        )?
        .checked("sommerfeld_integrate")?;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        residual += sign * damp * integral;
    }
    let value = base + terms.iter().sum::<f64>() + residual;
    Ok(SommerfeldResult {
        value,
        base,
        terms,
        residual,
    })
}

/// `M_m(S) = ∫₀^S s^m / (1 + e^(s/a)) ds`.
pub fn truncated_fermi_moment(m: u32, window: f64, a: f64, ctrl: &AccuracyControl) -> Result<f64> {
    let t_end = window / a;
    let v = integrate_piecewise(|t| t.powi(m as i32) * fermi_weight(t), &[0.0, t_end], ctrl)?
        .checked("truncated_fermi_moment")?;
    Ok(a.powi(m as i32 + 1) * v)
}

/// Exact windowed form of the development.
///
/// With `φ(s) = 1/(1 + e^(s/a))` and a window `0 < S ≤ ξ`,
/// `∫₀^∞ f H = ∫₀^ξ H + ∫₀^S φ(s)[H(ξ+s) - H(ξ-s)] ds + ∫_S^∞ φ(s) H(ξ+s) ds - ∫_S^ξ φ(s) H(ξ-s) ds`.
/// The window integral is expanded in the odd Taylor coefficients of `H` at
/// `ξ` against the truncated moments `M_(2n+1)(S)`; it converges when `H` is
/// analytic within `S` of `ξ`. The tails are integrated directly. As `S → ∞`
/// the terms reduce to those of [`sommerfeld_integrate`].
pub fn sommerfeld_windowed<H: SmoothFunctionBundle + ?Sized>(
    h: &H,
    xi: f64,
    a: f64,
    window: f64,
    n_max: u32,
    ctrl: &AccuracyControl,
) -> Result<WindowedResult> {
    check_params("sommerfeld_windowed", xi, a)?;
    check_order("sommerfeld_windowed", h, n_max)?;
    if !(window > 0.0 && window <= xi) {
        return Err(Error::domain(
            "sommerfeld_windowed",
            format!("window must lie in (0, xi], got {window}"),
        ));
    }
    let base = base_integral(h, xi, ctrl)?;
    let mut terms = Vec::with_capacity(n_max as usize + 1);
    let mut fact = 1.0;
    for n in 0..=n_max {
        let m = 2 * n + 1;
        fact *= if n == 0 { 1.0 } else { ((m - 1) * m) as f64 };
        let moment = truncated_fermi_moment(m, window, a, ctrl)?;
        terms.push(2.0 * h.derivative(m, xi)? * moment / fact);
    }
    let kinks = h.kinks();
    let upper_kinks: Vec<f64> = kinks.iter().map(|k| k - xi).collect();
    let upper_tail = decaying_integral(
        |s| fermi_weight(s / a) * h.value(xi + s),
        window,
        a,
        &upper_kinks,
        ctrl,
    )?
    .checked("sommerfeld_windowed")?;
    let lower_kinks: Vec<f64> = kinks.iter().map(|k| xi - k).collect();
    let lower_tail = integrate_piecewise(
        |s| fermi_weight(s / a) * h.value(xi - s),
        &breakpoints(window, xi, &lower_kinks),
        ctrl,
    )?
    .checked("sommerfeld_windowed")?;
    let value = base + terms.iter().sum::<f64>() + upper_tail - lower_tail;
    Ok(WindowedResult {
        value,
        base,
        window,
        terms,
        upper_tail,
        lower_tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermi::FermiDistribution;
    use std::f64::consts::PI;

    fn physical() -> (f64, f64) {
        let d = FermiDistribution::physical(1.0).unwrap();
        (d.xi, d.a)
    }

    fn ctrl() -> AccuracyControl {
        AccuracyControl::with_tol(1e-13).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn polynomial_derivatives() {
        let p = Polynomial::new(vec![1.0, -2.0, 0.5, 3.0]);
        let y = 0.7;
        assert!((p.derivative(0, y).unwrap() - p.value(y)).abs() < 1e-15);
        assert!((p.derivative(1, y).unwrap() - (-2.0 + y + 9.0 * y * y)).abs() < 1e-14);
        assert!((p.derivative(3, y).unwrap() - 18.0).abs() < 1e-14);
        assert_eq!(p.derivative(4, y).unwrap(), 0.0);
        assert!((p.integral(0.0, 1.0).unwrap().unwrap() - (1.0 - 1.0 + 0.5 / 3.0 + 0.75)).abs() < 1e-15);
    }

    #[test]
    fn constant_gives_xi_plus_residual() {
        let (xi, a) = physical();
        let h = Polynomial::new(vec![1.0]);
        let s = sommerfeld_integrate(&h, xi, a, 10, 20, &ctrl()).unwrap();
        assert!(s.terms.iter().all(|&t| t == 0.0));
        assert!(rel(s.residual, a * (-xi / a).exp().ln_1p()) < 1e-12);
        let o = fermi_weighted_integral(&h, xi, a, &ctrl()).unwrap().value;
        assert!(rel(s.value, o) < 1e-10);
    }

    #[test]
    fn linear_gets_zeta_two() {
        let (xi, a) = physical();
        let h = Polynomial::new(vec![0.0, 1.0]);
        let s = sommerfeld_integrate(&h, xi, a, 10, 20, &ctrl()).unwrap();
        assert!(rel(s.base + s.terms[0], xi * xi / 2.0 + a * a * PI * PI / 6.0) < 1e-14);
        let o = fermi_weighted_integral(&h, xi, a, &ctrl()).unwrap().value;
        assert!(rel(s.value, o) < 1e-10);
    }

    #[test]
    fn polynomials_match_quadrature() {
        let (xi, a) = physical();
        for deg in 0..=5usize {
            let coeffs: Vec<f64> = (0..=deg).map(|k| (k as f64 + 1.0) / xi.powi(k as i32)).collect();
            let h = Polynomial::new(coeffs);
            let s = sommerfeld_integrate(&h, xi, a, 10, 20, &ctrl()).unwrap();
            let o = fermi_weighted_integral(&h, xi, a, &ctrl()).unwrap().value;
            assert!(rel(s.value, o) < 1e-10, "deg {deg}: {} {o}", s.value);
            let w = sommerfeld_windowed(&h, xi, a, 0.5 * xi, 3, &ctrl()).unwrap();
            assert!(rel(w.value, o) < 1e-10, "windowed deg {deg}: {} {o}", w.value);
        }
    }

    #[test]
    fn residual_sign_matters() {
        let (xi, a) = physical();
        let h = Polynomial::new(vec![1.0, 2.0 / xi, -1.0 / (xi * xi)]);
        let s = sommerfeld_integrate(&h, xi, a, 10, 20, &ctrl()).unwrap();
        let o = fermi_weighted_integral(&h, xi, a, &ctrl()).unwrap().value;
        assert!(rel(s.value - 2.0 * s.residual, o) > 1e-3);
    }

    #[test]
    fn truncated_moments_reach_full_moments() {
        let a = 0.3;
        for m in [1u32, 3, 5] {
            let full = truncated_fermi_moment(m, 60.0 * a, a, &ctrl()).unwrap();
            let fact: f64 = (1..=m).map(|j| j as f64).product();
            let expected = fact * (1.0 - 0.5f64.powi(m as i32)) * zeta_even(m.div_ceil(2)) * a.powi(m as i32 + 1);
            assert!(rel(full, expected) < 1e-12);
        }
    }

    struct Limited;

    impl SmoothFunctionBundle for Limited {
        fn value(&self, y: f64) -> f64 {
            y.sin()
        }
        fn derivative(&self, m: u32, y: f64) -> Result<f64> {
            Ok((y + m as f64 * PI / 2.0).sin())
        }
        fn max_order(&self) -> u32 {
            5
        }
    }

    #[test]
    fn missing_derivatives_are_a_contract_error() {
        let r = sommerfeld_integrate(&Limited, 1.0, 0.1, 10, 0, &ctrl());
        assert!(matches!(r, Err(Error::Contract { .. })));
        assert!(sommerfeld_integrate(&Limited, 1.0, 0.1, 2, 0, &ctrl()).is_ok());
    }
}
