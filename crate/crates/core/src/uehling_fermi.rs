//! Uehling potential of a Fermi-distributed nucleus,
//! `δV(r) = -(2α / 3cr) ∫₀^∞ x ρ(x) [g(2c|r-x|) - g(2c(r+x))] dx`.
//!
//! `g` is decomposed as `Σ w_(pq) z^p Ki_q(z)` so that the integrand becomes a
//! combination of the primitives `x z^p Ki_q(z)`, `z = 2c(r ± x)`, whose
//! derivatives of any order are available in closed form.

use std::sync::OnceLock;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::accuracy::AccuracyControl;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::fermi::{fermi_weighted_integral, i_pq, sommerfeld_windowed, FermiDistribution, SmoothFunctionBundle};
use crate::specfun::{bessel_k_sequence, bickley_sequence, k0_derivative_coeffs};
use crate::uehling_point::g;

/// Highest derivative order of the primitives.
pub const MAX_DERIVATIVE: u32 = 25;

/// `g(z) = Σ w z^p Ki_q(z)` as `(p, q, w)`.
pub const G_DECOMPOSITION: [(u32, u32, f64); 6] = [
    (1, 0, -7.0 / 16.0),
    (3, 0, -1.0 / 48.0),
    (0, 1, 9.0 / 16.0),
    (2, 1, 1.0 / 48.0),
    (1, 2, 19.0 / 48.0),
    (3, 2, 1.0 / 48.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    /// `z = 2c(r + x)`
    Plus,
    /// `z = 2c(r - x)`
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `x z^p Ki_q(z)` with `z = 2c(r ± x)`; `q = 0` is `K0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPrimitive {
    pub p: u32,
    pub q: u32,
    pub sign: Sign,
}

impl HPrimitive {
    pub fn new(p: u32, q: u32, sign: Sign) -> Result<Self> {
        if p > 3 || q > 2 {
            return Err(Error::domain("HPrimitive", format!("need p ≤ 3, q ≤ 2, got ({p}, {q})")));
        }
        Ok(HPrimitive { p, q, sign })
    }

    fn argument(self, x: f64, r: f64, k: &PhysicalConstants) -> Result<f64> {
        let z = 2.0 * k.c * (r + self.sign.factor() * x);
        if z < 0.0 || (z == 0.0 && self.q == 0) || z.is_nan() {
            return Err(Error::domain("h_value", format!("z = {z} outside the domain")));
        }
        Ok(z)
    }
}

/// `x (2c(r±x))^p Ki_q(2c(r±x))`.
pub fn h_value(h: HPrimitive, x: f64, r: f64, k: &PhysicalConstants) -> Result<f64> {
    let z = h.argument(x, r, k)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let ki = if z == 0.0 {
        crate::specfun::ki_at_zero(h.q)
    } else {
        bickley_sequence(h.q, z)?[h.q as usize]
    };
    Ok(x * z.powi(h.p as i32) * ki)
}

/// `d^m K0/dz^m` coefficients over `K_ν`, as floats, for `m ≤ MAX_DERIVATIVE + 1`.
fn k0_derivative_table() -> &'static [Vec<(usize, f64)>] {
    static TABLE: OnceLock<Vec<Vec<(usize, f64)>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=MAX_DERIVATIVE + 1)
            .map(|m| {
                k0_derivative_coeffs(m)
                    .coeffs
                    .iter()
                    .map(|(&nu, c)| (nu as usize, c.to_f64().expect("finite")))
                    .collect()
            })
            .collect()
    })
}

/// `d^m Ki_q / dz^m` from `ks = [K0, K1, ...]` and `kis = [Ki0, Ki1, Ki2]`.
fn ki_derivative(q: u32, m: u32, ks: &[f64], kis: &[f64]) -> f64 {
    let sign = |e: u32| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    if m <= q {
        sign(m) * kis[(q - m) as usize]
    } else {
        let k0m: f64 = k0_derivative_table()[(m - q) as usize]
            .iter()
            .map(|&(nu, c)| c * ks[nu])
            .sum();
        sign(q) * k0m
    }
}

/// `d^j/dz^j [z^p Ki_q(z)]` by Leibniz.
fn power_times_ki_derivative(p: u32, q: u32, j: u32, z: f64, ks: &[f64], kis: &[f64]) -> f64 {
    let mut acc = 0.0;
    let mut binom = 1.0;
    let mut falling = 1.0;
    for i in 0..=j.min(p) {
        if i > 0 {
            binom *= (j - i + 1) as f64 / i as f64;
            falling *= (p - i + 1) as f64;
        }
        acc += binom * falling * z.powi((p - i) as i32) * ki_derivative(q, j - i, ks, kis);
    }
    acc
}

/// Bessel and Bickley values needed for derivatives to order `n` at `z > 0`.
fn derivative_inputs(n: u32, z: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok((bessel_k_sequence(n + 1, z)?, bickley_sequence(2, z)?))
}

fn h_derivative_with(h: HPrimitive, n: u32, x: f64, z: f64, k: &PhysicalConstants, ks: &[f64], kis: &[f64]) -> f64 {
    let chain = 2.0 * k.c * h.sign.factor();
    let f = |j: u32| chain.powi(j as i32) * power_times_ki_derivative(h.p, h.q, j, z, ks, kis);
    let mut v = x * f(n);
    if n > 0 {
        v += n as f64 * f(n - 1);
    }
    v
}

/// `d^n/dx^n` of [`h_value`] for `n ≤ 25`, at a point where `z > 0`.
pub fn h_derivative(h: HPrimitive, n: u32, x: f64, r: f64, k: &PhysicalConstants) -> Result<f64> {
    if n > MAX_DERIVATIVE {
        return Err(Error::contract(
            "h_derivative",
            format!("order {n} exceeds {MAX_DERIVATIVE}"),
        ));
    }
    let z = h.argument(x, r, k)?;
    if n == 0 {
        return h_value(h, x, r, k);
    }
    if z == 0.0 {
        return Err(Error::domain("h_derivative", "derivatives diverge at z = 0"));
    }
    let (ks, kis) = derivative_inputs(n, z)?;
    Ok(h_derivative_with(h, n, x, z, k, &ks, &kis))
}

/// `∫₀^X x z^p Ki_q(z) dx` for `X < r` through the `I(p,q)` ladder.
fn h_integral(h: HPrimitive, upper: f64, r: f64, k: &PhysicalConstants) -> Result<f64> {
    let tc = 2.0 * k.c;
    match h.sign {
        Sign::Minus => {
            let (gamma, delta) = (tc * (r - upper), tc * r);
            Ok((r * i_pq(h.p, h.q, gamma, delta)? - i_pq(h.p + 1, h.q, gamma, delta)? / tc) / tc)
        }
        Sign::Plus => {
            let (gamma, delta) = (tc * r, tc * (r + upper));
            Ok((i_pq(h.p + 1, h.q, gamma, delta)? / tc - r * i_pq(h.p, h.q, gamma, delta)?) / tc)
        }
    }
}

/// `H(y) = y [g(2c|r-y|) - g(2c|r+y|)]`, even in `y`, with kinks at `y = ±r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UehlingIntegrand {
    pub r: f64,
    pub k: PhysicalConstants,
}

impl SmoothFunctionBundle for UehlingIntegrand {
    fn value(&self, y: f64) -> f64 {
        let tc = 2.0 * self.k.c;
        match (g(tc * (self.r - y).abs()), g(tc * (self.r + y).abs())) {
            (Ok(a), Ok(b)) => y * (a - b),
            _ => f64::NAN,
        }
    }

    fn derivative(&self, m: u32, y: f64) -> Result<f64> {
        if !(y.abs() < self.r) {
            return Err(Error::domain("UehlingIntegrand", "derivatives need |y| < r"));
        }
        if m == 0 {
            return Ok(self.value(y));
        }
        if m > MAX_DERIVATIVE {
            return Err(Error::contract("UehlingIntegrand", format!("order {m} exceeds {MAX_DERIVATIVE}")));
        }
        let tc = 2.0 * self.k.c;
        let (zm, zp) = (tc * (self.r - y), tc * (self.r + y));
        let (ksm, kism) = derivative_inputs(m, zm)?;
        let (ksp, kisp) = derivative_inputs(m, zp)?;
        let mut acc = 0.0;
        for (p, q, w) in G_DECOMPOSITION {
            let minus = HPrimitive { p, q, sign: Sign::Minus };
            let plus = HPrimitive { p, q, sign: Sign::Plus };
            acc += w
                * (h_derivative_with(minus, m, y, zm, &self.k, &ksm, &kism)
                    - h_derivative_with(plus, m, y, zp, &self.k, &ksp, &kisp));
        }
        Ok(acc)
    }

    fn max_order(&self) -> u32 {
        MAX_DERIVATIVE
    }

    fn kinks(&self) -> Vec<f64> {
        vec![-self.r, self.r]
    }

    fn integral(&self, lo: f64, hi: f64) -> Option<Result<f64>> {
        if lo != 0.0 || !(hi < self.r) {
            return None;
        }
        let total = || -> Result<f64> {
            let mut acc = 0.0;
            for (p, q, w) in G_DECOMPOSITION {
                let minus = HPrimitive { p, q, sign: Sign::Minus };
                let plus = HPrimitive { p, q, sign: Sign::Plus };
                acc += w * (h_integral(minus, hi, self.r, &self.k)? - h_integral(plus, hi, self.r, &self.k)?);
            }
            Ok(acc)
        };
        Some(total())
    }
}

/// A single primitive `y |z|^p Ki_q(|z|)`, `z = 2c(r ± y)`, continued through
/// its kink at `y = ∓r`. Derivatives are available on the side containing `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveIntegrand {
    pub h: HPrimitive,
    pub r: f64,
    pub k: PhysicalConstants,
}

impl SmoothFunctionBundle for PrimitiveIntegrand {
    fn value(&self, y: f64) -> f64 {
        let z = (2.0 * self.k.c * (self.r + self.h.sign.factor() * y)).abs();
        if z == 0.0 {
            return match (self.h.p, self.h.q) {
                (0, 0) => f64::NAN,
                (0, q) => y * crate::specfun::ki_at_zero(q),
                _ => 0.0,
            };
        }
        match bickley_sequence(self.h.q, z) {
            Ok(ki) => y * z.powi(self.h.p as i32) * ki[self.h.q as usize],
            Err(_) => f64::NAN,
        }
    }

    fn derivative(&self, m: u32, y: f64) -> Result<f64> {
        h_derivative(self.h, m, y, self.r, &self.k)
    }

    fn max_order(&self) -> u32 {
        MAX_DERIVATIVE
    }

    fn kinks(&self) -> Vec<f64> {
        vec![-self.h.sign.factor() * self.r]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FermiMethod {
    /// Adaptive quadrature split at `x = r`.
    Direct,
    /// Windowed Sommerfeld development around `ξ`.
    Sommerfeld,
}

impl FermiMethod {
    pub fn name(self) -> &'static str {
        match self {
            FermiMethod::Direct => "direct",
            FermiMethod::Sommerfeld => "sommerfeld",
        }
    }
}

/// Result of [`uehling_fermi`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FermiPotential {
    pub value: f64,
    pub est_error: f64,
    /// Route actually used.
    pub method: FermiMethod,
    /// Set when the Sommerfeld route was requested inside the guard zone.
    pub fallback: bool,
}

/// The Sommerfeld route needs `r ≥ ξ + SOMMERFELD_GUARD · a`.
pub const SOMMERFELD_GUARD: f64 = 4.0;

/// Default number of odd derivative orders kept in the Sommerfeld window.
pub const SOMMERFELD_ORDER: u32 = 12;

/// `δV(r)` in hartree for the distribution `d`.
pub fn uehling_fermi(
    r: f64,
    d: &FermiDistribution,
    method: FermiMethod,
    ctrl: &AccuracyControl,
    k: &PhysicalConstants,
) -> Result<FermiPotential> {
    match method {
        FermiMethod::Direct => direct(r, d, ctrl, k),
        FermiMethod::Sommerfeld => uehling_fermi_sommerfeld(r, d, SOMMERFELD_ORDER, ctrl, k),
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain("uehling_fermi", format!("r must be positive, got {r}")));
    }
    Ok(())
}

fn prefactor(r: f64, d: &FermiDistribution, k: &PhysicalConstants) -> f64 {
    -2.0 * k.alpha * d.rho0 / (3.0 * k.c * r)
}

fn direct(r: f64, d: &FermiDistribution, ctrl: &AccuracyControl, k: &PhysicalConstants) -> Result<FermiPotential> {
    check_r(r)?;
    let h = UehlingIntegrand { r, k: *k };
    let res = fermi_weighted_integral(&h, d.xi, d.a, ctrl)?;
    let v = res.checked("uehling_fermi")?;
    let pref = prefactor(r, d, k);
    Ok(FermiPotential {
        value: pref * v,
        est_error: (pref * res.est_error).abs(),
        method: FermiMethod::Direct,
        fallback: false,
    })
}

/// Sommerfeld route with `n_max + 1` odd derivative orders (`2 n_max + 1 ≤ 25`).
///
/// The expansion window is `S = min(ξ, (r-ξ)/2)`, so the Taylor series of `H`
/// about `ξ` converges geometrically with ratio at most 1/2; beyond the window
/// the Fermi-weighted tails are integrated directly.
pub fn uehling_fermi_sommerfeld(
    r: f64,
    d: &FermiDistribution,
    n_max: u32,
    ctrl: &AccuracyControl,
    k: &PhysicalConstants,
) -> Result<FermiPotential> {
    check_r(r)?;
    if r < d.xi + SOMMERFELD_GUARD * d.a {
        let mut res = direct(r, d, ctrl, k)?;
        res.fallback = true;
        return Ok(res);
    }
    let h = UehlingIntegrand { r, k: *k };
    let window = d.xi.min(0.5 * (r - d.xi));
    let w = sommerfeld_windowed(&h, d.xi, d.a, window, n_max, ctrl)?;
    let pref = prefactor(r, d, k);
    let truncation = w.terms.last().copied().unwrap_or(0.0).abs();
    Ok(FermiPotential {
        value: pref * w.value,
        est_error: (pref * (truncation + ctrl.rel_tol * w.value.abs())).abs(),
        method: FermiMethod::Sommerfeld,
        fallback: false,
    })
}
