//! Fourth-order (Källén-Sabry) vacuum-polarization potential.
//!
//! The spectral kernel `L1(u) = ∫₁^∞ F(t) e^(-ut) dt` is integrated once more to
//! `L0(x) = ∫_x^∞ L1(u) du = ∫₁^∞ F(t) e^(-xt)/t dt`, which is tabulated on a
//! logarithmic grid. The potential of a charge distribution is
//! `V(r) = (α³/π² r) ∫₀^∞ x ρ(x) [L0(2c|r-x|) - L0(2c(r+x))] dx`.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::accuracy::AccuracyControl;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::fermi::{fermi_weighted_integral, FermiDistribution, SmoothFunctionBundle};
use crate::quadrature::{integrate_piecewise, integrate_to_infinity, IntegrationResult};
use crate::specfun::{dilog, re_dilog};

/// `f(t)` for `t ≥ 1`.
///
/// With `η = t + √(t²-1)` and `w = η^-2`, the closed form
/// `2π²/3 - ln η ln[(η⁴-1)(η²-1)/η²] + Li₂(-1/η²) - 2 Re Li₂(η²)`
/// is rewritten through the inversion identity for `Li₂` as
/// `-ln η [2 ln(1-w) + ln(1+w)] + Li₂(-w) + 2 Li₂(w)`, which has no
/// cancellation for large `t` and the finite limit `π²/4` at `t = 1`.
pub fn f_exact(t: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::domain("f_exact", format!("t must be at least 1, got {t}")));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    let ln_eta = t.acosh();
    let w = (-2.0 * ln_eta).exp();
    let log_part = if ln_eta == 0.0 {
        0.0
    } else {
        // 1 - w = -expm1(-2 ln η)
        2.0 * (-(-2.0 * ln_eta).exp_m1()).ln() + w.ln_1p()
    };
    Ok(-ln_eta * log_part + dilog(-w) + 2.0 * dilog(w))
}

/// The closed form exactly as written, with `Re Li₂(η²)` from [`re_dilog`].
pub fn f_exact_literal(t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::domain("f_exact_literal", format!("t must exceed 1, got {t}")));
    }
    let eta = t + (t * t - 1.0).sqrt();
    let e2 = eta * eta;
    Ok(2.0 * PI * PI / 3.0 - eta.ln() * ((e2 * e2 - 1.0) * (e2 - 1.0) / e2).ln() + dilog(-1.0 / e2)
        - 2.0 * re_dilog(e2))
}

/// `f(t) = ∫_t^∞ [(3x²-1) arccosh x / (x(x²-1)) - ln(8x(x²-1)) / √(x²-1)] dx`,
/// integrated in `θ = arccosh x`. With `q = e^(-2θ)` the integrand is
/// `θ (2q + 6q²)/(1-q²) - ln(1+q) - 2 ln(1-q)`, free of cancellation and with
/// only a logarithmic singularity at `θ = 0`.
pub fn f_integral(t: f64, ctrl: &AccuracyControl) -> Result<IntegrationResult> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::domain("f_integral", format!("t must be at least 1, got {t}")));
    }
    let g = |theta: f64| {
        if theta <= 0.0 {
            return 0.0;
        }
        let q = (-2.0 * theta).exp();
        let one_minus_q = -(-2.0 * theta).exp_m1();
        let one_minus_q2 = -(-4.0 * theta).exp_m1();
        theta * (2.0 * q + 6.0 * q * q) / one_minus_q2 - q.ln_1p() - 2.0 * one_minus_q.ln()
    };
    let lo = t.acosh();
    let head = integrate_piecewise(g, &[lo, lo + 1.0], ctrl)?;
    Ok(head + integrate_to_infinity(g, lo + 1.0, ctrl)?)
}

/// `F(t)`, the weight of `e^(-ut)` in `L1(u)`.
pub fn ks_spectral(t: f64) -> f64 {
    let s = ((t - 1.0) * (t + 1.0)).sqrt();
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t2 * t2;
    let t5 = t4 * t;
    let f = f_exact(t).unwrap_or(f64::NAN);
    let mut v = (2.0 / (3.0 * t5) - 8.0 / (3.0 * t)) * f;
    if s > 0.0 {
        v += (2.0 / (3.0 * t4) + 4.0 / (3.0 * t2)) * s * (8.0 * t * s * s).ln();
        v += s * (2.0 / (9.0 * t4 * t2) + 7.0 / (108.0 * t4) + 13.0 / (54.0 * t2));
        v += (2.0 / (9.0 * t5 * t2) + 5.0 / (4.0 * t5) + 2.0 / (3.0 * t3) - 44.0 / (9.0 * t)) * t.acosh();
    }
    v
}

/// `L1(u) = ∫₁^∞ F(t) e^(-ut) dt` for `u > 0`.
pub fn ks_l1(u: f64, ctrl: &AccuracyControl) -> Result<IntegrationResult> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::domain("ks_l1", format!("u must be positive, got {u}")));
    }
    laplace(ks_spectral, u, ctrl)
}

/// `L0(x) = ∫_x^∞ L1(u) du = ∫₁^∞ F(t) e^(-xt)/t dt` for `x ≥ 0`, by quadrature.
pub fn ks_l0_direct(x: f64, ctrl: &AccuracyControl) -> Result<IntegrationResult> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("ks_l0", format!("x must be non-negative, got {x}")));
    }
    laplace(|t| ks_spectral(t) / t, x, ctrl)
}

/// `L0''(u) = -L1'(u) = ∫₁^∞ F(t) t e^(-ut) dt` for `u > 0`.
pub fn ks_l0_second(u: f64, ctrl: &AccuracyControl) -> Result<IntegrationResult> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::domain("ks_l0_second", format!("u must be positive, got {u}")));
    }
    laplace(|t| ks_spectral(t) * t, u, ctrl)
}

/// `∫₁^∞ h(t) e^(-ut) dt`, evaluated as `e^(-u) ∫₀^∞ h(1+s) e^(-us) ds`.
fn laplace<H: Fn(f64) -> f64>(h: H, u: f64, ctrl: &AccuracyControl) -> Result<IntegrationResult> {
    let scale = if u > 1.0 { 1.0 / u } else { 1.0 };
    let g = |s: f64| h(1.0 + s) * (-u * s).exp();
    let head = integrate_piecewise(g, &[0.0, scale], ctrl)?;
    let r = head + integrate_to_infinity(g, scale, ctrl)?;
    let e = (-u).exp();
    Ok(IntegrationResult {
        value: r.value * e,
        est_error: r.est_error * e,
        ..r
    })
}

/// `L0` and its first two derivatives sampled on a logarithmic grid, with
/// quintic Hermite interpolation of `L0(u) e^u (1+u)` in `ln u`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KSKernelTable {
    pub u_grid: Vec<f64>,
    pub l1_values: Vec<f64>,
    pub l0_values: Vec<f64>,
    /// `L0'' = -L1'`.
    pub l2_values: Vec<f64>,
    /// Relative tolerance of the node quadratures.
    pub tolerance: f64,
    /// `L0(0)`, used below the first node.
    pub l0_at_zero: f64,
    /// Spacing in `ln u`.
    pub step: f64,
}

/// Smallest and largest tabulated arguments.
pub const TABLE_U_MIN: f64 = 1e-12;
pub const TABLE_U_MAX: f64 = 200.0;
/// Default spacing in `ln u`.
pub const TABLE_STEP: f64 = 0.025;

impl KSKernelTable {
    /// Builds the table with grid spacing `step` in `ln u`.
    pub fn build(step: f64, ctrl: &AccuracyControl) -> Result<Self> {
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::Config(format!("table step must lie in (0, 1], got {step}")));
        }
        let (s0, s1) = (TABLE_U_MIN.ln(), TABLE_U_MAX.ln());
        let n = ((s1 - s0) / step).ceil() as usize;
        let h = (s1 - s0) / n as f64;
        let u_grid: Vec<f64> = (0..=n).map(|i| (s0 + i as f64 * h).exp()).collect();
        let nodes: Vec<(f64, f64, f64)> = u_grid
            .par_iter()
            .map(|&u| -> Result<(f64, f64, f64)> {
                let l1 = ks_l1(u, ctrl)?.checked("KSKernelTable")?;
                let l0 = ks_l0_direct(u, ctrl)?.checked("KSKernelTable")?;
                let l2 = ks_l0_second(u, ctrl)?.checked("KSKernelTable")?;
                Ok((l1, l0, l2))
            })
            .collect::<Result<_>>()?;
        let l0_at_zero = ks_l0_direct(0.0, ctrl)?.checked("KSKernelTable")?;
        Ok(KSKernelTable {
            u_grid,
            l1_values: nodes.iter().map(|p| p.0).collect(),
            l0_values: nodes.iter().map(|p| p.1).collect(),
            l2_values: nodes.iter().map(|p| p.2).collect(),
            tolerance: ctrl.rel_tol,
            l0_at_zero,
            step: h,
        })
    }

    /// The shared table at the default resolution.
    pub fn shared() -> Result<&'static KSKernelTable> {
        static TABLE: OnceLock<std::result::Result<KSKernelTable, Error>> = OnceLock::new();
        TABLE
            .get_or_init(|| KSKernelTable::build(TABLE_STEP, &AccuracyControl::with_tol(1e-12)?))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Interpolated `L0(u)` for `u ≥ 0`; beyond the table it is integrated directly.
    pub fn l0(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) || u.is_nan() {
            return Err(Error::domain("KSKernelTable::l0", format!("u must be non-negative, got {u}")));
        }
        let first = self.u_grid[0];
        if u < first {
            // L0(u) = L0(0) - ∫₀^u L1, linear in u up to logarithms; the gap is below 1e-9.
            let frac = u / first;
            return Ok(self.l0_at_zero + frac * (self.l0_values[0] - self.l0_at_zero));
        }
        let last = *self.u_grid.last().expect("non-empty");
        if u > last {
            return ks_l0_direct(u, &AccuracyControl::with_tol(self.tolerance)?)?.checked("ks_l0");
        }
        let s = u.ln();
        let s0 = first.ln();
        let idx = (((s - s0) / self.step).floor() as usize).min(self.u_grid.len() - 2);
        let (ua, ub) = (self.u_grid[idx], self.u_grid[idx + 1]);
        let (sa, sb) = (ua.ln(), ub.ln());
        // y(s) = L0(u) P(u), P = e^u (1+u), s = ln u; y' = u Y_u, y'' = u Y_u + u² Y_uu
        let derivs = |i: usize| {
            let u = self.u_grid[i];
            let e = u.exp();
            let (p, p1, p2) = (e * (1.0 + u), e * (2.0 + u), e * (3.0 + u));
            let (l0, l1, l2) = (self.l0_values[i], self.l1_values[i], self.l2_values[i]);
            let yu = -l1 * p + l0 * p1;
            let yuu = l2 * p - 2.0 * l1 * p1 + l0 * p2;
            (l0 * p, u * yu, u * yu + u * u * yuu)
        };
        let (y0, d0, s0d) = derivs(idx);
        let (y1, d1, s1d) = derivs(idx + 1);
        let hh = sb - sa;
        let t = (s - sa) / hh;
        let (t2, t3) = (t * t, t * t * t);
        let (t4, t5) = (t3 * t, t3 * t2);
        let y = (1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5) * y0
            + (t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5) * hh * d0
            + 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5) * hh * hh * s0d
            + 0.5 * (t3 - 2.0 * t4 + t5) * hh * hh * s1d
            + (-4.0 * t3 + 7.0 * t4 - 3.0 * t5) * hh * d1
            + (10.0 * t3 - 15.0 * t4 + 6.0 * t5) * y1;
        Ok(y * (-u).exp() / (1.0 + u))
    }
}

/// `L0(x)` from the shared kernel table.
pub fn ks_l0(x: f64) -> Result<f64> {
    KSKernelTable::shared()?.l0(x)
}

struct KsIntegrand<'a> {
    r: f64,
    two_c: f64,
    table: &'a KSKernelTable,
}

impl SmoothFunctionBundle for KsIntegrand<'_> {
    fn value(&self, y: f64) -> f64 {
        match (
            self.table.l0(self.two_c * (self.r - y).abs()),
            self.table.l0(self.two_c * (self.r + y).abs()),
        ) {
            (Ok(a), Ok(b)) => y * (a - b),
            _ => f64::NAN,
        }
    }

    fn derivative(&self, m: u32, y: f64) -> Result<f64> {
        if m == 0 {
            Ok(self.value(y))
        } else {
            Err(Error::contract("ks_potential", "only values are available"))
        }
    }

    fn max_order(&self) -> u32 {
        0
    }

    fn kinks(&self) -> Vec<f64> {
        vec![-self.r, self.r]
    }
}

/// A potential value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsPotential {
    pub value: f64,
    pub est_error: f64,
}

/// `V_KS(r)` in hartree for the distribution `d`, using the shared table.
pub fn ks_potential(
    r: f64,
    d: &FermiDistribution,
    ctrl: &AccuracyControl,
    k: &PhysicalConstants,
) -> Result<KsPotential> {
    ks_potential_with(r, d, ctrl, k, KSKernelTable::shared()?)
}

/// [`ks_potential`] with an explicit kernel table.
pub fn ks_potential_with(
    r: f64,
    d: &FermiDistribution,
    ctrl: &AccuracyControl,
    k: &PhysicalConstants,
    table: &KSKernelTable,
) -> Result<KsPotential> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain("ks_potential", format!("r must be positive, got {r}")));
    }
    let h = KsIntegrand {
        r,
        two_c: 2.0 * k.c,
        table,
    };
    let res = fermi_weighted_integral(&h, d.xi, d.a, ctrl)?;
    let v = res.checked("ks_potential")?;
    let pref = k.alpha.powi(3) * d.rho0 / (PI * PI * r);
    Ok(KsPotential {
        value: pref * v,
        est_error: (pref * res.est_error).abs(),
    })
}

/// Point-nucleus limit `α³ c Z L1(2cr) / (π³ r)`.
pub fn ks_point(r: f64, z_nuc: f64, k: &PhysicalConstants, ctrl: &AccuracyControl) -> Result<KsPotential> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain("ks_point", format!("r must be positive, got {r}")));
    }
    let l1 = ks_l1(2.0 * k.c * r, ctrl)?;
    let pref = k.alpha.powi(3) * k.c * z_nuc / (PI.powi(3) * r);
    Ok(KsPotential {
        value: pref * l1.checked("ks_point")?,
        est_error: (pref * l1.est_error).abs(),
    })
}

/// Coefficients `a..f` of the large-`u` fit
/// `L1(u) ≈ (a + b√u + cu + du^(3/2) + eu² + fu^(5/2)) e^(-u) / u^(7/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl FitCoefficients {
    /// Parses `name=value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vals: [Option<f64>; 6] = [None; 6];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected name=value", lineno + 1)))?;
            let idx = match name.trim() {
                "a" => 0,
                "b" => 1,
                "c" => 2,
                "d" => 3,
                "e" => 4,
                "f" => 5,
                other => return Err(Error::Config(format!("line {}: unknown coefficient {other:?}", lineno + 1))),
            };
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("line {}: bad number {:?}", lineno + 1, value.trim())))?;
            vals[idx] = Some(v);
        }
        let get = |i: usize| vals[i].ok_or_else(|| Error::Config(format!("missing coefficient {}", ['a', 'b', 'c', 'd', 'e', 'f'][i])));
        Ok(FitCoefficients {
            a: get(0)?,
            b: get(1)?,
            c: get(2)?,
            d: get(3)?,
            e: get(4)?,
            f: get(5)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The fitted `L1(u)`, meant for `u > 3`.
    pub fn l1(&self, u: f64) -> f64 {
        let s = u.sqrt();
        let poly = self.a + s * (self.b + s * (self.c + s * (self.d + s * (self.e + s * self.f))));
        poly * (-u).exp() / u.powf(3.5)
    }
}
