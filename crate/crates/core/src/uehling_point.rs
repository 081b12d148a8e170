//! The Uehling kernel `g(z)`, the point-nucleus potential and its limits.
//!
//! With `z = 2cr`,
//!
//! ```text
//! g(z) = ∫₁^∞ √(t²-1) (1/t³ + 1/(2t⁵)) e^(-zt) dt
//! U(z) = ∫₁^∞ √(t²-1) (1/t² + 1/(2t⁴)) e^(-zt) dt = -g'(z)
//! δV(r) = -(2αZ / 3πr) U(2cr)
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::accuracy::AccuracyControl;
use crate::constants::{PhysicalConstants, EULER_GAMMA};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity};
use crate::specfun::{bessel_k0_k1, bickley, bickley_sequence, e1};

/// Representation used to evaluate `g(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GForm {
    /// `Ki1 - Ki3/2 - Ki5/2`.
    Ki135,
    /// `(9/16 + z²/48) Ki1 - (7z/16 + z³/48) K0 + (19z/48 + z³/48) Ki2`.
    K0Ki1Ki2,
    /// `-(21z + z³)/48 K0 + (19z² + z⁴)/48 K1 + (27 - 18z² - z⁴)/48 Ki1`.
    K0K1Ki1,
    /// Adaptive quadrature of the defining integral.
    Quadrature,
}

impl GForm {
    pub const ALL: [GForm; 4] = [GForm::Ki135, GForm::K0Ki1Ki2, GForm::K0K1Ki1, GForm::Quadrature];
}

/// `g(0) = 9π/32`.
pub const G_AT_ZERO: f64 = 9.0 * PI / 32.0;

fn g_integrand(z: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        let t2 = t * t;
        ((t - 1.0) * (t + 1.0)).sqrt() * (1.0 / (t2 * t) + 0.5 / (t2 * t2 * t)) * (-z * t).exp()
    }
}

fn u_integrand(z: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        let t2 = t * t;
        ((t - 1.0) * (t + 1.0)).sqrt() * (1.0 / t2 + 0.5 / (t2 * t2)) * (-z * t).exp()
    }
}

/// `g(z)` for `z ≥ 0` through the chosen representation.
pub fn g_kernel(z: f64, form: GForm) -> Result<f64> {
    if z.is_nan() || z < 0.0 {
        return Err(Error::domain("g_kernel", format!("z must be non-negative, got {z}")));
    }
    if z == 0.0 && form != GForm::Quadrature {
        return Ok(G_AT_ZERO);
    }
    match form {
        GForm::Ki135 => {
            let ki = bickley_sequence(5, z)?;
            Ok(ki[1] - 0.5 * ki[3] - 0.5 * ki[5])
        }
        GForm::K0Ki1Ki2 => {
            let ki = bickley_sequence(2, z)?;
            let z2 = z * z;
            let z3 = z2 * z;
            Ok((9.0 / 16.0 + z2 / 48.0) * ki[1] - (7.0 * z / 16.0 + z3 / 48.0) * ki[0]
                + (19.0 * z / 48.0 + z3 / 48.0) * ki[2])
        }
        GForm::K0K1Ki1 => {
            let (k0, k1) = bessel_k0_k1(z)?;
            let ki1 = bickley(1, z)?;
            let z2 = z * z;
            let z4 = z2 * z2;
            Ok(-(21.0 * z + z2 * z) / 48.0 * k0 + (19.0 * z2 + z4) / 48.0 * k1
                + (27.0 - 18.0 * z2 - z4) / 48.0 * ki1)
        }
        GForm::Quadrature => {
            let ctrl = AccuracyControl::with_tol(1e-13)?;
            integrate_to_infinity(g_integrand(z), 1.0, &ctrl)?.checked("g_kernel")
        }
    }
}

/// `g(z)` through the default closed form.
pub fn g(z: f64) -> Result<f64> {
    g_kernel(z, GForm::Ki135)
}

/// `U(z) = K0 - Ki2/2 - Ki4/2` for `z > 0`.
pub fn point_kernel_u(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("point_kernel_u", format!("z must be positive, got {z}")));
    }
    let ki = bickley_sequence(4, z)?;
    Ok(ki[0] - 0.5 * ki[2] - 0.5 * ki[4])
}

/// `U(z)` by adaptive quadrature.
pub fn point_kernel_u_quadrature(z: f64, ctrl: &AccuracyControl) -> Result<(f64, f64)> {
    if !(z > 0.0) {
        return Err(Error::domain("point_kernel_u", format!("z must be positive, got {z}")));
    }
    let r = integrate_to_infinity(u_integrand(z), 1.0, ctrl)?;
    let v = r.checked("point_kernel_u")?;
    Ok((v, r.est_error))
}

/// Evaluation route for the point-nucleus potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointMethod {
    Quadrature,
    Bickley,
    Mezo,
    AsymptoticSmall,
    AsymptoticLarge,
    PyykkoFit,
}

impl PointMethod {
    pub const ALL: [PointMethod; 6] = [
        PointMethod::Quadrature,
        PointMethod::Bickley,
        PointMethod::Mezo,
        PointMethod::AsymptoticSmall,
        PointMethod::AsymptoticLarge,
        PointMethod::PyykkoFit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PointMethod::Quadrature => "quadrature",
            PointMethod::Bickley => "bickley",
            PointMethod::Mezo => "mezo",
            PointMethod::AsymptoticSmall => "asymptotic_small",
            PointMethod::AsymptoticLarge => "asymptotic_large",
            PointMethod::PyykkoFit => "pyykko_fit",
        }
    }
}

/// A potential value with its error estimate. For the asymptotic forms and the
/// fit, the estimate is the distance from the exact closed-form value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointPotential {
    pub value: f64,
    pub est_error: f64,
    /// Set when an asymptotic form is used outside the regime where it holds.
    pub regime_warning: bool,
}

/// Largest `cr` at which the small-distance form is considered valid.
pub const SMALL_R_LIMIT: f64 = 0.1;
/// Smallest `cr` at which the large-distance form is considered valid.
pub const LARGE_R_LIMIT: f64 = 1.0;

/// The point-nucleus Uehling potential `δV(r)` in hartree.
pub fn uehling_point(
    r: f64,
    z_nuc: f64,
    method: PointMethod,
    k: &PhysicalConstants,
) -> Result<PointPotential> {
    uehling_point_with(r, z_nuc, method, k, &AccuracyControl::default())
}

/// [`uehling_point`] with explicit accuracy settings for the quadrature routes.
pub fn uehling_point_with(
    r: f64,
    z_nuc: f64,
    method: PointMethod,
    k: &PhysicalConstants,
    ctrl: &AccuracyControl,
) -> Result<PointPotential> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain("uehling_point", format!("r must be positive, got {r}")));
    }
    if !(z_nuc > 0.0) {
        return Err(Error::domain("uehling_point", format!("Z must be positive, got {z_nuc}")));
    }
    let cr = k.c * r;
    let pref = -2.0 * k.alpha * z_nuc / (3.0 * PI * r);
    let exact = |value: f64, est_error: f64| PointPotential {
        value,
        est_error,
        regime_warning: false,
    };
    match method {
        PointMethod::Quadrature => {
            let (u, err) = point_kernel_u_quadrature(2.0 * cr, ctrl)?;
            Ok(exact(pref * u, (pref * err).abs()))
        }
        PointMethod::Bickley => {
            let u = point_kernel_u(2.0 * cr)?;
            Ok(exact(pref * u, (pref * u).abs() * 1e-13))
        }
        PointMethod::Mezo => {
            // ∫₀¹ x(1-x) E1(cr/√(x(1-x))) dx, symmetric about x = 1/2.
            let f = |x: f64| {
                let w = x * (1.0 - x);
                if w <= 0.0 {
                    return 0.0;
                }
                w * e1(cr / w.sqrt()).unwrap_or(0.0)
            };
            let res = integrate(f, 0.0, 0.5, ctrl)?;
            let v = res.checked("uehling_point")?;
            let p = -4.0 * k.alpha * z_nuc / (PI * r);
            Ok(exact(2.0 * p * v, (2.0 * p * res.est_error).abs()))
        }
        PointMethod::AsymptoticSmall => {
            let v = pref * (-EULER_GAMMA - 5.0 / 6.0 - cr.ln());
            Ok(PointPotential {
                value: v,
                est_error: (v - pref * point_kernel_u(2.0 * cr)?).abs(),
                regime_warning: cr > SMALL_R_LIMIT,
            })
        }
        PointMethod::AsymptoticLarge => {
            let v = large_r_asymptote(r, z_nuc, k);
            Ok(PointPotential {
                value: v,
                est_error: (v - pref * point_kernel_u(2.0 * cr)?).abs(),
                regime_warning: cr < LARGE_R_LIMIT,
            })
        }
        PointMethod::PyykkoFit => {
            let v = pyykko_fit(r, z_nuc, k);
            Ok(PointPotential {
                value: v,
                est_error: (v - pref * point_kernel_u(2.0 * cr)?).abs(),
                regime_warning: false,
            })
        }
    }
}

/// Leading large-distance behaviour `-(αZ / 4√π r) e^(-2cr) / (cr)^(3/2)`.
pub fn large_r_asymptote(r: f64, z_nuc: f64, k: &PhysicalConstants) -> f64 {
    let cr = k.c * r;
    -k.alpha * z_nuc / (4.0 * PI.sqrt() * r) * (-2.0 * cr).exp() / cr.powf(1.5)
}

/// Parameters of the two-term fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PyykkoParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub d1: f64,
    pub d2: f64,
    /// `+1` for `ln(1/(cr))` in the short-range term, `-1` for `ln(cr)`.
    pub log_sign: f64,
}

impl PyykkoParams {
    /// Parameters consistent with the small-distance limit: `c1 = 2/(3π)` and
    /// the logarithm `ln(1/(cr))`.
    pub fn corrected() -> Self {
        PyykkoParams {
            c1: 2.0 / (3.0 * PI),
            c2: 5.0 / 6.0 + EULER_GAMMA,
            c3: 4.0 * PI.sqrt(),
            d1: 0.678e7,
            d2: 1.4302,
            log_sign: 1.0,
        }
    }

    /// The constants exactly as commonly printed: `c1 = 2/(2π)` and `ln(r/α)`.
    pub fn printed() -> Self {
        PyykkoParams {
            c1: 2.0 / (2.0 * PI),
            log_sign: -1.0,
            ..Self::corrected()
        }
    }
}

/// The two-parameter fit with the corrected constants.
pub fn pyykko_fit(r: f64, z_nuc: f64, k: &PhysicalConstants) -> f64 {
    pyykko_fit_with(r, z_nuc, k, &PyykkoParams::corrected())
}

/// The two-parameter fit with explicit constants.
pub fn pyykko_fit_with(r: f64, z_nuc: f64, k: &PhysicalConstants, p: &PyykkoParams) -> f64 {
    let cr = k.c * r;
    let damp = (-p.d1 * r * r).exp();
    let short = damp * p.c1 * (-p.log_sign * cr.ln() - p.c2);
    let long = (1.0 - damp) / p.c3 * (-2.0 * cr).exp() / (p.d2 * cr.sqrt() + cr.powf(1.5));
    -k.alpha * z_nuc / r * (short + long)
}
