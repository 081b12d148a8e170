//! Fermi (Woods-Saxon) charge distribution `ρ(x) = ρ0 / (1 + e^((x-ξ)/a))`,
//! its moments, the Sommerfeld-type expansion engine and the `I(p,q)`,
//! `L(p,q)` integral ladders.

pub mod ladders;
pub mod sommerfeld;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::accuracy::AccuracyControl;
use crate::constants::{diffuseness_from_thickness, fm_to_bohr, DEFAULT_THICKNESS_FM, DEFAULT_XI_AU};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity_abs};
use crate::specfun::{polylog_neg_exp, zeta_even};

pub use ladders::{i_pq, l_npq};
pub use sommerfeld::{
    fermi_weighted_integral, sommerfeld_integrate, sommerfeld_windowed, truncated_fermi_moment, Polynomial, SmoothFunctionBundle, SommerfeldResult,
    WindowedResult,
};

/// Fermi charge distribution. Lengths in Bohr radii; `ρ` integrates to `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FermiDistribution {
    /// Nuclear charge.
    pub z: f64,
    /// Half-density radius.
    pub xi: f64,
    /// Diffuseness.
    pub a: f64,
    /// `N = 1 + π²a²/ξ² - 6 (a/ξ)³ Li₃(-e^(-ξ/a))`.
    pub n_norm: f64,
    /// Central density `3Z / (4π ξ³ N)`.
    pub rho0: f64,
    /// Set when `ξ/a ≤ 1`, where the profile no longer has a recognisable surface.
    pub diffuse_warning: bool,
}

/// Builds a distribution from `Z`, `ξ` and `a` (all positive).
pub fn make_fermi(z: f64, xi: f64, a: f64) -> Result<FermiDistribution> {
    for (name, v) in [("Z", z), ("xi", xi), ("a", a)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain("make_fermi", format!("{name} must be positive, got {v}")));
        }
    }
    let ratio = a / xi;
    let n_norm = 1.0 + PI * PI * ratio * ratio - 6.0 * ratio.powi(3) * polylog_neg_exp(3, xi / a);
    let rho0 = 3.0 * z / (4.0 * PI * xi.powi(3) * n_norm);
    Ok(FermiDistribution {
        z,
        xi,
        a,
        n_norm,
        rho0,
        diffuse_warning: xi / a <= 1.0,
    })
}

impl FermiDistribution {
    /// The default nucleus: `ξ = 2.2677e-5 a0` and `t = 2.3 fm`.
    pub fn physical(z: f64) -> Result<Self> {
        make_fermi(
            z,
            DEFAULT_XI_AU,
            fm_to_bohr(diffuseness_from_thickness(DEFAULT_THICKNESS_FM)),
        )
    }

    /// `ρ(x)`.
    pub fn density(&self, x: f64) -> f64 {
        self.rho0 * self.profile(x)
    }

    /// `1 / (1 + e^((x-ξ)/a))`, without overflow for large arguments.
    pub fn profile(&self, x: f64) -> f64 {
        fermi_weight((x - self.xi) / self.a)
    }

    /// Distance beyond `ξ` past which the profile is below `e^-60` of its centre.
    pub fn support_end(&self) -> f64 {
        self.xi + 60.0 * self.a
    }
}

/// `1 / (1 + e^t)` for any real `t`.
pub fn fermi_weight(t: f64) -> f64 {
    if t > 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

/// `ρ(x)` for the given distribution.
pub fn density(d: &FermiDistribution, x: f64) -> f64 {
    d.density(x)
}

/// Route for [`fermi_moment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    Closed,
    Quadrature,
}

/// `∫₀^∞ y^k / (1 + e^((y-ξ)/a)) dy` (the bare profile, without `ρ0`).
///
/// The closed form is
/// `ξ^(k+1)/(k+1) + Σ_n (2 - 4^(-n)) ζ(2n+2) a^(2n+2) k!/(k-2n-1)! ξ^(k-2n-1)
///  + (-1)^(k+1) k! a^(k+1) Li_(k+1)(-e^(-ξ/a))`.
pub fn fermi_moment(d: &FermiDistribution, k: u32, method: MomentMethod) -> Result<f64> {
    match method {
        MomentMethod::Closed => Ok(moment_closed(d.xi, d.a, k)),
        MomentMethod::Quadrature => {
            moment_quadrature(d, k, &AccuracyControl::with_tol(1e-13)?)
        }
    }
}

fn moment_closed(xi: f64, a: f64, k: u32) -> f64 {
    let mut acc = xi.powi(k as i32 + 1) / (k as f64 + 1.0);
    let mut n = 0u32;
    while 2 * n < k {
        // k! / (k-2n-1)!
        let falling: f64 = ((k - 2 * n)..=k).map(|j| j as f64).product();
        let coeff = (2.0 - 0.25f64.powi(n as i32)) * zeta_even(n + 1);
        acc += coeff * a.powi(2 * n as i32 + 2) * falling * xi.powi((k - 2 * n - 1) as i32);
        n += 1;
    }
    let fact: f64 = (1..=k).map(|j| j as f64).product();
    let sign = if k.is_multiple_of(2) { -1.0 } else { 1.0 };
    acc + sign * fact * a.powi(k as i32 + 1) * polylog_neg_exp(k + 1, xi / a)
}

fn moment_quadrature(d: &FermiDistribution, k: u32, ctrl: &AccuracyControl) -> Result<f64> {
    let f = |y: f64| y.powi(k as i32) * d.profile(y);
    let end = d.support_end();
    let inner = integrate(f, 0.0, d.xi, ctrl)? + integrate(f, d.xi, end, ctrl)?;
    let tail = integrate_to_infinity_abs(f, end, ctrl, ctrl.rel_tol * inner.value.abs())?;
    (inner + tail).checked("fermi_moment")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn step_limit() {
        let d = make_fermi(1.0, 1.0, 1e-4).unwrap();
        assert!((d.n_norm - 1.0).abs() < 1e-7);
        assert!(rel(d.rho0, 3.0 / (4.0 * PI)) < 1e-7);
        for k in 0..5 {
            let m = fermi_moment(&d, k, MomentMethod::Closed).unwrap();
            assert!(rel(m, 1.0 / (k as f64 + 1.0)) < 1e-6);
        }
    }

    #[test]
    fn algebraic_identity() {
        let d = FermiDistribution::physical(82.0).unwrap();
        let v = d.rho0 * d.xi.powi(3) * d.n_norm;
        assert!(rel(v, 3.0 * 82.0 / (4.0 * PI)) < 1e-15);
    }

    #[test]
    fn density_values() {
        let d = FermiDistribution::physical(1.0).unwrap();
        assert!(rel(d.density(d.xi), 0.5 * d.rho0) < 1e-15);
        let expected = d.rho0 / (1.0 + (-d.xi / d.a).exp());
        assert!(rel(d.density(0.0), expected) < 1e-15);
        assert_eq!(d.density(1e6), 0.0);
        assert!(d.density(d.xi + 800.0 * d.a).is_finite());
        assert!((d.xi / d.a - 2.293).abs() < 1e-3);
    }

    #[test]
    fn normalization_matches_quadrature() {
        let d = FermiDistribution::physical(1.0).unwrap();
        let m2 = fermi_moment(&d, 2, MomentMethod::Quadrature).unwrap();
        assert!(rel(4.0 * PI * d.rho0 * m2, 1.0) < 1e-10);
        let closed = fermi_moment(&d, 2, MomentMethod::Closed).unwrap();
        assert!(rel(closed, d.xi.powi(3) * d.n_norm / 3.0) < 1e-12);
    }

    #[test]
    fn moments_closed_vs_quadrature() {
        let d = FermiDistribution::physical(1.0).unwrap();
        for k in 0..=8 {
            let c = fermi_moment(&d, k, MomentMethod::Closed).unwrap();
            let q = fermi_moment(&d, k, MomentMethod::Quadrature).unwrap();
            assert!(rel(c, q) < 1e-10, "k={k}: {c} {q}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_fermi(0.0, 1.0, 1.0).is_err());
        assert!(make_fermi(1.0, -1.0, 1.0).is_err());
        assert!(make_fermi(1.0, 1.0, 2.0).unwrap().diffuse_warning);
    }
}
