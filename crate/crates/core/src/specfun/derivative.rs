//! Higher derivatives of `K0` expanded over integer-order `K_ν`.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::specfun::bessel::bessel_k_sequence;

/// `d^k K0/dz^k = Σ_ν coeffs[ν] K_ν(z)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselDerivativeExpansion {
    pub order: u32,
    #[serde(serialize_with = "serialize_coeffs")]
    pub coeffs: BTreeMap<u32, Rational64>,
}

fn serialize_coeffs<S: serde::Serializer>(
    coeffs: &BTreeMap<u32, Rational64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(coeffs.len()))?;
    for (nu, c) in coeffs {
        map.serialize_entry(nu, &c.to_string())?;
    }
    map.end()
}

impl BesselDerivativeExpansion {
    /// Evaluates the expansion at `z > 0`.
    pub fn evaluate(&self, z: f64) -> Result<f64> {
        let ks = bessel_k_sequence(self.order.max(1), z)?;
        Ok(self.evaluate_with(&ks))
    }

    /// Evaluates the expansion from precomputed `[K0(z), K1(z), ...]`.
    pub fn evaluate_with(&self, ks: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(&nu, c)| c.to_f64().unwrap() * ks[nu as usize])
            .sum()
    }
}

/// Coefficients of `d^k K0/dz^k` from `k` applications of
/// `K_ν' = -(K_(ν-1) + K_(ν+1))/2` with `K_(-ν) = K_ν`.
///
/// Coefficients are dyadic rationals with numerators bounded by `C(k, j)`, so
/// `i64` arithmetic is exact for `k ≤ 60`.
pub fn k0_derivative_coeffs(k: u32) -> BesselDerivativeExpansion {
    assert!(k <= 60, "derivative order too large for exact i64 coefficients");
    let mut coeffs = BTreeMap::new();
    coeffs.insert(0u32, Rational64::from_integer(1));
    let half = Rational64::new(1, 2);
    for _ in 0..k {
        let mut next: BTreeMap<u32, Rational64> = BTreeMap::new();
        for (&nu, &c) in &coeffs {
            let lower = if nu == 0 { 1 } else { nu - 1 };
            *next.entry(lower).or_insert_with(Rational64::zero) -= c * half;
            *next.entry(nu + 1).or_insert_with(Rational64::zero) -= c * half;
        }
        next.retain(|_, c| !c.is_zero());
        coeffs = next;
    }
    BesselDerivativeExpansion { order: k, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel::bessel_k;

    #[test]
    fn low_orders() {
        let c0 = k0_derivative_coeffs(0);
        assert_eq!(c0.coeffs.len(), 1);
        assert_eq!(c0.coeffs[&0], Rational64::from_integer(1));
        let c1 = k0_derivative_coeffs(1);
        assert_eq!(c1.coeffs.len(), 1);
        assert_eq!(c1.coeffs[&1], Rational64::from_integer(-1));
        let c2 = k0_derivative_coeffs(2);
        assert_eq!(c2.coeffs[&0], Rational64::new(1, 2));
        assert_eq!(c2.coeffs[&2], Rational64::new(1, 2));
        assert_eq!(c2.coeffs.len(), 2);
    }

    #[test]
    fn parity_and_support() {
        for k in 0..20 {
            for &nu in k0_derivative_coeffs(k).coeffs.keys() {
                assert!(nu <= k && (k - nu) % 2 == 0);
            }
        }
    }

    #[test]
    fn matches_finite_differences() {
        let z = 1.7;
        for k in 1..=6u32 {
            let fd = crate::numdiff::derivative(|x| bessel_k(0, x).unwrap(), z, k, 0.07, 10);
            let exact = k0_derivative_coeffs(k).evaluate(z).unwrap();
            assert!(((fd - exact) / exact).abs() < 1e-6, "k={k}: {fd} {exact}");
        }
    }

    #[test]
    fn printed_identity_fails_at_second_order() {
        // (-1)^k K_k would give K2 for k = 2.
        let z = 1.7;
        let exact = k0_derivative_coeffs(2).evaluate(z).unwrap();
        let printed = bessel_k(2, z).unwrap();
        assert!(((printed - exact) / exact).abs() > 0.1);
    }
}
