//! Special functions: Bessel `K_ν`, Bickley-Naylor `Ki_n`, exponential and
//! hyperbolic integrals, polylogarithms and even zeta values.

pub mod bessel;
pub mod bickley;
pub mod derivative;
pub mod expint;
pub mod polylog;
pub mod zeta;

pub use bessel::{bessel_k, bessel_k0_k1, bessel_k_sequence};
pub use bickley::{bickley, bickley_regime, bickley_sequence, bickley_with_route, ki_at_zero, BickleyRoute};
pub use derivative::{k0_derivative_coeffs, BesselDerivativeExpansion};
pub use expint::{e1, e1_derivative, shi_chi, upper_gamma};
pub use polylog::{dilog, polylog_neg_exp, re_dilog};
pub use zeta::{bernoulli, zeta_even};

/// `Φ(m) = Σ_{j=1}^{m-1} 1/j`, so `Φ(1) = 0` and `Φ(k+1)` is the k-th harmonic number.
pub fn harmonic_phi(m: u32) -> f64 {
    (1..m).map(|j| 1.0 / j as f64).sum()
}
