//! Bernoulli numbers and even zeta values.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Highest Bernoulli index kept as an exact rational.
const MAX_EXACT: usize = 64;

fn bernoulli_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut b: Vec<BigRational> = Vec::with_capacity(MAX_EXACT + 1);
        b.push(BigRational::one());
        for m in 1..=MAX_EXACT {
            // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one(); // C(m+1, 0)
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// The Bernoulli number `B_m` as an exact rational (`B_1 = -1/2`).
///
/// Returns `None` above the tabulated range.
pub fn bernoulli(m: usize) -> Option<BigRational> {
    bernoulli_table().get(m).cloned()
}

/// `B_m / m!` as an exact rational.
pub fn bernoulli_over_factorial(m: usize) -> Option<BigRational> {
    let b = bernoulli(m)?;
    let mut fact = BigInt::one();
    for j in 2..=m {
        fact *= BigInt::from(j);
    }
    Some(b / BigRational::from_integer(fact))
}

/// `ζ(2n)` for `n ≥ 1`.
///
/// Up to `n = 16` the value comes from `ζ(2n) = (-1)^(n+1) B_2n (2π)^2n / (2 (2n)!)`
/// with the rational part exact; beyond that the defining sum converges in a
/// handful of terms.
pub fn zeta_even(n: u32) -> f64 {
    assert!(n >= 1, "zeta_even needs n >= 1");
    if n <= 16 {
        let ratio = bernoulli_over_factorial(2 * n as usize)
            .expect("tabulated")
            .to_f64()
            .expect("finite");
        let two_pi = 2.0 * std::f64::consts::PI;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        sign * ratio * two_pi.powi(2 * n as i32) / 2.0
    } else {
        let s = 2 * n as i32;
        let mut acc = 0.0;
        for k in (1..=8).rev() {
            acc += (k as f64).powi(-s);
        }
        acc
    }
}
