//! Adaptive Gauss-Kronrod quadrature.
//!
//! Every integral is first mapped onto `u ∈ [0, 1]`. The unit interval is then
//! split at `u = 1/2` and each half is parametrised by its distance `σ` from the
//! nearer endpoint through the cubic `u = σ²(3 - 2σ)`. The Jacobian `6σ(1 - σ)`
//! vanishes at both ends, which turns inverse-square-root and logarithmic
//! endpoint singularities into bounded integrands, and measuring `σ` from the
//! endpoint keeps full floating-point resolution next to it.
//!
//! Each panel is integrated with the 10-point Gauss / 21-point Kronrod pair.
//! The panel error is the QUADPACK estimate
//! `resasc * min(1, (200 |K - G| / resasc)^1.5)`, floored at `50 ε resabs`.
//! The panel with the largest error is bisected until the summed error drops
//! below `max(rel_tol |I|, abs_tol)` or the subdivision budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::accuracy::AccuracyControl;
use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for the odd-indexed Kronrod abscissae.
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    pub est_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegrationResult {
    /// The value, or an error if the tolerance was not met.
    pub fn checked(self, func: &'static str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NoConvergence {
                func,
                est_error: self.est_error,
                evaluations: self.evaluations,
            })
        }
    }

    fn zero() -> Self {
        IntegrationResult {
            value: 0.0,
            est_error: 0.0,
            evaluations: 0,
            converged: true,
        }
    }
}

impl std::ops::Add for IntegrationResult {
    type Output = IntegrationResult;

    fn add(self, rhs: Self) -> Self {
        IntegrationResult {
            value: self.value + rhs.value,
            est_error: self.est_error + rhs.est_error,
            evaluations: self.evaluations + rhs.evaluations,
            converged: self.converged && rhs.converged,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

struct Panel {
    side: Side,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

/// One Gauss-Kronrod panel over `[lo, hi]` of the local variable.
fn gk21<G: Fn(f64) -> f64>(g: &G, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = g(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let value = res_k * half;
    let err = rescale_error((res_k - res_g) * half, res_abs * h, res_asc * h);
    (value, err)
}

/// Integrates `g(u, 1 - u)` over `u ∈ [0, 1]`.
///
/// `g` receives both `u` and its complement so that callers can map the right
/// endpoint without cancellation.
fn unit_interval<G>(g: G, ctrl: &AccuracyControl, abs_tol: f64) -> IntegrationResult
where
    G: Fn(f64, f64) -> f64,
{
    let local = |side: Side, sigma: f64| -> f64 {
        let w = sigma * sigma * (3.0 - 2.0 * sigma);
        let jac = 6.0 * sigma * (1.0 - sigma);
        if jac == 0.0 {
            return 0.0;
        }
        let v = match side {
            Side::Left => g(w, 1.0 - w),
            Side::Right => g(1.0 - w, w),
        };
        v * jac
    };

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for side in [Side::Left, Side::Right] {
        let (value, error) = gk21(&|s| local(side, s), 0.0, 0.5);
        evaluations += 21;
        total += value;
        total_err += error;
        heap.push(Panel {
            side,
            lo: 0.0,
            hi: 0.5,
            value,
            error,
        });
    }

    let mut subdivisions = 0;
    let mut frozen_err = 0.0;
    let mut frozen_val = 0.0;
    loop {
        let tol = (ctrl.rel_tol * total.abs()).max(abs_tol).max(1e-300);
        if total_err <= tol {
            break;
        }
        if subdivisions >= ctrl.max_subdivisions {
            break;
        }
        let Some(panel) = heap.pop() else { break };
        let mid = 0.5 * (panel.lo + panel.hi);
        if mid <= panel.lo || mid >= panel.hi || (panel.hi - panel.lo) < 4.0 * f64::EPSILON * mid {
            // Cannot bisect any further in floating point.
            frozen_err += panel.error;
            frozen_val += panel.value;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let side = panel.side;
        let (v1, e1) = gk21(&|s| local(side, s), panel.lo, mid);
        let (v2, e2) = gk21(&|s| local(side, s), mid, panel.hi);
        evaluations += 42;
        subdivisions += 1;
        total += v1 + v2 - panel.value;
        total_err += e1 + e2 - panel.error;
        heap.push(Panel {
            side,
            lo: panel.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            side,
            lo: mid,
            hi: panel.hi,
            value: v2,
            error: e2,
        });
        // Re-sum periodically to keep the running totals free of drift.
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum::<f64>() + frozen_val;
            total_err = heap.iter().map(|p| p.error).sum::<f64>() + frozen_err;
        }
    }
    let value = heap.iter().map(|p| p.value).sum::<f64>() + frozen_val;
    let est_error = heap.iter().map(|p| p.error).sum::<f64>() + frozen_err;
    let tol = (ctrl.rel_tol * value.abs()).max(abs_tol).max(1e-300);
    IntegrationResult {
        value,
        est_error,
        evaluations,
        converged: est_error <= tol && value.is_finite(),
    }
}

fn check_bounds(func: &'static str, a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(func, format!("non-finite bound [{a}, {b}]")));
    }
    if a > b {
        return Err(Error::domain(func, format!("reversed interval [{a}, {b}]")));
    }
    Ok(())
}

/// Integrates `f` over `[a, b]` to relative tolerance `ctrl.rel_tol`.
///
/// Integrable endpoint singularities of logarithmic or inverse-square-root type
/// are allowed. A result that misses the tolerance comes back with
/// `converged == false`.
pub fn integrate<F>(f: F, a: f64, b: f64, ctrl: &AccuracyControl) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    integrate_abs(f, a, b, ctrl, 0.0)
}

/// Like [`integrate`], but also accepts the result once the error is below `abs_tol`.
pub fn integrate_abs<F>(
    f: F,
    a: f64,
    b: f64,
    ctrl: &AccuracyControl,
    abs_tol: f64,
) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    check_bounds("integrate", a, b)?;
    if a == b {
        return Ok(IntegrationResult::zero());
    }
    let len = b - a;
    Ok(unit_interval(
        |u, v| {
            let x = if u <= v { a + len * u } else { b - len * v };
            f(x) * len
        },
        ctrl,
        abs_tol,
    ))
}

/// Integrates over consecutive sub-intervals delimited by `points`, which must be
/// ascending. Interior points are where the integrand has kinks or singularities.
pub fn integrate_piecewise<F>(
    f: F,
    points: &[f64],
    ctrl: &AccuracyControl,
) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    let mut acc = IntegrationResult::zero();
    for w in points.windows(2) {
        if w[1] > w[0] {
            acc = acc + integrate(&f, w[0], w[1], ctrl)?;
        } else if w[1] < w[0] {
            return Err(Error::domain("integrate_piecewise", "breakpoints not ascending"));
        }
    }
    Ok(acc)
}

/// Integrates `f` over `[a, ∞)` through the map `t = a + u / (1 - u)`.
///
/// `f` must decay faster than `1/t²`. Beyond `t = 1e150` the integrand is taken as
/// zero when it is not representable.
pub fn integrate_to_infinity<F>(f: F, a: f64, ctrl: &AccuracyControl) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    integrate_to_infinity_abs(f, a, ctrl, 0.0)
}

pub fn integrate_to_infinity_abs<F>(
    f: F,
    a: f64,
    ctrl: &AccuracyControl,
    abs_tol: f64,
) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    if !a.is_finite() {
        return Err(Error::domain("integrate_to_infinity", "non-finite lower bound"));
    }
    Ok(unit_interval(
        |u, v| {
            if v <= 0.0 {
                return 0.0;
            }
            let t = a + u / v;
            let val = f(t) / (v * v);
            if !val.is_finite() && t > 1e150 {
                0.0
            } else {
                val
            }
        },
        ctrl,
        abs_tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ctrl() -> AccuracyControl {
        AccuracyControl::default()
    }

    #[test]
    fn kronrod_rule_is_exact_for_high_degree_polynomials() {
        // Degree 30 polynomial on a single panel.
        let (v, _) = gk21(&|x: f64| 31.0 * x.powi(30), 0.0, 1.0);
        assert!((v - 1.0).abs() < 1e-14, "{v}");
        let (v, _) = gk21(&|x: f64| x.powi(19) * 20.0, 0.0, 1.0);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn parabola_over_unit_interval() {
        let r = integrate(|x| x * (1.0 - x), 0.0, 1.0, &ctrl()).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn log_weighted_parabola() {
        // (5 + 6 ln(cr)) / 36 at cr = 1
        let r = integrate(|x| x * (1.0 - x) * (1.0 / (x * (1.0 - x)).sqrt()).ln(), 0.0, 1.0, &ctrl())
            .unwrap();
        assert!(r.converged);
        assert!((r.value - 5.0 / 36.0).abs() < 1e-13, "{}", r.value);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let r = integrate(|x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, &ctrl()).unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-12, "{}", r.value);
        let r = integrate(|x: f64| -x.ln(), 0.0, 1.0, &ctrl()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn semi_infinite_classics() {
        let r = integrate_to_infinity(|t: f64| (-t).exp(), 0.0, &ctrl()).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-14);
        let r = integrate_to_infinity(|t: f64| 1.0 / t.cosh(), 0.0, &ctrl()).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn nine_pi_over_thirty_two() {
        let r = integrate_to_infinity(
            |t: f64| (t * t - 1.0).sqrt() * (1.0 / t.powi(3) + 0.5 / t.powi(5)),
            1.0,
            &ctrl(),
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.value - 9.0 * PI / 32.0).abs() < 1e-11 * r.value, "{}", r.value);
    }

    #[test]
    fn pi_over_thirty_two_on_growing_truncation() {
        let exact = PI / 32.0;
        let f = |t: f64| (t * t - 1.0).sqrt() / (2.0 * t.powi(5));
        let mut last = f64::INFINITY;
        for b in [10.0, 100.0, 1000.0, 1e4] {
            let v = integrate(f, 1.0, b, &ctrl()).unwrap().value;
            let gap = (v - exact).abs();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 1e-12);
    }

    #[test]
    fn non_convergence_is_reported() {
        let tight = AccuracyControl::new(1e-14, 200, 100).unwrap();
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &tight).unwrap();
        assert!(!r.converged);
        assert!(r.checked("osc").is_err());
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(integrate(|x| x, 1.0, 0.0, &ctrl()).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &ctrl()).is_err());
        assert_eq!(integrate(|x| x, 2.0, 2.0, &ctrl()).unwrap().value, 0.0);
    }
}
