//! Finite-difference derivatives, used as an independent check on closed-form
//! derivatives.

/// Plain central difference of order `k` with step `h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: &F, x: f64, k: u32, h: f64) -> f64 {
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * f(x + (k as f64 / 2.0 - j as f64) * h);
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    acc / h.powi(k as i32)
}

/// Weights of the `k`-th derivative at `x0` on the given nodes (Fornberg's algorithm).
pub fn fornberg_weights(x0: f64, nodes: &[f64], k: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; k + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for m in (1..=mn).rev() {
                    c[i][m] = c1 * (m as f64 * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for m in (1..=mn).rev() {
                c[j][m] = (c4 * c[j][m] - m as f64 * c[j][m - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[k]).collect()
}

/// `k`-th derivative of `f` at `x` from a symmetric stencil of `2 half_width + 1`
/// points spaced `h` apart.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, k: u32, h: f64, half_width: usize) -> f64 {
    let m = half_width.max((k as usize).div_ceil(2));
    let nodes: Vec<f64> = (0..=2 * m)
        .map(|i| x + (i as f64 - m as f64) * h)
        .collect();
    let w = fornberg_weights(x, &nodes, k as usize);
    nodes.iter().zip(&w).map(|(&t, &wi)| wi * f(t)).sum()
}
