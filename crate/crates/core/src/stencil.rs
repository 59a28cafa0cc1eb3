//! Finite-difference weights (Fornberg's recursion) and tensor-product partial derivatives.

use crate::opcore::multiindex::MultiIndex;

/// Weights `w[m][j]` with f^{(m)}(z) ≈ Σ_j w[m][j] f(x_j), for m = 0..=max_order.
pub fn fornberg_weights(z: f64, x: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let np = x.len();
    let mut c = vec![vec![0.0; np]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    for i in 1..np {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Centered weights on offsets −r..=r (unit spacing) for the m-th derivative.
pub fn centered_weights(order: usize, half_width: usize) -> Vec<f64> {
    let r = half_width as i64;
    let x: Vec<f64> = (-r..=r).map(|i| i as f64).collect();
    fornberg_weights(0.0, &x, order).swap_remove(order)
}

/// ∂^α f(x) by products of centered 1-D stencils with spacing h.
///
/// Exact for polynomials whose degree in each variable is at most 2·half_width.
pub fn partial_derivative(
    f: &dyn Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
    alpha: &MultiIndex,
    h: f64,
    half_width: usize,
) -> Vec<f64> {
    let active: Vec<(usize, Vec<f64>)> = alpha
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            let w = centered_weights(e as usize, half_width);
            (i, w.iter().map(|v| v / h.powi(e as i32)).collect())
        })
        .collect();
    let width = 2 * half_width + 1;
    let total = width.pow(active.len() as u32);
    let mut out: Option<Vec<f64>> = None;
    let mut y = x.to_vec();
    for idx in 0..total {
        let mut r = idx;
        let mut weight = 1.0;
        for (var, w) in &active {
            let o = r % width;
            r /= width;
            weight *= w[o];
            y[*var] = x[*var] + (o as f64 - half_width as f64) * h;
        }
        if weight == 0.0 {
            continue;
        }
        let v = f(&y);
        let acc = out.get_or_insert_with(|| vec![0.0; v.len()]);
        for (a, b) in acc.iter_mut().zip(v) {
            *a += weight * b;
        }
    }
    out.unwrap_or_else(|| f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_derivative_three_point() {
        let w = centered_weights(2, 1);
        let expect = [1.0, -2.0, 1.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn first_derivative_five_point() {
        let w = centered_weights(1, 2);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn mixed_derivative_of_polynomial() {
        let f = |x: &[f64]| vec![x[0].powi(3) * x[1].powi(2)];
        let d = partial_derivative(&f, &[0.5, -1.5], &MultiIndex::new(vec![2, 1]), 0.1, 2);
        // ∂₁²∂₂ (x³y²) = 12xy
        assert!((d[0] - 12.0 * 0.5 * -1.5).abs() < 1e-9);
    }
}
