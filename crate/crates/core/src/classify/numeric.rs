//! σ_min minimization of the symbol over the real or complex unit sphere.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::opcore::Operator;

#[derive(Clone, Debug)]
pub struct NumericOptions {
    /// Initial grid size on the sphere.
    pub grid_points: usize,
    /// Number of best grid points refined by local search.
    pub starts: usize,
    /// σ* above this is reported as elliptic.
    pub threshold: f64,
    /// Grid multiplier used once before declaring failure.
    pub refine_factor: usize,
    pub seed: u64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self { grid_points: 512, starts: 8, threshold: 1e-6, refine_factor: 10, seed: 0x5eed }
    }
}

#[derive(Clone, Debug)]
pub struct RealMinimum {
    pub sigma: f64,
    pub xi: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ComplexMinimum {
    pub sigma: f64,
    pub xi: Vec<Complex64>,
}

/// Points spread over S^{n−1}: a half circle for n = 2, a Fibonacci lattice for n = 3,
/// seeded Gaussian samples otherwise.
pub fn sphere_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    if n == 3 {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        return (0..count)
            .map(|i| {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * i as f64;
                vec![r * phi.cos(), r * phi.sin(), z]
            })
            .collect();
    }
    if n == 2 {
        return (0..count)
            .map(|i| {
                let t = std::f64::consts::PI * (i as f64 + 0.5) / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| normalized((0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())).collect()
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|a| *a /= n);
    }
    v
}

pub fn sigma_min_real(terms: &[(crate::opcore::MultiIndex, DMatrix<f64>)], shape: (usize, usize), xi: &[f64]) -> f64 {
    let mut s = DMatrix::<f64>::zeros(shape.0, shape.1);
    for (alpha, a) in terms {
        s += a * alpha.power_f64(xi);
    }
    smallest_singular_value(s)
}

fn smallest_singular_value<T: nalgebra::ComplexField<RealField = f64>>(s: DMatrix<T>) -> f64 {
    if s.nrows() < s.ncols() {
        return 0.0;
    }
    s.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

fn sigma_min_complex(
    terms: &[(crate::opcore::MultiIndex, DMatrix<Complex64>)],
    shape: (usize, usize),
    xi: &[Complex64],
) -> f64 {
    let mut s = DMatrix::<Complex64>::zeros(shape.0, shape.1);
    let one = Complex64::new(1.0, 0.0);
    for (alpha, a) in terms {
        s += a * alpha.power(xi, one);
    }
    smallest_singular_value(s)
}

/// Coordinate pattern search on the sphere, renormalizing after each move.
fn pattern_search(f: &dyn Fn(&[f64]) -> f64, x0: Vec<f64>, f0: f64) -> (Vec<f64>, f64) {
    let mut x = x0;
    let mut fx = f0;
    let mut step = 0.1;
    let mut evals = 0usize;
    while step > 1e-12 && evals < 20_000 {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += dir * step;
                let y = normalized(y);
                let fy = f(&y);
                evals += 1;
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

fn best_of(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// Multi-start minimization of σ_min(𝔸[ξ]) over real unit ξ.
pub fn minimize_real(op: &Operator, grid_points: usize, starts: usize, seed: u64) -> RealMinimum {
    let terms = op.float_terms();
    let shape = (op.dim_w(), op.dim_v());
    let f = |x: &[f64]| sigma_min_real(&terms, shape, x);
    let pts = sphere_points(op.n(), grid_points, seed);
    let vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut best = RealMinimum { sigma: f64::INFINITY, xi: pts[0].clone() };
    for i in best_of(&vals, starts) {
        let (x, fx) = pattern_search(&f, pts[i].clone(), vals[i]);
        if fx < best.sigma {
            best = RealMinimum { sigma: fx, xi: x };
        }
    }
    best
}

/// Multi-start minimization of σ_min(𝔸[ξ]) over ξ on the unit sphere of ℂⁿ.
pub fn minimize_complex(op: &Operator, grid_points: usize, starts: usize, seed: u64) -> ComplexMinimum {
    let terms: Vec<_> = op
        .float_terms()
        .into_iter()
        .map(|(a, m)| (a, m.map(|v| Complex64::new(v, 0.0))))
        .collect();
    let shape = (op.dim_w(), op.dim_v());
    let n = op.n();
    let to_c = |x: &[f64]| -> Vec<Complex64> { (0..n).map(|i| Complex64::new(x[2 * i], x[2 * i + 1])).collect() };
    let f = |x: &[f64]| sigma_min_complex(&terms, shape, &to_c(x));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<f64>> =
        (0..grid_points).map(|_| normalized((0..2 * n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())).collect();
    let vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut best = ComplexMinimum { sigma: f64::INFINITY, xi: to_c(&pts[0]) };
    for i in best_of(&vals, starts) {
        let (x, fx) = pattern_search(&f, pts[i].clone(), vals[i]);
        if fx < best.sigma {
            best = ComplexMinimum { sigma: fx, xi: to_c(&x) };
        }
    }
    best
}

