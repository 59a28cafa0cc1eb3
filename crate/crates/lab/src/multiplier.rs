//! Recovering u from 𝔸u on the torus through the multiplier (𝔸[ξ]ᵀ𝔸[ξ])⁻¹𝔸[ξ]ᵀ.

use aop_core::nullspace::SmoothField;
use aop_core::opcore::Operator;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::LabError;

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierReport {
    pub experiment: &'static str,
    pub size: usize,
    pub relative_error: f64,
    pub modes_inverted: usize,
}

/// Signed lattice frequency of FFT bin j.
fn frequency(j: usize, size: usize) -> i64 {
    if j < size / 2 {
        j as i64
    } else {
        j as i64 - size as i64
    }
}

/// In-place 2-D transform of a row-major size × size array.
fn fft2(data: &mut [Complex64], size: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan: std::sync::Arc<dyn Fft<f64>> =
        if inverse { planner.plan_fft_inverse(size) } else { planner.plan_fft_forward(size) };
    for row in data.chunks_mut(size) {
        plan.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); size];
    for c in 0..size {
        for r in 0..size {
            col[r] = data[r * size + c];
        }
        plan.process(&mut col);
        for r in 0..size {
            data[r * size + c] = col[r];
        }
    }
    if inverse {
        let s = 1.0 / (size * size) as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }
}

/// Node x_{ab} = 2π(a, b)/size of the periodic grid.
pub fn torus_node(idx: usize, size: usize) -> [f64; 2] {
    let h = std::f64::consts::TAU / size as f64;
    [(idx / size) as f64 * h, (idx % size) as f64 * h]
}

/// Per-component samples of a field on the periodic grid, component-major.
fn sample_components(size: usize, dim: usize, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(size * size); dim];
    for idx in 0..size * size {
        let v = f(&torus_node(idx, size));
        for (c, x) in out.iter_mut().zip(v) {
            c.push(x);
        }
    }
    out
}

/// Reconstruct u (component-major samples) from samples of 𝔸u and the mean of u.
pub fn reconstruct(op: &Operator, au: &[Vec<f64>], mean: &[f64], size: usize) -> Result<Vec<Vec<f64>>, LabError> {
    if op.n() != 2 {
        return Err(LabError::Unsupported("the torus experiment is planar".into()));
    }
    let (m, big_n) = (op.dim_w(), op.dim_v());
    let spectra: Vec<Vec<Complex64>> = au
        .iter()
        .map(|c| {
            let mut d: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            fft2(&mut d, size, false);
            d
        })
        .collect();
    debug_assert_eq!(spectra.len(), m);
    let ik = Complex64::new(0.0, 1.0).powu(op.order());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); size * size]; big_n];
    for idx in 0..size * size {
        let kappa = [frequency(idx / size, size) as f64, frequency(idx % size, size) as f64];
        if kappa == [0.0, 0.0] {
            for (o, &mu) in out.iter_mut().zip(mean) {
                o[idx] = Complex64::new(mu * (size * size) as f64, 0.0);
            }
            continue;
        }
        let s: DMatrix<f64> = op.symbol_f64(&kappa);
        let normal = s.transpose() * &s;
        let svd = normal.clone().svd(false, false);
        let (hi, lo) = (svd.singular_values.max(), svd.singular_values.min());
        if lo <= 1e-12 * hi {
            return Err(LabError::SingularMultiplier(vec![kappa[0] as i64, kappa[1] as i64]));
        }
        let chol = normal.cholesky().ok_or_else(|| LabError::SingularMultiplier(vec![kappa[0] as i64, kappa[1] as i64]))?;
        let sc = s.map(|v| Complex64::new(v, 0.0));
        let w = DVector::from_iterator(m, spectra.iter().map(|c| c[idx] / ik));
        let rhs = sc.transpose() * w;
        // the normal matrix is real, so solve real and imaginary parts separately
        let re = chol.solve(&rhs.map(|z| z.re));
        let im = chol.solve(&rhs.map(|z| z.im));
        for c in 0..big_n {
            out[c][idx] = Complex64::new(re[c], im[c]);
        }
    }
    Ok(out
        .into_iter()
        .map(|mut d| {
            fft2(&mut d, size, true);
            d.into_iter().map(|z| z.re).collect()
        })
        .collect())
}

/// Sample u and 𝔸u (from analytic derivatives), reconstruct, and report the relative ℓ² error.
pub fn multiplier_reconstruct(op: &Operator, u: &dyn SmoothField, size: usize) -> Result<MultiplierReport, LabError> {
    let terms = op.float_terms();
    let truth = sample_components(size, op.dim_v(), |x| u.value(x));
    let mut err = None;
    let au = sample_components(size, op.dim_w(), |x| {
        let mut out = vec![0.0; op.dim_w()];
        for (alpha, a) in &terms {
            match u.derivative(alpha, x) {
                Some(d) => {
                    for (r, o) in out.iter_mut().enumerate() {
                        *o += (0..op.dim_v()).map(|c| a[(r, c)] * d[c]).sum::<f64>();
                    }
                }
                None => err = Some(alpha.exps().to_vec()),
            }
        }
        out
    });
    if let Some(a) = err {
        return Err(LabError::DerivativeUnavailable(a));
    }
    let mean: Vec<f64> = truth.iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
    let rec = reconstruct(op, &au, &mean, size)?;
    let num: f64 = rec.iter().flatten().zip(truth.iter().flatten()).map(|(a, b)| (a - b) * (a - b)).sum();
    let den: f64 = truth.iter().flatten().map(|b| b * b).sum();
    Ok(MultiplierReport {
        experiment: "multiplier",
        size,
        relative_error: (num / den).sqrt(),
        modes_inverted: size * size - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequencies_wrap() {
        assert_eq!(frequency(0, 8), 0);
        assert_eq!(frequency(3, 8), 3);
        assert_eq!(frequency(4, 8), -4);
        assert_eq!(frequency(7, 8), -1);
    }

    #[test]
    fn fft_round_trip() {
        let size = 8;
        let orig: Vec<Complex64> = (0..64).map(|i| Complex64::new((i as f64).sin(), 0.0)).collect();
        let mut d = orig.clone();
        fft2(&mut d, size, false);
        fft2(&mut d, size, true);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
