//! Sampled fields, quadrature norms and discrete application of operators.

use aop_core::nullspace::{Quadrature, SmoothField};
use aop_core::opcore::{MultiIndex, Operator};
use aop_core::stencil::centered_weights;

use crate::LabError;

/// V-valued samples at the nodes of a quadrature rule, node-major.
#[derive(Clone, Debug)]
pub struct Field {
    rule: Quadrature,
    dim: usize,
    values: Vec<f64>,
}

impl Field {
    pub fn new(rule: Quadrature, dim: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), rule.len() * dim, "one value per node and component");
        Self { rule, dim, values }
    }

    pub fn from_fn(rule: &Quadrature, dim: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let values = rule.iter().flat_map(|(x, _)| f(x)).collect();
        Self::new(rule.clone(), dim, values)
    }

    pub fn sample(rule: &Quadrature, u: &dyn SmoothField) -> Self {
        Self::from_fn(rule, u.dim(), |x| u.value(x))
    }

    pub fn rule(&self) -> &Quadrature {
        &self.rule
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, node: usize) -> &[f64] {
        &self.values[node * self.dim..(node + 1) * self.dim]
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { rule: self.rule.clone(), dim: self.dim, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn sub(&self, other: &Field) -> Self {
        assert_eq!(self.values.len(), other.values.len());
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Self { rule: self.rule.clone(), dim: self.dim, values }
    }

    /// Euclidean length of the value at each node.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.chunks(self.dim).map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect()
    }
}

/// (Σ w |f|^p)^{1/p} with |·| the Euclidean norm of the value; `p = ∞` gives the max.
pub fn lp_norm(f: &Field, p: f64) -> f64 {
    assert!(p >= 1.0, "p must be at least 1");
    let mags = f.magnitudes();
    if p.is_infinite() {
        return mags.iter().fold(0.0, |m, &v| m.max(v));
    }
    let s: f64 = mags.iter().zip(f.rule.weights()).map(|(m, w)| w * m.powf(p)).sum();
    s.powf(1.0 / p)
}

/// 𝔸u at the nodes of `rule` from analytic derivatives.
pub fn apply_operator(op: &Operator, u: &dyn SmoothField, rule: &Quadrature) -> Result<Field, LabError> {
    let terms = op.float_terms();
    let mut values = Vec::with_capacity(rule.len() * op.dim_w());
    for (x, _) in rule.iter() {
        let mut out = vec![0.0; op.dim_w()];
        for (alpha, a) in &terms {
            let d = u.derivative(alpha, x).ok_or_else(|| LabError::DerivativeUnavailable(alpha.0.clone()))?;
            for (r, o) in out.iter_mut().enumerate() {
                *o += (0..op.dim_v()).map(|c| a[(r, c)] * d[c]).sum::<f64>();
            }
        }
        values.extend(out);
    }
    Ok(Field::new(rule.clone(), op.dim_w(), values))
}

/// Samples on the uniform grid lo + h·i, i ∈ ∏[0, shape_a), last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub lo: Vec<f64>,
    pub h: f64,
    pub shape: Vec<usize>,
    pub dim: usize,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn sample(lo: Vec<f64>, h: f64, shape: Vec<usize>, dim: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let count: usize = shape.iter().product();
        let mut values = Vec::with_capacity(count * dim);
        let mut x = vec![0.0; lo.len()];
        for idx in 0..count {
            let mut r = idx;
            for a in (0..lo.len()).rev() {
                x[a] = lo[a] + h * (r % shape[a]) as f64;
                r /= shape[a];
            }
            let v = f(&x);
            debug_assert_eq!(v.len(), dim);
            values.extend(v);
        }
        Self { lo, h, shape, dim, values }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.shape.len()];
        for a in (0..self.shape.len().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.shape[a + 1];
        }
        s
    }

    pub fn node(&self, idx: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.lo.len()];
        let mut r = idx;
        for a in (0..self.lo.len()).rev() {
            x[a] = self.lo[a] + self.h * (r % self.shape[a]) as f64;
            r /= self.shape[a];
        }
        x
    }

    pub fn at(&self, idx: usize) -> &[f64] {
        &self.values[idx * self.dim..(idx + 1) * self.dim]
    }

    /// Σ h^n |f|^p over all nodes.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let cell = self.h.powi(self.lo.len() as i32);
        let mags = self.values.chunks(self.dim).map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt());
        if p.is_infinite() {
            return mags.fold(0.0, f64::max);
        }
        (cell * mags.map(|m| m.powf(p)).sum::<f64>()).powf(1.0 / p)
    }

    /// ∫ |u(x + m h e_axis) − u(x)|^p dx, treating u as zero off the grid.
    pub fn translation_difference(&self, axis: usize, m: usize, p: f64) -> f64 {
        let strides = self.strides();
        let cell = self.h.powi(self.lo.len() as i32);
        let mut total = 0.0;
        let zero = vec![0.0; self.dim];
        // nodes whose shifted partner leaves the grid still see u(x) against 0; so do the
        // m layers just outside the grid that shift onto it
        for idx in 0..self.len() {
            let coord = (idx / strides[axis]) % self.shape[axis];
            let here = self.at(idx);
            let there = if coord + m < self.shape[axis] { self.at(idx + m * strides[axis]) } else { &zero[..] };
            total += diff_pow(here, there, p);
            if coord < m {
                // x = node − m h e_axis lies off the grid where u = 0
                total += diff_pow(&zero, here, p);
            }
        }
        total * cell
    }
}

fn diff_pow(a: &[f64], b: &[f64], p: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt().powf(p)
}

/// Half width of the second-order centered stencil for a derivative of order `a`.
fn half_width(a: u32) -> usize {
    a.div_ceil(2) as usize
}

/// 𝔸u on the interior of the grid by second-order centered differences.
///
/// The result lives on the sub-grid at distance r from the boundary, where r is the
/// widest stencil half width used.
pub fn apply_operator_grid(op: &Operator, u: &GridField) -> Result<GridField, LabError> {
    let n = op.n();
    if u.lo.len() != n || u.dim != op.dim_v() {
        return Err(LabError::Unsupported(format!("grid is {}-dimensional with {} components", u.lo.len(), u.dim)));
    }
    let r = op.terms().keys().flat_map(|a| a.exps().iter().map(|&e| half_width(e))).max().unwrap_or(0);
    if u.shape.iter().any(|&s| s < 2 * r + 1) {
        return Err(LabError::GridTooCoarse(format!("need at least {} nodes per axis", 2 * r + 1)));
    }
    let strides = u.strides();
    let terms = op.float_terms();
    // per term: list of (flat offset, weight)
    let stencils: Vec<Vec<(isize, f64)>> = terms
        .iter()
        .map(|(alpha, _)| {
            let mut st = vec![(0isize, 1.0)];
            for (axis, &e) in alpha.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let hw = half_width(e);
                let w = centered_weights(e as usize, hw);
                let scale = u.h.powi(e as i32);
                let mut next = Vec::new();
                for (off, wt) in &st {
                    for (i, wi) in w.iter().enumerate() {
                        if *wi != 0.0 {
                            let o = (i as isize - hw as isize) * strides[axis] as isize;
                            next.push((off + o, wt * wi / scale));
                        }
                    }
                }
                st = next;
            }
            st
        })
        .collect();
    let inner_shape: Vec<usize> = u.shape.iter().map(|s| s - 2 * r).collect();
    let inner_lo: Vec<f64> = u.lo.iter().map(|l| l + r as f64 * u.h).collect();
    let count: usize = inner_shape.iter().product();
    let mut values = Vec::with_capacity(count * op.dim_w());
    for idx in 0..count {
        let mut flat = 0usize;
        let mut rem = idx;
        for a in (0..n).rev() {
            flat += (rem % inner_shape[a] + r) * strides[a];
            rem /= inner_shape[a];
        }
        let mut out = vec![0.0; op.dim_w()];
        for ((_, a), st) in terms.iter().zip(&stencils) {
            let mut d = vec![0.0; u.dim];
            for (off, w) in st {
                let node = (flat as isize + off) as usize;
                for (c, v) in d.iter_mut().zip(u.at(node)) {
                    *c += w * v;
                }
            }
            for (row, o) in out.iter_mut().enumerate() {
                *o += (0..u.dim).map(|c| a[(row, c)] * d[c]).sum::<f64>();
            }
        }
        values.extend(out);
    }
    Ok(GridField { lo: inner_lo, h: u.h, shape: inner_shape, dim: op.dim_w(), values })
}

/// Frobenius norm of ∇^l u at x, counting each ordered index tuple once.
pub fn gradient_tensor_norm(u: &dyn SmoothField, l: u32, x: &[f64]) -> Result<f64, LabError> {
    let mut s = 0.0;
    for beta in aop_core::opcore::multiindex::multi_indices_of_order(u.nvars(), l) {
        let mult = multinomial(&beta);
        let d = u.derivative(&beta, x).ok_or_else(|| LabError::DerivativeUnavailable(beta.0.clone()))?;
        s += mult * d.iter().map(|v| v * v).sum::<f64>();
    }
    Ok(s.sqrt())
}

/// l!/β!, the number of ordered tuples with multi-index β.
fn multinomial(beta: &MultiIndex) -> f64 {
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    fact(beta.order()) / beta.exps().iter().map(|&e| fact(e)).product::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomial_counts_tuples() {
        assert_eq!(multinomial(&MultiIndex::new(vec![1, 1])), 2.0);
        assert_eq!(multinomial(&MultiIndex::new(vec![2, 1, 0])), 3.0);
    }

    #[test]
    fn translation_of_an_indicator() {
        // u = 1 on a single node in 1-D-like strip: each shift moves all mass
        let g = GridField::sample(vec![0.0, 0.0], 1.0, vec![1, 5], 1, |x| vec![if x[1] == 2.0 { 1.0 } else { 0.0 }]);
        assert_eq!(g.translation_difference(1, 1, 1.0), 2.0);
        assert_eq!(g.translation_difference(1, 3, 1.0), 2.0);
    }
}
