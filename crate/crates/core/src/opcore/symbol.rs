use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use super::multiindex::MultiIndex;
use super::operator::{Operator, OperatorError};
use super::poly::Polynomial;
use super::scalar::{Field, Rational};
use crate::exactla::matrix::{Matrix, RationalMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("dimension mismatch: expected a point of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("minor size {size} out of range (max {max})")]
    SizeOutOfRange { size: usize, max: usize },
    #[error("index out of range in minor selection")]
    IndexOutOfRange,
}

/// 𝔸[ξ] as an m×N grid of homogeneous polynomials in ξ₁..ξₙ.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolMatrix {
    n: usize,
    order: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl SymbolMatrix {
    pub fn from_operator(op: &Operator) -> Self {
        let (rows, cols, n) = (op.dim_w(), op.dim_v(), op.n());
        let mut entries = vec![Polynomial::zero(n); rows * cols];
        for (alpha, a) in op.terms() {
            for i in 0..rows {
                for j in 0..cols {
                    let c = a.get(i, j);
                    if !c.is_zero() {
                        entries[i * cols + j].add_term(alpha.clone(), c.clone());
                    }
                }
            }
        }
        Self { n, order: op.order(), rows, cols, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    /// Inverse of [`SymbolMatrix::from_operator`].
    pub fn to_operator(&self) -> Result<Operator, OperatorError> {
        let mut map: BTreeMap<MultiIndex, RationalMatrix> = BTreeMap::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (m, c) in self.entry(i, j).terms() {
                    let mat = map
                        .entry(m.clone())
                        .or_insert_with(|| RationalMatrix::zeros(self.rows, self.cols));
                    mat.set(i, j, c.clone());
                }
            }
        }
        Operator::new(self.n, self.cols, self.rows, self.order, map)
    }

    pub fn eval<F: Field>(&self, point: &[F]) -> Result<Matrix<F>, SymbolError> {
        if point.len() != self.n {
            return Err(SymbolError::DimensionMismatch { expected: self.n, found: point.len() });
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).eval(point)))
    }

    /// Determinant of the submatrix picking `rows` and `cols` in the given order.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Polynomial, SymbolError> {
        if rows.len() != cols.len() {
            return Err(SymbolError::IndexOutOfRange);
        }
        if rows.iter().any(|&r| r >= self.rows) || cols.iter().any(|&c| c >= self.cols) {
            return Err(SymbolError::IndexOutOfRange);
        }
        let grid: Vec<Vec<&Polynomial>> =
            rows.iter().map(|&r| cols.iter().map(|&c| self.entry(r, c)).collect()).collect();
        Ok(det_laplace(&grid, self.n))
    }

    /// All size×size minors, row subsets outermost, both in lexicographic order.
    ///
    /// With `augment`, an extra last column (w₁..w_m) of fresh variables
    /// ξ_{n+1}..ξ_{n+m} is appended before taking minors.
    pub fn minors(&self, size: usize, augment: bool) -> Result<Vec<Polynomial>, SymbolError> {
        let cols = self.cols + usize::from(augment);
        let max = self.rows.min(cols);
        if size == 0 || size > max {
            return Err(SymbolError::SizeOutOfRange { size, max });
        }
        let nv = if augment { self.n + self.rows } else { self.n };
        let grid: Vec<Vec<Polynomial>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<Polynomial> =
                    (0..self.cols).map(|j| self.entry(i, j).extend_vars(nv)).collect();
                if augment {
                    row.push(Polynomial::variable(nv, self.n + i));
                }
                row
            })
            .collect();
        let mut out = Vec::new();
        for rs in subsets(self.rows, size) {
            for cs in subsets(cols, size) {
                let sub: Vec<Vec<&Polynomial>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| &grid[r][c]).collect()).collect();
                out.push(det_laplace(&sub, nv));
            }
        }
        Ok(out)
    }
}

/// k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn det_laplace(m: &[Vec<&Polynomial>], nvars: usize) -> Polynomial {
    let n = m.len();
    match n {
        0 => Polynomial::constant(nvars, Rational::from_integer(1.into())),
        1 => m[0][0].clone(),
        2 => &(m[0][0] * m[1][1]) - &(m[0][1] * m[1][0]),
        _ => {
            let mut acc = Polynomial::zero(nvars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<&Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| *p).collect())
                    .collect();
                let term = m[0][j] * &det_laplace(&sub, nvars);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}
