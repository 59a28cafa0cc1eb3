use num_traits::{One, Zero};
use thiserror::Error;

use super::matrix::RationalMatrix;
use super::univariate::UniPoly;
use crate::opcore::multiindex::MultiIndex;
use crate::opcore::poly::Polynomial;
use crate::opcore::scalar::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("all forms are zero")]
    AllZero,
    #[error("zero form")]
    ZeroForm,
    #[error("polynomial is not a homogeneous binary form")]
    NotBinaryForm,
}

/// Σ cᵢ ξ₁^{d−i} ξ₂^i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Rational>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        Self { degree: coeffs.len() - 1, coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: vec![Rational::zero(); degree + 1] }
    }

    /// Requires a polynomial in two variables, homogeneous of the given degree (or zero).
    pub fn from_polynomial(p: &Polynomial, degree: usize) -> Result<Self, FormError> {
        if p.nvars() != 2 {
            return Err(FormError::NotBinaryForm);
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (m, c) in p.terms() {
            if m.order() as usize != degree {
                return Err(FormError::NotBinaryForm);
            }
            coeffs[m.0[1] as usize] = c.clone();
        }
        Ok(Self { degree, coeffs })
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let d = self.degree as u32;
        Polynomial::from_terms(
            2,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (MultiIndex::new(vec![d - i as u32, i as u32]), c.clone())),
        )
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Largest j with ξ₂^j dividing the form.
    pub fn xi2_power(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// g(t) = form(t, 1).
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// ξ₂^j times the degree-(deg g) homogenization of g.
    fn homogenize(g: &UniPoly, j: usize) -> Self {
        let dg = g.degree().unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); j + dg + 1];
        for (e, c) in g.coeffs().iter().enumerate() {
            // t^e becomes ξ₁^e ξ₂^{dg−e}
            coeffs[j + dg - e] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn eval(&self, x1: &Rational, x2: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * num_traits::pow(x1.clone(), self.degree - i) * num_traits::pow(x2.clone(), i);
        }
        acc
    }

    pub fn eval_c64(&self, x1: num_complex::Complex64, x2: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += crate::opcore::scalar::to_f64(c) * x1.powu((self.degree - i) as u32) * x2.powu(i as u32);
        }
        acc
    }

    /// Leading coefficient in graded-lex order, i.e. the first nonzero cᵢ.
    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let lc = lc.clone();
                Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
            }
        }
    }

    /// Exact quotient if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.degree.saturating_sub(d.degree)));
        }
        let (js, jd) = (self.xi2_power(), d.xi2_power());
        if jd > js || d.degree > self.degree {
            return None;
        }
        let (q, r) = self.dehomogenize().div_rem(&d.dehomogenize());
        if !r.is_zero() {
            return None;
        }
        Some(Self::homogenize(&q, js - jd))
    }

    /// Distinct real projective zeros.
    pub fn count_real_roots(&self) -> Result<usize, FormError> {
        if self.is_zero() {
            return Err(FormError::ZeroForm);
        }
        let at_infinity = usize::from(self.xi2_power() > 0);
        Ok(self.dehomogenize().count_distinct_real_roots() + at_infinity)
    }
}

/// Monic gcd of nonzero binary forms; zero forms are ignored.
pub fn gcd_binary_forms(forms: &[BinaryForm]) -> Result<BinaryForm, FormError> {
    let nz: Vec<&BinaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nz.is_empty() {
        return Err(FormError::AllZero);
    }
    let j = nz.iter().map(|f| f.xi2_power()).min().unwrap();
    let mut g = nz[0].dehomogenize();
    for f in &nz[1..] {
        g = g.gcd(&f.dehomogenize());
    }
    Ok(BinaryForm::homogenize(&g.monic(), j).monic())
}

/// Resultant via the Sylvester determinant of the dehomogenized forms, with their
/// full formal degrees.
pub fn resultant(f: &BinaryForm, g: &BinaryForm) -> Rational {
    let (m, n) = (f.degree, g.degree);
    if m + n == 0 {
        return Rational::one();
    }
    let size = m + n;
    let mut s = RationalMatrix::zeros(size, size);
    for row in 0..n {
        for (i, c) in f.coeffs.iter().enumerate() {
            s.set(row, row + i, c.clone());
        }
    }
    for row in 0..m {
        for (i, c) in g.coeffs.iter().enumerate() {
            s.set(n + row, row + i, c.clone());
        }
    }
    s.determinant()
}
