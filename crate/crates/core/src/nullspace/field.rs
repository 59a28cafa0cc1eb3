use crate::opcore::multiindex::MultiIndex;
use crate::opcore::poly::RealPoly;

/// V-valued function on ℝⁿ that can report values and, when known, partial derivatives.
pub trait SmoothField: Sync {
    fn nvars(&self) -> usize;
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> Vec<f64>;
    /// ∂^α u(x); `None` when derivative data is unavailable.
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>>;
}

/// A vector of real polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyField(pub Vec<RealPoly>);

impl SmoothField for PolyField {
    fn nvars(&self) -> usize {
        self.0.first().map_or(0, RealPoly::nvars)
    }
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        self.0.iter().map(|p| p.eval(x)).collect()
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        Some(self.0.iter().map(|p| p.partial(alpha).eval(x)).collect())
    }
}

/// y ↦ u(center + scale·y).
pub struct AffineField<'a> {
    pub inner: &'a dyn SmoothField,
    pub center: Vec<f64>,
    pub scale: f64,
}

impl AffineField<'_> {
    fn map(&self, y: &[f64]) -> Vec<f64> {
        self.center.iter().zip(y).map(|(c, v)| c + self.scale * v).collect()
    }
}

impl SmoothField for AffineField<'_> {
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, y: &[f64]) -> Vec<f64> {
        self.inner.value(&self.map(y))
    }
    fn derivative(&self, alpha: &MultiIndex, y: &[f64]) -> Option<Vec<f64>> {
        let f = self.scale.powi(alpha.order() as i32);
        self.inner.derivative(alpha, &self.map(y)).map(|d| d.into_iter().map(|v| v * f).collect())
    }
}

/// Only values are known; derivatives beyond order zero are unavailable.
pub struct ValueField<F: Fn(&[f64]) -> Vec<f64> + Sync> {
    pub nvars: usize,
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> Vec<f64> + Sync> SmoothField for ValueField<F> {
    fn nvars(&self) -> usize {
        self.nvars
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> Vec<f64> {
        (self.f)(x)
    }
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Option<Vec<f64>> {
        (alpha.order() == 0).then(|| (self.f)(x))
    }
}

impl PolyField {
    pub fn zero(nvars: usize, dim: usize) -> Self {
        Self(vec![RealPoly::zero(nvars); dim])
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.add(b)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|p| p.scale(s)).collect())
    }

    /// Σ cᵢ pᵢ.
    pub fn combination(nvars: usize, dim: usize, coeffs: &[f64], fields: &[PolyField]) -> Self {
        coeffs.iter().zip(fields).fold(Self::zero(nvars, dim), |acc, (c, f)| acc.add(&f.scale(*c)))
    }

    /// p(x) ↦ p((x − center)/scale), the inverse of [`AffineField`]'s change of variables.
    pub fn unmap(&self, center: &[f64], scale: f64) -> Self {
        Self(
            self.0
                .iter()
                .map(|p| {
                    let dilated = RealPoly::from_terms(
                        p.nvars(),
                        p.terms().iter().map(|(m, c)| (m.clone(), c / scale.powi(m.order() as i32))),
                    );
                    dilated.shift(center)
                })
                .collect(),
        )
    }
}
