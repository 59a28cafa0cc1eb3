use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::opcore::scalar::{to_f64, Field, Rational};

/// Univariate polynomial over ℚ, coefficients from low to high degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => Self::new(self.coeffs.iter().map(|c| c / lc).collect()),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.get(i) + o.get(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.get(i) - o.get(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    fn get(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let Some(nd) = self.degree() else { return (Self::zero(), Self::zero()) };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &r[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// Square-free part p / gcd(p, p′), monic.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval<F: Field>(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(&F::from_rational(c));
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + to_f64(c))
    }

    /// Sturm sequence p, p′, −rem(p_{i−1}, p_i), ...
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone()];
        if self.is_zero() {
            return seq;
        }
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()));
        }
        seq
    }

    /// Number of distinct real roots, exactly.
    pub fn count_distinct_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.sturm_sequence();
        let at_neg: Vec<i8> = seq.iter().map(|p| p.sign_at_neg_infinity()).collect();
        let at_pos: Vec<i8> = seq.iter().map(|p| p.sign_at_pos_infinity()).collect();
        sign_changes(&at_neg) - sign_changes(&at_pos)
    }

    /// Distinct real roots in the open interval (a, b], by Sturm's theorem.
    pub fn count_roots_in(&self, a: &Rational, b: &Rational) -> usize {
        sturm_count(&self.sturm_sequence(), a, b)
    }

    fn sign_at_pos_infinity(&self) -> i8 {
        self.leading().map_or(0, sign)
    }

    fn sign_at_neg_infinity(&self) -> i8 {
        match (self.leading(), self.degree()) {
            (Some(lc), Some(d)) => {
                let s = sign(lc);
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
            _ => 0,
        }
    }

    /// Cauchy bound: all roots have |t| < 1 + max |c_i / c_d|.
    pub fn root_bound(&self) -> Rational {
        let lc = self.leading().expect("root bound of zero polynomial").abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    /// Isolating intervals (a, b] of width ≤ `width`, one per distinct real root, ascending.
    pub fn isolate_real_roots(&self, width: &Rational) -> Vec<(Rational, Rational)> {
        let sf = self.squarefree();
        if sf.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let seq = sf.sturm_sequence();
        let bound = sf.root_bound();
        let two = Rational::from_integer(2.into());
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            let c = sturm_count(&seq, &a, &b);
            if c == 0 {
                continue;
            }
            if c == 1 {
                out.push(refine_by_sign(&sf, a, b, width));
                continue;
            }
            let mid = (&a + &b) / &two;
            stack.push((mid.clone(), b));
            stack.push((a, mid));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Real roots refined to about `1e-15` relative width.
    pub fn real_roots_f64(&self) -> Vec<f64> {
        let w = Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 52));
        self.isolate_real_roots(&w)
            .into_iter()
            .map(|(a, b)| to_f64(&((a + b) / Rational::from_integer(2.into()))))
            .collect()
    }

    /// Complex roots of the square-free part via companion eigenvalues, Newton-polished.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let sf = self.squarefree();
        let Some(d) = sf.degree() else { return Vec::new() };
        if d == 0 {
            return Vec::new();
        }
        let c: Vec<f64> = sf.coeffs.iter().map(to_f64).collect();
        let comp = nalgebra::DMatrix::from_fn(d, d, |i, j| {
            if j == d - 1 {
                -c[i]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let eig = comp.complex_eigenvalues();
        let deriv = sf.derivative();
        eig.iter()
            .map(|&z0| {
                let mut z = z0;
                for _ in 0..50 {
                    let f = sf.eval_c64(z);
                    let df = deriv.eval_c64(z);
                    if df.norm() == 0.0 {
                        break;
                    }
                    let step = f / df;
                    z -= step;
                    if step.norm() <= 1e-17 * z.norm().max(1.0) {
                        break;
                    }
                }
                z
            })
            .collect()
    }
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_count(seq: &[UniPoly], a: &Rational, b: &Rational) -> usize {
    let sa: Vec<i8> = seq.iter().map(|p| sign(&p.eval(a))).collect();
    let sb: Vec<i8> = seq.iter().map(|p| sign(&p.eval(b))).collect();
    sign_changes(&sa).saturating_sub(sign_changes(&sb))
}

/// Bisection on (a, b] holding exactly one simple root of `sf`; only signs of `sf` are needed.
fn refine_by_sign(sf: &UniPoly, mut a: Rational, mut b: Rational, width: &Rational) -> (Rational, Rational) {
    let two = Rational::from_integer(2.into());
    // a may be a neighbouring simple root; then sf just right of a has the sign of sf′(a)
    let sa = match sign(&sf.eval(&a)) {
        0 => sign(&sf.derivative().eval(&a)),
        s => s,
    };
    while &b - &a > *width {
        let mid = (&a + &b) / &two;
        let sm = sign(&sf.eval(&mid));
        // the root is in (a, mid] iff sf changes sign there or vanishes at mid
        if sm == 0 || sm != sa {
            b = mid;
        } else {
            a = mid;
        }
    }
    (a, b)
}

fn sign_changes(s: &[i8]) -> usize {
    let nz: Vec<i8> = s.iter().copied().filter(|&v| v != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}
