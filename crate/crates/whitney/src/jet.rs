//! Truncated Taylor expansions in two variables, used to differentiate quotients of bumps
//! exactly.

use aop_core::opcore::MultiIndex;

/// Position of x^a y^b among monomials of total degree ≤ order.
fn slot(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

/// Highest supported order; jets live on the stack.
pub const MAX_ORDER: usize = 4;
const SLOTS: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

/// Σ c_{ab} dx^a dy^b, a + b ≤ order, at a fixed base point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    c: [f64; SLOTS],
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} above {MAX_ORDER}");
        Self { order, c: [0.0; SLOTS] }
    }

    pub fn constant(order: usize, v: f64) -> Self {
        let mut j = Self::zero(order);
        j.c[0] = v;
        j
    }

    /// The coordinate function x_axis expanded at x_axis = at.
    pub fn variable(order: usize, axis: usize, at: f64) -> Self {
        let mut j = Self::constant(order, at);
        if order >= 1 {
            j.c[if axis == 0 { slot(1, 0) } else { slot(0, 1) }] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coefficient(&self, a: usize, b: usize) -> f64 {
        if a + b > self.order {
            0.0
        } else {
            self.c[slot(a, b)]
        }
    }

    pub fn set_coefficient(&mut self, a: usize, b: usize, v: f64) {
        self.c[slot(a, b)] = v;
    }

    /// ∂^α at the base point, α!·c_α.
    pub fn derivative(&self, alpha: &MultiIndex) -> f64 {
        let (a, b) = (alpha.exps()[0] as usize, alpha.exps()[1] as usize);
        let fact = |k: usize| (1..=k).map(|v| v as f64).product::<f64>();
        self.coefficient(a, b) * fact(a) * fact(b)
    }

    /// Coefficients in graded order: 1, dx, dy, dx², dx dy, dy², …
    pub fn coefficients(&self) -> &[f64] {
        &self.c[..slot(0, self.order + 1)]
    }

    /// x^a y^b expanded at x.
    pub fn monomial(order: usize, e: [u32; 2], x: &[f64]) -> Jet {
        let binom = |n: u32, k: u32| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
        let mut j = Self::zero(order);
        for d in 0..=order {
            for b in 0..=d {
                let a = d - b;
                let (a32, b32) = (a as u32, b as u32);
                if a32 <= e[0] && b32 <= e[1] {
                    j.c[slot(a, b)] = binom(e[0], a32)
                        * x[0].powi((e[0] - a32) as i32)
                        * binom(e[1], b32)
                        * x[1].powi((e[1] - b32) as i32);
                }
            }
        }
        j
    }

    /// Flat index of the coefficient of dx^a dy^b.
    pub fn slot(a: usize, b: usize) -> usize {
        slot(a, b)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0.0)
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let mut j = *self;
        j.add_assign(o);
        j
    }

    pub fn add_assign(&mut self, o: &Jet) {
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut j = *self;
        j.c.iter_mut().for_each(|v| *v *= s);
        j
    }

    pub fn offset(&self, s: f64) -> Jet {
        let mut j = *self;
        j.c[0] += s;
        j
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let k = self.order;
        let mut out = Jet::zero(k);
        for d1 in 0..=k {
            for b1 in 0..=d1 {
                let x = self.c[slot(d1 - b1, b1)];
                if x == 0.0 {
                    continue;
                }
                for d2 in 0..=k - d1 {
                    for b2 in 0..=d2 {
                        out.c[slot(d1 - b1 + d2 - b2, b1 + b2)] += x * o.c[slot(d2 - b2, b2)];
                    }
                }
            }
        }
        out
    }

    /// f(self) from the derivatives f^{(m)}(self.value()), m = 0..=order.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        let h = self.offset(-self.value());
        let mut out = Jet::constant(self.order, derivs[0]);
        let mut power = Jet::constant(self.order, 1.0);
        let mut fact = 1.0;
        for (m, d) in derivs.iter().enumerate().skip(1).take(self.order) {
            power = power.mul(&h);
            fact *= m as f64;
            out.add_assign(&power.scale(d / fact));
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&[e; MAX_ORDER + 1][..=self.order])
    }

    pub fn recip(&self) -> Jet {
        let v = self.value();
        assert!(v != 0.0, "reciprocal of a jet vanishing at the base point");
        // d^m/dv^m v^{−1} = (−1)^m m! v^{−m−1}
        let mut d = [0.0; MAX_ORDER + 1];
        let mut f = 1.0 / v;
        for (m, dm) in d.iter_mut().enumerate().take(self.order + 1) {
            *dm = f;
            f *= -((m + 1) as f64) / v;
        }
        self.compose(&d[..=self.order])
    }
}

fn flat(s: &Jet) -> Jet {
    if s.value() <= 0.0 {
        return Jet::zero(s.order());
    }
    s.recip().scale(-1.0).exp()
}

/// e(s)/(e(s) + e(1 − s)) with e(s) = exp(−1/s) for s > 0: 0 for s ≤ 0, 1 for s ≥ 1.
pub fn smooth_step(s: &Jet) -> Jet {
    let v = s.value();
    if v <= 0.0 {
        return Jet::zero(s.order());
    }
    if v >= 1.0 {
        return Jet::constant(s.order(), 1.0);
    }
    let a = flat(s);
    let b = flat(&s.scale(-1.0).offset(1.0));
    a.mul(&a.add(&b).recip())
}

/// Π_a step((outer − |x_a − c_a|)/(outer − inner)): 1 on the square of half-side `inner`,
/// 0 outside the one of half-side `outer`.
pub fn square_plateau(x: &[f64], center: [f64; 2], inner: f64, outer: f64, order: usize) -> Jet {
    let mut out = Jet::constant(order, 1.0);
    let w = outer - inner;
    for a in 0..2 {
        let d = x[a] - center[a];
        let t = d.abs();
        if t >= outer {
            return Jet::zero(order);
        }
        if t <= inner {
            continue;
        }
        let mut sj = Jet::constant(order, (outer - t) / w);
        if order >= 1 {
            let (p, q) = if a == 0 { (1, 0) } else { (0, 1) };
            sj.set_coefficient(p, q, -d.signum() / w);
        }
        out = out.mul(&smooth_step(&sj));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(a: u32, b: u32) -> MultiIndex {
        MultiIndex::new(vec![a, b])
    }

    #[test]
    fn product_and_quotient_rules() {
        // f = x y² + 3 at (2, −1); g = 1/(1 + x²)
        let (x, y) = (Jet::variable(3, 0, 2.0), Jet::variable(3, 1, -1.0));
        let f = x.mul(&y).mul(&y).offset(3.0);
        assert_eq!(f.value(), 5.0);
        assert_eq!(f.derivative(&mi(1, 0)), 1.0);
        assert_eq!(f.derivative(&mi(1, 1)), -2.0);
        assert_eq!(f.derivative(&mi(1, 2)), 2.0);
        let g = x.mul(&x).offset(1.0).recip();
        // g' = −2x/(1+x²)², g'' = (6x² − 2)/(1+x²)³
        assert!((g.derivative(&mi(1, 0)) + 4.0 / 25.0).abs() < 1e-15);
        assert!((g.derivative(&mi(2, 0)) - 22.0 / 125.0).abs() < 1e-15);
        assert_eq!(g.derivative(&mi(0, 1)), 0.0);
    }

    #[test]
    fn exp_of_a_linear_jet() {
        let x = Jet::variable(4, 1, 0.5).scale(3.0);
        let e = x.exp();
        for m in 0..=4 {
            let exact = 3f64.powi(m as i32) * 1.5f64.exp();
            assert!((e.derivative(&mi(0, m)) - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn monomial_jet_is_the_product_of_variables() {
        let x = [0.7, -1.3];
        let (u, v) = (Jet::variable(3, 0, x[0]), Jet::variable(3, 1, x[1]));
        let direct = u.mul(&u).mul(&v).mul(&v).mul(&v);
        let m = Jet::monomial(3, [2, 3], &x);
        for (a, b) in direct.coefficients().iter().zip(m.coefficients()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn step_is_flat_at_both_ends() {
        assert_eq!(smooth_step(&Jet::constant(3, -0.2)), Jet::zero(3));
        assert_eq!(smooth_step(&Jet::constant(3, 1.0)), Jet::constant(3, 1.0));
        let mid = smooth_step(&Jet::constant(0, 0.5)).value();
        assert!((mid - 0.5).abs() < 1e-15);
        // h(s) + h(1 − s) = 1
        let s = Jet::variable(2, 0, 0.3);
        let sum = smooth_step(&s).add(&smooth_step(&s.scale(-1.0).offset(1.0)));
        assert!((sum.value() - 1.0).abs() < 1e-15 && sum.derivative(&mi(1, 0)).abs() < 1e-13);
    }

    #[test]
    fn plateau_derivatives_match_differences() {
        let c = [0.1, -0.2];
        let (r0, r1) = (0.25, 0.3);
        let x = [0.38, -0.47];
        let j = square_plateau(&x, c, r0, r1, 2);
        let f = |p: &[f64]| square_plateau(p, c, r0, r1, 0).value();
        let h = 1e-5;
        let dx = (f(&[x[0] + h, x[1]]) - f(&[x[0] - h, x[1]])) / (2.0 * h);
        let dyy = (f(&[x[0], x[1] + h]) - 2.0 * f(&x) + f(&[x[0], x[1] - h])) / (h * h);
        assert!(j.value() > 0.0 && j.value() < 1.0);
        assert!((j.derivative(&mi(1, 0)) - dx).abs() < 1e-5 * (1.0 + dx.abs()));
        assert!((j.derivative(&mi(0, 2)) - dyy).abs() < 1e-3 * (1.0 + dyy.abs()));
        assert_eq!(square_plateau(&[0.41, 0.0], c, r0, r1, 2), Jet::zero(2));
        assert_eq!(square_plateau(&[0.2, -0.1], c, r0, r1, 2), Jet::constant(2, 1.0));
    }
}
