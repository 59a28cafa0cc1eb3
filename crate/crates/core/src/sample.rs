//! Seeded random operators with integer coefficients in [−3, 3].

use num_traits::Zero;
use rand::Rng;

use crate::exactla::matrix::RationalMatrix;
use crate::opcore::multiindex::{multi_indices_of_order, MultiIndex};
use crate::opcore::scalar::{rat, GaussianRational, Rational};
use crate::opcore::Operator;

pub const ENTRY_RANGE: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub n: usize,
    pub dim_v: usize,
    pub dim_w: usize,
    pub order: u32,
}

/// Independent uniform integers in [−3, 3] for every entry of every A_α; `None` if all vanish.
pub fn random_operator<R: Rng>(shape: Shape, rng: &mut R) -> Option<Operator> {
    let terms = multi_indices_of_order(shape.n, shape.order).into_iter().map(|alpha| {
        let m = RationalMatrix::from_fn(shape.dim_w, shape.dim_v, |_, _| rat(rng.gen_range(-ENTRY_RANGE..=ENTRY_RANGE)));
        (alpha, m)
    });
    let terms: Vec<_> = terms.collect();
    Operator::new(shape.n, shape.dim_v, shape.dim_w, shape.order, terms).ok()
}

/// Rejection sampling until `accept` holds; gives up after `max_tries` draws.
pub fn sample_where<R: Rng>(
    shape: Shape,
    rng: &mut R,
    max_tries: usize,
    mut accept: impl FnMut(&Operator) -> bool,
) -> Option<(Operator, usize)> {
    for tries in 1..=max_tries {
        if let Some(op) = random_operator(shape, rng) {
            if accept(&op) {
                return Some((op, tries));
            }
        }
    }
    None
}

/// Random operator whose symbol has a prescribed complex kernel pair, hence not ℂ-elliptic.
///
/// ξ = (1, τ, ...) and v have small Gaussian-integer entries with Im τ ≠ 0; the coefficients
/// are a random integer point of the lattice {(A_α) : Σ ξ^α A_α v = 0}. Ellipticity is not
/// guaranteed and must be checked by the caller.
pub fn random_with_complex_kernel<R: Rng>(shape: Shape, rng: &mut R) -> Option<Operator> {
    let Shape { n, dim_v, dim_w, order } = shape;
    let gauss = |rng: &mut R, nonreal: bool| loop {
        let re = rng.gen_range(-2..=2);
        let im = rng.gen_range(-2..=2);
        if (!nonreal || im != 0) && (re != 0 || im != 0) {
            return GaussianRational::new(rat(re), rat(im));
        }
    };
    let mut xi = vec![GaussianRational::new(rat(1), rat(0))];
    xi.push(gauss(rng, true));
    for _ in 2..n {
        xi.push(gauss(rng, false));
    }
    let v: Vec<GaussianRational> = (0..dim_v).map(|_| gauss(rng, false)).collect();
    let alphas = multi_indices_of_order(n, order);
    // unknowns (α, c) per row; row r of each A_α is constrained independently
    let unknowns = alphas.len() * dim_v;
    let coeff: Vec<GaussianRational> = alphas
        .iter()
        .flat_map(|a| {
            let p = a.power(&xi, GaussianRational::new(rat(1), rat(0)));
            v.iter().map(move |vc| p.clone() * vc.clone()).collect::<Vec<_>>()
        })
        .collect();
    let constraint = RationalMatrix::from_fn(2, unknowns, |i, j| if i == 0 { coeff[j].re.clone() } else { coeff[j].im.clone() });
    let basis = constraint.kernel();
    if basis.is_empty() {
        return None;
    }
    let mut mats: Vec<RationalMatrix> = alphas.iter().map(|_| RationalMatrix::zeros(dim_w, dim_v)).collect();
    for r in 0..dim_w {
        let mut row = vec![Rational::zero(); unknowns];
        for b in &basis {
            let c = rat(rng.gen_range(-ENTRY_RANGE..=ENTRY_RANGE));
            for (x, y) in row.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        let den = row.iter().fold(num_bigint::BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        for (j, x) in row.into_iter().enumerate() {
            let (ai, c) = (j / dim_v, j % dim_v);
            mats[ai].set(r, c, x * Rational::from_integer(den.clone()));
        }
    }
    let terms: Vec<(MultiIndex, RationalMatrix)> = alphas.into_iter().zip(mats).collect();
    Operator::new(n, dim_v, dim_w, order, terms).ok()
}
