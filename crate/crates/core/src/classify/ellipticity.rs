//! Ellipticity and ℂ-ellipticity.
//!
//! In two variables both questions reduce to the gcd of the maximal minors: its real
//! projective zeros obstruct ellipticity, any zero at all obstructs ℂ-ellipticity.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::certainty::Certainty;
use super::groebner::{groebner, linear_interreduce, GroebnerOptions, GroebnerStatus};
use super::numeric::{minimize_complex, minimize_real, NumericOptions};
use super::witness::{
    complex_residual, exact_kernel_vector, normalize_first_c64, real_residual, smallest_singular_pair_complex,
    smallest_singular_pair_real, unit_rational, ComplexNullPair, RealNullPair,
};
use crate::exactla::forms::{gcd_binary_forms, BinaryForm};
use crate::opcore::scalar::{approximate_rational, Field, GaussianRational, Rational};
use crate::opcore::symbol::binomial;
use crate::opcore::Operator;

#[derive(Clone, Debug)]
pub struct EllipticityOutcome {
    pub certainty: Certainty,
    pub witness: Option<RealNullPair>,
}

#[derive(Clone, Debug)]
pub struct CEllipticityOutcome {
    pub certainty: Certainty,
    pub witness: Option<ComplexNullPair>,
    pub method: String,
}

/// Largest number of maximal minors expanded symbolically.
const MAX_MINORS: usize = 5000;

/// Maximal minors of 𝔸[ξ] as binary forms (n = 2 only); `None` if m < N.
pub fn minor_forms(op: &Operator) -> Option<Vec<BinaryForm>> {
    assert_eq!(op.n(), 2);
    if op.dim_w() < op.dim_v() {
        return None;
    }
    let deg = op.order() as usize * op.dim_v();
    let minors = op.symbol().minors(op.dim_v(), false).ok()?;
    Some(minors.iter().map(|p| BinaryForm::from_polynomial(p, deg).expect("minors are homogeneous")).collect())
}

/// gcd of the maximal minors (n = 2); `None` when they all vanish or m < N.
pub fn minor_gcd(op: &Operator) -> Option<BinaryForm> {
    gcd_binary_forms(&minor_forms(op)?).ok()
}

/// Witness at a basis direction with an exact rational kernel vector.
fn real_witness_at_unit(op: &Operator, i: usize) -> Option<RealNullPair> {
    let xi = unit_rational(op.n(), i);
    let v = exact_kernel_vector(op, &xi)?;
    Some(RealNullPair::from_exact(op, xi, v))
}

fn everywhere_singular(op: &Operator) -> bool {
    if op.dim_w() < op.dim_v() {
        return true;
    }
    if binomial(op.dim_w(), op.dim_v()) > MAX_MINORS {
        return false;
    }
    op.symbol().minors(op.dim_v(), false).map(|ms| ms.iter().all(|p| p.is_zero())).unwrap_or(false)
}

pub fn is_elliptic(op: &Operator) -> EllipticityOutcome {
    is_elliptic_with(op, &NumericOptions::default())
}

pub fn is_elliptic_with(op: &Operator, opts: &NumericOptions) -> EllipticityOutcome {
    if everywhere_singular(op) {
        return EllipticityOutcome { certainty: Certainty::ExactFalse, witness: real_witness_at_unit(op, 0) };
    }
    if op.n() == 2 {
        return elliptic_two_variables(op);
    }
    let min = minimize_real(op, opts.grid_points, opts.starts, opts.seed);
    if min.sigma > opts.threshold {
        return EllipticityOutcome { certainty: Certainty::NumericTrue { margin: min.sigma }, witness: None };
    }
    let fine = minimize_real(op, opts.grid_points * opts.refine_factor, opts.starts, opts.seed ^ 1);
    let best = if fine.sigma < min.sigma { fine } else { min };
    if best.sigma > opts.threshold {
        return EllipticityOutcome { certainty: Certainty::NumericTrue { margin: best.sigma }, witness: None };
    }
    let (_, v) = smallest_singular_pair_real(&op.symbol_f64(&best.xi));
    let residual = real_residual(op, &best.xi, &v);
    EllipticityOutcome {
        certainty: Certainty::NumericFalse { quality: residual },
        witness: Some(RealNullPair { xi: best.xi, v, residual, exact: None }),
    }
}

fn elliptic_two_variables(op: &Operator) -> EllipticityOutcome {
    let g = minor_gcd(op).expect("not everywhere singular");
    let real_roots = g.count_real_roots().expect("gcd is nonzero");
    if real_roots == 0 {
        return EllipticityOutcome { certainty: Certainty::ExactTrue, witness: None };
    }
    EllipticityOutcome { certainty: Certainty::ExactFalse, witness: Some(real_root_witness(op, &g)) }
}

/// 𝔸[ξ] is singular at each real zero of `g`; pick one and extract v.
fn real_root_witness(op: &Operator, g: &BinaryForm) -> RealNullPair {
    if g.xi2_power() > 0 {
        // ξ₂ | g: the zero (1, 0)
        if let Some(w) = real_witness_at_unit(op, 0) {
            return w;
        }
    }
    let dehom = g.dehomogenize();
    let roots = dehom.real_roots_f64();
    let t0 = roots.first().copied().unwrap_or(0.0);
    // try an exact rational root first
    if let Some(t) = approximate_rational(t0, 10_000) {
        if dehom.eval(&t).is_zero() {
            let xi = vec![t, Rational::one()];
            if let Some(v) = exact_kernel_vector(op, &xi) {
                return RealNullPair::from_exact(op, xi, v);
            }
        }
    }
    let norm = (t0 * t0 + 1.0).sqrt();
    let xi = vec![t0 / norm, 1.0 / norm];
    let (_, v) = smallest_singular_pair_real(&op.symbol_f64(&xi));
    let residual = real_residual(op, &xi, &v);
    RealNullPair { xi, v, residual, exact: None }
}

pub fn is_c_elliptic(op: &Operator) -> CEllipticityOutcome {
    is_c_elliptic_with(op, &NumericOptions::default(), &GroebnerOptions::default())
}

pub fn is_c_elliptic_with(op: &Operator, opts: &NumericOptions, gopts: &GroebnerOptions) -> CEllipticityOutcome {
    if everywhere_singular(op) {
        return CEllipticityOutcome {
            certainty: Certainty::ExactFalse,
            witness: real_witness_at_unit(op, 0).map(|w| w.to_complex()),
            method: "symbol is nowhere injective".into(),
        };
    }
    if op.n() == 2 {
        let g = minor_gcd(op).expect("not everywhere singular");
        if g.degree() == 0 {
            return CEllipticityOutcome {
                certainty: Certainty::ExactTrue,
                witness: None,
                method: "gcd of maximal minors is constant".into(),
            };
        }
        return CEllipticityOutcome {
            certainty: Certainty::ExactFalse,
            witness: Some(complex_root_witness(op, &g)),
            method: "gcd of maximal minors has a zero".into(),
        };
    }
    if op.dim_w() + 1 < op.dim_v() + op.n() {
        // the rank-drop locus has expected codimension m − N + 1 ≤ n − 1 in ℂℙ^{n−1},
        // so it is nonempty
        return CEllipticityOutcome {
            certainty: Certainty::ExactFalse,
            witness: numeric_complex_witness(op, opts),
            method: "degeneracy locus dimension count".into(),
        };
    }
    if binomial(op.dim_w(), op.dim_v()) <= MAX_MINORS {
        let minors = op.symbol().minors(op.dim_v(), false).expect("m >= N");
        let gens = linear_interreduce(&minors);
        let gb = groebner(&gens, gopts);
        match gb.status {
            GroebnerStatus::ZeroDimensional => {
                return CEllipticityOutcome {
                    certainty: Certainty::ExactTrue,
                    witness: None,
                    method: format!("Groebner basis of minor ideal ({} S-polynomials)", gb.s_polynomials),
                };
            }
            GroebnerStatus::PositiveDimensional => {
                return CEllipticityOutcome {
                    certainty: Certainty::ExactFalse,
                    witness: numeric_complex_witness(op, opts),
                    method: format!("Groebner basis of minor ideal ({} S-polynomials)", gb.s_polynomials),
                };
            }
            GroebnerStatus::CapExceeded => {}
        }
    }
    let min = minimize_complex(op, opts.grid_points * 4, opts.starts, opts.seed);
    if min.sigma < 1e-8 {
        let (_, v) = smallest_singular_pair_complex(&op.symbol_c64(&min.xi));
        let residual = complex_residual(op, &min.xi, &v);
        return CEllipticityOutcome {
            certainty: Certainty::NumericFalse { quality: residual },
            witness: Some(ComplexNullPair { xi: min.xi, v, residual, exact: None }),
            method: "complex sphere search".into(),
        };
    }
    if min.sigma > opts.threshold {
        return CEllipticityOutcome {
            certainty: Certainty::NumericTrue { margin: min.sigma },
            witness: None,
            method: "complex sphere search".into(),
        };
    }
    CEllipticityOutcome {
        certainty: Certainty::unknown(format!("Groebner cap exceeded and σ_min ≈ {:.2e}", min.sigma)),
        witness: None,
        method: "complex sphere search".into(),
    }
}

pub fn fdn(op: &Operator) -> Certainty {
    is_c_elliptic(op).certainty
}

/// Search the complex sphere for a kernel pair; kept only if convincingly singular.
pub fn numeric_complex_witness(op: &Operator, opts: &NumericOptions) -> Option<ComplexNullPair> {
    let min = minimize_complex(op, opts.grid_points * 4, opts.starts, opts.seed);
    let (_, mut v) = smallest_singular_pair_complex(&op.symbol_c64(&min.xi));
    normalize_first_c64(&mut v);
    let residual = complex_residual(op, &min.xi, &v);
    (residual < 1e-6).then_some(ComplexNullPair { xi: min.xi, v, residual, exact: None })
}

/// Complex zero of the gcd turned into ξ = (1, ξ₂) (or (0, 1)) with a kernel vector.
///
/// Among non-real zeros the one with Im ξ₂ > 0 is preferred, so that ∂̄ yields (1, i).
fn complex_root_witness(op: &Operator, g: &BinaryForm) -> ComplexNullPair {
    if g.xi2_power() > 0 {
        if let Some(w) = real_witness_at_unit(op, 0) {
            return w.to_complex();
        }
    }
    let dehom = g.dehomogenize();
    if dehom.eval(&Rational::zero()).is_zero() {
        if let Some(w) = real_witness_at_unit(op, 1) {
            return w.to_complex();
        }
    }
    let mut roots = dehom.complex_roots();
    roots.sort_by(|a, b| {
        let key = |z: &Complex64| (z.im >= -1e-12, (z.norm() * 1e9).round() as i64, (z.re * 1e9).round() as i64);
        key(a).cmp(&key(b))
    });
    let t0 = roots[0];
    let w = Complex64::new(1.0, 0.0) / t0;
    if let Some(wq) = GaussianRational::approximate(w, 10_000) {
        let one = GaussianRational::one();
        if !wq.is_zero() {
            // g(t) vanishes at t = 1/w exactly iff form(1, w) does
            let t = one.div_ref(&wq);
            if dehom.eval(&t).is_zero() {
                let xi = vec![GaussianRational::one(), wq];
                if let Some(v) = exact_kernel_vector(op, &xi) {
                    return ComplexNullPair::from_exact(op, xi, v);
                }
            }
        }
    }
    let xi = vec![Complex64::new(1.0, 0.0), w];
    let (_, mut v) = smallest_singular_pair_complex(&op.symbol_c64(&xi));
    normalize_first_c64(&mut v);
    let residual = complex_residual(op, &xi, &v);
    ComplexNullPair { xi, v, residual, exact: None }
}
