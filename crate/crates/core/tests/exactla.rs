use aop_core::classify::cancel::cancellation_system;
use aop_core::exactla::forms::{gcd_binary_forms, resultant, BinaryForm};
use aop_core::exactla::matrix::RationalMatrix;
use aop_core::exactla::subspace::{orthonormal_basis, subspace_intersect, DEFAULT_TOLERANCE};
use aop_core::exactla::univariate::UniPoly;
use aop_core::opcore::scalar::{rat, Rational};
use aop_core::opcore::symbol::subsets;
use aop_core::opdsl::zoo;
use nalgebra::DMatrix;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn rref_examples() {
    let id = RationalMatrix::identity(3);
    let r = id.rref();
    assert_eq!(r.matrix, id);
    assert_eq!(r.rank(), 3);
    let m = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
    let r = m.rref();
    assert_eq!(r.matrix, RationalMatrix::from_i64(&[&[1, 2], &[0, 0]]));
    assert_eq!(r.pivots, vec![0]);
}

/// Largest k with a nonzero k×k minor.
fn brute_force_rank(m: &RationalMatrix) -> usize {
    let max = m.rows().min(m.cols());
    (1..=max)
        .rev()
        .find(|&k| {
            subsets(m.rows(), k).iter().any(|rs| {
                subsets(m.cols(), k).iter().any(|cs| {
                    !RationalMatrix::from_fn(k, k, |i, j| m.get(rs[i], cs[j]).clone()).determinant().is_zero()
                })
            })
        })
        .unwrap_or(0)
}

#[test]
fn rank_matches_minor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..30 {
        // low-rank products hit every rank between 0 and 5
        let inner = trial % 6;
        let a = RationalMatrix::from_fn(5, inner, |_, _| rat(rng.gen_range(-3..=3)));
        let b = RationalMatrix::from_fn(inner, 7, |_, _| rat(rng.gen_range(-3..=3)));
        let m = if inner == 0 { RationalMatrix::zeros(5, 7) } else { a.mul(&b) };
        assert_eq!(m.rank(), brute_force_rank(&m));
    }
}

#[test]
fn kernel_examples() {
    assert_eq!(RationalMatrix::zeros(2, 3).kernel().len(), 3);
    let k = RationalMatrix::from_i64(&[&[1, 1]]).kernel();
    assert_eq!(k, vec![vec![rat(-1), rat(1)]]);
    // ξ₁w₂ − ξ₂w₁ gives rows (0, 1) and (−1, 0): only w = 0 survives
    let sys = cancellation_system(&zoo::grad_k(2, 1, 1).unwrap());
    assert_eq!(sys.rank(), 2);
    assert!(sys.kernel().is_empty());
}

#[test]
fn subspace_examples() {
    let l1 = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
    let l2 = DMatrix::from_column_slice(2, 1, &[1.0, 1.0]);
    let l2 = orthonormal_basis(&l2, DEFAULT_TOLERANCE);
    assert_eq!(subspace_intersect(&[l1.clone(), l2], DEFAULT_TOLERANCE).unwrap().ncols(), 0);
    let plane = orthonormal_basis(&DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]), DEFAULT_TOLERANCE);
    assert_eq!(subspace_intersect(&[plane.clone(), plane], DEFAULT_TOLERANCE).unwrap().ncols(), 2);
}

#[test]
fn images_of_a13_meet_in_zero() {
    let op = zoo::a_kn(1, 3, 3).unwrap();
    assert!(aop_core::classify::exact_intersection(&op).is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let images: Vec<DMatrix<f64>> = (0..20)
        .map(|_| {
            let xi: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            orthonormal_basis(&op.symbol_f64(&xi), DEFAULT_TOLERANCE)
        })
        .collect();
    assert_eq!(subspace_intersect(&images, DEFAULT_TOLERANCE).unwrap().ncols(), 0);
}

#[test]
fn gcd_examples() {
    let sq = BinaryForm::from_i64(&[1, 0, 1]);
    assert_eq!(gcd_binary_forms(&[sq.clone()]).unwrap(), sq);
    let g = gcd_binary_forms(&[BinaryForm::from_i64(&[0, 1, 0]), BinaryForm::from_i64(&[1, 0, 0])]).unwrap();
    assert_eq!(g, BinaryForm::from_i64(&[1, 0]));
    // minors of ∇² (n = 2): ξ₁², ξ₁ξ₂, ξ₂²
    let forms = [BinaryForm::from_i64(&[1, 0, 0]), BinaryForm::from_i64(&[0, 1, 0]), BinaryForm::from_i64(&[0, 0, 1])];
    assert_eq!(gcd_binary_forms(&forms).unwrap().degree(), 0);
    assert!(!resultant(&forms[0], &forms[2]).is_zero());
    assert!(gcd_binary_forms(&[BinaryForm::zero(3)]).is_err());
}

#[test]
fn real_root_counts() {
    assert_eq!(BinaryForm::from_i64(&[1, 0, 1]).count_real_roots().unwrap(), 0);
    assert_eq!(BinaryForm::from_i64(&[0, 1, 0]).count_real_roots().unwrap(), 2);
    assert_eq!(BinaryForm::from_i64(&[1, -3, 2]).count_real_roots().unwrap(), 2);
    assert!(BinaryForm::zero(2).count_real_roots().is_err());
}

fn form_strategy(max_deg: usize) -> impl Strategy<Value = BinaryForm> {
    (1..=max_deg)
        .prop_flat_map(|d| proptest::collection::vec(-4i64..=4, d + 1))
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| BinaryForm::from_i64(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rank_plus_nullity(rows in 1usize..6, cols in 1usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = RationalMatrix::from_fn(rows, cols, |_, _| rat(rng.gen_range(-2..=2)));
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.len(), cols);
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        let r = m.rref();
        prop_assert_eq!(r.matrix.rref().matrix, r.matrix);
    }

    #[test]
    fn gcd_divides_and_keeps_common_roots(a in form_strategy(4), b in form_strategy(4), c in form_strategy(3)) {
        // multiply by a common factor so there is something to find
        let fa = mul(&a, &c);
        let fb = mul(&b, &c);
        let g = gcd_binary_forms(&[fa.clone(), fb.clone()]).unwrap();
        prop_assert!(fa.div_exact(&g).is_some());
        prop_assert!(fb.div_exact(&g).is_some());
        for t in c.dehomogenize().complex_roots() {
            let v = g.eval_c64(t, num_complex::Complex64::new(1.0, 0.0));
            let scale = 1.0 + t.norm().powi(g.degree() as i32);
            prop_assert!(v.norm() / scale < 1e-8);
        }
    }

    #[test]
    fn sturm_matches_companion(f in form_strategy(8)) {
        let g = f.dehomogenize().squarefree();
        let numeric = g.complex_roots().iter().filter(|z| z.im.abs() < 1e-8).count();
        let at_infinity = usize::from(f.xi2_power() > 0);
        prop_assert_eq!(f.count_real_roots().unwrap(), numeric + at_infinity);
    }
}

fn mul(a: &BinaryForm, b: &BinaryForm) -> BinaryForm {
    let mut c = vec![Rational::zero(); a.degree() + b.degree() + 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    BinaryForm::new(c)
}

#[test]
fn univariate_gcd_is_monic() {
    let p = UniPoly::new(vec![rat(-2), rat(0), rat(2)]);
    let q = UniPoly::new(vec![rat(3), rat(3)]);
    assert_eq!(p.gcd(&q), UniPoly::new(vec![rat(1), rat(1)]));
}
