use aop_core::classify::{null_family, InversePower, Power};
use aop_core::nullspace::{PolyField, Quadrature, SmoothField};
use aop_core::opcore::multiindex::MultiIndex;
use aop_core::opcore::scalar::rat;
use aop_core::opcore::{Operator, RealPoly};
use aop_core::opdsl::zoo::{a_kn, delbar, dev_sym_grad, grad_k, laplacian};
use aop_lab::field::{apply_operator, apply_operator_grid, gradient_tensor_norm, lp_norm, Field, GridField};
use aop_lab::LabError;
use proptest::prelude::*;
use std::f64::consts::PI;

fn poly(terms: &[(&[u32], f64)]) -> RealPoly {
    RealPoly::from_terms(2, terms.iter().map(|(e, c)| (MultiIndex::new(e.to_vec()), *c)))
}

#[test]
fn norms_on_the_unit_disc() {
    let q = Quadrature::disc_polar([0.0, 0.0], 1.0, 200, 64);
    let one = Field::from_fn(&q, 1, |_| vec![1.0]);
    assert!((lp_norm(&one, 1.0) - PI).abs() < 1e-4);
    let x1 = Field::from_fn(&q, 1, |x| vec![x[0]]);
    // ∫ r³ cos²θ dr dθ = π/4
    assert!((lp_norm(&x1, 2.0) - (PI / 4.0).sqrt()).abs() < 1e-4);
    let zero = Field::from_fn(&q, 2, |_| vec![0.0, 0.0]);
    assert_eq!(lp_norm(&zero, 1.0), 0.0);
    assert_eq!(lp_norm(&zero, f64::INFINITY), 0.0);
    let v = Field::from_fn(&q, 2, |x| vec![3.0 * x[0], 4.0 * x[0]]);
    assert!((lp_norm(&v, f64::INFINITY) - 5.0 * q.iter().map(|(x, _)| x[0].abs()).fold(0.0, f64::max)).abs() < 1e-12);
}

proptest! {
    #[test]
    fn norms_are_homogeneous(vals in prop::collection::vec(-10.0..10.0f64, 40), c in -5.0..5.0f64, p in 1.0..6.0f64) {
        let q = Quadrature::new(2, (0..20).flat_map(|i| [i as f64, 0.0]).collect(), vec![0.05; 20]);
        let f = Field::new(q, 2, vals);
        for pp in [p, f64::INFINITY] {
            let a = lp_norm(&f.scale(c), pp);
            let b = c.abs() * lp_norm(&f, pp);
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b));
        }
    }

    #[test]
    fn norms_are_monotone(vals in prop::collection::vec(-10.0..10.0f64, 20), shrink in prop::collection::vec(0.0..1.0f64, 20), p in 1.0..6.0f64) {
        let q = Quadrature::new(1, (0..20).map(|i| i as f64).collect(), vec![0.05; 20]);
        let f = Field::new(q.clone(), 1, vals.clone());
        let g = Field::new(q, 1, vals.iter().zip(&shrink).map(|(v, s)| v * s).collect());
        prop_assert!(lp_norm(&g, p) <= lp_norm(&f, p) * (1.0 + 1e-14));
        prop_assert!(lp_norm(&g, f64::INFINITY) <= lp_norm(&f, f64::INFINITY));
    }
}

#[test]
fn gradient_of_a_quadratic_on_the_grid() {
    let u = GridField::sample(vec![-1.0, -1.0], 0.1, vec![21, 21], 1, |x| vec![x[0] * x[0]]);
    let g = apply_operator_grid(&grad_k(2, 1, 1).unwrap(), &u).unwrap();
    assert_eq!(g.shape, vec![19, 19]);
    assert_eq!(g.dim, 2);
    for idx in 0..g.len() {
        let x = g.node(idx);
        assert!((g.at(idx)[0] - 2.0 * x[0]).abs() < 1e-12);
        assert!(g.at(idx)[1].abs() < 1e-12);
    }
}

#[test]
fn laplacian_of_the_square_norm_is_four() {
    let u = GridField::sample(vec![0.0, 0.0], 0.05, vec![15, 12], 1, |x| vec![x[0] * x[0] + x[1] * x[1]]);
    let l = apply_operator_grid(&laplacian(2, 1).unwrap(), &u).unwrap();
    assert!(l.values.iter().all(|v| (v - 4.0).abs() < 1e-9));
    // and analytically
    let p = PolyField(vec![poly(&[(&[2, 0], 1.0), (&[0, 2], 1.0)])]);
    let q = Quadrature::disc_polar([0.0, 0.0], 1.0, 5, 5);
    let a = apply_operator(&laplacian(2, 1).unwrap(), &p, &q).unwrap();
    assert!(a.values().iter().all(|v| (v - 4.0).abs() < 1e-12));
}

#[test]
fn coarse_grids_are_rejected() {
    let u = GridField::sample(vec![0.0, 0.0], 0.1, vec![2, 9], 1, |_| vec![0.0]);
    let err = apply_operator_grid(&grad_k(2, 1, 1).unwrap(), &u).unwrap_err();
    assert!(matches!(err, LabError::GridTooCoarse(_)));
    let wrong = GridField::sample(vec![0.0, 0.0], 0.1, vec![9, 9], 2, |_| vec![0.0, 0.0]);
    assert!(matches!(apply_operator_grid(&grad_k(2, 1, 1).unwrap(), &wrong), Err(LabError::Unsupported(_))));
}

#[test]
fn grid_stencils_are_second_order() {
    // halving h should cut the error of ∂̄ applied to a smooth non-polynomial field by ≈4
    let op = delbar().unwrap();
    let err = |h: f64| {
        let m = (1.0 / h).round() as usize + 1;
        let u = GridField::sample(vec![0.0, 0.0], h, vec![m, m], 2, |x| vec![(x[0] + 2.0 * x[1]).sin(), x[0].exp()]);
        let a = apply_operator_grid(&op, &u).unwrap();
        let ex = |x: &[f64]| {
            let c = (x[0] + 2.0 * x[1]).cos();
            // rows ∂₁u₁ − ∂₂u₂, ∂₂u₁ + ∂₁u₂
            [c, 2.0 * c + x[0].exp()]
        };
        (0..a.len()).map(|i| {
            let e = ex(&a.node(i));
            let v = a.at(i);
            (v[0] - e[0]).abs().max((v[1] - e[1]).abs())
        }).fold(0.0, f64::max)
    };
    let r = err(0.02) / err(0.01);
    assert!((r - 4.0).abs() < 0.3, "{r}");
}

#[test]
fn delbar_annihilates_its_family_member() {
    let op = delbar().unwrap();
    let fam = null_family(&op).unwrap();
    let member = fam.member(Power(2));
    // (Re z², Im z²) with z = x₁ + i x₂
    let x = [0.3, -0.7];
    let v = member.value(&x);
    assert!((v[0] - (x[0] * x[0] - x[1] * x[1])).abs() < 1e-14);
    assert!((v[1] - 2.0 * x[0] * x[1]).abs() < 1e-14);
    let q = Quadrature::disc_polar([0.0, 0.0], 1.0, 16, 16);
    let a = apply_operator(&op, &member, &q).unwrap();
    assert!(lp_norm(&a, f64::INFINITY) < 1e-10);
    let g = GridField::sample(vec![-1.0, -1.0], 0.05, vec![41, 41], 2, |x| member.value(x));
    let ag = apply_operator_grid(&op, &g).unwrap();
    assert!(ag.lp_norm(f64::INFINITY) < 1e-10);
}

fn kth_sup(u: &dyn SmoothField, k: u32, q: &Quadrature) -> f64 {
    q.iter().map(|(x, _)| gradient_tensor_norm(u, k, x).unwrap()).fold(0.0, f64::max)
}

#[test]
fn null_families_are_annihilated() {
    let ops: Vec<Operator> = vec![
        delbar().unwrap(),
        laplacian(2, 1).unwrap(),
        laplacian(3, 2).unwrap(),
        dev_sym_grad(2).unwrap(),
        a_kn(1, 3, 3).unwrap(),
    ];
    for op in &ops {
        let fam = null_family(op).unwrap();
        let n = op.n();
        let q = if n == 2 {
            Quadrature::disc_polar([0.0, 0.0], 0.5, 8, 8)
        } else {
            Quadrature::ball_midpoint(&vec![0.0; n], 0.5, 6)
        };
        for j in op.order()..op.order() + 4 {
            let u = fam.member(Power(j));
            let au = lp_norm(&apply_operator(op, &u, &q).unwrap(), f64::INFINITY);
            let gk = kth_sup(&u, op.order(), &q);
            assert!(gk > 0.0 && au / gk < 1e-8, "{}: j = {j}, {au} / {gk}", fam.description);
        }
        let u = fam.member(InversePower(1.5));
        let au = lp_norm(&apply_operator(op, &u, &q).unwrap(), f64::INFINITY);
        assert!(au / kth_sup(&u, op.order(), &q) < 1e-8);
    }
}

#[test]
fn gradient_tensor_norm_counts_mixed_partials_twice() {
    // u = x₁x₂: ∇²u has two unit entries
    let u = PolyField(vec![poly(&[(&[1, 1], 1.0)])]);
    assert!((gradient_tensor_norm(&u, 2, &[0.2, 0.3]).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    assert!((gradient_tensor_norm(&u, 0, &[0.2, 0.3]).unwrap() - 0.06).abs() < 1e-14);
}

#[test]
fn analytic_application_needs_derivatives() {
    let op = Operator::from_entries(2, 1, 1, 1, [(0, 0, MultiIndex::unit(2, 0), rat(1))]).unwrap();
    let u = aop_core::nullspace::ValueField { nvars: 2, dim: 1, f: |x: &[f64]| vec![x[0]] };
    let q = Quadrature::disc_polar([0.0, 0.0], 1.0, 2, 2);
    assert!(matches!(apply_operator(&op, &u, &q), Err(LabError::DerivativeUnavailable(_))));
}
