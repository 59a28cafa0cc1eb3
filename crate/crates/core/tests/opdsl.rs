use std::collections::{BTreeMap, BTreeSet};

use aop_core::classify::{classify_full, is_cancelling, is_c_elliptic};
use aop_core::opcore::poly::Polynomial;
use aop_core::opcore::scalar::{rat, Rational};
use aop_core::opcore::{MultiIndex, Operator, OperatorError};
use aop_core::opdsl::{compose_grad, parse, parse_document, serialize, zoo, OpSpecError, ZooError};
use aop_core::sample::{random_operator, Shape};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GRADIENT: &str = r#"{"n":2,"N":1,"m":2,"k":1,
  "terms":[{"alpha":[1,0],"matrix":[[1],[0]]},{"alpha":[0,1],"matrix":[[0],[1]]}]}"#;

fn params(kv: &[(&str, i64)]) -> BTreeMap<String, i64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Symbol rows as polynomial vectors, each scaled by `scale`.
fn symbol_rows(op: &Operator, scale: i64) -> Vec<Vec<Polynomial>> {
    let s = op.symbol();
    (0..op.dim_w()).map(|r| (0..op.dim_v()).map(|c| s.entry(r, c).scale(&rat(scale))).collect()).collect()
}

fn row_set(op: &Operator, scale: i64) -> BTreeSet<String> {
    symbol_rows(op, scale).iter().map(|r| format!("{r:?}")).collect()
}

#[test]
fn parse_examples() {
    let g = parse(GRADIENT).unwrap();
    assert_eq!(g, zoo::grad_k(2, 1, 1).unwrap());

    let a13 = parse(r#"{"builtin":{"id":"A_kn","params":{"k":1,"n":3,"N":3}}}"#).unwrap();
    assert_eq!(a13, zoo::a_kn(1, 3, 3).unwrap());
    assert_eq!(a13.dim_w(), 7);

    let bad = r#"{"n":2,"N":1,"m":1,"k":1,"terms":[{"alpha":[1,1],"matrix":[[1]]}]}"#;
    let err = parse(bad).unwrap_err();
    assert!(matches!(err, OpSpecError::Operator(OperatorError::OrderMismatch { .. })));
    assert!(err.to_string().contains("order mismatch"));
}

#[test]
fn rational_entries_are_exact() {
    let text = r#"{"n":2,"N":1,"m":1,"k":1,"terms":[{"alpha":[1,0],"matrix":[["-3/6"]]},{"alpha":[0,1],"matrix":[["7"]]}]}"#;
    let op = parse(text).unwrap();
    assert_eq!(op.coefficient(&MultiIndex::new(vec![1, 0])).unwrap().get(0, 0), &Rational::new((-1).into(), 2.into()));
    let float = text.replace(r#"["-3/6"]"#, "[0.5]");
    let err = parse(&float).unwrap_err();
    assert!(err.to_string().contains("floating-point"), "{err}");
    assert!(err.location().is_some());
}

#[test]
fn syntax_errors_carry_location() {
    let err = parse("{\n  \"n\": 2,\n  \"N\": ,\n}").unwrap_err();
    assert_eq!(err.location(), Some((3, 8)));
    let err = parse_document("{\"terms\": [").unwrap_err();
    assert!(matches!(err, OpSpecError::Syntax { .. }));
}

#[test]
fn malformed_documents_are_rejected() {
    let unknown = GRADIENT.replace("\"n\":2", "\"n\":2,\"colour\":3");
    assert!(matches!(parse(&unknown).unwrap_err(), OpSpecError::Syntax { .. }));
    let both = r#"{"n":2,"N":1,"m":2,"k":1,"terms":[],"builtin":{"id":"delbar"}}"#;
    assert!(matches!(parse(both).unwrap_err(), OpSpecError::TermsXorBuiltin));
    assert!(matches!(parse("{}").unwrap_err(), OpSpecError::TermsXorBuiltin));
    let dup = r#"{"n":2,"N":1,"m":1,"k":1,"terms":[{"alpha":[1,0],"matrix":[[1]]},{"alpha":[1,0],"matrix":[[2]]}]}"#;
    assert!(matches!(parse(dup).unwrap_err(), OpSpecError::Operator(OperatorError::DuplicateIndex(_))));
    let shape = r#"{"n":2,"N":1,"m":2,"k":1,"terms":[{"alpha":[1,0],"matrix":[[1]]}]}"#;
    assert!(matches!(parse(shape).unwrap_err(), OpSpecError::Term { index: 0, .. }));
    let declared = r#"{"m":3,"builtin":{"id":"delbar"}}"#;
    assert!(matches!(parse(declared).unwrap_err(), OpSpecError::DeclaredMismatch { field: "m", .. }));
    assert!(matches!(
        parse(r#"{"builtin":{"id":"curl"}}"#).unwrap_err(),
        OpSpecError::Builtin(ZooError::UnknownId(_))
    ));
}

#[test]
fn dev_sym_grad_in_the_plane_is_delbar() {
    let d = zoo::zoo("delbar", &BTreeMap::new()).unwrap();
    let e = zoo::zoo("dev_sym_grad", &params(&[("n", 2)])).unwrap();
    // ℰ^D carries the factor ½ of the symmetrization
    assert_eq!(row_set(&e, 2), row_set(&d, 1));
    assert_eq!(e.dim_w(), d.dim_w());
}

#[test]
fn delbar_is_a_12() {
    assert_eq!(row_set(&zoo::delbar().unwrap(), 1), row_set(&zoo::a_kn(1, 2, 2).unwrap(), 1));
}

#[test]
fn b_22_is_the_laplacian() {
    let b = zoo::zoo("B_kn", &params(&[("k", 2), ("n", 2)])).unwrap();
    assert_eq!(b.dim_w(), 1);
    assert_eq!(b, zoo::laplacian(2, 1).unwrap());
}

#[test]
fn a_22_classification() {
    let a22 = zoo::zoo("A_kn", &params(&[("k", 2), ("n", 2), ("N", 2)])).unwrap();
    assert_eq!(a22, compose_grad(&zoo::a_kn(1, 2, 2).unwrap(), 1));
    let v = classify_full(&a22);
    assert!(v.ec.is_true() && v.fdn.is_false());
}

#[test]
fn zoo_parameter_validation() {
    assert!(matches!(zoo::zoo("delbar", &params(&[("n", 3)])), Err(ZooError::InvalidParams { .. })));
    assert!(matches!(zoo::zoo("B_kn", &params(&[("N", 2)])), Err(ZooError::InvalidParams { .. })));
    assert!(matches!(zoo::zoo("B_kn", &params(&[("k", 1)])), Err(ZooError::InvalidParams { .. })));
    assert!(matches!(zoo::zoo("A_kn", &params(&[("N", 1)])), Err(ZooError::InvalidParams { .. })));
    assert!(matches!(zoo::zoo("sym_grad", &params(&[("k", 1)])), Err(ZooError::UnknownParam { .. })));
    for id in zoo::BUILTIN_IDS {
        assert!(zoo::zoo(id, &BTreeMap::new()).is_ok(), "{id}");
    }
}

#[test]
fn compose_grad_examples() {
    let g = zoo::grad_k(2, 1, 1).unwrap();
    assert_eq!(compose_grad(&g, 0), g);
    let gg = compose_grad(&g, 1);
    assert_eq!(gg.order(), 2);
    // ∂₁∂₂ shows up twice, otherwise the rows are those of ∇²
    assert_eq!(row_set(&gg, 1), row_set(&zoo::grad_k(2, 1, 2).unwrap(), 1));
}

fn shape_strategy() -> impl Strategy<Value = (Shape, u64)> {
    (2usize..4, 1usize..4, 1usize..5, 1u32..3, any::<u64>())
        .prop_map(|(n, dim_v, dim_w, order, seed)| (Shape { n, dim_v, dim_w, order }, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_inverts_serialize((shape, seed) in shape_strategy(), den in 1i64..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(op) = random_operator(shape, &mut rng) else { return Ok(()) };
        // push through non-integer rationals too
        let terms: Vec<_> = op.terms().iter().map(|(a, m)| {
            let scaled = aop_core::exactla::matrix::RationalMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j) / rat(den));
            (a.clone(), scaled)
        }).collect();
        let op = Operator::new(op.n(), op.dim_v(), op.dim_w(), op.order(), terms).unwrap();
        prop_assert_eq!(parse(&serialize(&op)).unwrap(), op);
    }
}

#[test]
fn gradients_have_fdn() {
    for n in 2..=3 {
        for k in 1..=3 {
            assert!(is_c_elliptic(&zoo::grad_k(n, 1, k).unwrap()).certainty.is_true(), "n={n} k={k}");
        }
    }
}

#[test]
fn composition_preserves_cancellation() {
    let ops = [
        zoo::grad_k(2, 1, 1).unwrap(),
        zoo::sym_grad(2).unwrap(),
        zoo::a_kn(1, 3, 3).unwrap(),
        zoo::b_kn(2, 3).unwrap(),
        zoo::dev_sym_grad(3).unwrap(),
    ];
    for op in &ops {
        assert!(is_cancelling(op).certainty.is_true());
        for l in 1..=2 {
            let c = compose_grad(op, l);
            assert!(is_cancelling(&c).certainty.is_true(), "{c:?}");
        }
    }
}
