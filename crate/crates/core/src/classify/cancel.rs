//! Cancellation: ⋂_{ξ≠0} 𝔸[ξ](V) = {0}.
//!
//! w lies in every image iff all (N+1)-minors of [𝔸[ξ] | w] vanish identically in ξ.
//! Each such minor is linear in w, so collecting the coefficient of every ξ-monomial
//! gives an exact linear system whose kernel is the intersection.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::certainty::Certainty;
use super::witness::unit_rational;
use crate::exactla::matrix::RationalMatrix;
use crate::opcore::multiindex::MultiIndex;
use crate::opcore::scalar::{rat, Rational};
use crate::opcore::symbol::binomial;
use crate::opcore::Operator;

#[derive(Clone, Debug)]
pub struct CancellationOutcome {
    pub certainty: Certainty,
    /// Exact basis of the intersection of images (empty when cancelling).
    pub intersection: Vec<Vec<Rational>>,
    /// Set when ellipticity was only established numerically.
    pub conditional: bool,
    pub note: Option<String>,
}

/// Above this many augmented minors the evaluation route is used.
pub const MINOR_ROUTE_LIMIT: usize = 2000;

/// Stacked coefficient system M with ker M = ⋂ 𝔸[ξ](V) (assuming generic rank N).
pub fn cancellation_system(op: &Operator) -> RationalMatrix {
    let (n, m, big_n) = (op.n(), op.dim_w(), op.dim_v());
    let minors = op.symbol().minors(big_n + 1, true).expect("m > N");
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for p in &minors {
        let mut by_xi: BTreeMap<MultiIndex, Vec<Rational>> = BTreeMap::new();
        for (mono, c) in p.terms() {
            let xi_part = MultiIndex(mono.0[..n].to_vec());
            let r = (n..n + m).find(|&i| mono.0[i] == 1).expect("minor is linear in w");
            by_xi.entry(xi_part).or_insert_with(|| vec![Rational::zero(); m])[r - n] += c;
        }
        rows.extend(by_xi.into_values());
    }
    if rows.is_empty() {
        return RationalMatrix::zeros(0, m);
    }
    RationalMatrix::from_rows(rows)
}

/// Intersection basis from the minor system.
pub fn intersection_by_minors(op: &Operator) -> Vec<Vec<Rational>> {
    let sys = cancellation_system(op);
    if sys.rows() == 0 {
        return (0..op.dim_w()).map(|i| unit_rational(op.dim_w(), i)).collect();
    }
    sys.kernel()
}

/// Intersection basis from exact images at the integer grid {0..kN}ⁿ.
///
/// Every augmented minor has degree ≤ kN in each ξᵢ, so vanishing on this grid is
/// vanishing identically; at rank-deficient points the minors vanish automatically.
pub fn intersection_by_evaluation(op: &Operator) -> Vec<Vec<Rational>> {
    let (n, m, big_n) = (op.n(), op.dim_w(), op.dim_v());
    let side = op.order() as usize * big_n + 1;
    let mut constraints = RationalMatrix::zeros(0, m);
    let mut rank = 0;
    let total = side.pow(n as u32);
    for idx in 0..total {
        let xi: Vec<Rational> = (0..n).map(|a| rat(((idx / side.pow(a as u32)) % side) as i64)).collect();
        if xi.iter().all(Zero::is_zero) {
            continue;
        }
        let s = op.symbol_at(&xi).expect("length n");
        if s.rank() < big_n {
            continue;
        }
        // annihilators of the image: kernel of 𝔸[ξ]ᵀ
        let ann = s.transpose().kernel();
        if ann.is_empty() {
            continue;
        }
        constraints = constraints.vstack(&RationalMatrix::from_rows(ann));
        let rr = constraints.rref();
        if rr.rank() > rank {
            rank = rr.rank();
            constraints = RationalMatrix::from_rows((0..rank).map(|i| rr.matrix.row(i).to_vec()).collect());
        }
        if rank == m {
            return Vec::new();
        }
    }
    if constraints.rows() == 0 {
        return (0..m).map(|i| unit_rational(m, i)).collect();
    }
    constraints.kernel()
}

/// Exact intersection basis choosing the cheaper route.
pub fn exact_intersection(op: &Operator) -> Vec<Vec<Rational>> {
    if op.dim_w() == op.dim_v() {
        return (0..op.dim_w()).map(|i| unit_rational(op.dim_w(), i)).collect();
    }
    if binomial(op.dim_w(), op.dim_v() + 1) <= MINOR_ROUTE_LIMIT {
        intersection_by_minors(op)
    } else {
        intersection_by_evaluation(op)
    }
}

pub fn is_cancelling(op: &Operator) -> CancellationOutcome {
    let e = super::ellipticity::is_elliptic(op).certainty;
    is_cancelling_given(op, &e)
}

/// Cancellation given an already computed ellipticity verdict.
pub fn is_cancelling_given(op: &Operator, elliptic: &Certainty) -> CancellationOutcome {
    if op.dim_w() < op.dim_v() {
        return CancellationOutcome {
            certainty: Certainty::unknown("m < N: operator cannot be elliptic"),
            intersection: Vec::new(),
            conditional: false,
            note: Some("m < N".into()),
        };
    }
    match elliptic.truth() {
        Some(true) => {}
        Some(false) => {
            return CancellationOutcome {
                certainty: Certainty::unknown("cancellation is only analyzed for elliptic operators"),
                intersection: Vec::new(),
                conditional: false,
                note: Some("not elliptic".into()),
            }
        }
        None => {
            return CancellationOutcome {
                certainty: Certainty::unknown("ellipticity undetermined"),
                intersection: Vec::new(),
                conditional: false,
                note: None,
            }
        }
    }
    let conditional = !elliptic.is_exact();
    let intersection = exact_intersection(op);
    let certainty = Certainty::from_exact(intersection.is_empty());
    let note = if op.dim_w() == op.dim_v() {
        Some("square elliptic symbol is onto for every ξ ≠ 0".into())
    } else {
        None
    };
    CancellationOutcome { certainty, intersection, conditional, note }
}
