//! Decision procedures and the combined verdict.

pub mod bb;
pub mod cancel;
pub mod certainty;
pub mod ellipticity;
pub mod family;
pub mod groebner;
pub mod numeric;
pub mod witness;

use serde::Serialize;

pub use bb::{bb_matrices, check_bb, BbError, BbOutcome};
pub use cancel::{exact_intersection, is_cancelling, is_cancelling_given, CancellationOutcome};
pub use certainty::Certainty;
pub use ellipticity::{fdn, is_c_elliptic, is_elliptic, CEllipticityOutcome, EllipticityOutcome};
pub use family::{null_family, sampled_check, FamilyError, Holomorphic, InversePower, NullFamily, Power};
pub use witness::{ComplexNullPair, RealNullPair};

use crate::opcore::scalar::format_rational;
use crate::opcore::Operator;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real_null_pair: Option<RealNullPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex_null_pair: Option<ComplexNullPair>,
    /// Exact basis of ⋂ 𝔸[ξ](V), entries as rational strings.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub intersection: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bb_failing_index: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub elliptic: Certainty,
    pub c_elliptic: Certainty,
    pub fdn: Certainty,
    pub cancelling: Certainty,
    pub ec: Certainty,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bb: Option<Certainty>,
    pub witnesses: Witnesses,
    pub c_elliptic_method: String,
    /// Cancellation relied on a numeric ellipticity verdict.
    pub cancellation_conditional: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection_dimension: Option<usize>,
    /// False if two exact verdicts contradict a known implication.
    pub consistent: bool,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn rows(&self) -> Vec<(&'static str, &Certainty)> {
        let mut r = vec![
            ("elliptic", &self.elliptic),
            ("C-elliptic", &self.c_elliptic),
            ("cancelling", &self.cancelling),
            ("EC", &self.ec),
            ("FDN", &self.fdn),
        ];
        if let Some(b) = &self.bb {
            r.push(("BB", b));
        }
        r
    }

    pub fn is_fully_exact(&self) -> bool {
        self.rows().iter().all(|(_, c)| c.is_exact())
    }
}

pub fn classify_full(op: &Operator) -> Verdict {
    let mut notes = Vec::new();
    let e = is_elliptic(op);
    let c = is_c_elliptic(op);
    let mut elliptic = e.certainty.clone();
    if c.certainty == Certainty::ExactTrue && elliptic != Certainty::ExactTrue {
        // ℂ-elliptic implies elliptic
        notes.push(format!("ellipticity upgraded from {} by exact C-ellipticity", elliptic));
        elliptic = Certainty::ExactTrue;
    }
    let mut consistent = true;
    if c.certainty.is_true() && elliptic.is_false() {
        consistent = false;
        notes.push("C-elliptic but not elliptic".into());
    }
    let cancel = is_cancelling_given(op, &elliptic);
    let ec = elliptic.and(&cancel.certainty);
    if c.certainty.is_exact() && cancel.certainty.is_exact() && c.certainty.is_true() && cancel.certainty.is_false() {
        consistent = false;
        notes.push("FDN holds but cancellation fails".into());
    }
    if op.dim_w() == op.dim_v() && elliptic.is_true() && cancel.certainty.is_true() {
        consistent = false;
        notes.push("square elliptic operator reported cancelling".into());
    }
    if let Some(n) = &cancel.note {
        notes.push(n.clone());
    }
    let (bb, bb_failing_index) = match check_bb(op) {
        Ok(o) => (Some(o.certainty), o.failing_index),
        Err(_) => (None, None),
    };
    let intersection_dimension = cancel.certainty.is_exact().then_some(cancel.intersection.len());
    let witnesses = Witnesses {
        real_null_pair: e.witness,
        complex_null_pair: c.witness,
        intersection: cancel.intersection.iter().map(|v| v.iter().map(format_rational).collect()).collect(),
        bb_failing_index,
    };
    Verdict {
        fdn: c.certainty.clone(),
        c_elliptic: c.certainty,
        elliptic,
        cancelling: cancel.certainty,
        ec,
        bb,
        witnesses,
        c_elliptic_method: c.method,
        cancellation_conditional: cancel.conditional,
        intersection_dimension,
        consistent,
        notes,
    }
}
