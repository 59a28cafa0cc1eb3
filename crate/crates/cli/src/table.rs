//! The E / EC / FDN comparison table, recomputed from sampled operators and the zoo.
//!
//! Each cell is decided without looking at its expected label: an exact zoo operator or a
//! sampled operator that is EC but not FDN makes it `EC ⇏ FDN`; otherwise an elliptic,
//! non-FDN operator makes it `EC ⇒ FDN`; otherwise `E ⇒ FDN`. The sampled premise
//! operators must then all be FDN for the cell to be confirmed.

use std::collections::BTreeMap;
use std::fmt;

use aop_core::classify::{is_c_elliptic, is_cancelling_given, is_elliptic, Certainty};
use aop_core::opdsl::zoo;
use aop_core::sample::{random_operator, random_with_complex_kernel, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Implication {
    #[serde(rename = "E=>FDN")]
    EImpliesFdn,
    #[serde(rename = "EC=>FDN")]
    EcImpliesFdn,
    #[serde(rename = "EC=/=>FDN")]
    EcNotFdn,
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::EImpliesFdn => "E ⇒ FDN",
            Self::EcImpliesFdn => "EC ⇒ FDN",
            Self::EcNotFdn => "EC ⇏ FDN",
        })
    }
}

/// lo..=hi, `None` meaning unbounded above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Span {
    pub lo: u32,
    pub hi: Option<u32>,
}

impl Span {
    const fn exactly(v: u32) -> Self {
        Self { lo: v, hi: Some(v) }
    }
    const fn from(v: u32) -> Self {
        Self { lo: v, hi: None }
    }
    fn contains(&self, v: u32) -> bool {
        v >= self.lo && self.hi.is_none_or(|h| v <= h)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) if h == self.lo => write!(f, "{h}"),
            Some(h) => write!(f, "{}..{h}", self.lo),
            None => write!(f, "≥{}", self.lo),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Cell {
    pub n: Span,
    #[serde(rename = "N")]
    pub dim_v: Span,
    pub k: Span,
    pub expected: Implication,
}

pub const CELLS: [Cell; 8] = [
    Cell { n: Span::exactly(2), dim_v: Span::exactly(1), k: Span::exactly(1), expected: Implication::EImpliesFdn },
    Cell { n: Span::exactly(2), dim_v: Span::exactly(1), k: Span::exactly(2), expected: Implication::EcImpliesFdn },
    Cell { n: Span::exactly(2), dim_v: Span::exactly(1), k: Span::from(3), expected: Implication::EcNotFdn },
    Cell { n: Span::exactly(2), dim_v: Span::from(2), k: Span::exactly(1), expected: Implication::EcImpliesFdn },
    Cell { n: Span::exactly(2), dim_v: Span::from(2), k: Span::from(2), expected: Implication::EcNotFdn },
    Cell { n: Span::from(3), dim_v: Span::exactly(1), k: Span::exactly(1), expected: Implication::EImpliesFdn },
    Cell { n: Span::from(3), dim_v: Span::exactly(1), k: Span::from(2), expected: Implication::EcNotFdn },
    Cell { n: Span::from(3), dim_v: Span::from(2), k: Span::from(1), expected: Implication::EcNotFdn },
];

/// Largest n, N and k the table command accepts.
pub const TABLE_LIMIT: u32 = 3;

#[derive(Debug, Error, PartialEq)]
pub enum TableError {
    #[error("range for {name} must lie within {min}..{max}, got {lo}..{hi}")]
    Range { name: &'static str, lo: u32, hi: u32, min: u32, max: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct TableConfig {
    pub n: (u32, u32),
    #[serde(rename = "N")]
    pub dim_v: (u32, u32),
    pub k: (u32, u32),
    /// Premise operators drawn per cell.
    pub samples: usize,
    /// Rejection draws allowed per accepted sample.
    pub max_tries: usize,
    pub seed: u64,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self { n: (2, 3), dim_v: (1, 3), k: (1, 3), samples: 100, max_tries: 200, seed: 0 }
    }
}

impl TableConfig {
    pub fn validate(&self) -> Result<(), TableError> {
        for (name, (lo, hi), min) in [("n", self.n, 2), ("N", self.dim_v, 1), ("k", self.k, 1)] {
            if lo < min || hi > TABLE_LIMIT || lo > hi {
                return Err(TableError::Range { name, lo, hi, min, max: TABLE_LIMIT });
            }
        }
        Ok(())
    }

    fn triples(&self, cell: &Cell) -> Vec<(u32, u32, u32)> {
        let mut out = Vec::new();
        for k in self.k.0..=self.k.1 {
            for dim_v in self.dim_v.0..=self.dim_v.1 {
                for n in self.n.0..=self.n.1 {
                    if cell.n.contains(n) && cell.dim_v.contains(dim_v) && cell.k.contains(k) {
                        out.push((n, dim_v, k));
                    }
                }
            }
        }
        out
    }
}

/// Verdicts of one zoo operator. FDN and cancellation must be exact for a witness; for
/// n ≥ 3 ellipticity of a non-FDN operator is only known numerically.
#[derive(Clone, Debug, Serialize)]
pub struct ZooWitness {
    pub id: String,
    pub params: BTreeMap<String, i64>,
    pub elliptic: Certainty,
    pub cancelling: Certainty,
    pub fdn: Certainty,
}

impl ZooWitness {
    fn ec_not_fdn(&self) -> bool {
        self.elliptic.is_true() && self.cancelling == Certainty::ExactTrue && is_exact_false(&self.fdn)
    }
    fn e_not_fdn(&self) -> bool {
        self.elliptic.is_true() && is_exact_false(&self.fdn)
    }
}

fn is_exact_false(c: &Certainty) -> bool {
    *c == Certainty::ExactFalse
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SampleCounts {
    /// Draws satisfying the premise (E or EC, from the expected label).
    pub premise: usize,
    pub fdn: usize,
    pub not_fdn: usize,
    pub undetermined: usize,
    pub draws: usize,
}

/// Elliptic operators drawn with a prescribed complex kernel (so never FDN).
#[derive(Clone, Debug, Default, Serialize)]
pub struct NonFdnCounts {
    pub elliptic: usize,
    pub cancelling: usize,
    pub not_cancelling: usize,
    pub draws: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub cell: Cell,
    /// (n, N, k) used for sampling.
    pub sampled_shape: [u32; 3],
    pub samples: SampleCounts,
    pub non_fdn: NonFdnCounts,
    /// Zoo operators classified for this cell, in the order tried.
    pub zoo: Vec<ZooWitness>,
    /// Index into `zoo` of the EC ∧ ¬FDN witness, if any.
    pub ec_witness: Option<usize>,
    /// Index into `zoo` of an E ∧ ¬FDN witness, if any.
    pub e_witness: Option<usize>,
    pub observed: Implication,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub experiment: &'static str,
    pub config: TableConfig,
    pub cells: Vec<CellReport>,
    pub all_agree: bool,
}

pub fn run_table(cfg: &TableConfig) -> Result<TableReport, TableError> {
    cfg.validate()?;
    let cells: Vec<(usize, Vec<(u32, u32, u32)>)> =
        CELLS.iter().enumerate().map(|(i, c)| (i, cfg.triples(c))).filter(|(_, t)| !t.is_empty()).collect();
    let cells: Vec<CellReport> = cells.into_par_iter().map(|(i, t)| run_cell(cfg, i, &t)).collect();
    let all_agree = cells.iter().all(|c| c.agrees);
    Ok(TableReport { experiment: "table", config: cfg.clone(), cells, all_agree })
}

/// Zoo operators with shape (n, N, k), cheapest first.
fn zoo_candidates(n: u32, dim_v: u32, k: u32) -> Vec<(&'static str, BTreeMap<String, i64>)> {
    let p = |pairs: &[(&str, u32)]| pairs.iter().map(|(a, b)| (a.to_string(), i64::from(*b))).collect();
    let mut out = Vec::new();
    if dim_v == 1 {
        out.push(("grad_k", p(&[("n", n), ("N", 1), ("k", k)])));
    }
    if k == 1 && dim_v == n {
        out.push(("sym_grad", p(&[("n", n)])));
        out.push(("dev_sym_grad", p(&[("n", n)])));
    }
    if k == 1 && n == 2 && dim_v == 2 {
        out.push(("delbar", p(&[("n", 2)])));
    }
    if k == 2 {
        out.push(("laplacian", p(&[("n", n), ("N", dim_v)])));
    }
    if dim_v == 1 && k >= 2 {
        out.push(("B_kn", p(&[("k", k), ("n", n)])));
    }
    if dim_v >= 2 {
        out.push(("A_kn", p(&[("k", k), ("n", n), ("N", dim_v)])));
    }
    out
}

fn classify_zoo(id: &str, params: BTreeMap<String, i64>) -> Option<ZooWitness> {
    let op = zoo::zoo(id, &params).ok()?;
    let elliptic = is_elliptic(&op).certainty;
    let fdn = is_c_elliptic(&op).certainty;
    let cancelling = is_cancelling_given(&op, &elliptic).certainty;
    Some(ZooWitness { id: id.into(), params, elliptic, cancelling, fdn })
}

fn run_cell(cfg: &TableConfig, index: usize, triples: &[(u32, u32, u32)]) -> CellReport {
    let cell = CELLS[index];
    let mut zoo = Vec::new();
    let (mut ec_witness, mut e_witness) = (None, None);
    'search: for &(n, dim_v, k) in triples {
        for (id, params) in zoo_candidates(n, dim_v, k) {
            let Some(w) = classify_zoo(id, params) else { continue };
            if e_witness.is_none() && w.e_not_fdn() {
                e_witness = Some(zoo.len());
            }
            let found = w.ec_not_fdn();
            zoo.push(w);
            if found {
                ec_witness = Some(zoo.len() - 1);
                break 'search;
            }
        }
    }
    let (n, dim_v, k) = triples[0];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(index as u64 + 1)));
    let needs_cancel = cell.expected != Implication::EImpliesFdn;
    let samples = sample_premise(cfg, (n, dim_v, k), needs_cancel, &mut rng);
    let non_fdn = sample_non_fdn(cfg, (n, dim_v, k), &mut rng);

    let sampled_ec_counter = needs_cancel && samples.not_fdn > 0;
    let sampled_e_counter = non_fdn.elliptic > 0 || (!needs_cancel && samples.not_fdn > 0);
    let observed = if ec_witness.is_some() || sampled_ec_counter || non_fdn.cancelling > 0 {
        Implication::EcNotFdn
    } else if e_witness.is_some() || sampled_e_counter {
        Implication::EcImpliesFdn
    } else {
        Implication::EImpliesFdn
    };
    let confirmed = match cell.expected {
        Implication::EcNotFdn => ec_witness.is_some(),
        _ => samples.premise == cfg.samples && samples.fdn == samples.premise,
    };
    CellReport {
        cell,
        sampled_shape: [n, dim_v, k],
        samples,
        non_fdn,
        zoo,
        ec_witness,
        e_witness,
        agrees: observed == cell.expected && confirmed,
        observed,
    }
}

fn random_shape(rng: &mut ChaCha8Rng, (n, dim_v, k): (u32, u32, u32)) -> Shape {
    let extra = rng.gen_range(1..=n as usize);
    Shape { n: n as usize, dim_v: dim_v as usize, dim_w: dim_v as usize + extra, order: k }
}

fn sample_premise(cfg: &TableConfig, shape: (u32, u32, u32), needs_cancel: bool, rng: &mut ChaCha8Rng) -> SampleCounts {
    let mut c = SampleCounts::default();
    let budget = cfg.samples * cfg.max_tries;
    while c.premise < cfg.samples && c.draws < budget {
        c.draws += 1;
        let Some(op) = random_operator(random_shape(rng, shape), rng) else { continue };
        let e = is_elliptic(&op).certainty;
        if !e.is_true() {
            continue;
        }
        if needs_cancel && !is_cancelling_given(&op, &e).certainty.is_true() {
            continue;
        }
        c.premise += 1;
        match is_c_elliptic(&op).certainty.truth() {
            Some(true) => c.fdn += 1,
            Some(false) => c.not_fdn += 1,
            None => c.undetermined += 1,
        }
    }
    c
}

fn sample_non_fdn(cfg: &TableConfig, shape: (u32, u32, u32), rng: &mut ChaCha8Rng) -> NonFdnCounts {
    let mut c = NonFdnCounts::default();
    for _ in 0..cfg.samples {
        c.draws += 1;
        let Some(op) = random_with_complex_kernel(random_shape(rng, shape), rng) else { continue };
        let e = is_elliptic(&op).certainty;
        if !e.is_true() {
            continue;
        }
        c.elliptic += 1;
        match is_cancelling_given(&op, &e).certainty.truth() {
            Some(true) => c.cancelling += 1,
            _ => c.not_cancelling += 1,
        }
    }
    c
}
