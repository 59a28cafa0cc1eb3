//! `.opspec.json` documents and the builtin operator zoo.
//!
//! ```json
//! { "name": "gradient", "n": 2, "N": 1, "m": 2, "k": 1,
//!   "terms": [ { "alpha": [1, 0], "matrix": [["1"], ["0"]] },
//!              { "alpha": [0, 1], "matrix": [[0], [1]] } ] }
//! ```
//!
//! or `{ "builtin": { "id": "A_kn", "params": { "k": 1, "n": 3, "N": 3 } } }`.
//! Matrix entries are integers or strings `"p"` / `"p/q"`; floats are rejected.

pub mod zoo;

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::exactla::matrix::RationalMatrix;
use crate::opcore::multiindex::MultiIndex;
use crate::opcore::scalar::{format_rational, parse_rational, Rational};
use crate::opcore::{Operator, OperatorError};

pub use zoo::{compose_grad, zoo, ZooError, BUILTIN_IDS};

#[derive(Debug, Error)]
pub enum OpSpecError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("document must contain exactly one of `terms` and `builtin`")]
    TermsXorBuiltin,
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("term {index}: {message}")]
    Term { index: usize, message: String },
    #[error("declared {field} = {declared} but builtin has {actual}")]
    DeclaredMismatch { field: &'static str, declared: usize, actual: usize },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Builtin(#[from] ZooError),
}

impl OpSpecError {
    /// (line, column) for syntax errors.
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            Self::Syntax { line, column, .. } => Some((*line, *column)),
            _ => None,
        }
    }
}

/// Exact coefficient as found in the document.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry(pub Rational);

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Entry;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string \"p/q\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
                Ok(Entry(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
                Ok(Entry(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Entry, E> {
                Err(E::custom(format!("floating-point coefficient {v} is not allowed; write it as \"p/q\"")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Entry, E> {
                parse_rational(v).map(Entry).ok_or_else(|| E::custom(format!("`{v}` is not a rational number")))
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for Entry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub alpha: Vec<u32>,
    pub matrix: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BuiltinSpec {
    pub id: String,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OpSpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub dim_v: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinSpec>,
}

impl OpSpecDocument {
    pub fn from_operator(op: &Operator, name: Option<String>) -> Self {
        let terms = op
            .terms()
            .iter()
            .map(|(alpha, a)| TermSpec {
                alpha: alpha.0.clone(),
                matrix: a.to_rows().into_iter().map(|r| r.into_iter().map(Entry).collect()).collect(),
            })
            .collect();
        Self {
            name,
            n: Some(op.n()),
            dim_v: Some(op.dim_v()),
            m: Some(op.dim_w()),
            k: Some(op.order()),
            terms: Some(terms),
            builtin: None,
        }
    }

    pub fn to_operator(&self) -> Result<Operator, OpSpecError> {
        match (&self.terms, &self.builtin) {
            (Some(terms), None) => {
                let n = self.n.ok_or(OpSpecError::Missing("n"))?;
                let dim_v = self.dim_v.ok_or(OpSpecError::Missing("N"))?;
                let m = self.m.ok_or(OpSpecError::Missing("m"))?;
                let k = self.k.ok_or(OpSpecError::Missing("k"))?;
                let mut out = Vec::with_capacity(terms.len());
                for (index, t) in terms.iter().enumerate() {
                    if t.matrix.len() != m || t.matrix.iter().any(|r| r.len() != dim_v) {
                        return Err(OpSpecError::Term {
                            index,
                            message: format!("dimension mismatch: matrix must be {m}×{dim_v}"),
                        });
                    }
                    let rows = t.matrix.iter().map(|r| r.iter().map(|e| e.0.clone()).collect()).collect();
                    out.push((MultiIndex(t.alpha.clone()), RationalMatrix::from_rows(rows)));
                }
                Ok(Operator::new(n, dim_v, m, k, out)?)
            }
            (None, Some(b)) => {
                let op = zoo(&b.id, &b.params)?;
                let check = |field, declared: Option<usize>, actual| match declared {
                    Some(d) if d != actual => Err(OpSpecError::DeclaredMismatch { field, declared: d, actual }),
                    _ => Ok(()),
                };
                check("n", self.n, op.n())?;
                check("N", self.dim_v, op.dim_v())?;
                check("m", self.m, op.dim_w())?;
                check("k", self.k.map(|k| k as usize), op.order() as usize)?;
                Ok(op)
            }
            _ => Err(OpSpecError::TermsXorBuiltin),
        }
    }
}

pub fn parse_document(text: &str) -> Result<OpSpecDocument, OpSpecError> {
    serde_json::from_str(text).map_err(|e| OpSpecError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_location(&e.to_string()),
    })
}

fn strip_location(s: &str) -> String {
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s.to_string(),
    }
}

pub fn parse(text: &str) -> Result<Operator, OpSpecError> {
    parse_document(text)?.to_operator()
}

/// Pretty JSON with every coefficient written as a rational string.
pub fn serialize(op: &Operator) -> String {
    serde_json::to_string_pretty(&OpSpecDocument::from_operator(op, None)).expect("serializable")
}
