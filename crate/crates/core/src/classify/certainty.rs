use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a decision together with how it was reached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certainty {
    ExactTrue,
    ExactFalse,
    /// `margin` is the certified-by-sampling lower bound (e.g. minimal σ_min found).
    NumericTrue { margin: f64 },
    /// `quality` is the residual of the witness found (smaller is better).
    NumericFalse { quality: f64 },
    Unknown { note: String },
}

impl Certainty {
    pub fn unknown(note: impl Into<String>) -> Self {
        Self::Unknown { note: note.into() }
    }

    pub fn from_exact(b: bool) -> Self {
        if b {
            Self::ExactTrue
        } else {
            Self::ExactFalse
        }
    }

    pub fn truth(&self) -> Option<bool> {
        match self {
            Self::ExactTrue | Self::NumericTrue { .. } => Some(true),
            Self::ExactFalse | Self::NumericFalse { .. } => Some(false),
            Self::Unknown { .. } => None,
        }
    }

    pub fn is_true(&self) -> bool {
        self.truth() == Some(true)
    }

    pub fn is_false(&self) -> bool {
        self.truth() == Some(false)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::ExactTrue | Self::ExactFalse)
    }

    /// Conjunction keeping the weakest justification.
    pub fn and(&self, other: &Self) -> Self {
        use Certainty::*;
        match (self, other) {
            (ExactFalse, _) | (_, ExactFalse) => ExactFalse,
            (NumericFalse { quality: a }, NumericFalse { quality: b }) => NumericFalse { quality: a.min(*b) },
            (NumericFalse { quality }, _) | (_, NumericFalse { quality }) => NumericFalse { quality: *quality },
            (Unknown { note }, _) | (_, Unknown { note }) => Unknown { note: note.clone() },
            (ExactTrue, ExactTrue) => ExactTrue,
            (NumericTrue { margin: a }, NumericTrue { margin: b }) => NumericTrue { margin: a.min(*b) },
            (NumericTrue { margin }, ExactTrue) | (ExactTrue, NumericTrue { margin }) => {
                NumericTrue { margin: *margin }
            }
        }
    }

    /// ✓, ✗ or ?, with `~` marking a numeric verdict.
    pub fn mark(&self) -> &'static str {
        match self {
            Self::ExactTrue => "✓",
            Self::ExactFalse => "✗",
            Self::NumericTrue { .. } => "✓~",
            Self::NumericFalse { .. } => "✗~",
            Self::Unknown { .. } => "?",
        }
    }
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExactTrue => write!(f, "true (exact)"),
            Self::ExactFalse => write!(f, "false (exact)"),
            Self::NumericTrue { margin } => write!(f, "true (numeric, margin {margin:.3e})"),
            Self::NumericFalse { quality } => write!(f, "false (numeric, residual {quality:.3e})"),
            Self::Unknown { note } => write!(f, "unknown ({note})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_table() {
        let t = Certainty::ExactTrue;
        let f = Certainty::ExactFalse;
        let nt = Certainty::NumericTrue { margin: 0.5 };
        let u = Certainty::unknown("x");
        assert_eq!(t.and(&t), t);
        assert_eq!(t.and(&f), f);
        assert_eq!(u.and(&f), f);
        assert_eq!(t.and(&nt), nt);
        assert_eq!(nt.and(&u).truth(), None);
    }
}
