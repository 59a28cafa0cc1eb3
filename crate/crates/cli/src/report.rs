use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;
pub const TOOL: &str = "aop";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Top-level JSON envelope. Wall time is deliberately absent so that reports are
/// byte-identical across runs.
#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// sha256 of the input bytes (operator document, builtin id or argument list).
    pub input_digest: String,
    pub seed: u64,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: impl Into<String>, input: &[u8], seed: u64, result: T) -> Self {
        Self { schema: SCHEMA, tool: TOOL, version: VERSION, command: command.into(), input_digest: digest(input), seed, result }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// `AOP_SEED` if set, else 0.
pub fn seed_from_env(value: Option<&str>) -> Result<u64, String> {
    match value {
        None => Ok(0),
        Some(v) => v.trim().parse().map_err(|_| format!("AOP_SEED must be a non-negative integer, got {v:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_abc() {
        assert_eq!(digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn seed_parsing() {
        assert_eq!(seed_from_env(None), Ok(0));
        assert_eq!(seed_from_env(Some("17")), Ok(17));
        assert!(seed_from_env(Some("-1")).is_err());
    }
}
