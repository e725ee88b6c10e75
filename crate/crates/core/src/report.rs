//! JSON reports written by the command-line tool.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Hex SHA-256 of an input file's bytes.
pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// The parsed arguments, echoed back.
    pub arguments: Value,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub exit_code: i32,
    pub summary: String,
    pub result: Value,
    /// Wall time; the only field that varies between identical runs.
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, arguments: Value, seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            arguments,
            seed,
            inputs: Vec::new(),
            exit_code: 0,
            summary: String::new(),
            result: Value::Null,
            timing_ms: 0,
        }
    }

    pub fn input(&mut self, role: &str, path: &str, text: &str) {
        self.inputs.push(InputDigest {
            role: role.to_string(),
            path: path.to_string(),
            sha256: digest(text),
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn json_has_schema_and_timing() {
        let mut r = Report::new("invariants", serde_json::json!({"graph": "g"}), 7);
        r.input("graph", "g", "vertex v\n");
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["seed"], 7);
        assert!(v.get("timing_ms").is_some());
        assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    }
}
