//! JSON run reports.
//!
//! Integers and rationals are written as decimal strings so arbitrary
//! precision survives the round trip; object keys come out sorted.

use std::time::Instant;

use deltafpt::{Int, IntMatrix, Rat, RatVector};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn new(kind: impl Into<String>, message: impl Into<String>) -> Failure {
        Failure {
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Failure {
        Failure::new("usage", message)
    }

    /// 2 usage, 3 input, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self.kind.as_str() {
            "usage" => 2,
            "invariant" | "overflow" | "suite-failure" => 4,
            _ => 3,
        }
    }
}

impl From<deltafpt::Error> for Failure {
    fn from(e: deltafpt::Error) -> Failure {
        Failure::new(e.kind(), e.to_string())
    }
}

/// Wall-clock time per phase, in call order.
#[derive(Debug)]
pub struct Timer {
    phases: Vec<(String, f64)>,
    last: Instant,
}

impl Default for Timer {
    fn default() -> Self {
        Timer {
            phases: Vec::new(),
            last: Instant::now(),
        }
    }
}

impl Timer {
    pub fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.phases
            .push((phase.to_string(), (now - self.last).as_secs_f64() * 1e3));
        self.last = now;
    }

    pub fn record(&mut self, phase: &str, ms: f64) {
        self.phases.push((phase.to_string(), ms));
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.phases {
            m.insert(format!("{k}_ms"), json!((v * 1e3).round() / 1e3));
        }
        Value::Object(m)
    }
}

#[derive(Debug)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub status: Result<(), Failure>,
    pub payload: Value,
    pub timings: Timer,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.status.as_ref().err().map_or(0, Failure::exit_code)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(self.command));
        m.insert("inputs_digest".into(), json!(self.inputs_digest));
        match &self.status {
            Ok(()) => {
                m.insert("status".into(), json!("ok"));
            }
            Err(f) => {
                m.insert("status".into(), json!("error"));
                m.insert("error".into(), json!({ "kind": f.kind, "message": f.message }));
            }
        }
        m.insert("payload".into(), self.payload.clone());
        m.insert("timings".into(), self.timings.to_json());
        Value::Object(m)
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("values are plain JSON")
    }
}

/// SHA-256 over the length-prefixed inputs, hex encoded.
pub fn digest<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn int(v: &Int) -> Value {
    Value::String(v.to_string())
}

pub fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn rat(v: &Rat) -> Value {
    Value::String(deltafpt::exactmat::format_ratio(v))
}

pub fn rat_vec(v: &RatVector) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn matrix(a: &IntMatrix) -> Value {
    Value::Array((0..a.rows()).map(|i| ints(a.row(i))).collect())
}

/// Inverse of [`matrix`]: rows of decimal strings.
pub fn matrix_from_json(v: &Value) -> Option<IntMatrix> {
    let rows = v
        .as_array()?
        .iter()
        .map(|r| {
            r.as_array()?
                .iter()
                .map(|e| e.as_str()?.parse().ok())
                .collect::<Option<Vec<Int>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    IntMatrix::from_rows(rows).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_round_trip() {
        let a = IntMatrix::from_i64(&[[2, -4], [123456789012345678, 3]]).unwrap();
        assert_eq!(matrix_from_json(&matrix(&a)), Some(a));
    }

    #[test]
    fn digest_separates_inputs() {
        assert_ne!(digest([b"ab".as_slice(), b"c"]), digest([b"a".as_slice(), b"bc"]));
        assert_eq!(digest([b"x".as_slice()]).len(), 64);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::usage("x").exit_code(), 2);
        assert_eq!(Failure::new("parse", "x").exit_code(), 3);
        assert_eq!(Failure::new("table-too-large", "x").exit_code(), 3);
        assert_eq!(Failure::new("invariant", "x").exit_code(), 4);
    }
}
