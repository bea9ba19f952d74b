//! JSON report assembly, schema `report_v1`.
//!
//! ```text
//! {
//!   "schema": "report_v1",
//!   "command": "<subcommand>",
//!   "config": { "g", "k", "lambda", "seed", "generator", "steps", "tolerance", ... },
//!   "status": "pass" | "fail",
//!   "checks": [ { "name": "...", "status": "pass" | "fail", ...payload } ],
//!   "timings_ms": { "<check>": n }            (only with --timings)
//! }
//! ```
//!
//! Exact rationals are `{"num": "<int>", "den": "<int>"}`; phase multisets are
//! lists of `{"num", "den", "mult"}`. Floats appear only in numerical sections.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde_json::{json, Map, Value};

use hitchin::spectra::PhaseMultiset;
use hitchin::ExactScalar;

pub const SCHEMA: &str = "report_v1";

pub fn rational(q: &BigRational) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

pub fn rational64(q: Rational64) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

pub fn integer(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn scalar(s: &ExactScalar) -> Value {
    if s.is_real() {
        rational(s.re())
    } else {
        json!({ "re": rational(s.re()), "im": rational(s.im()) })
    }
}

pub fn phases(m: &PhaseMultiset) -> Value {
    Value::Array(
        m.items()
            .iter()
            .map(|&(q, mult)| json!({ "num": q.numer().to_string(), "den": q.denom().to_string(), "mult": mult }))
            .collect(),
    )
}

/// One named check with its payload.
#[derive(Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub payload: Map<String, Value>,
    pub millis: u128,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            passed,
            payload: Map::new(),
            millis: 0,
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.payload.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub config: Map<String, Value>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self, timings: bool) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut obj = Map::new();
                obj.insert("name".into(), Value::String(c.name.clone()));
                obj.insert("status".into(), status(c.passed));
                for (k, v) in &c.payload {
                    obj.insert(k.clone(), v.clone());
                }
                Value::Object(obj)
            })
            .collect();
        let mut out = Map::new();
        out.insert("schema".into(), Value::String(SCHEMA.into()));
        out.insert("command".into(), Value::String(self.command.clone()));
        out.insert("config".into(), Value::Object(self.config.clone()));
        out.insert("status".into(), status(self.passed()));
        out.insert("checks".into(), Value::Array(checks));
        if timings {
            let t: Map<String, Value> = self.checks.iter().map(|c| (c.name.clone(), json!(c.millis))).collect();
            out.insert("timings_ms".into(), Value::Object(t));
        }
        Value::Object(out)
    }
}

fn status(ok: bool) -> Value {
    Value::String(if ok { "pass" } else { "fail" }.into())
}
