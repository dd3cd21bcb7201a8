//! The serialized outcome of a numerical verification.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::dynamics::MapSpec;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Invariance,
    Growth,
    Rouche,
    Absorbing,
    Sandwich,
    Conjugacy,
}

/// JSON record `{type, map, params, samples, values, verdict, seed,
/// tool_version}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "type")]
    pub kind: CertificateKind,
    pub map: String,
    pub params: Map<String, Value>,
    pub samples: usize,
    pub values: Map<String, Value>,
    pub verdict: Verdict,
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl Certificate {
    pub fn new(kind: CertificateKind, map: &MapSpec, verdict: Verdict) -> Self {
        Certificate {
            kind,
            map: map.to_string(),
            params: Map::new(),
            samples: 0,
            values: Map::new(),
            verdict,
            seed: None,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn value(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.values.insert(key.to_string(), value.into());
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate is always serializable")
    }
}

/// Non-finite floats become `null` in JSON; keep them readable instead.
pub(crate) fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(x.to_string())
    }
}
