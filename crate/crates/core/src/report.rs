//! Machine-readable result records. All reports serialize to JSON with
//! sorted keys (see [`to_canonical_json`]) and carry the schema tag
//! `negafib/1`; none of them embeds timestamps, so identical inputs yield
//! byte-identical output.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use serde_json::Value;

/// Schema tag carried by every emitted JSON document.
pub const SCHEMA: &str = "negafib/1";

/// Serialize a BigInt as a decimal string (JSON numbers cannot hold it).
pub fn serialize_bigint<S: Serializer>(
    x: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One recorded counterexample or anomaly inside a report.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub message: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, Value>,
}

impl Violation {
    pub fn new(message: impl Into<String>) -> Self {
        Violation {
            message: message.into(),
            data: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.data.insert(key.to_string(), value.into());
        self
    }
}

/// Pass/fail record of an identity or bound sweep.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub suite: String,
    pub params: BTreeMap<String, Value>,
    pub cases: u64,
    pub status: Status,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, Value>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            schema: SCHEMA,
            kind: "verification",
            suite: suite.into(),
            params: BTreeMap::new(),
            cases: 0,
            status: Status::Pass,
            violations: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn metric(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.metrics.insert(key.to_string(), value.into());
        self
    }

    /// Record a violation (up to a cap, to keep reports readable) and flip
    /// the status to fail.
    pub fn violation(&mut self, v: Violation) {
        const CAP: usize = 32;
        self.status = Status::Fail;
        if self.violations.len() < CAP {
            self.violations.push(v);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Zero-set record for a single order k.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub k: u32,
    pub window_end: u64,
    pub zeros: Vec<u64>,
    pub expected: Vec<u64>,
    pub expected_intervals: Vec<(u64, u64)>,
    pub exceptional: Vec<u64>,
    pub multiplicity: u64,
    pub status: Status,
    /// For even k: the sign pattern was verified on [k^2-k-1, this index].
    pub parity_checked_upto: Option<u64>,
    /// Whether the absence of zeros beyond the window is certified (even k:
    /// by the strict sign alternation; odd k: by the 2-adic lower bound
    /// exceeding the window).
    pub tail_certified: bool,
    pub violations: Vec<Violation>,
}

/// Natural-log bounds on the linear form at (k, n).
#[derive(Debug, Clone, Serialize)]
pub struct LambdaBounds {
    pub k: u32,
    pub n_log10: f64,
    /// ln of the linear-forms lower bound: -5e13 * k^7 * ln(n+1) * (ln k)^2.
    pub lower_log: f64,
    /// ln of the geometric upper bound from the sharper inequality.
    pub upper_log: f64,
    /// (n+1) * ln |alpha_{k-2} / alpha_k|.
    pub ratio_log: f64,
}

/// One step of the absolute-bound chain.
#[derive(Debug, Clone, Serialize)]
pub struct CascadeStep {
    pub step: u32,
    pub description: String,
    /// Sharp threshold solved from the step's inequality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_solved: Option<u32>,
    /// Conservative round-number threshold the chain certifies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_bound: Option<u32>,
    /// Largest per-k n-threshold solved in this step (decimal string).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_solved: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_solved_log2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_solved_at_k: Option<u32>,
    /// Round-number n ceiling the chain certifies (decimal string).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_bound: Option<String>,
    /// True when the solved values validate the conservative bounds.
    pub bound_valid: bool,
}

/// Full record of the three-step bound chain that rules out zeros beyond
/// the proven set for odd k > 500.
#[derive(Debug, Clone, Serialize)]
pub struct CascadeReport {
    pub schema: &'static str,
    pub kind: &'static str,
    pub precision_bits: u32,
    pub steps: Vec<CascadeStep>,
    /// The chain's end state: the lower bound 2^((k-1)/2) exceeds every
    /// surviving n-threshold, so no odd k > 500 admits an extra zero.
    pub contradiction: bool,
}

/// JSON with sorted keys; identical values serialize to identical bytes.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report serialization cannot fail");
    serde_json::to_string_pretty(&v).expect("value printing cannot fail")
}
