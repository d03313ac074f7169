use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BidiscPoint, MultiIndex};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    LocalDominance,
    KthMaxModulus,
    PurePartials,
    ModulusRatio,
    Hayman,
    TailDominance,
    MainPolynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// A witness or sampling value. Non-finite reals serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Bool(bool),
    Int(i64),
    Real(f64),
    Index(MultiIndex),
    Text(String),
}

impl From<bool> for WitnessValue {
    fn from(v: bool) -> Self {
        WitnessValue::Bool(v)
    }
}

impl From<usize> for WitnessValue {
    fn from(v: usize) -> Self {
        WitnessValue::Int(v as i64)
    }
}

impl From<i64> for WitnessValue {
    fn from(v: i64) -> Self {
        WitnessValue::Int(v)
    }
}

impl From<f64> for WitnessValue {
    fn from(v: f64) -> Self {
        WitnessValue::Real(v)
    }
}

impl From<f32> for WitnessValue {
    fn from(v: f32) -> Self {
        WitnessValue::Real(v as f64)
    }
}

impl From<MultiIndex> for WitnessValue {
    fn from(v: MultiIndex) -> Self {
        WitnessValue::Index(v)
    }
}

impl From<&str> for WitnessValue {
    fn from(v: &str) -> Self {
        WitnessValue::Text(v.to_string())
    }
}

impl From<String> for WitnessValue {
    fn from(v: String) -> Self {
        WitnessValue::Text(v)
    }
}

impl WitnessValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            WitnessValue::Real(x) => Some(*x),
            WitnessValue::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            WitnessValue::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_index(&self) -> Option<MultiIndex> {
        match self {
            WitnessValue::Index(k) => Some(*k),
            _ => None,
        }
    }
}

/// A bidisc point at the report boundary: `[re, im]` per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportPoint {
    pub z1: [f64; 2],
    pub z2: [f64; 2],
}

impl<T: Scalar> From<&BidiscPoint<T>> for ReportPoint {
    fn from(p: &BidiscPoint<T>) -> Self {
        ReportPoint {
            z1: [p.z1().re.as_f64(), p.z1().im.as_f64()],
            z2: [p.z2().re.as_f64(), p.z2().im.as_f64()],
        }
    }
}

/// Outcome of one criterion check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub theorem_id: TheoremId,
    pub verdict: Verdict,
    pub witness: BTreeMap<String, WitnessValue>,
    pub sampling: BTreeMap<String, WitnessValue>,
    pub worst_point: Option<ReportPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CriterionReport {
    pub fn new(theorem_id: TheoremId, verdict: Verdict) -> Self {
        Self {
            theorem_id,
            verdict,
            witness: BTreeMap::new(),
            sampling: BTreeMap::new(),
            worst_point: None,
            reason: None,
        }
    }

    pub fn witness(mut self, key: &str, value: impl Into<WitnessValue>) -> Self {
        self.witness.insert(key.to_string(), value.into());
        self
    }

    pub fn sampling(mut self, key: &str, value: impl Into<WitnessValue>) -> Self {
        self.sampling.insert(key.to_string(), value.into());
        self
    }

    pub fn at<T: Scalar>(mut self, p: &BidiscPoint<T>) -> Self {
        self.worst_point = Some(p.into());
        self
    }

    pub fn because(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&WitnessValue> {
        self.witness.get(key)
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}
