//! Verdicts shared by the loop, subspace and surface-sweep tests.

use serde::{Deserialize, Serialize};

use crate::homotopy::Parity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    DegeneracyCertified,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    SignReversal,
    NontrivialLoop,
    NonzeroWinding,
    NonzeroStoneK,
    None,
}

/// Topological quantities computed along the way; absent fields did not apply.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Invariants {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure_kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure_signs: Option<Vec<i8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_list: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stone_k: Option<i64>,
}

/// Numerical health of a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinements: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap_quality: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_overlap: Option<f64>,
    /// `min_overlap − (1 − 1/p)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_int_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stone_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub verdict: Verdict,
    pub reason: Reason,
    #[serde(default)]
    pub invariants: Invariants,
    #[serde(default)]
    pub diagnostics: Diagnostics,
    /// Where the projection condition was verified, for subspace runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_condition_checked: Option<String>,
}

impl TestReport {
    pub fn new(reason: Reason) -> Self {
        let verdict = if reason == Reason::None {
            Verdict::Inconclusive
        } else {
            Verdict::DegeneracyCertified
        };
        Self {
            verdict,
            reason,
            invariants: Invariants::default(),
            diagnostics: Diagnostics::default(),
            surface_condition_checked: None,
        }
    }

    pub fn certified(&self) -> bool {
        self.verdict == Verdict::DegeneracyCertified
    }
}
