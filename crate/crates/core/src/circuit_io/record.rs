use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numeric::serde_complex_seq;

use super::Sign;

/// Version of the JSON result schema (`schema/result.schema.json`).
pub const FORMAT_VERSION: u32 = 1;

/// One `project` or `measure` item as seen by an engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    /// Index of the item in the source circuit.
    pub item: usize,
    /// 1-based mode.
    pub mode: usize,
    pub outcome: Sign,
    /// Conditional probability of `+` given everything before this item.
    pub p_plus: f64,
    pub p_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub outcomes: String,
    pub branch_weight: f64,
}

/// Engine output shared by the dense and Gaussian engines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub format_version: u32,
    pub engine: String,
    pub modes: usize,
    /// Modes actually simulated, including lift and gadget ancillas.
    pub total_modes: usize,
    pub outcomes: String,
    /// Squared norm of the unnormalized post-selected state.
    pub branch_weight: f64,
    pub log_branch_weight: f64,
    pub final_norm: f64,
    pub measurements: Vec<MeasurementRecord>,
    /// Scalar factored out of each non-unitary source gate.
    #[serde(with = "serde_complex_seq")]
    pub scale_ledger: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleRecord>>,
    pub timing_ms: f64,
}
