//! Machine-readable command output.
//!
//! A report is a JSON object with a fixed key order. Everything except
//! `timings` is a pure function of the command line and the instance, so two
//! runs can be compared by dropping that one field.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use stochcover_core::ProblemInstance;

use crate::document::serialize_instance;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    /// SHA-256 of the canonical serialization, or `None` for commands
    /// without an input instance.
    pub instance_sha256: Option<String>,
    pub result: ResultBlock,
    pub trace: Vec<Probe>,
    pub timings: Timings,
}

/// One radius evaluated during a search, with the probability that decided
/// it (success for fixed centers, failure for the adaptive problem).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub radius: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultBlock {
    Nonadaptive {
        k: usize,
        rho: Option<f64>,
        radius: f64,
        centers: Vec<usize>,
        success_probability: f64,
    },
    Adaptive {
        k: usize,
        rho: Option<f64>,
        radius: f64,
        failure_probability: f64,
    },
    Setcover {
        rho: f64,
        chosen: Vec<usize>,
        cost: f64,
        uncovered: Vec<usize>,
        violation: f64,
        oracle: Option<SetcoverOracle>,
    },
    Verify {
        mode: String,
        k: usize,
        rows: Vec<VerifyRow>,
        max_abs_diff: f64,
        monte_carlo: Option<MonteCarloRow>,
    },
    Hardness {
        n: usize,
        m: usize,
        independent_sets: u64,
        n_m: u64,
        f_m: f64,
        p: f64,
        lower: f64,
        upper: f64,
        holds: bool,
    },
    Bench {
        suite: String,
        cells: Vec<BenchCell>,
        growth_exponent: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetcoverOracle {
    pub optimum_cost: f64,
    pub optimum_sets: Vec<usize>,
    pub ratio: f64,
    pub ratio_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub radius: f64,
    pub dp: f64,
    pub oracle: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloRow {
    pub radius: f64,
    pub samples: u64,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub exact: f64,
    pub within_3_se: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub n: usize,
    pub k: usize,
    pub seconds: f64,
}

pub fn fingerprint(instance: &ProblemInstance) -> String {
    hex::encode(Sha256::digest(serialize_instance(instance).as_bytes()))
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports always serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The report with timings zeroed, for run-to-run comparison.
    pub fn without_timings(&self) -> Self {
        SolveReport {
            timings: Timings::default(),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_keeps_key_order() {
        let report = SolveReport {
            schema_version: SCHEMA_VERSION,
            command: vec!["solve-kcenter".into()],
            instance_sha256: Some("ab".into()),
            result: ResultBlock::Adaptive {
                k: 1,
                rho: Some(0.5),
                radius: 0.0,
                failure_probability: 0.5,
            },
            trace: vec![Probe { radius: 0.0, probability: 0.5 }],
            timings: Timings { total_ms: 1.5 },
        };
        let text = report.to_json();
        assert_eq!(SolveReport::from_json(&text).unwrap(), report);
        let keys = ["schema_version", "command", "instance_sha256", "result", "trace", "timings"];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(report.without_timings().timings.total_ms, 0.0);
    }
}
