//! Report documents: JSON trees with fixed key names, and the `t,beta,err`
//! CSV table. Serialization is deterministic — identical inputs produce
//! byte-identical output — and every document carries the tool version and
//! the hash of the config that produced it.

use heat_content::asymptotics::{CoefficientCheck, HalfPowerFit};
use heat_content::coefficients::eval::CoefficientSet;
use heat_content::harness::Verdict;
use heat_content::solver::Solution;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex digest of the raw config bytes.
pub fn config_hash(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
pub struct Report {
    pub config_hash: Option<String>,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theory: Option<TheoryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Vec<VerdictRow>>,
}

impl Report {
    pub fn new(config_hash: Option<String>) -> Self {
        Report {
            config_hash,
            version: VERSION,
            theory: None,
            samples: None,
            fit: None,
            verdicts: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }
}

#[derive(Serialize)]
pub struct TheoryReport {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    /// Per-term breakdown, keyed by the evaluator's term names.
    pub terms: BTreeMap<String, f64>,
}

impl TheoryReport {
    pub fn from_set(set: &CoefficientSet<f64>) -> Self {
        TheoryReport {
            beta0: set.beta[0],
            beta1: set.beta[1],
            beta2: set.beta[2],
            beta3: set.beta[3],
            terms: set
                .terms
                .iter()
                .map(|(&k, &v)| (k.to_string(), v))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct SampleRow {
    pub t: f64,
    pub beta: f64,
    pub err: f64,
}

#[derive(Serialize)]
pub struct FitReport {
    pub beta0: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub beta3: Option<f64>,
    pub beta4: Option<f64>,
    /// Jackknife spread per fitted term.
    pub sensitivity: Vec<f64>,
}

impl FitReport {
    pub fn from_fit(fit: &HalfPowerFit<f64>) -> Self {
        let c = |k: usize| fit.coefficients.get(k).copied();
        FitReport {
            beta0: c(0),
            beta1: c(1),
            beta2: c(2),
            beta3: c(3),
            beta4: c(4),
            sensitivity: fit.sensitivity.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct VerdictRow {
    pub name: String,
    pub theory: f64,
    pub fitted: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerdictRow {
    pub fn from_check(check: &CoefficientCheck<f64>, tolerance: f64) -> Self {
        VerdictRow {
            name: format!("beta{}", check.order),
            theory: check.theory,
            fitted: check.fitted,
            error: check.error,
            tolerance,
            pass: check.pass,
        }
    }
}

pub fn sample_rows(sol: &Solution<f64>) -> Vec<SampleRow> {
    sol.samples
        .iter()
        .map(|s| SampleRow {
            t: s.t,
            beta: s.beta,
            err: s.err,
        })
        .collect()
}

/// Fixed-column CSV: `t,beta,err`.
pub fn to_csv(sol: &Solution<f64>) -> String {
    let mut out = String::from("t,beta,err\n");
    for s in &sol.samples {
        out.push_str(&format!("{},{},{}\n", s.t, s.beta, s.err));
    }
    out
}

/// Relation-suite document.
#[derive(Serialize)]
pub struct RelationsDoc {
    pub config_hash: Option<String>,
    pub version: &'static str,
    pub total: usize,
    pub all_hold: bool,
    pub relations: Vec<RelationRow>,
}

#[derive(Serialize)]
pub struct RelationRow {
    pub name: String,
    pub holds: bool,
}

/// Harness verdict document.
#[derive(Serialize)]
pub struct HarnessDoc {
    pub config_hash: Option<String>,
    pub version: &'static str,
    pub seed: u64,
    pub verdicts: Vec<Verdict>,
}

impl HarnessDoc {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("harness serialization");
        out.push('\n');
        out
    }
}

impl RelationsDoc {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("relations serialization");
        out.push('\n');
        out
    }
}
