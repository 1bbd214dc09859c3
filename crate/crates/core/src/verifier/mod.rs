//! Theorem-level checks: the Minkowski-sum form of the decomposition
//! theorem, and searches for points that no admissible face tuple reaches.
//!
//! A counterexample is only reported together with one exact Farkas
//! certificate per admissible face tuple, so it can be re-checked without
//! trusting the search.

mod falsify;
mod minkowski;
mod refute;
mod sample;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::decomposition::Certificate;
use crate::polytope::io::PolytopeFile;

pub use falsify::{falsify_mixed_skeleton_simplex, falsify_weighted_prism, GridSearch};
pub use minkowski::verify_minkowski;
pub use refute::{admissible_tuples, check_counterexample, refute_point, Refutation};
pub use sample::{dyadic_combination, Sampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Minkowski,
    WeightedPrism,
    MixedSkeletonSimplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every sample was confirmed.
    Verified,
    /// A point was found and refuted for every admissible tuple.
    Counterexample,
    /// The search budget ran out without a refuted point.
    NoCounterexampleFound,
    /// Some sample could not be confirmed.
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionOutcome {
    pub direction: String,
    pub attempted: usize,
    pub succeeded: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleFailure {
    pub point: Vec<String>,
    pub error: String,
}

/// Farkas multipliers refuting one face tuple; they refer to the system
/// built by [`crate::decomposition::tuple_system`] for these faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleRefutation {
    pub faces: Vec<Vec<usize>>,
    pub ineq: Vec<String>,
    pub eq: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub point: Vec<String>,
    /// Number of admissible tuples; equals `certificates.len()`.
    pub tuples: usize,
    pub certificates: Vec<TupleRefutation>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: CheckKind,
    pub instance: String,
    pub polytope: PolytopeFile,
    pub weights: Vec<String>,
    pub skeleton_dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub directions: Vec<DirectionOutcome>,
    pub samples_attempted: usize,
    pub samples_succeeded: usize,
    pub verdict: Verdict,
    pub witnesses: Vec<Certificate>,
    pub failures: Vec<SampleFailure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Wall time; not serialized so reports are byte-reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
