//! Writing a target point as the barycenter of points in a skeleton.
//!
//! For a polytope `P` of dimension `n·d` every `p ∈ P` is the average of `n`
//! points lying in `d`-faces of `P`. The solver finds such points by
//! enumerating face tuples and solving one exact LP per tuple, so every
//! answer is a certificate that can be re-checked by substitution.

pub mod certificate;
mod solver;
mod tuple;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numeric::{RVector, Rational};
use crate::polytope::{Face, HPolytope};

pub use certificate::{check_certificate, Certificate, CertificateCheck, FaceRecord};
pub use solver::{decompose, decompose_prime, factorize, is_prime, mixed_decompose, mixed_pattern};
pub use tuple::{tuple_system, weighted_tuple_feasible, TupleOutcome};

/// Target, weighted points and the face holding each point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub target: RVector,
    pub points: Vec<RVector>,
    pub faces: Vec<Face>,
    pub weights: Vec<Rational>,
    pub skeleton_dims: Vec<usize>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_certificate(&self) -> Certificate {
        Certificate::from_decomposition(self)
    }
}

/// Order in which candidate face tuples are tried.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOrder {
    /// Closest average of face centroids to the target first; ties canonical.
    #[default]
    Heuristic,
    /// Lexicographic in the canonical face order.
    Canonical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub order: SearchOrder,
    /// Enumerate unordered multisets of faces instead of ordered tuples.
    pub symmetry_pruning: bool,
    pub parallel: bool,
    /// Maximum number of tuple LPs per prime stage.
    pub budget: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            order: SearchOrder::Heuristic,
            symmetry_pruning: true,
            parallel: true,
            budget: None,
        }
    }
}

impl SolverConfig {
    pub fn sequential() -> Self {
        Self {
            parallel: false,
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.budget == Some(0) {
            return Err(crate::Error::input("tuple budget must be at least 1"));
        }
        Ok(())
    }
}

/// Result of [`tuple_feasible`].
#[derive(Clone, Debug)]
pub enum TupleResult {
    Feasible(Decomposition),
    Infeasible(crate::numeric::Farkas),
}

/// Can points `x_i ∈ faces[i]` have barycenter `target`?
///
/// One LP on the stacked system `Σ x_i = n·target`; the faces need not share
/// a dimension and `dim P` need not be `n·d`.
pub fn tuple_feasible(p: &HPolytope, faces: &[&Face], target: &[Rational]) -> Result<TupleResult> {
    let n = faces.len();
    let outcome = weighted_tuple_feasible(
        p,
        faces,
        &tuple::plain_weights(n),
        &tuple::scaled_target(target, n),
    )?;
    Ok(match outcome {
        TupleOutcome::Feasible(points) => TupleResult::Feasible(Decomposition {
            target: target.to_vec(),
            points,
            faces: faces.iter().map(|&f| f.clone()).collect(),
            weights: vec![Rational::new(1.into(), n.into()); n],
            skeleton_dims: faces.iter().map(|f| f.dim()).collect(),
        }),
        TupleOutcome::Infeasible(f) => TupleResult::Infeasible(f),
    })
}
