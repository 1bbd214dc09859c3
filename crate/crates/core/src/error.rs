use thiserror::Error;

use crate::numeric::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent caller input.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("polyhedron is empty")]
    Empty,

    /// The input spans only an affine subspace; `equations` describe that hull.
    #[error(
        "not full-dimensional: affine hull has dimension {affine_dim} in ambient dimension {ambient_dim}"
    )]
    NotFullDimensional {
        affine_dim: usize,
        ambient_dim: usize,
        equations: Vec<(Vec<Rational>, Rational)>,
    },

    /// A point violates facet row `row`.
    #[error("point lies outside the polytope (violates row {row})")]
    Outside { row: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Perturbed data left the bounded full-dimensional regime; retry smaller.
    #[error("perturbation magnitude {0} too large")]
    PerturbationTooLarge(Rational),

    #[error("intersection is not generic; perturb first")]
    NonGeneric,

    #[error("tuple budget of {0} evaluations exhausted")]
    BudgetExhausted(usize),

    /// An internal invariant was violated. Theorem-guaranteed searches
    /// coming up empty land here.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
