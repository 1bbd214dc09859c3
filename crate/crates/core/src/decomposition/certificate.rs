//! Certificate files and their independent validator.
//!
//! The validator deliberately ignores how a certificate was produced. It
//! re-derives everything from the polytope rows with exact arithmetic:
//! the weighted barycenter identity, membership of each point in its face,
//! and the dimension of each face from the rank of its tight rows.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Decomposition;
use crate::error::{Error, Result};
use crate::numeric::{format_rational, format_vector, parse_rational, vec_ops, RVector, Rational};
use crate::polytope::HPolytope;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub tight_facets: Vec<usize>,
    pub dim: usize,
}

/// `{"target", "weights", "points", "faces", "exact"}`; all numbers are rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub target: Vec<String>,
    pub weights: Vec<String>,
    pub points: Vec<Vec<String>>,
    pub faces: Vec<FaceRecord>,
    /// Declared skeleton dimension per point; defaults to `dim P / n` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton_dims: Option<Vec<usize>>,
    pub exact: bool,
}

impl Certificate {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        Self {
            target: format_vector(&d.target),
            weights: d.weights.iter().map(format_rational).collect(),
            points: d.points.iter().map(|p| format_vector(p)).collect(),
            faces: d
                .faces
                .iter()
                .map(|f| FaceRecord {
                    tight_facets: f.tight_facets().to_vec(),
                    dim: f.dim(),
                })
                .collect(),
            skeleton_dims: Some(d.skeleton_dims.clone()),
            exact: true,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Summary of a successful validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub points: usize,
    pub face_dims: Vec<usize>,
    pub exact: bool,
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Input(format!("certificate rejected: {}", msg.into()))
}

fn parse_vec(v: &[String]) -> Result<RVector> {
    v.iter().map(|s| parse_rational(s)).collect()
}

/// Re-checks `cert` against `p` from scratch.
pub fn check_certificate(p: &HPolytope, cert: &Certificate) -> Result<CertificateCheck> {
    if !cert.exact {
        return Err(reject("certificate is not marked exact"));
    }
    let n = cert.points.len();
    if n == 0 || cert.weights.len() != n || cert.faces.len() != n {
        return Err(reject("points, weights and faces must have equal nonzero length"));
    }
    let dim = p.dim();
    let target = parse_vec(&cert.target)?;
    if target.len() != dim {
        return Err(reject("target has the wrong dimension"));
    }
    if !p.contains(&target) {
        return Err(reject("target is outside the polytope"));
    }
    let weights: Vec<Rational> = cert
        .weights
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_>>()?;
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(reject("weights must be positive"));
    }
    if weights.iter().sum::<Rational>() != Rational::one() {
        return Err(reject("weights do not sum to one"));
    }
    let skeleton_dims = match &cert.skeleton_dims {
        Some(s) if s.len() == n => s.clone(),
        Some(_) => return Err(reject("skeleton_dims has the wrong length")),
        None if dim.is_multiple_of(n) => vec![dim / n; n],
        None => return Err(reject("no skeleton dimensions and dim P not divisible by n")),
    };

    let mut barycenter = vec![Rational::zero(); dim];
    let mut face_dims = Vec::with_capacity(n);
    for i in 0..n {
        let x = parse_vec(&cert.points[i])?;
        if x.len() != dim {
            return Err(reject(format!("point {i} has the wrong dimension")));
        }
        let face = &cert.faces[i];
        if face.tight_facets.iter().any(|&k| k >= p.num_facets()) {
            return Err(reject(format!("face {i} names a nonexistent facet")));
        }
        for k in 0..p.num_facets() {
            let lhs = vec_ops::dot(p.a().row(k), &x);
            let rhs = &p.b()[k];
            let on_face = face.tight_facets.contains(&k);
            if (on_face && lhs != *rhs) || lhs > *rhs {
                return Err(reject(format!("point {i} is not in its face (row {k})")));
            }
        }
        // The set where these rows are tight lies in an affine space of this
        // dimension, so the point sits in a face of at most this dimension.
        let face_dim = dim - p.row_rank(&face.tight_facets);
        if face_dim != face.dim {
            return Err(reject(format!(
                "face {i} has dimension {face_dim}, recorded {}",
                face.dim
            )));
        }
        if face_dim > skeleton_dims[i] {
            return Err(reject(format!(
                "face {i} has dimension {face_dim} above skeleton dimension {}",
                skeleton_dims[i]
            )));
        }
        for (b, xj) in barycenter.iter_mut().zip(&x) {
            *b += &weights[i] * xj;
        }
        face_dims.push(face_dim);
    }
    if barycenter != target {
        return Err(reject("weighted barycenter differs from the target"));
    }
    Ok(CertificateCheck {
        points: n,
        face_dims,
        exact: true,
    })
}
