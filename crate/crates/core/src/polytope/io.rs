//! JSON polytope files:
//! `{"ambient_dim": D, "hrep": {"A": [[..]], "b": [..]}, "vrep": {"vertices": [[..]]}}`
//! with every number a rational string. At least one of `hrep`/`vrep` is required.

use serde::{Deserialize, Serialize};

use super::{HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::numeric::{format_vector, parse_rational, RVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hrep: Option<HRepFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vrep: Option<VRepFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HRepFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VRepFile {
    pub vertices: Vec<Vec<String>>,
}

pub(crate) fn parse_rows(rows: &[Vec<String>]) -> Result<Vec<RVector>> {
    rows.iter()
        .map(|r| r.iter().map(|s| parse_rational(s)).collect())
        .collect()
}

impl PolytopeFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polytope file serializes")
    }

    /// Builds the polytope, checking that both descriptions agree when both are given.
    pub fn to_polytope(&self) -> Result<HPolytope> {
        let d = self.ambient_dim;
        let from_h = match &self.hrep {
            Some(h) => {
                let b = h.b.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
                Some(HPolytope::new(d, parse_rows(&h.a)?, b)?)
            }
            None => None,
        };
        let from_v = match &self.vrep {
            Some(v) => Some(VPolytope::new(d, parse_rows(&v.vertices)?)?),
            None => None,
        };
        match (from_h, from_v) {
            (Some(h), Some(v)) => {
                let mut listed = v.vertices().to_vec();
                listed.sort();
                if listed != h.vertices() {
                    return Err(Error::input("hrep and vrep describe different polytopes"));
                }
                Ok(h)
            }
            (Some(h), None) => Ok(h),
            (None, Some(v)) => v.to_h(),
            (None, None) => Err(Error::input("polytope file needs hrep or vrep")),
        }
    }

    pub fn from_polytope(p: &HPolytope, with_vrep: bool) -> Self {
        Self {
            ambient_dim: p.dim(),
            hrep: Some(HRepFile {
                a: p.a().row_vectors().iter().map(|r| format_vector(r)).collect(),
                b: format_vector(p.b()),
            }),
            vrep: with_vrep.then(|| VRepFile {
                vertices: p.vertices().iter().map(|v| format_vector(v)).collect(),
            }),
        }
    }
}
