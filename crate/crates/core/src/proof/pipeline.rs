use num_traits::{One, Signed};
use serde::Serialize;

use super::{build_q, descend_to_vertex, find_phi_zero, perturb, Chain, Descent};
use crate::decomposition::{is_prime, tuple_feasible, Decomposition, FaceRecord, TupleResult};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, format_vector, vec_ops, Rational};
use crate::polytope::{Face, FaceLattice, HPolytope};

/// Perturbation schedule for [`run_proof`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofConfig {
    pub seed: u64,
    pub initial_magnitude: Rational,
    /// Attempts before giving up; every failed attempt halves the magnitude.
    pub max_retries: usize,
}

impl Default for ProofConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            initial_magnitude: Rational::new(1.into(), 1024.into()),
            max_retries: 20,
        }
    }
}

/// One line of the proof trace. Facet indices refer to the input polytope;
/// face ids refer to the face lattice of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum TraceRecord {
    Normalize {
        target: Vec<String>,
        boundary: bool,
    },
    InteriorTarget {
        attempt: usize,
        delta: String,
        point: Vec<String>,
    },
    Perturb {
        attempt: usize,
        seed: u64,
        magnitude: String,
        accepted: bool,
    },
    Genericity {
        attempt: usize,
        generic: bool,
        violations: usize,
        q_faces: usize,
        q_vertices: usize,
    },
    Chain {
        attempt: usize,
        faces: Vec<usize>,
        dims: Vec<usize>,
        t: Vec<String>,
    },
    Descent {
        attempt: usize,
        vertex: usize,
        steps: Vec<usize>,
        j: usize,
        r: String,
        label_dims: Vec<usize>,
    },
    Recertify {
        attempt: usize,
        tight_facets: Vec<Vec<usize>>,
        dims: Vec<Option<usize>>,
        feasible: bool,
    },
    Result {
        weights: Vec<String>,
        points: Vec<Vec<String>>,
        faces: Vec<FaceRecord>,
    },
}

/// Output of [`run_proof`]: the certified decomposition and how it was reached.
#[derive(Clone, Debug)]
pub struct ProofRun {
    pub decomposition: Decomposition,
    pub chain: Chain,
    pub descent: Descent,
    pub attempts: usize,
    pub trace: Vec<TraceRecord>,
}

impl ProofRun {
    /// The trace as JSON lines.
    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|r| serde_json::to_string(r).expect("trace records serialize") + "\n")
            .collect()
    }
}

/// [`run_proof`] with the default schedule and the given seed.
pub fn decompose_via_proof(
    p: &HPolytope,
    target: &[Rational],
    n: usize,
    d: usize,
    seed: u64,
) -> Result<Decomposition> {
    let cfg = ProofConfig {
        seed,
        ..ProofConfig::default()
    };
    Ok(run_proof(p, target, n, d, &cfg)?.decomposition)
}

/// Decomposes `target` by running the proof.
///
/// Each attempt moves the target to the origin, perturbs the rows, builds
/// `Q`, finds a zero of `φ`, descends to a vertex and maps its label back to
/// faces of the unperturbed `P`. That face tuple is then re-certified on `P`
/// itself with an exact LP, which stands in for the limit `ε → 0`. A failed
/// attempt halves the magnitude; a non-generic draw also moves to the next
/// seed. Boundary targets are approached from the interior along
/// `p + δ(c − p)` with `δ` halving alongside.
pub fn run_proof(
    p: &HPolytope,
    target: &[Rational],
    n: usize,
    d: usize,
    cfg: &ProofConfig,
) -> Result<ProofRun> {
    if !is_prime(n) {
        return Err(Error::input(format!(
            "the proof pipeline needs prime n, got {n}; use decompose for composite n"
        )));
    }
    if p.dim() != n * d {
        return Err(Error::DimensionMismatch(format!(
            "polytope dimension {} is not {n}·{d}",
            p.dim()
        )));
    }
    if cfg.max_retries == 0 || !cfg.initial_magnitude.is_positive() {
        return Err(Error::input("need at least one attempt and a positive magnitude"));
    }
    let boundary = !p.tight_rows(target)?.is_empty();
    let mut trace = vec![TraceRecord::Normalize {
        target: format_vector(target),
        boundary,
    }];
    let center = p.vertex_centroid();
    let half = Rational::new(1.into(), 2.into());
    let mut magnitude = cfg.initial_magnitude.clone();
    let mut delta = half.clone();
    let mut seed = cfg.seed;
    let mut lattice: Option<FaceLattice> = None;

    for attempt in 0..cfg.max_retries {
        if attempt > 0 {
            magnitude *= &half;
            delta *= &half;
        }
        let inner = if boundary {
            let step = vec_ops::scale(&vec_ops::sub(&center, target), &delta);
            let point = vec_ops::add(target, &step);
            trace.push(TraceRecord::InteriorTarget {
                attempt,
                delta: format_rational(&delta),
                point: format_vector(&point),
            });
            point
        } else {
            target.to_vec()
        };

        let unit = p.normalize_to_unit_form(&inner)?.polytope;
        let perturbed = match perturb(&unit, seed, &magnitude) {
            Ok(pe) => pe,
            Err(Error::PerturbationTooLarge(_)) => {
                trace.push(TraceRecord::Perturb {
                    attempt,
                    seed,
                    magnitude: format_rational(&magnitude),
                    accepted: false,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        trace.push(TraceRecord::Perturb {
            attempt,
            seed,
            magnitude: format_rational(&magnitude),
            accepted: true,
        });

        let q = build_q(&perturbed, n)?;
        trace.push(TraceRecord::Genericity {
            attempt,
            generic: q.is_generic(),
            violations: q.violations.len(),
            q_faces: q.lattice().faces().len(),
            q_vertices: q.polytope().vertices().len(),
        });
        if !q.is_generic() {
            seed = seed.wrapping_add(1);
            continue;
        }

        let (chain, _) = find_phi_zero(&q)?;
        trace.push(TraceRecord::Chain {
            attempt,
            faces: chain.faces.iter().map(|f| f.0).collect(),
            dims: chain.faces.iter().map(|&f| q.lattice().face(f).dim()).collect(),
            t: chain.t.iter().map(format_rational).collect(),
        });
        let descent = descend_to_vertex(&q, &chain)?;
        trace.push(TraceRecord::Descent {
            attempt,
            vertex: descent.vertex.0,
            steps: descent.steps.clone(),
            j: descent.j,
            r: format_rational(&descent.r),
            label_dims: q.label_dims(descent.vertex),
        });

        // Facets of the perturbed polytope name rows of the unit form, which
        // are the facets of `p` in the same order.
        let tight: Vec<Vec<usize>> = q
            .label(descent.vertex)
            .iter()
            .map(|e| {
                let mut rows: Vec<usize> = e
                    .tight_facets()
                    .iter()
                    .map(|&k| perturbed.source_rows()[k])
                    .collect();
                rows.sort_unstable();
                rows
            })
            .collect();
        let faces: Vec<Option<Face>> = tight.iter().map(|t| p.face_from_tight(t)).collect();
        let dims: Vec<Option<usize>> = faces.iter().map(|f| f.as_ref().map(Face::dim)).collect();
        let usable: Option<Vec<&Face>> = faces
            .iter()
            .map(|f| f.as_ref().filter(|f| f.dim() <= d))
            .collect();
        let result = match &usable {
            Some(fs) => Some(tuple_feasible(p, fs, target)?),
            None => None,
        };
        let feasible = matches!(result, Some(TupleResult::Feasible(_)));
        trace.push(TraceRecord::Recertify {
            attempt,
            tight_facets: tight,
            dims,
            feasible,
        });
        let Some(TupleResult::Feasible(found)) = result else {
            continue;
        };

        let lattice = lattice.get_or_insert_with(|| FaceLattice::new(p));
        let faces = found
            .faces
            .iter()
            .map(|f| {
                lattice
                    .faces_of_dim(d)
                    .iter()
                    .find(|g| f.is_subface_of(g))
                    .cloned()
                    .ok_or_else(|| Error::internal("face not contained in any d-face"))
            })
            .collect::<Result<Vec<_>>>()?;
        let decomposition = Decomposition {
            target: target.to_vec(),
            points: found.points,
            faces,
            weights: vec![Rational::one() / Rational::from_integer(n.into()); n],
            skeleton_dims: vec![d; n],
        };
        let cert = decomposition.to_certificate();
        trace.push(TraceRecord::Result {
            weights: cert.weights,
            points: cert.points,
            faces: cert.faces,
        });
        return Ok(ProofRun {
            decomposition,
            chain,
            descent,
            attempts: attempt + 1,
            trace,
        });
    }
    Err(Error::internal(format!(
        "no certified face tuple after {} attempts",
        cfg.max_retries
    )))
}
