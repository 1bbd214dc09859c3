use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::{CheckKind, DirectionOutcome, SampleFailure, Sampler, Verdict, VerificationReport};
use crate::decomposition::{check_certificate, decompose, SolverConfig};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, format_vector, vec_ops, RVector, Rational};
use crate::polytope::io::PolytopeFile;
use crate::polytope::{FaceLattice, HPolytope};

use super::dyadic_combination;

/// Checks `nP = S + ⋯ + S` (n summands, `S` the `d`-skeleton) on samples.
///
/// `⊆`: sums of sampled skeleton points must lie in `nP`; by convexity this
/// cannot fail, so a failure is reported as an internal error. `⊇`: sampled
/// points `q ∈ nP` must decompose as `q/n` into `n` skeleton points, each
/// confirmed by the certificate validator. Vertices come first in both
/// directions.
pub fn verify_minkowski(
    p: &HPolytope,
    n: usize,
    d: usize,
    sampler: &Sampler,
    cfg: &SolverConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    if n == 0 || p.dim() != n * d {
        return Err(Error::DimensionMismatch(format!(
            "polytope dimension {} is not {n}·{d}",
            p.dim()
        )));
    }
    let lattice = FaceLattice::new(p);
    let skeleton = lattice.faces_of_dim(d);
    let vertices: Vec<&RVector> = p.vertices().iter().collect();
    let leading = vertices.len().min(sampler.count / 10);

    let mut rng = sampler.stream(1);
    for s in 0..sampler.count {
        let summands: Vec<RVector> = if let Some(v) = vertices.get(s).filter(|_| s < leading) {
            vec![(*v).clone(); n]
        } else {
            (0..n)
                .map(|_| {
                    let face = &skeleton[rng.random_range(0..skeleton.len())];
                    let verts: Vec<&RVector> = face.vertices().iter().map(|&v| &p.vertices()[v]).collect();
                    dyadic_combination(&mut rng, &verts, sampler.bits)
                })
                .collect()
        };
        let mut sum = vec_ops::zeros(p.dim());
        for x in &summands {
            sum = vec_ops::add(&sum, x);
        }
        let mean = vec_ops::scale(&sum, &Rational::new(1.into(), n.into()));
        if !p.contains(&mean) {
            return Err(Error::internal(format!(
                "sum of skeleton points {:?} is outside nP",
                format_vector(&sum)
            )));
        }
    }

    let mut rng = sampler.stream(2);
    let targets: Vec<RVector> = (0..sampler.count)
        .map(|s| {
            if s < leading {
                vertices[s].clone()
            } else {
                dyadic_combination(&mut rng, &vertices, sampler.bits)
            }
        })
        .collect();
    let solve = |x: &RVector| -> std::result::Result<_, String> {
        let dec = decompose(p, x, n, cfg).map_err(|e| e.to_string())?;
        let cert = dec.to_certificate();
        check_certificate(p, &cert).map_err(|e| e.to_string())?;
        Ok(cert)
    };
    let outcomes: Vec<_> = if cfg.parallel {
        targets.par_iter().map(solve).collect()
    } else {
        targets.iter().map(solve).collect()
    };

    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for (x, outcome) in targets.iter().zip(outcomes) {
        match outcome {
            Ok(cert) => witnesses.push(cert),
            Err(error) => failures.push(SampleFailure {
                point: format_vector(&vec_ops::scale(x, &Rational::from_integer(n.into()))),
                error,
            }),
        }
    }
    let succeeded = witnesses.len();
    Ok(VerificationReport {
        check: CheckKind::Minkowski,
        instance: format!(
            "{n}-fold sum of the {d}-skeleton of a {}-polytope with {} facets",
            p.dim(),
            p.num_facets()
        ),
        polytope: PolytopeFile::from_polytope(p, false),
        weights: vec![format_rational(&Rational::new(1.into(), n.into())); n],
        skeleton_dims: vec![d; n],
        seed: Some(sampler.seed),
        directions: vec![
            DirectionOutcome {
                direction: "subset".into(),
                attempted: sampler.count,
                succeeded: sampler.count,
            },
            DirectionOutcome {
                direction: "superset".into(),
                attempted: targets.len(),
                succeeded,
            },
        ],
        samples_attempted: sampler.count + targets.len(),
        samples_succeeded: sampler.count + succeeded,
        verdict: if failures.is_empty() {
            Verdict::Verified
        } else {
            Verdict::Failed
        },
        witnesses,
        failures,
        counterexample: None,
        elapsed: start.elapsed(),
    })
}
