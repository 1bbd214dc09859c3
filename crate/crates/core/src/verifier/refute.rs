use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{TupleRefutation, VerificationReport};
use crate::decomposition::{tuple_system, weighted_tuple_feasible, TupleOutcome};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, parse_rational, vec_ops, Farkas, RVector, Rational};
use crate::polytope::{Face, FaceLattice, HPolytope};

/// Outcome of [`refute_point`].
#[derive(Clone, Debug)]
pub enum Refutation {
    Witness {
        faces: Vec<Face>,
        points: Vec<RVector>,
    },
    /// One certificate per admissible tuple, in canonical order.
    Refuted(Vec<TupleRefutation>),
}

/// Index tuples into the faces of dimension `dims[i]`. Neighbouring positions
/// with equal weight and dimension are interchangeable, so only nondecreasing
/// runs are kept there.
pub fn admissible_tuples(lattice: &FaceLattice, dims: &[usize], weights: &[Rational]) -> Vec<Vec<usize>> {
    fn rec(
        lattice: &FaceLattice,
        dims: &[usize],
        weights: &[Rational],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = cur.len();
        if i == dims.len() {
            out.push(cur.clone());
            return;
        }
        let tied = i > 0 && dims[i] == dims[i - 1] && weights[i] == weights[i - 1];
        let start = if tied { cur[i - 1] } else { 0 };
        for k in start..lattice.faces_of_dim(dims[i]).len() {
            cur.push(k);
            rec(lattice, dims, weights, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lattice, dims, weights, &mut Vec::new(), &mut out);
    out
}

fn faces_of<'a>(lattice: &'a FaceLattice, dims: &[usize], tuple: &[usize]) -> Vec<&'a Face> {
    tuple
        .iter()
        .zip(dims)
        .map(|(&k, &d)| &lattice.faces_of_dim(d)[k])
        .collect()
}

/// Looks for points `x_i` in faces of dimension `dims[i]` with
/// `Σ weights_i x_i = target`, trying tuples whose weighted face centroids
/// land nearest the target first. Without a witness, every admissible tuple
/// comes back with its Farkas certificate.
pub fn refute_point(
    p: &HPolytope,
    lattice: &FaceLattice,
    dims: &[usize],
    weights: &[Rational],
    target: &[Rational],
) -> Result<Refutation> {
    if dims.len() != weights.len() {
        return Err(Error::input("one skeleton dimension per weight"));
    }
    let tuples = admissible_tuples(lattice, dims, weights);
    let wf: Vec<f64> = vec_ops::to_f64(weights);
    let tf = vec_ops::to_f64(target);
    let centroids: Vec<Vec<Vec<f64>>> = dims
        .iter()
        .map(|&d| {
            lattice
                .faces_of_dim(d)
                .iter()
                .map(|f| vec_ops::to_f64(f.sample()))
                .collect()
        })
        .collect();
    let score = |t: &[usize]| -> f64 {
        (0..tf.len())
            .map(|j| {
                let s: f64 = t
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| wf[i] * centroids[i][k][j])
                    .sum();
                (s - tf[j]).powi(2)
            })
            .sum()
    };
    let mut order: Vec<usize> = (0..tuples.len()).collect();
    let scores: Vec<f64> = tuples.iter().map(|t| score(t)).collect();
    order.sort_by(|&a, &b| {
        scores[a]
            .partial_cmp(&scores[b])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut certs: Vec<Option<TupleRefutation>> = vec![None; tuples.len()];
    for idx in order {
        let faces = faces_of(lattice, dims, &tuples[idx]);
        match weighted_tuple_feasible(p, &faces, weights, target)? {
            TupleOutcome::Feasible(points) => {
                return Ok(Refutation::Witness {
                    faces: faces.into_iter().cloned().collect(),
                    points,
                })
            }
            TupleOutcome::Infeasible(f) => {
                certs[idx] = Some(TupleRefutation {
                    faces: faces.iter().map(|f| f.tight_facets().to_vec()).collect(),
                    ineq: f.ineq.iter().map(format_rational).collect(),
                    eq: f.eq.iter().map(format_rational).collect(),
                });
            }
        }
    }
    Ok(Refutation::Refuted(
        certs
            .into_iter()
            .map(|c| c.expect("every tuple visited"))
            .collect(),
    ))
}

/// Re-checks a reported counterexample from the report alone: the point lies
/// in the polytope, the certificates cover every admissible tuple exactly
/// once, and each one refutes its tuple system.
pub fn check_counterexample(report: &VerificationReport) -> Result<()> {
    let reject = |m: String| Error::Input(format!("counterexample rejected: {m}"));
    let ce = report
        .counterexample
        .as_ref()
        .ok_or_else(|| reject("report has no counterexample".into()))?;
    let p = report.polytope.to_polytope()?;
    let lattice = FaceLattice::new(&p);
    let weights: Vec<Rational> = report
        .weights
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_>>()?;
    let dims = &report.skeleton_dims;
    let point = ce
        .point
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<RVector>>()?;
    if !p.contains(&point) {
        return Err(reject("point is outside the polytope".into()));
    }
    if weights.iter().sum::<Rational>() != Rational::from_integer(1.into()) {
        return Err(reject("weights do not sum to one".into()));
    }
    let admissible: BTreeSet<Vec<Vec<usize>>> = admissible_tuples(&lattice, dims, &weights)
        .iter()
        .map(|t| {
            faces_of(&lattice, dims, t)
                .iter()
                .map(|f| f.tight_facets().to_vec())
                .collect()
        })
        .collect();
    let covered: BTreeSet<Vec<Vec<usize>>> = ce.certificates.iter().map(|c| c.faces.clone()).collect();
    if covered != admissible || ce.certificates.len() != admissible.len() || ce.tuples != admissible.len() {
        return Err(reject(format!(
            "{} certificates for {} admissible tuples",
            ce.certificates.len(),
            admissible.len()
        )));
    }
    for c in &ce.certificates {
        let faces: Vec<&Face> = c
            .faces
            .iter()
            .map(|t| lattice.find(t).map(|id| lattice.face(id)))
            .collect::<Option<_>>()
            .ok_or_else(|| reject("certificate names an unknown face".into()))?;
        let sys = tuple_system(&p, &faces, &weights, &point)?;
        let farkas = Farkas {
            ineq: c.ineq.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
            eq: c.eq.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
        };
        if !farkas.certifies(&sys) {
            return Err(reject(format!(
                "certificate for faces {:?} does not refute",
                c.faces
            )));
        }
    }
    Ok(())
}
