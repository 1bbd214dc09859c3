use std::collections::HashSet;
use std::time::Instant;

use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;

use super::{
    dyadic_combination, refute_point, CheckKind, Counterexample, DirectionOutcome, Refutation, SampleFailure,
    Sampler, Verdict, VerificationReport,
};
use crate::decomposition::{check_certificate, Decomposition};
use crate::error::{Error, Result};
use crate::instances::{corner_simplex, regular_tetrahedron, triangular_prism};
use crate::numeric::{format_rational, format_vector, RVector, Rational};
use crate::polytope::io::PolytopeFile;
use crate::polytope::{FaceLattice, HPolytope};

/// Coarse-to-fine dyadic search: the center first, then at each level
/// `1..=max_level` the `per_level` new grid points `k / 2^level` nearest to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSearch {
    pub max_level: u32,
    pub per_level: usize,
}

impl Default for GridSearch {
    fn default() -> Self {
        Self {
            max_level: 8,
            per_level: 256,
        }
    }
}

/// Points evaluated concurrently; the first refuted one in order wins.
const CHUNK: usize = 16;

fn dist2(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Grid points of `p` at `level` that are not on any coarser grid, nearest to `center`.
pub(super) fn grid_level(p: &HPolytope, center: &[Rational], level: u32, per_level: usize) -> Vec<RVector> {
    let scale = Rational::from_integer((1i64 << level).into());
    let dim = p.dim();
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for v in p.vertices() {
        for j in 0..dim {
            let s = &v[j] * &scale;
            lo[j] = lo[j].min(i64::try_from(s.ceil().to_integer()).unwrap_or(i64::MIN));
            hi[j] = hi[j].max(i64::try_from(s.floor().to_integer()).unwrap_or(i64::MAX));
        }
    }
    let c: Vec<Rational> = center.iter().map(|x| x * &scale).collect();
    let mid: Vec<i64> = c
        .iter()
        .map(|x| i64::try_from(x.round().to_integer()).unwrap_or(0))
        .collect();

    let mut radius = 1i64;
    loop {
        let box_lo: Vec<i64> = (0..dim).map(|j| lo[j].max(mid[j] - radius)).collect();
        let box_hi: Vec<i64> = (0..dim).map(|j| hi[j].min(mid[j] + radius)).collect();
        let whole = (0..dim).all(|j| box_lo[j] == lo[j] && box_hi[j] == hi[j]);
        let r2 = Rational::from_integer((radius * radius).into());
        let mut found: Vec<(Rational, Vec<i64>)> = Vec::new();
        let mut k = box_lo.clone();
        'outer: loop {
            if level == 0 || k.iter().any(|x| x.is_odd()) {
                let kr: Vec<Rational> = k.iter().map(|&x| Rational::from_integer(x.into())).collect();
                let d2 = dist2(&kr, &c);
                if whole || d2 <= r2 {
                    let x: RVector = kr.iter().map(|x| x / &scale).collect();
                    if p.contains(&x) {
                        found.push((d2, k.clone()));
                    }
                }
            }
            for j in 0..dim {
                if k[j] < box_hi[j] {
                    k[j] += 1;
                    continue 'outer;
                }
                k[j] = box_lo[j];
            }
            break;
        }
        if found.len() >= per_level || whole {
            found.sort();
            found.truncate(per_level);
            return found
                .into_iter()
                .map(|(_, k)| {
                    k.iter()
                        .map(|&x| Rational::from_integer(x.into()) / &scale)
                        .collect()
                })
                .collect();
        }
        radius *= 2;
    }
}

fn candidates(p: &HPolytope, center: &RVector, search: &GridSearch) -> Vec<RVector> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in std::iter::once(center.clone())
        .chain((1..=search.max_level).flat_map(|l| grid_level(p, center, l, search.per_level)))
    {
        if seen.insert(x.clone()) {
            out.push(x);
        }
    }
    out
}

/// Result of scanning candidates for a refuted point.
struct Scan {
    examined: usize,
    hit: Option<(RVector, Vec<super::TupleRefutation>)>,
}

fn scan(
    p: &HPolytope,
    lattice: &FaceLattice,
    dims: &[usize],
    weights: &[Rational],
    points: &[RVector],
) -> Result<Scan> {
    for (c, chunk) in points.chunks(CHUNK).enumerate() {
        let results: Vec<Result<Refutation>> = chunk
            .par_iter()
            .map(|x| refute_point(p, lattice, dims, weights, x))
            .collect();
        for (i, (x, r)) in chunk.iter().zip(results).enumerate() {
            if let Refutation::Refuted(certs) = r? {
                return Ok(Scan {
                    examined: c * CHUNK + i + 1,
                    hit: Some((x.clone(), certs)),
                });
            }
        }
    }
    Ok(Scan {
        examined: points.len(),
        hit: None,
    })
}

fn search_report(
    check: CheckKind,
    instance: String,
    p: &HPolytope,
    weights: &[Rational],
    dims: &[usize],
    scan: Scan,
    start: Instant,
) -> VerificationReport {
    let found = scan.hit.is_some();
    VerificationReport {
        check,
        instance,
        polytope: PolytopeFile::from_polytope(p, false),
        weights: weights.iter().map(format_rational).collect(),
        skeleton_dims: dims.to_vec(),
        seed: None,
        directions: vec![DirectionOutcome {
            direction: "search".into(),
            attempted: scan.examined,
            succeeded: scan.examined - usize::from(found),
        }],
        samples_attempted: scan.examined,
        samples_succeeded: scan.examined - usize::from(found),
        verdict: if found {
            Verdict::Counterexample
        } else {
            Verdict::NoCounterexampleFound
        },
        witnesses: Vec::new(),
        failures: Vec::new(),
        counterexample: scan.hit.map(|(x, certs)| Counterexample {
            point: format_vector(&x),
            tuples: certs.len(),
            certificates: certs,
        }),
        elapsed: start.elapsed(),
    }
}

/// Searches the prism `{x, y >= 0, x + y <= 1} × [0, 1]` for a point that is
/// not `w_1 x_1 + w_2 x_2 + w_3 x_3` with `x_i` on edges and
/// `w = (1, 1, 1 + ε) / (3 + ε)`.
///
/// All 405 edge triples are admissible: ordered, except that the two
/// equal-weight points are interchangeable.
pub fn falsify_weighted_prism(eps: &Rational, search: &GridSearch) -> Result<VerificationReport> {
    let start = Instant::now();
    if !eps.is_positive() {
        return Err(Error::input(
            "ε must be positive; ε = 0 is the equal-weight case, where every point decomposes",
        ));
    }
    let p = triangular_prism();
    let lattice = FaceLattice::new(&p);
    let total = Rational::from_integer(3.into()) + eps;
    let weights = vec![
        Rational::one() / &total,
        Rational::one() / &total,
        (Rational::one() + eps) / &total,
    ];
    let dims = [1, 1, 1];
    let center = vec![
        Rational::new(1.into(), 3.into()),
        Rational::new(1.into(), 3.into()),
        Rational::new(1.into(), 2.into()),
    ];
    let points = candidates(&p, &center, search);
    let result = scan(&p, &lattice, &dims, &weights, &points)?;
    Ok(search_report(
        CheckKind::WeightedPrism,
        format!(
            "triangular prism, 1-skeleton, weights (1, 1, 1 + {})",
            format_rational(eps)
        ),
        &p,
        &weights,
        &dims,
        result,
        start,
    ))
}

/// Two equal-weight points in the `a`- and `b`-skeleton of a
/// `(2d + 1)`-simplex, `a + b = 2d + 1`.
///
/// For `(a, b) = (d, d + 1)` every sampled point must decompose; any other
/// split is searched for a refuted point, starting at the centroid. The
/// simplex is the regular tetrahedron for `d = 1` and the corner simplex
/// otherwise; both verdicts are affine invariants.
pub fn falsify_mixed_skeleton_simplex(
    a: usize,
    b: usize,
    d: usize,
    sampler: &Sampler,
    search: &GridSearch,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let dim = 2 * d + 1;
    if a + b != dim {
        return Err(Error::input(format!("a + b = {} but 2d + 1 = {dim}", a + b)));
    }
    if a > b {
        return Err(Error::input("expected a <= b"));
    }
    if dim > 7 {
        return Err(Error::input("simplex dimension above 7 is out of scope"));
    }
    let p = if d == 1 {
        regular_tetrahedron()
    } else {
        corner_simplex(dim)
    };
    let lattice = FaceLattice::new(&p);
    let half = Rational::new(1.into(), 2.into());
    let weights = vec![half.clone(), half];
    let dims = [a, b];
    let center = p.vertex_centroid();
    let instance = format!("{dim}-simplex, skeletons ({a}, {b})");

    if a != d {
        let points = candidates(&p, &center, search);
        let result = scan(&p, &lattice, &dims, &weights, &points)?;
        return Ok(search_report(
            CheckKind::MixedSkeletonSimplex,
            instance,
            &p,
            &weights,
            &dims,
            result,
            start,
        ));
    }

    let vertices: Vec<&RVector> = p.vertices().iter().collect();
    let mut rng = sampler.stream(3);
    let targets: Vec<RVector> = (0..sampler.count)
        .map(|s| {
            if s == 0 {
                center.clone()
            } else {
                dyadic_combination(&mut rng, &vertices, sampler.bits)
            }
        })
        .collect();
    let outcomes: Vec<Result<Refutation>> = targets
        .par_iter()
        .map(|x| refute_point(&p, &lattice, &dims, &weights, x))
        .collect();

    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    let mut counterexample = None;
    for (x, outcome) in targets.iter().zip(outcomes) {
        match outcome? {
            Refutation::Witness { faces, points } => {
                let cert = Decomposition {
                    target: x.clone(),
                    points,
                    faces,
                    weights: weights.clone(),
                    skeleton_dims: dims.to_vec(),
                }
                .to_certificate();
                match check_certificate(&p, &cert) {
                    Ok(_) => witnesses.push(cert),
                    Err(e) => failures.push(SampleFailure {
                        point: format_vector(x),
                        error: e.to_string(),
                    }),
                }
            }
            Refutation::Refuted(certs) => {
                failures.push(SampleFailure {
                    point: format_vector(x),
                    error: "no admissible face pair reaches this point".into(),
                });
                counterexample.get_or_insert(Counterexample {
                    point: format_vector(x),
                    tuples: certs.len(),
                    certificates: certs,
                });
            }
        }
    }
    let verdict = if counterexample.is_some() {
        Verdict::Counterexample
    } else if failures.is_empty() {
        Verdict::Verified
    } else {
        Verdict::Failed
    };
    let succeeded = witnesses.len();
    Ok(VerificationReport {
        check: CheckKind::MixedSkeletonSimplex,
        instance,
        polytope: PolytopeFile::from_polytope(&p, false),
        weights: weights.iter().map(format_rational).collect(),
        skeleton_dims: dims.to_vec(),
        seed: Some(sampler.seed),
        directions: vec![DirectionOutcome {
            direction: "feasibility".into(),
            attempted: targets.len(),
            succeeded,
        }],
        samples_attempted: targets.len(),
        samples_succeeded: succeeded,
        verdict,
        witnesses,
        failures,
        counterexample,
        elapsed: start.elapsed(),
    })
}
