use std::cmp::Ordering;

use num_traits::One;
use rayon::prelude::*;

use super::tuple::{plain_weights, scaled_target, weighted_tuple_feasible, TupleOutcome};
use super::{Decomposition, SearchOrder, SolverConfig};
use crate::error::{Error, Result};
use crate::numeric::{vec_ops, RVector, Rational};
use crate::polytope::{Face, FaceEmbedding, FaceLattice, HPolytope, Location};

const MAX_CHUNK: usize = 32;

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Prime factors in ascending order, with multiplicity.
pub fn factorize(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        while n.is_multiple_of(k) {
            out.push(k);
            n /= k;
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn frac(n: usize) -> Rational {
    Rational::new(1.into(), n.into())
}

/// `n` points in the `d`-skeleton averaging to `target`, for prime `n` and `dim P = n·d`.
///
/// Exhausting every face tuple without a witness contradicts the existence
/// theorem and is reported as [`Error::Internal`].
pub fn decompose_prime(
    p: &HPolytope,
    target: &[Rational],
    n: usize,
    d: usize,
    cfg: &SolverConfig,
) -> Result<Decomposition> {
    cfg.validate()?;
    if !is_prime(n) {
        return Err(Error::input(format!("{n} is not prime")));
    }
    if p.dim() != n * d {
        return Err(Error::DimensionMismatch(format!(
            "polytope dimension {} is not {n}·{d}",
            p.dim()
        )));
    }
    let tight = p.tight_rows(target)?;
    let lattice = FaceLattice::new(p);
    let skeleton = lattice.faces_of_dim(d);

    let minimal = p
        .face_from_tight(&tight)
        .ok_or_else(|| Error::internal("target lies on an empty face"))?;
    if minimal.dim() <= d {
        let face = skeleton
            .iter()
            .find(|f| minimal.is_subface_of(f))
            .ok_or_else(|| Error::internal("low face not contained in any d-face"))?;
        return Ok(Decomposition {
            target: target.to_vec(),
            points: vec![target.to_vec(); n],
            faces: vec![face.clone(); n],
            weights: vec![frac(n); n],
            skeleton_dims: vec![d; n],
        });
    }

    let (points, faces) = search(p, skeleton, target, n, cfg)?;
    Ok(Decomposition {
        target: target.to_vec(),
        points,
        faces,
        weights: vec![frac(n); n],
        skeleton_dims: vec![d; n],
    })
}

/// Float summaries of a face used only to prune and order candidate tuples.
struct FaceSummary {
    centroid: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

fn directions(p: &HPolytope) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = (0..p.dim())
        .map(|j| (0..p.dim()).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    dirs.extend(p.a().row_vectors().iter().map(|r| vec_ops::to_f64(r)));
    dirs
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn summarize(p: &HPolytope, face: &Face, dirs: &[Vec<f64>]) -> FaceSummary {
    let verts: Vec<Vec<f64>> = face
        .vertices()
        .iter()
        .map(|&i| vec_ops::to_f64(&p.vertices()[i]))
        .collect();
    let mut lo = vec![f64::INFINITY; dirs.len()];
    let mut hi = vec![f64::NEG_INFINITY; dirs.len()];
    for v in &verts {
        for (k, dir) in dirs.iter().enumerate() {
            let s = dot(dir, v);
            lo[k] = lo[k].min(s);
            hi[k] = hi[k].max(s);
        }
    }
    FaceSummary {
        centroid: vec_ops::to_f64(face.sample()),
        lo,
        hi,
    }
}

/// Index tuples over `count` faces: nondecreasing when `multisets`, else all.
fn tuples(count: usize, n: usize, multisets: bool) -> Vec<Vec<usize>> {
    fn rec(count: usize, n: usize, multisets: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let start = if multisets {
            cur.last().copied().unwrap_or(0)
        } else {
            0
        };
        for i in start..count {
            cur.push(i);
            rec(count, n, multisets, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(count, n, multisets, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Tries face tuples in the configured order; returns the points and faces of the first feasible one.
fn search(
    p: &HPolytope,
    skeleton: &[Face],
    target: &[Rational],
    n: usize,
    cfg: &SolverConfig,
) -> Result<(Vec<RVector>, Vec<Face>)> {
    let dirs = directions(p);
    let summaries: Vec<FaceSummary> = skeleton.iter().map(|f| summarize(p, f, &dirs)).collect();
    let target_f = vec_ops::to_f64(target);
    let needed: Vec<f64> = dirs.iter().map(|d| n as f64 * dot(d, &target_f)).collect();

    // Support-function test: Σ min_i <= n·(dir·target) <= Σ max_i in every
    // direction is necessary; the margin absorbs float rounding so that no
    // feasible tuple is ever dropped.
    let plausible = |t: &[usize]| {
        needed.iter().enumerate().all(|(k, &want)| {
            let lo: f64 = t.iter().map(|&i| summaries[i].lo[k]).sum();
            let hi: f64 = t.iter().map(|&i| summaries[i].hi[k]).sum();
            let slack = 1e-9 * (1.0 + want.abs() + lo.abs() + hi.abs());
            lo <= want + slack && want <= hi + slack
        })
    };

    let mut candidates: Vec<Vec<usize>> = tuples(skeleton.len(), n, cfg.symmetry_pruning)
        .into_iter()
        .filter(|t| plausible(t))
        .collect();
    if cfg.order == SearchOrder::Heuristic {
        let score = |t: &[usize]| -> f64 {
            (0..target_f.len())
                .map(|j| {
                    let mean = t.iter().map(|&i| summaries[i].centroid[j]).sum::<f64>() / n as f64;
                    (mean - target_f[j]).powi(2)
                })
                .sum()
        };
        let mut scored: Vec<(f64, Vec<usize>)> = candidates.into_iter().map(|t| (score(&t), t)).collect();
        scored.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.1.cmp(&b.1))
        });
        candidates = scored.into_iter().map(|(_, t)| t).collect();
    }

    let weights = plain_weights(n);
    let rhs = scaled_target(target, n);
    let eval = |t: &Vec<usize>| -> Result<Option<Vec<RVector>>> {
        let faces: Vec<&Face> = t.iter().map(|&i| &skeleton[i]).collect();
        Ok(match weighted_tuple_feasible(p, &faces, &weights, &rhs)? {
            TupleOutcome::Feasible(points) => Some(points),
            TupleOutcome::Infeasible(_) => None,
        })
    };

    // Chunks grow geometrically: the first few candidates usually succeed,
    // so early chunks stay small and later ones keep every worker busy.
    let mut evaluated = 0usize;
    let mut size = 1;
    while evaluated < candidates.len() {
        let chunk = &candidates[evaluated..candidates.len().min(evaluated + size)];
        size = (size * 2).min(MAX_CHUNK);
        let chunk = match cfg.budget {
            Some(b) if evaluated >= b => return Err(Error::BudgetExhausted(b)),
            Some(b) => &chunk[..chunk.len().min(b - evaluated)],
            None => chunk,
        };
        evaluated += chunk.len();
        let results: Vec<Result<Option<Vec<RVector>>>> = if cfg.parallel {
            chunk.par_iter().map(eval).collect()
        } else {
            // Sequential runs stop at the first hit; the winner is the same.
            let mut out = Vec::new();
            for t in chunk {
                let r = eval(t);
                let hit = matches!(r, Ok(Some(_)));
                out.push(r);
                if hit {
                    break;
                }
            }
            out
        };
        for (t, r) in chunk.iter().zip(results) {
            if let Some(points) = r? {
                let faces = t.iter().map(|&i| skeleton[i].clone()).collect();
                return Ok((points, faces));
            }
        }
    }
    if let Some(b) = cfg.budget {
        if evaluated >= b {
            return Err(Error::BudgetExhausted(b));
        }
    }
    Err(Error::internal(format!(
        "no feasible tuple among {} candidates for an {n}-point decomposition",
        candidates.len()
    )))
}

/// Splits `x ∈ face` into `m` points of the `dim(face)/m`-skeleton of the face,
/// returned in parent coordinates with their faces in `p`.
fn decompose_within(
    p: &HPolytope,
    face: &Face,
    x: &[Rational],
    m: usize,
    cfg: &SolverConfig,
) -> Result<Vec<(RVector, Face)>> {
    let embedding = FaceEmbedding::new(p, face)?;
    let local = embedding.to_local(x);
    let sub = decompose(embedding.polytope(), &local, m, cfg)?;
    sub.points
        .iter()
        .zip(&sub.faces)
        .map(|(pt, f)| Ok((embedding.to_parent(pt), lift_face(p, &embedding, f)?)))
        .collect()
}

/// The face of `p` that a face of an embedded sub-polytope corresponds to.
fn lift_face(p: &HPolytope, embedding: &FaceEmbedding, f: &Face) -> Result<Face> {
    match p.minimal_face(&embedding.to_parent(f.sample()))? {
        Location::Face(g) => Ok(g),
        Location::Outside { row } => Err(Error::internal(format!("lifted face sample violates row {row}"))),
    }
}

/// `n` points of the `dim P / n`-skeleton with barycenter `target`, for any `n >= 1`.
///
/// Composite `n` splits by its largest prime factor `q` into `q` points of the
/// `dim P / q`-skeleton, then decomposes each inside its face with `n / q` points.
pub fn decompose(p: &HPolytope, target: &[Rational], n: usize, cfg: &SolverConfig) -> Result<Decomposition> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::input("number of points must be positive"));
    }
    if !p.dim().is_multiple_of(n) {
        return Err(Error::DimensionMismatch(format!(
            "polytope dimension {} is not divisible by {n}",
            p.dim()
        )));
    }
    p.tight_rows(target)?;
    if n == 1 {
        return Ok(Decomposition {
            target: target.to_vec(),
            points: vec![target.to_vec()],
            faces: vec![p.top_face()],
            weights: vec![Rational::one()],
            skeleton_dims: vec![p.dim()],
        });
    }
    let q = *factorize(n).last().expect("n >= 2 has a prime factor");
    let stage = decompose_prime(p, target, q, p.dim() / q, cfg)?;
    let m = n / q;
    if m == 1 {
        return Ok(stage);
    }

    let d = p.dim() / n;
    let mut points = Vec::with_capacity(n);
    let mut faces = Vec::with_capacity(n);
    for (x, face) in stage.points.iter().zip(&stage.faces) {
        for (pt, f) in decompose_within(p, face, x, m, cfg)? {
            points.push(pt);
            faces.push(f);
        }
    }
    Ok(Decomposition {
        target: target.to_vec(),
        points,
        faces,
        weights: vec![frac(n); n],
        skeleton_dims: vec![d; n],
    })
}

/// Weights and skeleton dimensions produced by [`mixed_decompose`] on a
/// polytope of dimension `dim`, without running it.
pub fn mixed_pattern(dim: usize, chain: &[usize]) -> Result<(Vec<Rational>, Vec<usize>)> {
    if chain.is_empty() || chain.iter().any(|&k| k < 2) {
        return Err(Error::input("chain entries must be at least 2"));
    }
    let product: usize = chain.iter().product();
    if !dim.is_multiple_of(product) {
        return Err(Error::DimensionMismatch(format!(
            "dimension {dim} is not divisible by the chain product {product}"
        )));
    }
    let mut weights = Vec::new();
    let mut dims = Vec::new();
    let mut scale = 1usize;
    let mut current = dim;
    for (i, &k) in chain.iter().enumerate() {
        scale *= k;
        current /= k;
        let kept = if i + 1 == chain.len() { k } else { k - 1 };
        weights.extend(std::iter::repeat_n(frac(scale), kept));
        dims.extend(std::iter::repeat_n(current, kept));
    }
    Ok((weights, dims))
}

/// Weighted decomposition along a chain `[n1, n2, …]`: split into `n1` points
/// of the `dim/n1`-skeleton, keep all but the last, and re-split the last one
/// inside its face with the rest of the chain.
pub fn mixed_decompose(
    p: &HPolytope,
    target: &[Rational],
    chain: &[usize],
    cfg: &SolverConfig,
) -> Result<Decomposition> {
    mixed_pattern(p.dim(), chain)?;
    let n1 = chain[0];
    let first = decompose(p, target, n1, cfg)?;
    if chain.len() == 1 {
        return Ok(first);
    }
    let w = frac(n1);
    let mut out = Decomposition {
        target: target.to_vec(),
        points: first.points[..n1 - 1].to_vec(),
        faces: first.faces[..n1 - 1].to_vec(),
        weights: vec![w.clone(); n1 - 1],
        skeleton_dims: first.skeleton_dims[..n1 - 1].to_vec(),
    };

    let last = &first.points[n1 - 1];
    let face = &first.faces[n1 - 1];
    let embedding = FaceEmbedding::new(p, face)?;
    let sub = mixed_decompose(embedding.polytope(), &embedding.to_local(last), &chain[1..], cfg)?;
    for i in 0..sub.len() {
        out.points.push(embedding.to_parent(&sub.points[i]));
        out.faces.push(lift_face(p, &embedding, &sub.faces[i])?);
        out.weights.push(&sub.weights[i] * &w);
        out.skeleton_dims.push(sub.skeleton_dims[i]);
    }
    Ok(out)
}
