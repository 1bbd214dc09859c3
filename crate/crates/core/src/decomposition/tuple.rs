use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{lp_feasible, Farkas, Feasibility, LinearSystem, RVector, Rational};
use crate::polytope::{Face, HPolytope};

/// Outcome of asking whether points `x_i ∈ E_i` can have `Σ w_i x_i = target`.
#[derive(Clone, Debug)]
pub enum TupleOutcome {
    Feasible(Vec<RVector>),
    /// `farkas` refutes the system returned by [`tuple_system`] for the same arguments.
    Infeasible(Farkas),
}

impl TupleOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, TupleOutcome::Feasible(_))
    }
}

/// The stacked system for a face tuple.
///
/// Each point is written as a convex combination of its face's vertices: one
/// nonnegative variable per (point, vertex), a convexity row per point and
/// one row per coordinate for `Σ w_i x_i = target`. Variables are laid out
/// point by point in the order of `face.vertices()`.
pub fn tuple_system(
    p: &HPolytope,
    faces: &[&Face],
    weights: &[Rational],
    target: &[Rational],
) -> Result<LinearSystem> {
    if faces.len() != weights.len() {
        return Err(Error::input(format!(
            "{} faces but {} weights",
            faces.len(),
            weights.len()
        )));
    }
    if target.len() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "target has {} coordinates, polytope is {}-dimensional",
            target.len(),
            p.dim()
        )));
    }
    let nvars: usize = faces.iter().map(|f| f.vertices().len()).sum();
    let mut sys = LinearSystem::new(nvars);
    for j in 0..nvars {
        sys.set_nonnegative(j);
    }

    let mut coord_rows = vec![vec![Rational::zero(); nvars]; p.dim()];
    let mut offset = 0;
    for (face, w) in faces.iter().zip(weights) {
        let mut convexity = vec![Rational::zero(); nvars];
        for (slot, &vi) in face.vertices().iter().enumerate() {
            let col = offset + slot;
            convexity[col] = Rational::one();
            for (row, x) in coord_rows.iter_mut().zip(&p.vertices()[vi]) {
                row[col] = w * x;
            }
        }
        sys.add_eq(convexity, Rational::one());
        offset += face.vertices().len();
    }
    for (row, t) in coord_rows.into_iter().zip(target) {
        sys.add_eq(row, t.clone());
    }
    Ok(sys)
}

/// Decides whether some `x_i ∈ faces[i]` satisfy `Σ weights_i x_i = target`.
pub fn weighted_tuple_feasible(
    p: &HPolytope,
    faces: &[&Face],
    weights: &[Rational],
    target: &[Rational],
) -> Result<TupleOutcome> {
    let sys = tuple_system(p, faces, weights, target)?;
    Ok(match lp_feasible(&sys)? {
        Feasibility::Feasible(lambda) => {
            let mut points = Vec::with_capacity(faces.len());
            let mut offset = 0;
            for face in faces {
                let mut x = vec![Rational::zero(); p.dim()];
                for (slot, &vi) in face.vertices().iter().enumerate() {
                    let l = &lambda[offset + slot];
                    if l.is_zero() {
                        continue;
                    }
                    for (xj, vj) in x.iter_mut().zip(&p.vertices()[vi]) {
                        *xj += l * vj;
                    }
                }
                offset += face.vertices().len();
                points.push(x);
            }
            TupleOutcome::Feasible(points)
        }
        Feasibility::Infeasible(f) => TupleOutcome::Infeasible(f),
    })
}

/// Equal-weight case: `Σ x_i = n · target`.
pub(crate) fn plain_weights(n: usize) -> Vec<Rational> {
    vec![Rational::one(); n]
}

pub(crate) fn scaled_target(target: &[Rational], n: usize) -> RVector {
    let n = Rational::from_integer(n.into());
    target.iter().map(|x| x * &n).collect()
}
