use num_traits::{One, Zero};
use rayon::prelude::*;

use super::QComplex;
use crate::error::{Error, Result};
use crate::numeric::{lp_feasible, Feasibility, LinearSystem, RVector, Rational};
use crate::polytope::FaceId;

/// A flag `F_0 ⊂ F_1 ⊂ ⋯ ⊂ F_{n−1}` of faces of `Q` with `dim F_k = k`, and
/// barycentric coordinates on the simplex `q_{F_0} … q_{F_{n−1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub faces: Vec<FaceId>,
    pub t: Vec<Rational>,
}

/// What [`descend_to_vertex`] established about a zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    pub vertex: FaceId,
    /// `i_k`: the column whose face dimension grows from `F_{k−1}` to `F_k`.
    pub steps: Vec<usize>,
    /// A column never stepped.
    pub j: usize,
    /// `Σ_k t_k · k / n`; an integer in `[0, 1)`, hence zero.
    pub r: Rational,
}

/// All full flags of the `(n−1)`-skeleton, in canonical order.
fn flags(q: &QComplex) -> Vec<Vec<FaceId>> {
    let lat = q.lattice();
    let mut out: Vec<Vec<FaceId>> = lat.ids_of_dim(0).map(|v| vec![v]).collect();
    for k in 1..q.n() {
        let upper: Vec<FaceId> = lat.ids_of_dim(k).collect();
        out = out
            .into_iter()
            .flat_map(|flag| {
                let last = lat.face(*flag.last().expect("flags are nonempty"));
                upper
                    .iter()
                    .filter(|&&g| last.is_subface_of(lat.face(g)))
                    .map(|&g| {
                        let mut next = flag.clone();
                        next.push(g);
                        next
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// `Σ t_k φ(q_{F_k}) = 0`, `t >= 0`, `Σ t_k = 1`.
fn zero_system(q: &QComplex, flag: &[FaceId]) -> LinearSystem {
    let m = flag.len();
    let mut sys = LinearSystem::new(m);
    for k in 0..m {
        sys.set_nonnegative(k);
    }
    sys.add_eq(vec![Rational::one(); m], Rational::one());
    for i in 0..q.n() {
        let row = flag.iter().map(|&f| q.phi().value(f)[i].clone()).collect();
        sys.add_eq(row, Rational::zero());
    }
    sys
}

/// First flag in canonical order carrying a zero of the interpolated `φ`,
/// and the zero itself in X-coordinates.
///
/// A zero always exists for generic `Q`, so running out of flags is an
/// internal error.
pub fn find_phi_zero(q: &QComplex) -> Result<(Chain, RVector)> {
    if !q.is_generic() {
        return Err(Error::NonGeneric);
    }
    let candidates = flags(q);
    let hit = candidates
        .par_iter()
        .map(|flag| lp_feasible(&zero_system(q, flag)).map(|r| (flag, r)))
        .find_map_first(|r| match r {
            Ok((flag, Feasibility::Feasible(t))) => Some(Ok((flag.clone(), t))),
            Ok((_, Feasibility::Infeasible(_))) => None,
            Err(e) => Some(Err(e)),
        });
    let (faces, t) = match hit {
        Some(r) => r?,
        None => {
            return Err(Error::internal(format!(
                "φ has no zero on any of {} flags",
                candidates.len()
            )))
        }
    };
    let lat = q.lattice();
    let mut z = vec![Rational::zero(); q.polytope().dim()];
    for (f, tk) in faces.iter().zip(&t) {
        for (zj, xj) in z.iter_mut().zip(lat.face(*f).sample()) {
            *zj += tk * xj;
        }
    }
    Ok((Chain { faces, t }, z))
}

/// The descent argument, checked step by step: along a generic flag exactly
/// one column gains a dimension per step, an unstepped column `j` has
/// `φ_j(q_k) = φ_j(q_0) − k/n`, so the zero forces `φ_j(q_0) = r` with `r`
/// an integer in `[0, 1)`. Hence `r = 0`, `t = (1, 0, …, 0)`, and `F_0` is a
/// vertex whose columns all lie in `d`-faces.
pub fn descend_to_vertex(q: &QComplex, chain: &Chain) -> Result<Descent> {
    let n = q.n();
    let fail = |msg: String| Err(Error::internal(format!("descent: {msg}")));
    if !q.is_generic() {
        return Err(Error::NonGeneric);
    }
    if chain.faces.len() != n || chain.t.len() != n {
        return fail(format!("flag has length {}, expected {n}", chain.faces.len()));
    }
    let lat = q.lattice();
    for (k, &f) in chain.faces.iter().enumerate() {
        if lat.face(f).dim() != k {
            return fail(format!(
                "face {k} of the flag has dimension {}",
                lat.face(f).dim()
            ));
        }
        if k > 0 && !lat.face(chain.faces[k - 1]).is_subface_of(lat.face(f)) {
            return fail(format!("faces {} and {k} are not nested", k - 1));
        }
    }
    if chain.t.iter().any(|t| t < &Rational::zero()) || chain.t.iter().sum::<Rational>() != Rational::one() {
        return fail("t is not a point of the simplex".into());
    }

    let mut steps = Vec::with_capacity(n - 1);
    for k in 1..n {
        let before = q.label_dims(chain.faces[k - 1]);
        let after = q.label_dims(chain.faces[k]);
        let grown: Vec<usize> = (0..n).filter(|&i| after[i] != before[i]).collect();
        match grown.as_slice() {
            [i] if after[*i] == before[*i] + 1 => steps.push(*i),
            _ => {
                return fail(format!(
                    "step {k} changes label dimensions {before:?} -> {after:?}"
                ))
            }
        }
    }
    let j = (0..n)
        .find(|i| !steps.contains(i))
        .expect("n − 1 steps leave a column unstepped");

    let nr = Rational::from_integer(n.into());
    let phi0 = q.phi().value(chain.faces[0])[j].clone();
    for k in 0..n {
        let want = &phi0 - Rational::from_integer(k.into()) / &nr;
        if q.phi().value(chain.faces[k])[j] != want {
            return fail(format!("φ_{j} at flag position {k} is not φ_{j}(q_0) − {k}/{n}"));
        }
    }
    let r: Rational = chain
        .t
        .iter()
        .enumerate()
        .map(|(k, t)| t * Rational::from_integer(k.into()) / &nr)
        .sum();
    if phi0 != r {
        return fail(format!("φ_{j}(q_0) = {phi0} but r = {r}"));
    }
    if !r.is_integer() {
        return fail(format!("r = {r} is not an integer"));
    }
    if !r.is_zero() {
        return fail(format!("r = {r} is a nonzero integer"));
    }
    if !chain.t[0].is_one() || chain.t[1..].iter().any(|t| !t.is_zero()) {
        return fail("t is not (1, 0, …, 0)".into());
    }
    let dims = q.label_dims(chain.faces[0]);
    if dims.iter().any(|&e| e != q.d()) {
        return fail(format!("vertex label dimensions {dims:?} are not all {}", q.d()));
    }
    Ok(Descent {
        vertex: chain.faces[0],
        steps,
        j,
        r,
    })
}
