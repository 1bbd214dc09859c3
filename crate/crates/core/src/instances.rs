//! Standard and seeded random polytopes.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{rat, RVector, Rational};
use crate::polytope::{HPolytope, VPolytope};

fn unit(dim: usize, j: usize, value: Rational) -> RVector {
    let mut v = vec![Rational::zero(); dim];
    v[j] = value;
    v
}

/// Axis-aligned box `lo <= x <= hi`.
pub fn axis_box(lo: &[Rational], hi: &[Rational]) -> Result<HPolytope> {
    let dim = lo.len();
    let mut a = Vec::with_capacity(2 * dim);
    let mut b = Vec::with_capacity(2 * dim);
    for j in 0..dim {
        a.push(unit(dim, j, Rational::one()));
        b.push(hi[j].clone());
        a.push(unit(dim, j, -Rational::one()));
        b.push(-lo[j].clone());
    }
    HPolytope::new(dim, a, b)
}

/// The cube `[-1, 1]^dim`.
pub fn cube(dim: usize) -> HPolytope {
    axis_box(&vec![rat(-1, 1); dim], &vec![rat(1, 1); dim]).expect("cube is valid")
}

/// `conv(±e_j)`, given by its `2^dim` facets `s·x <= 1`, `s ∈ {±1}^dim`.
pub fn cross_polytope(dim: usize) -> HPolytope {
    let a: Vec<RVector> = (0..1u32 << dim)
        .map(|mask| {
            (0..dim)
                .map(|j| if mask >> j & 1 == 1 { rat(-1, 1) } else { rat(1, 1) })
                .collect()
        })
        .collect();
    let b = vec![Rational::one(); a.len()];
    HPolytope::new(dim, a, b).expect("cross-polytope is valid")
}

/// `conv(0, e_1, …, e_dim)`.
pub fn corner_simplex(dim: usize) -> HPolytope {
    let mut a: Vec<RVector> = (0..dim).map(|j| unit(dim, j, -Rational::one())).collect();
    let mut b = vec![Rational::zero(); dim];
    a.push(vec![Rational::one(); dim]);
    b.push(Rational::one());
    HPolytope::new(dim, a, b).expect("simplex is valid")
}

/// Regular tetrahedron on alternate vertices of `[-1, 1]^3`.
pub fn regular_tetrahedron() -> HPolytope {
    let v = |x: i64, y: i64, z: i64| vec![rat(x, 1), rat(y, 1), rat(z, 1)];
    VPolytope::new(3, vec![v(1, 1, 1), v(1, -1, -1), v(-1, 1, -1), v(-1, -1, 1)])
        .and_then(|p| p.to_h())
        .expect("tetrahedron is valid")
}

/// Unit right triangle times `[0, 1]`.
pub fn triangular_prism() -> HPolytope {
    let r = |x: i64| rat(x, 1);
    let a = vec![
        vec![r(-1), r(0), r(0)],
        vec![r(0), r(-1), r(0)],
        vec![r(1), r(1), r(0)],
        vec![r(0), r(0), r(-1)],
        vec![r(0), r(0), r(1)],
    ];
    let b = vec![r(0), r(0), r(1), r(0), r(1)];
    HPolytope::new(3, a, b).expect("prism is valid")
}

/// Rational point on the unit sphere via inverse stereographic projection.
fn sphere_point(rng: &mut ChaCha8Rng, dim: usize) -> RVector {
    let u: Vec<Rational> = (0..dim - 1).map(|_| rat(rng.random_range(-12..=12), 8)).collect();
    let s: Rational = u.iter().map(|x| x * x).sum();
    let denom = &s + Rational::one();
    let mut p: RVector = u.iter().map(|x| x * rat(2, 1) / &denom).collect();
    let mut last = (&s - Rational::one()) / &denom;
    if rng.random_bool(0.5) {
        last = -last;
    }
    p.push(last);
    p
}

/// Seeded random polytope `{x : a_k·x <= 1}` with exactly `facets` facets.
///
/// The normals are distinct rational points on the unit sphere, so none is
/// redundant; draws whose normals do not surround the origin are unbounded
/// and get redrawn.
pub fn random_polytope(seed: u64, dim: usize, facets: usize) -> Result<HPolytope> {
    if !(1..=8).contains(&dim) {
        return Err(Error::input(format!("ambient dimension {dim} outside 1..=8")));
    }
    if facets < dim + 1 {
        return Err(Error::input(format!(
            "need at least {} facets in dimension {dim}",
            dim + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if dim == 1 {
        if facets != 2 {
            return Err(Error::input("a segment has exactly two facets"));
        }
        let hi = rat(rng.random_range(1..=16), 8);
        let lo = rat(rng.random_range(1..=16), 8);
        return HPolytope::new(1, vec![vec![rat(1, 1)], vec![rat(-1, 1)]], vec![hi, lo]);
    }
    for _ in 0..1000 {
        let mut normals: Vec<RVector> = Vec::with_capacity(facets);
        while normals.len() < facets {
            let p = sphere_point(&mut rng, dim);
            if !normals.contains(&p) {
                normals.push(p);
            }
        }
        let b = vec![Rational::one(); facets];
        match HPolytope::new(dim, normals, b) {
            Ok(p) if p.num_facets() == facets => return Ok(p),
            Ok(_) | Err(Error::Unbounded) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::internal(
        "random polytope generation kept drawing unbounded sets",
    ))
}
