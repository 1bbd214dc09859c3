//! The topological existence proof, run as exact computation.
//!
//! For `P = {x : A x <= 1}` of dimension `n·d` and the target at the origin,
//! `Q = Pⁿ ∩ X` collects the `n`-tuples of points of `P` whose barycenter is
//! the origin. Each face `F` of `Q` is labeled by the faces `E_1, …, E_n` of
//! `P` holding its columns, and `φ_i(q_F) = dim E_i − (1/n) Σ_j dim E_j` on
//! the barycentric subdivision. A zero of `φ` on the `(n−1)`-skeleton of `Q`
//! sits at a vertex whose columns all lie in `d`-faces, which is a
//! decomposition of the target.

mod perturb;
mod pipeline;
mod search;

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{vec_ops, RVector, Rational};
use crate::polytope::{Face, FaceId, FaceLattice, HPolytope};

pub use perturb::perturb;
pub use pipeline::{decompose_via_proof, run_proof, ProofConfig, ProofRun, TraceRecord};
pub use search::{descend_to_vertex, find_phi_zero, Chain, Descent};

/// `Q = Pⁿ ∩ X` in X-coordinates, with its face lattice and labels.
///
/// X-coordinates list the first `n − 1` columns; the last column is minus
/// their sum, so `Q` is full-dimensional in `R^{(n−1)·dim P}`.
#[derive(Clone, Debug)]
pub struct QComplex {
    n: usize,
    d: usize,
    p: HPolytope,
    q: HPolytope,
    lattice: FaceLattice,
    labels: Vec<Vec<Face>>,
    phi: PhiMap,
    violations: Vec<GenericityViolation>,
}

/// `φ(q_F)` for every face `F` of `Q`, indexed like the face lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMap {
    values: Vec<RVector>,
}

impl PhiMap {
    pub fn value(&self, face: FaceId) -> &RVector {
        &self.values[face.0]
    }

    pub fn values(&self) -> &[RVector] {
        &self.values
    }
}

/// A face of `Q` whose dimension differs from `Σ dim E_i − dim P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityViolation {
    pub face: FaceId,
    pub dim: usize,
    pub label_dims: Vec<usize>,
    pub expected: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Genericity {
    Generic,
    Violations(Vec<GenericityViolation>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivariance {
    Pass,
    Fail(Vec<String>),
}

/// Builds `Q` for `P` with the origin in its interior.
pub fn build_q(p: &HPolytope, n: usize) -> Result<QComplex> {
    if n < 2 {
        return Err(Error::input("Q needs at least two columns"));
    }
    if !p.dim().is_multiple_of(n) {
        return Err(Error::DimensionMismatch(format!(
            "dimension {} is not divisible by {n}",
            p.dim()
        )));
    }
    if p.b().iter().any(|b| !b.is_positive()) {
        return Err(Error::input(
            "the origin must be interior; boundary targets go through an interior sequence",
        ));
    }
    let dim = p.dim();
    let f = p.num_facets();
    let qdim = (n - 1) * dim;
    let mut rows = Vec::with_capacity(n * f);
    let mut rhs = Vec::with_capacity(n * f);
    for i in 0..n {
        for k in 0..f {
            let mut row = vec![Rational::zero(); qdim];
            let a = p.a().row(k);
            for block in 0..n - 1 {
                if i == n - 1 || block == i {
                    for (j, x) in a.iter().enumerate() {
                        row[block * dim + j] = if i == n - 1 { -x } else { x.clone() };
                    }
                }
            }
            rows.push(row);
            rhs.push(p.b()[k].clone());
        }
    }
    let q = HPolytope::new(qdim, rows, rhs)?;
    let lattice = FaceLattice::new(&q);

    let mut qc = QComplex {
        n,
        d: dim / n,
        p: p.clone(),
        q,
        labels: Vec::new(),
        lattice,
        phi: PhiMap { values: Vec::new() },
        violations: Vec::new(),
    };
    qc.labels = qc.face_labels();
    qc.phi = PhiMap {
        values: qc.labels.iter().map(|l| phi_of(l, n)).collect(),
    };
    qc.violations = qc.find_violations();
    Ok(qc)
}

fn phi_of(label: &[Face], n: usize) -> RVector {
    let total: usize = label.iter().map(Face::dim).sum();
    let mean = Rational::new(total.into(), n.into());
    label
        .iter()
        .map(|e| Rational::from_integer(e.dim().into()) - &mean)
        .collect()
}

impl QComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The polytope `P` that `Q` was built from.
    pub fn base(&self) -> &HPolytope {
        &self.p
    }

    /// `Q` itself in X-coordinates.
    pub fn polytope(&self) -> &HPolytope {
        &self.q
    }

    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    /// Dimension of the product space `(R^{dim P})ⁿ`.
    pub fn product_dim(&self) -> usize {
        self.n * self.p.dim()
    }

    /// A basis of `X` in product coordinates: `e_{i,j} − e_{n,j}` for `i < n`.
    pub fn x_basis(&self) -> Vec<RVector> {
        let dim = self.p.dim();
        let mut out = Vec::with_capacity((self.n - 1) * dim);
        for i in 0..self.n - 1 {
            for j in 0..dim {
                let mut v = vec![Rational::zero(); self.product_dim()];
                v[i * dim + j] = Rational::from_integer(1.into());
                v[(self.n - 1) * dim + j] = Rational::from_integer((-1).into());
                out.push(v);
            }
        }
        out
    }

    /// The `n` columns of a point given in X-coordinates.
    pub fn columns(&self, y: &[Rational]) -> Vec<RVector> {
        let dim = self.p.dim();
        let mut cols: Vec<RVector> = y.chunks(dim).map(|c| c.to_vec()).collect();
        let mut last = vec![Rational::zero(); dim];
        for c in &cols {
            last = vec_ops::sub(&last, c);
        }
        cols.push(last);
        cols
    }

    /// X-coordinates of columns that sum to zero.
    pub fn from_columns(&self, cols: &[RVector]) -> Result<RVector> {
        if cols.len() != self.n || cols.iter().any(|c| c.len() != self.p.dim()) {
            return Err(Error::DimensionMismatch("wrong column shape".into()));
        }
        let mut sum = vec![Rational::zero(); self.p.dim()];
        for c in cols {
            sum = vec_ops::add(&sum, c);
        }
        if sum.iter().any(|x| !x.is_zero()) {
            return Err(Error::input("columns do not sum to zero"));
        }
        Ok(cols[..self.n - 1].concat())
    }

    /// The faces of `P` whose relative interiors hold the columns of `y`.
    pub fn label_point(&self, y: &[Rational]) -> Result<Vec<Face>> {
        self.columns(y)
            .iter()
            .map(|x| {
                let tight = self.p.tight_rows(x)?;
                self.p
                    .face_from_tight(&tight)
                    .ok_or_else(|| Error::internal("column lies on an empty face"))
            })
            .collect()
    }

    /// `(E_1, …, E_n)` with `F = (E_1 × ⋯ × E_n) ∩ X`.
    pub fn label(&self, face: FaceId) -> &[Face] {
        &self.labels[face.0]
    }

    pub fn label_dims(&self, face: FaceId) -> Vec<usize> {
        self.label(face).iter().map(Face::dim).collect()
    }

    pub fn phi(&self) -> &PhiMap {
        &self.phi
    }

    pub fn is_generic(&self) -> bool {
        self.violations.is_empty()
    }

    /// Faces of dimension at most `n − 1`.
    pub fn t_skeleton(&self) -> Vec<FaceId> {
        (0..self.n).flat_map(|k| self.lattice.ids_of_dim(k)).collect()
    }

    /// Labels from tight-row bookkeeping: input row `(i, k)` is tight on a
    /// face of `Q` iff it is tight at all of its vertices, and then facet `k`
    /// of `P` is tight on column `i`.
    fn face_labels(&self) -> Vec<Vec<Face>> {
        let f = self.p.num_facets();
        let vertex_tight: Vec<FixedBitSet> = self
            .q
            .vertices()
            .iter()
            .map(|y| {
                let mut bits = FixedBitSet::with_capacity(self.n * f);
                for (i, x) in self.columns(y).iter().enumerate() {
                    for k in 0..f {
                        if vec_ops::dot(self.p.a().row(k), x) == self.p.b()[k] {
                            bits.insert(i * f + k);
                        }
                    }
                }
                bits
            })
            .collect();

        let nv = self.p.vertices().len();
        let mut cache: HashMap<FixedBitSet, Face> = HashMap::new();
        self.lattice
            .faces()
            .iter()
            .map(|face| {
                let mut tight = FixedBitSet::with_capacity(self.n * f);
                tight.insert_range(..);
                for &v in face.vertices() {
                    tight.intersect_with(&vertex_tight[v]);
                }
                (0..self.n)
                    .map(|i| {
                        let mut verts = FixedBitSet::with_capacity(nv);
                        verts.insert_range(..);
                        for k in 0..f {
                            if tight.contains(i * f + k) {
                                verts.intersect_with(self.p.facet_vertices(k));
                            }
                        }
                        cache
                            .entry(verts)
                            .or_insert_with_key(|verts| self.p.face_from_vertices(verts.ones().collect()))
                            .clone()
                    })
                    .collect()
            })
            .collect()
    }

    fn find_violations(&self) -> Vec<GenericityViolation> {
        let nd = self.p.dim() as i64;
        self.lattice
            .faces()
            .iter()
            .enumerate()
            .filter_map(|(i, face)| {
                let label_dims = self.label_dims(FaceId(i));
                let expected = label_dims.iter().sum::<usize>() as i64 - nd;
                (expected != face.dim() as i64).then_some(GenericityViolation {
                    face: FaceId(i),
                    dim: face.dim(),
                    label_dims,
                    expected,
                })
            })
            .collect()
    }
}

/// Checks `dim F = Σ dim E_i − dim P` on every face of `Q`.
pub fn check_genericity(q: &QComplex) -> Genericity {
    if q.violations.is_empty() {
        Genericity::Generic
    } else {
        Genericity::Violations(q.violations.clone())
    }
}

/// Cyclic column shift `g`: column `i` of `g·x` is column `i + 1` of `x`.
fn shift<T: Clone>(v: &[T]) -> Vec<T> {
    let mut out = v[1..].to_vec();
    out.push(v[0].clone());
    out
}

/// Checks that `g` permutes the faces of `Q`, shifts their labels, and
/// shifts `φ` accordingly.
pub fn check_equivariance(q: &QComplex) -> Equivariance {
    let mut failures = Vec::new();
    for (i, face) in q.lattice.faces().iter().enumerate() {
        let id = FaceId(i);
        let moved = match q.from_columns(&shift(&q.columns(face.sample()))) {
            Ok(y) => y,
            Err(e) => {
                failures.push(format!("face {i}: {e}"));
                continue;
            }
        };
        let image = match q.q.tight_rows(&moved) {
            Ok(tight) => q.lattice.find(&tight),
            Err(_) => None,
        };
        let Some(image) = image else {
            failures.push(format!(
                "face {i}: shifted sample is not in the relative interior of a face"
            ));
            continue;
        };
        if q.lattice.face(image).sample() != &moved {
            failures.push(format!("face {i}: shifted barycenter differs"));
        }
        if q.label_dims(image) != shift(&q.label_dims(id))
            || q.label(image)
                .iter()
                .zip(shift(q.label(id)))
                .any(|(a, b)| a.tight_facets() != b.tight_facets())
        {
            failures.push(format!("face {i}: label is not the shifted label"));
        }
        if q.phi.value(image) != &shift(q.phi.value(id)) {
            failures.push(format!("face {i}: φ is not the shifted value"));
        }
    }
    if failures.is_empty() {
        Equivariance::Pass
    } else {
        Equivariance::Fail(failures)
    }
}

#[cfg(test)]
mod tests;
