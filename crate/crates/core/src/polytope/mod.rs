//! Bounded full-dimensional polytopes in both descriptions, their faces and
//! face lattices.
//!
//! A face is identified by its set of tight facets. Facet indices refer to
//! the irredundant rows kept by [`HPolytope::new`]; `source_rows` maps them
//! back to the caller's row numbering.

mod dd;
mod embed;
pub mod io;
mod lattice;

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{rank, rank_nullspace, vec_ops, RMatrix, RVector, Rational};

pub use dd::{extreme_rays, primitive, Lineality, Ray};
pub use embed::FaceEmbedding;
pub use lattice::{Face, FaceId, FaceLattice};

/// `{x : A x <= b}`, bounded, full-dimensional and irredundant.
#[derive(Clone, Debug)]
pub struct HPolytope {
    dim: usize,
    a: RMatrix,
    b: RVector,
    source_rows: Vec<usize>,
    vertices: Vec<RVector>,
    vertex_facets: Vec<FixedBitSet>,
    facet_vertices: Vec<FixedBitSet>,
}

/// Convex hull of a list of extreme points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<RVector>,
}

/// Result of locating a point against the face lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    /// The unique face whose relative interior contains the point.
    Face(Face),
    Outside {
        row: usize,
    },
}

/// A polytope translated so the target sits at the origin.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub polytope: HPolytope,
    /// The original target; original coordinates are `x + shift`.
    pub shift: RVector,
    /// Set when the target lies on the boundary, so offsets could not all be scaled to one.
    pub boundary_target: bool,
}

impl HPolytope {
    /// Builds `{x : A x <= b}` from rows `a` of length `dim`.
    ///
    /// Vertices come from double description; rows that do not define a facet
    /// (redundant rows and later duplicates of a facet) are dropped.
    pub fn new(dim: usize, a: Vec<RVector>, b: RVector) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("ambient dimension must be positive"));
        }
        if a.len() != b.len() {
            return Err(Error::input(format!(
                "{} constraint rows but {} offsets",
                a.len(),
                b.len()
            )));
        }
        let a = RMatrix::new(dim, a)?;
        let f = a.rows();

        // Homogenize: (t, x) with b t - A x >= 0 and t >= 0.
        let mut cone: Vec<RVector> = (0..f)
            .map(|k| {
                let mut row = Vec::with_capacity(dim + 1);
                row.push(b[k].clone());
                row.extend(a.row(k).iter().map(|x| -x));
                row
            })
            .collect();
        let mut t_row = vec_ops::zeros(dim + 1);
        t_row[0] = Rational::one();
        cone.push(t_row);

        let rays = extreme_rays(&cone, dim + 1).map_err(|_| Error::Unbounded)?;
        if rays.is_empty() || rays.iter().all(|r| r.coords[0].is_zero()) {
            return Err(Error::Empty);
        }
        if rays.iter().any(|r| r.coords[0].is_zero()) {
            return Err(Error::Unbounded);
        }
        let mut vertices: Vec<RVector> = rays
            .iter()
            .map(|r| {
                let t = &r.coords[0];
                r.coords[1..].iter().map(|x| x / t).collect()
            })
            .collect();
        vertices.sort();

        check_full_dimensional(dim, &vertices)?;

        // Keep each facet once, in row order.
        let mut keep: Vec<usize> = Vec::new();
        let mut kept_sets: Vec<FixedBitSet> = Vec::new();
        for (k, bk) in b.iter().enumerate().take(f) {
            let tight: FixedBitSet = vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| &vec_ops::dot(a.row(k), v) == bk)
                .map(|(i, _)| i)
                .collect();
            let pts: Vec<&RVector> = tight.ones().map(|i| &vertices[i]).collect();
            if affine_rank(&pts) + 1 != dim || kept_sets.contains(&tight) {
                continue;
            }
            keep.push(k);
            kept_sets.push(tight);
        }

        let a = a.select_rows(&keep);
        let b: RVector = keep.iter().map(|&k| b[k].clone()).collect();
        Ok(Self::assemble(dim, a, b, keep, vertices))
    }

    fn assemble(dim: usize, a: RMatrix, b: RVector, source_rows: Vec<usize>, vertices: Vec<RVector>) -> Self {
        let f = a.rows();
        let mut vertex_facets = vec![FixedBitSet::with_capacity(f); vertices.len()];
        let mut facet_vertices = vec![FixedBitSet::with_capacity(vertices.len()); f];
        for (i, v) in vertices.iter().enumerate() {
            for k in 0..f {
                if vec_ops::dot(a.row(k), v) == b[k] {
                    vertex_facets[i].insert(k);
                    facet_vertices[k].insert(i);
                }
            }
        }
        Self {
            dim,
            a,
            b,
            source_rows,
            vertices,
            vertex_facets,
            facet_vertices,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_facets(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &RMatrix {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    /// Input row index each kept facet came from.
    pub fn source_rows(&self) -> &[usize] {
        &self.source_rows
    }

    pub fn vertices(&self) -> &[RVector] {
        &self.vertices
    }

    pub fn vertex_facets(&self, vertex: usize) -> &FixedBitSet {
        &self.vertex_facets[vertex]
    }

    pub fn facet_vertices(&self, facet: usize) -> &FixedBitSet {
        &self.facet_vertices[facet]
    }

    pub fn vertex_centroid(&self) -> RVector {
        vec_ops::centroid(&self.vertices)
    }

    /// Tight rows at `x`, or the first violated row.
    pub fn tight_rows(&self, x: &[Rational]) -> Result<Vec<usize>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polytope is {}-dimensional",
                x.len(),
                self.dim
            )));
        }
        let mut tight = Vec::new();
        for k in 0..self.num_facets() {
            let lhs = vec_ops::dot(self.a.row(k), x);
            if lhs > self.b[k] {
                return Err(Error::Outside { row: k });
            }
            if lhs == self.b[k] {
                tight.push(k);
            }
        }
        Ok(tight)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.tight_rows(x).is_ok()
    }

    pub fn contains_in_interior(&self, x: &[Rational]) -> bool {
        matches!(self.tight_rows(x), Ok(t) if t.is_empty())
    }

    /// Rank of the facet normals listed in `rows`.
    pub fn row_rank(&self, rows: &[usize]) -> usize {
        let sel: Vec<RVector> = rows.iter().map(|&k| self.a.row(k).to_vec()).collect();
        rank(&sel, self.dim)
    }

    /// The face cut out by making every row in `tight` an equality, or `None`
    /// if that set is empty. The returned face carries its full tight set.
    pub fn face_from_tight(&self, tight: &[usize]) -> Option<Face> {
        let mut required = FixedBitSet::with_capacity(self.num_facets());
        required.extend(tight.iter().copied());
        let verts: Vec<usize> = (0..self.vertices.len())
            .filter(|&i| required.is_subset(&self.vertex_facets[i]))
            .collect();
        if verts.is_empty() {
            return None;
        }
        Some(self.face_from_vertices(verts))
    }

    /// Face spanned by a vertex set that is known to be a face.
    pub(crate) fn face_from_vertices(&self, verts: Vec<usize>) -> Face {
        let tight = self.common_facets(&verts);
        let dim = self.dim - self.row_rank(&tight);
        self.face_with_dim(verts, tight, dim)
    }

    pub(crate) fn common_facets(&self, verts: &[usize]) -> Vec<usize> {
        let mut closure = FixedBitSet::with_capacity(self.num_facets());
        closure.insert_range(..);
        for &i in verts {
            closure.intersect_with(&self.vertex_facets[i]);
        }
        closure.ones().collect()
    }

    pub(crate) fn face_with_dim(&self, verts: Vec<usize>, tight: Vec<usize>, dim: usize) -> Face {
        let sample = vec_ops::centroid(verts.iter().map(|&i| &self.vertices[i]));
        Face::new(tight, verts, dim, sample)
    }

    pub fn top_face(&self) -> Face {
        self.face_from_vertices((0..self.vertices.len()).collect())
    }

    /// Smallest face containing `x`: the face whose relative interior holds it.
    pub fn minimal_face(&self, x: &[Rational]) -> Result<Location> {
        match self.tight_rows(x) {
            Ok(tight) => Ok(Location::Face(
                self.face_from_tight(&tight)
                    .ok_or_else(|| Error::internal("point on an empty face"))?,
            )),
            Err(Error::Outside { row }) => Ok(Location::Outside { row }),
            Err(e) => Err(e),
        }
    }

    /// Faces of dimension exactly `d`; lower faces are contained in them.
    pub fn skeleton(&self, d: usize) -> Result<Vec<Face>> {
        if d > self.dim {
            return Err(Error::input(format!(
                "skeleton dimension {d} exceeds ambient dimension {}",
                self.dim
            )));
        }
        if d == self.dim {
            return Ok(vec![self.top_face()]);
        }
        Ok(FaceLattice::new(self).faces_of_dim(d).to_vec())
    }

    /// `{x - shift : x ∈ P}`; incidences are unchanged.
    pub fn translated(&self, shift: &[Rational]) -> HPolytope {
        let b = (0..self.num_facets())
            .map(|k| &self.b[k] - vec_ops::dot(self.a.row(k), shift))
            .collect();
        let vertices = self.vertices.iter().map(|v| vec_ops::sub(v, shift)).collect();
        HPolytope {
            b,
            vertices,
            ..self.clone()
        }
    }

    /// Divides each row by its (positive) offset so every offset becomes one.
    pub fn with_unit_offsets(&self) -> Result<HPolytope> {
        if self.b.iter().any(|x| !x.is_positive()) {
            return Err(Error::input("unit offsets need the origin in the interior"));
        }
        let rows = (0..self.num_facets())
            .map(|k| vec_ops::scale(self.a.row(k), &self.b[k].recip()))
            .collect();
        Ok(HPolytope {
            a: RMatrix::new(self.dim, rows)?,
            b: vec![Rational::one(); self.num_facets()],
            ..self.clone()
        })
    }

    /// Translates `p` to the origin and, when `p` is interior, rescales rows to `A x <= 1`.
    pub fn normalize_to_unit_form(&self, p: &[Rational]) -> Result<Normalized> {
        let tight = self.tight_rows(p)?;
        let moved = self.translated(p);
        let boundary_target = !tight.is_empty();
        let polytope = if boundary_target {
            moved
        } else {
            moved.with_unit_offsets()?
        };
        Ok(Normalized {
            polytope,
            shift: p.to_vec(),
            boundary_target,
        })
    }

    pub fn to_v(&self) -> VPolytope {
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.clone(),
        }
    }

    /// Reorders nothing; rebuilds from scratch. Used to re-validate perturbed data.
    pub fn rebuild(&self) -> Result<HPolytope> {
        HPolytope::new(self.dim, self.a.row_vectors().to_vec(), self.b.clone())
    }
}

impl VPolytope {
    /// Validates that every listed point is extreme and the hull is full-dimensional.
    pub fn new(dim: usize, vertices: Vec<RVector>) -> Result<Self> {
        let hull = Self::hull(dim, vertices.clone())?;
        if hull.vertices.len() != vertices.len() {
            return Err(Error::input(format!(
                "{} of {} listed points are not extreme",
                vertices.len() - hull.vertices.len(),
                vertices.len()
            )));
        }
        Ok(Self { dim, vertices })
    }

    /// Convex hull of arbitrary points; keeps only the extreme ones (sorted).
    pub fn hull(dim: usize, points: Vec<RVector>) -> Result<Self> {
        Ok(Self::hull_h(dim, &points)?.to_v())
    }

    fn hull_h(dim: usize, points: &[RVector]) -> Result<HPolytope> {
        if dim == 0 {
            return Err(Error::input("ambient dimension must be positive"));
        }
        if points.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        check_full_dimensional(dim, points)?;
        // Valid inequalities (b, a) with b - a·v >= 0 form a pointed cone whose
        // extreme rays with a != 0 are the facets.
        let rows: Vec<RVector> = points
            .iter()
            .map(|v| {
                let mut r = Vec::with_capacity(dim + 1);
                r.push(Rational::one());
                r.extend(v.iter().map(|x| -x));
                r
            })
            .collect();
        let rays = extreme_rays(&rows, dim + 1)
            .map_err(|_| Error::internal("full-dimensional hull produced a lineality space"))?;
        let (a, b): (Vec<RVector>, RVector) = rays
            .into_iter()
            .filter(|r| r.coords[1..].iter().any(|x| !x.is_zero()))
            .map(|r| (r.coords[1..].to_vec(), r.coords[0].clone()))
            .unzip();
        HPolytope::new(dim, a, b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RVector] {
        &self.vertices
    }

    pub fn to_h(&self) -> Result<HPolytope> {
        Self::hull_h(self.dim, &self.vertices)
    }
}

/// Either description, for [`dual_description`].
#[derive(Clone, Debug)]
pub enum Description {
    H(HPolytope),
    V(VPolytope),
}

/// Converts a polytope to the other description.
pub fn dual_description(input: &Description) -> Result<Description> {
    Ok(match input {
        Description::H(h) => Description::V(h.to_v()),
        Description::V(v) => Description::H(v.to_h()?),
    })
}

/// Dimension of the affine hull of `points` (0 for a single point).
pub fn affine_rank(points: &[&RVector]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<RVector> = rest.iter().map(|p| vec_ops::sub(p, first)).collect();
    rank(&diffs, first.len())
}

fn check_full_dimensional(dim: usize, points: &[RVector]) -> Result<()> {
    let refs: Vec<&RVector> = points.iter().collect();
    let affine_dim = affine_rank(&refs);
    if affine_dim == dim {
        return Ok(());
    }
    let diffs: Vec<RVector> = points[1..].iter().map(|p| vec_ops::sub(p, &points[0])).collect();
    let diffs = if diffs.is_empty() {
        RMatrix::zeros(1, dim)
    } else {
        RMatrix::new(dim, diffs)?
    };
    let (_, normals) = rank_nullspace(&diffs);
    let equations = normals
        .into_iter()
        .map(|n| {
            let rhs = vec_ops::dot(&n, &points[0]);
            (n, rhs)
        })
        .collect();
    Err(Error::NotFullDimensional {
        affine_dim,
        ambient_dim: dim,
        equations,
    })
}
