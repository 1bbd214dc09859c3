use super::{Face, HPolytope};
use crate::error::Result;
use crate::numeric::{rank_nullspace, rref, vec_ops, RVector, Rational};

/// A face of `P` rebuilt as a full-dimensional polytope in its affine hull.
///
/// Local coordinates are `x = origin + Σ t_j basis_j`. The basis comes from
/// the RREF nullspace of the tight rows, so `t_j` is simply coordinate
/// `free[j]` of `x - origin`.
#[derive(Clone, Debug)]
pub struct FaceEmbedding {
    origin: RVector,
    basis: Vec<RVector>,
    free: Vec<usize>,
    polytope: HPolytope,
    /// Facet of `polytope` -> facet of the parent.
    parent_facets: Vec<usize>,
}

impl FaceEmbedding {
    pub fn new(parent: &HPolytope, face: &Face) -> Result<Self> {
        let tight_rows = parent.a().select_rows(face.tight_facets());
        let (_, basis) = rank_nullspace(&tight_rows);
        let (_, pivots) = rref(tight_rows.row_vectors(), parent.dim());
        let free: Vec<usize> = (0..parent.dim()).filter(|j| !pivots.contains(j)).collect();
        let origin = face.sample().clone();

        let outside: Vec<usize> = (0..parent.num_facets())
            .filter(|k| face.tight_facets().binary_search(k).is_err())
            .collect();
        let rows: Vec<RVector> = outside
            .iter()
            .map(|&k| basis.iter().map(|n| vec_ops::dot(parent.a().row(k), n)).collect())
            .collect();
        let offsets: RVector = outside
            .iter()
            .map(|&k| &parent.b()[k] - vec_ops::dot(parent.a().row(k), &origin))
            .collect();
        let polytope = HPolytope::new(basis.len(), rows, offsets)?;
        let parent_facets = polytope.source_rows().iter().map(|&i| outside[i]).collect();
        Ok(Self {
            origin,
            basis,
            free,
            polytope,
            parent_facets,
        })
    }

    pub fn polytope(&self) -> &HPolytope {
        &self.polytope
    }

    pub fn parent_facets(&self) -> &[usize] {
        &self.parent_facets
    }

    pub fn to_parent(&self, local: &[Rational]) -> RVector {
        let mut x = self.origin.clone();
        for (t, n) in local.iter().zip(&self.basis) {
            for (xi, ni) in x.iter_mut().zip(n) {
                *xi += t * ni;
            }
        }
        x
    }

    /// Local coordinates of a point lying in the affine hull.
    pub fn to_local(&self, x: &[Rational]) -> RVector {
        self.free.iter().map(|&j| &x[j] - &self.origin[j]).collect()
    }
}
