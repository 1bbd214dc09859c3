use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::HPolytope;
use crate::numeric::RVector;

/// A nonempty face, identified by the facets tight on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    tight_facets: Vec<usize>,
    vertices: Vec<usize>,
    dim: usize,
    sample: RVector,
}

impl Face {
    pub(crate) fn new(tight_facets: Vec<usize>, vertices: Vec<usize>, dim: usize, sample: RVector) -> Self {
        Self {
            tight_facets,
            vertices,
            dim,
            sample,
        }
    }

    /// Sorted facet indices tight on the whole face.
    pub fn tight_facets(&self) -> &[usize] {
        &self.tight_facets
    }

    /// Sorted indices into [`HPolytope::vertices`].
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertex centroid; lies in the relative interior.
    pub fn sample(&self) -> &RVector {
        &self.sample
    }

    /// `self ⊆ other`, decided on tight sets.
    pub fn is_subface_of(&self, other: &Face) -> bool {
        other
            .tight_facets
            .iter()
            .all(|k| self.tight_facets.binary_search(k).is_ok())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceId(pub usize);

/// All nonempty faces, ordered by dimension and then lexicographically by
/// tight-facet set. The top face is last.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    faces: Vec<Face>,
    by_dim: Vec<std::ops::Range<usize>>,
    index: HashMap<Vec<usize>, FaceId>,
}

impl FaceLattice {
    /// Enumerates faces by intersecting known faces with facets until closed.
    pub fn new(p: &HPolytope) -> Self {
        let nv = p.vertices().len();
        let mut all = FixedBitSet::with_capacity(nv);
        all.insert_range(..);

        // Breadth-first closure under intersection with facets. The children
        // of a face include all of its maximal proper subfaces, so the
        // dimension is one more than the largest child dimension.
        let mut ids: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut sets = vec![all.clone()];
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        ids.insert(all, 0);
        let mut next = 0;
        while next < sets.len() {
            let face = sets[next].clone();
            for k in 0..p.num_facets() {
                let facet = p.facet_vertices(k);
                if face.is_subset(facet) {
                    continue;
                }
                let mut sub = face.clone();
                sub.intersect_with(facet);
                if sub.is_clear() {
                    continue;
                }
                let id = *ids.entry(sub.clone()).or_insert_with(|| {
                    sets.push(sub);
                    children.push(Vec::new());
                    sets.len() - 1
                });
                children[next].push(id);
            }
            next += 1;
        }

        let mut order: Vec<usize> = (0..sets.len()).collect();
        order.sort_by_key(|&i| sets[i].count_ones(..));
        let mut dims = vec![0usize; sets.len()];
        for &i in &order {
            dims[i] = children[i].iter().map(|&c| dims[c] + 1).max().unwrap_or(0);
        }

        let mut faces: Vec<Face> = sets
            .into_iter()
            .zip(dims)
            .map(|(s, dim)| {
                let verts: Vec<usize> = s.ones().collect();
                let tight = p.common_facets(&verts);
                p.face_with_dim(verts, tight, dim)
            })
            .collect();
        faces.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then_with(|| a.tight_facets.cmp(&b.tight_facets))
        });

        let mut by_dim = Vec::with_capacity(p.dim() + 1);
        let mut start = 0;
        for d in 0..=p.dim() {
            let end = start + faces[start..].iter().take_while(|f| f.dim == d).count();
            by_dim.push(start..end);
            start = end;
        }
        let index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.tight_facets.clone(), FaceId(i)))
            .collect();
        Self { faces, by_dim, index }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id.0]
    }

    pub fn faces_of_dim(&self, d: usize) -> &[Face] {
        match self.by_dim.get(d) {
            Some(r) => &self.faces[r.clone()],
            None => &[],
        }
    }

    pub fn ids_of_dim(&self, d: usize) -> impl Iterator<Item = FaceId> + '_ {
        self.by_dim.get(d).cloned().unwrap_or(0..0).map(FaceId)
    }

    pub fn find(&self, tight_facets: &[usize]) -> Option<FaceId> {
        self.index.get(tight_facets).copied()
    }

    pub fn top(&self) -> FaceId {
        FaceId(self.faces.len() - 1)
    }

    /// Number of faces of each dimension `0..=D`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|r| r.len()).collect()
    }

    /// Faces of dimension `dim(face) - 1` contained in `face`.
    pub fn facets_of(&self, id: FaceId) -> Vec<FaceId> {
        let f = self.face(id);
        if f.dim == 0 {
            return Vec::new();
        }
        self.ids_of_dim(f.dim - 1)
            .filter(|&g| self.face(g).is_subface_of(f))
            .collect()
    }

    /// `Σ (-1)^k f_k` over all nonempty faces including the top; equals one.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}
