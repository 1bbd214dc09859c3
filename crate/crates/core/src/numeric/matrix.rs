use num_traits::{One, Zero};

use super::rational::{RVector, Rational};
use crate::error::{Error, Result};

/// Dense row-major rational matrix with explicit shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RVector>,
}

impl RMatrix {
    pub fn new(cols: usize, data: Vec<RVector>) -> Result<Self> {
        if let Some((i, r)) = data.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::input(format!(
                "row {i} has length {}, expected {cols}",
                r.len()
            )));
        }
        Ok(Self {
            rows: data.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[RVector] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<RVector> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RVector {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        self.data.iter().map(|r| super::vec_ops::dot(r, v)).collect()
    }

    /// Submatrix made of the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> RMatrix {
        RMatrix {
            rows: idx.len(),
            cols: self.cols,
            data: idx.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }
}

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped) and
/// the pivot column of each.
pub fn rref(rows: &[RVector], cols: usize) -> (Vec<RVector>, Vec<usize>) {
    let mut m: Vec<RVector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[RVector], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

/// Rank and a nullspace basis of `m`.
///
/// The basis is the standard one read off the RREF: the vector for free
/// column `j` has a one at `j` and zeros at every other free column.
pub fn rank_nullspace(m: &RMatrix) -> (usize, Vec<RVector>) {
    let cols = m.cols();
    let (reduced, pivots) = rref(m.row_vectors(), cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let basis = (0..cols)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect();
    (pivots.len(), basis)
}
