//! Double description: extreme rays of a pointed cone `{y : M y >= 0}`.
//!
//! Rows are inserted in index order after an initial simplicial cone built
//! from the first linearly independent rows. Adjacency uses the
//! combinatorial test: two rays are adjacent iff no third ray is tight on
//! every row they share.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::numeric::{rref, vec_ops, RVector, Rational};

/// The cone contains a line; its rows have rank below the ambient dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lineality {
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct Ray {
    pub coords: RVector,
    /// Rows `k` with `M_k · y = 0`.
    pub zero_set: FixedBitSet,
}

/// Extreme rays of `{y ∈ R^dim : rows_k · y >= 0}`. Each ray is scaled to a
/// primitive integer vector.
pub fn extreme_rays(rows: &[RVector], dim: usize) -> Result<Vec<Ray>, Lineality> {
    let nrows = rows.len();

    // Greedy independent prefix in index order.
    let mut basis_rows: Vec<usize> = Vec::with_capacity(dim);
    let mut acc: Vec<RVector> = Vec::with_capacity(dim);
    for (k, row) in rows.iter().enumerate() {
        if basis_rows.len() == dim {
            break;
        }
        acc.push(row.clone());
        if rref(&acc, dim).1.len() == acc.len() {
            basis_rows.push(k);
        } else {
            acc.pop();
        }
    }
    if basis_rows.len() < dim {
        return Err(Lineality {
            rank: basis_rows.len(),
        });
    }

    // Initial rays: columns of the inverse of the selected square block.
    let inverse_cols = invert_columns(&acc, dim);
    let mut rays: Vec<Ray> = inverse_cols
        .into_iter()
        .enumerate()
        .map(|(j, col)| {
            let mut zero_set = FixedBitSet::with_capacity(nrows);
            for (i, &k) in basis_rows.iter().enumerate() {
                if i != j {
                    zero_set.insert(k);
                }
            }
            Ray {
                coords: primitive(&col),
                zero_set,
            }
        })
        .collect();

    let mut in_basis = vec![false; nrows];
    for &k in &basis_rows {
        in_basis[k] = true;
    }

    for k in (0..nrows).filter(|&k| !in_basis[k]) {
        let row = &rows[k];
        let values: Vec<Rational> = rays.iter().map(|r| vec_ops::dot(row, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (ray, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    ray.zero_set.insert(k);
                }
            }
            continue;
        }

        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zero_set.clone();
                common.intersect_with(&rays[q].zero_set);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !common.is_subset(&r.zero_set));
                if !adjacent {
                    continue;
                }
                // values[p] > 0 > values[q]; the combination is tight on row k.
                let coords: RVector = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(yq, yp)| &values[p] * yq - &values[q] * yp)
                    .collect();
                common.insert(k);
                created.push(Ray {
                    coords: primitive(&coords),
                    zero_set: common,
                });
            }
        }

        let mut next = Vec::with_capacity(rays.len() + created.len());
        for (mut ray, v) in rays.into_iter().zip(&values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                ray.zero_set.insert(k);
            }
            next.push(ray);
        }
        next.extend(created);
        rays = next;
    }
    Ok(rays)
}

/// Columns of `m^{-1}` for a nonsingular square `m`.
fn invert_columns(m: &[RVector], n: usize) -> Vec<RVector> {
    let augmented: Vec<RVector> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (reduced, _) = rref(&augmented, 2 * n);
    (0..n)
        .map(|j| (0..n).map(|i| reduced[i][n + j].clone()).collect())
        .collect()
}

/// Positive rescaling of `v` to coprime integers.
pub fn primitive(v: &[Rational]) -> RVector {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn ints(v: &[i64]) -> RVector {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn positive_orthant_has_unit_rays() {
        let rows = vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])];
        let rays = extreme_rays(&rows, 3).unwrap();
        assert_eq!(rays.len(), 3);
    }

    #[test]
    fn square_cone_has_four_rays() {
        // Homogenized [-1,1]^2: t - x >= 0, t + x >= 0, t - y >= 0, t + y >= 0.
        let rows = vec![
            ints(&[1, -1, 0]),
            ints(&[1, 1, 0]),
            ints(&[1, 0, -1]),
            ints(&[1, 0, 1]),
        ];
        let mut rays: Vec<RVector> = extreme_rays(&rows, 3)
            .unwrap()
            .into_iter()
            .map(|r| r.coords)
            .collect();
        rays.sort();
        let mut expected = vec![
            ints(&[1, 1, 1]),
            ints(&[1, 1, -1]),
            ints(&[1, -1, 1]),
            ints(&[1, -1, -1]),
        ];
        expected.sort();
        assert_eq!(rays, expected);
    }

    #[test]
    fn lineality_is_reported() {
        let rows = vec![ints(&[1, 0]), ints(&[2, 0])];
        assert_eq!(extreme_rays(&rows, 2).unwrap_err(), Lineality { rank: 1 });
    }

    #[test]
    fn primitive_clears_denominators() {
        assert_eq!(primitive(&[rat(1, 2), rat(-3, 4), rat(0, 1)]), ints(&[2, -3, 0]));
    }
}
