use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::polytope::HPolytope;

/// Resolution of the random entries: each is `magnitude · k / STEPS`.
const STEPS: i64 = 1024;

/// `P_ε = {x : (A + ε) x <= 1}` with `ε` drawn from `seed`, `|ε_kj| <= magnitude`.
///
/// Facet `k` of the result comes from row `source_rows()[k]` of `p`.
pub fn perturb(p: &HPolytope, seed: u64, magnitude: &Rational) -> Result<HPolytope> {
    if p.b().iter().any(|b| !b.is_one()) {
        return Err(Error::input("perturbation expects the form A x <= 1"));
    }
    if magnitude < &Rational::zero() {
        return Err(Error::input("perturbation magnitude must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = magnitude / Rational::from_integer(STEPS.into());
    let rows = p
        .a()
        .row_vectors()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x + &scale * Rational::from_integer(rng.random_range(-STEPS..=STEPS).into()))
                .collect()
        })
        .collect();
    match HPolytope::new(p.dim(), rows, p.b().to_vec()) {
        Ok(out) => Ok(out),
        Err(Error::Unbounded | Error::Empty | Error::NotFullDimensional { .. }) => {
            Err(Error::PerturbationTooLarge(magnitude.clone()))
        }
        Err(e) => Err(e),
    }
}
