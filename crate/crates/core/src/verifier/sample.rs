use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::{RVector, Rational};

/// Deterministic source of dyadic rational samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sampler {
    pub seed: u64,
    pub count: usize,
    /// Barycentric weights are multiples of `2^-bits`.
    pub bits: u32,
}

impl Sampler {
    pub fn new(seed: u64, count: usize) -> Self {
        Self { seed, count, bits: 4 }
    }

    /// An independent generator for one use of this sampler.
    pub fn stream(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Convex combination of `points` whose weights are multiples of `2^-bits`:
/// each of the `2^bits` units goes to a uniformly chosen point.
pub fn dyadic_combination<R: Rng>(rng: &mut R, points: &[&RVector], bits: u32) -> RVector {
    let units = 1u64 << bits;
    let mut counts = vec![0u64; points.len()];
    for _ in 0..units {
        counts[rng.random_range(0..points.len())] += 1;
    }
    let dim = points[0].len();
    let mut out = vec![Rational::from_integer(0.into()); dim];
    for (p, &c) in points.iter().zip(&counts) {
        if c == 0 {
            continue;
        }
        let w = Rational::new(c.into(), units.into());
        for (o, x) in out.iter_mut().zip(p.iter()) {
            *o += &w * x;
        }
    }
    out
}
