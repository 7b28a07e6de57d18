//! Seeded random sources and the point distributions the testers draw from.
//!
//! The generator is ChaCha8. A [`RandomSource`] for seed `s` uses stream 0 of
//! the ChaCha8 key derived from `s`; child `i` uses stream `i` of the same
//! key, so per-trial sources are independent and reproducible no matter how
//! trials are scheduled. All integer draws go through `u64` ranges so the
//! sequence does not depend on the platform's pointer width.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distance::DependencySet;
use crate::error::{Error, Result};
use crate::point::{Assignment, Point};

#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Child source `index` of the root source for `seed`.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// The independent child stream `index` derived from this source's seed.
    pub fn child(&self, index: u64) -> Self {
        Self::with_stream(self.seed, index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform in `0..bound`. `bound` must be positive.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        self.rng.gen_range(0..bound)
    }

    #[inline]
    pub fn bit(&mut self) -> bool {
        self.rng.gen()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }
}

/// Uniform over all `2^n` points.
pub fn sample_any(n: usize, rng: &mut RandomSource) -> Point {
    let mut p = Point::zeros(n);
    let mut i = 0;
    while i < n {
        let word = rng.next_u64();
        for b in 0..64.min(n - i) {
            if word >> b & 1 == 1 {
                p.set(i + b, true);
            }
        }
        i += 64;
    }
    p
}

/// Uniform over the `2^n - 1` points other than `x`. Needs `n >= 1`.
pub fn sample_excluding(x: &Point, rng: &mut RandomSource) -> Result<Point> {
    if x.is_empty() {
        return Err(Error::Usage(
            "cannot exclude the only point of the 0-dimensional cube".into(),
        ));
    }
    loop {
        let y = sample_any(x.len(), rng);
        if &y != x {
            return Ok(y);
        }
    }
}

/// Uniform over the `2^n - 2` points other than all-zeros and all-ones.
/// Needs `n >= 2`.
pub fn sample_excluding_poles(n: usize, rng: &mut RandomSource) -> Result<Point> {
    if n < 2 {
        return Err(Error::Usage(format!(
            "excluding both poles needs at least 2 arguments, got {n}"
        )));
    }
    loop {
        let x = sample_any(n, rng);
        let w = x.weight();
        if w != 0 && w != n {
            return Ok(x);
        }
    }
}

/// Uniform over the points of weight `|x|` other than `x`.
///
/// Picks a uniform `|x|`-subset of positions by partial Fisher-Yates shuffle
/// and retries when it reproduces `x`.
pub fn sample_same_weight_excluding(x: &Point, rng: &mut RandomSource) -> Result<Point> {
    let n = x.len();
    let w = x.weight();
    if w == 0 || w == n {
        return Err(Error::Usage(format!(
            "no other point shares weight {w} with a point of arity {n}"
        )));
    }
    let mut positions: Vec<usize> = (0..n).collect();
    loop {
        let mut y = Point::zeros(n);
        for k in 0..w {
            let j = k + rng.below((n - k) as u64) as usize;
            positions.swap(k, j);
            y.set(positions[k], true);
        }
        if &y != x {
            return Ok(y);
        }
    }
}

/// Uniform over the `2^|args|` assignments to `args`. Values are drawn in
/// increasing argument order.
pub fn sample_assignment(args: &DependencySet, rng: &mut RandomSource) -> Assignment {
    args.iter().map(|i| (i, rng.bit())).collect()
}
