//! Deterministic sampling utilities.
//!
//! Every randomized routine takes an explicit `u64` seed and derives one
//! ChaCha stream per (seed, index) pair, so aggregate results are independent
//! of evaluation order and bit-identical across reruns.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::rat::{rat, Rat};
use crate::spaces::Measure;

/// RNG stream for sample `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    // splitmix64 mix keeps nearby (seed, index) pairs uncorrelated.
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Uniformly denominated rational in `[lo, hi]` with denominator `den`.
pub fn rat_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rat {
    let n = rng.gen_range(lo * den..=hi * den);
    rat(n, den)
}

/// A strictly positive random measure on `n` points.
pub fn interior_measure(rng: &mut ChaCha8Rng, n: usize) -> Measure {
    let parts: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=1000)).collect();
    let total: i64 = parts.iter().sum();
    Measure::new(parts.into_iter().map(|p| rat(p, total)).collect())
        .expect("positive parts normalize to a measure")
}

/// A random measure that may sit on the simplex boundary.
pub fn any_measure(rng: &mut ChaCha8Rng, n: usize) -> Measure {
    loop {
        let parts: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=1000)).collect();
        let total: i64 = parts.iter().sum();
        if total > 0 {
            return Measure::new(parts.into_iter().map(|p| rat(p, total)).collect())
                .expect("nonnegative parts normalize to a measure");
        }
    }
}

/// Random point with coordinates `k/den` in `[lo, hi]^dim`.
pub fn grid_point(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64, den: i64) -> Vec<Rat> {
    (0..dim).map(|_| rat_in(rng, lo, hi, den)).collect()
}
