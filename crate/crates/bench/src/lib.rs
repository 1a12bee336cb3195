//! Shared input sampling for the wall-clock benchmarks. The abstract
//! step-count separation lives in `wreathlog::bench`; this crate only
//! measures real time of the symbolic machinery.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wreathlog::gfgroup::{GWord, Gen};

/// Deterministic batch of random words with the given letter budget.
pub fn sample_words(seed: u64, count: usize, letters: usize) -> Vec<GWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            GWord::from_letters((0..letters).map(|_| {
                let gen = if rng.gen_bool(0.5) { Gen::F } else { Gen::S };
                let exp = loop {
                    let e = rng.gen_range(-8i64..=8);
                    if e != 0 {
                        break e;
                    }
                };
                (gen, BigInt::from(exp))
            }))
        })
        .collect()
}
