//! Seeded inputs for the benchmarks.

use foxcalc::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` freely reduced words of up to `len` random letters.
pub fn words(seed: u64, count: usize, rank: usize, len: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            Word::from_raw((0..len).map(|_| {
                let g = rng.gen_range(0..rank);
                (g, if rng.gen_bool(0.5) { 1i64 } else { -1 })
            }))
        })
        .collect()
}

/// Second commutators `[[a,b],[c,d]]` of random words, all trivial in `F/F''`.
pub fn second_commutators(seed: u64, count: usize, rank: usize, len: usize) -> Vec<Word> {
    let pool = words(seed, 4 * count, rank, len);
    pool.chunks(4)
        .map(|c| {
            Word::commutator(
                &Word::commutator(&c[0], &c[1]),
                &Word::commutator(&c[2], &c[3]),
            )
        })
        .collect()
}
