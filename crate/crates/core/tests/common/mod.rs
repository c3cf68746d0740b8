#![allow(dead_code)]

use foxcalc::Word;
use proptest::prelude::*;
use rand::Rng;

/// Freely reduced word built from up to `max_len` random letters.
pub fn random_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_raw((0..len).map(|_| {
        let g = rng.gen_range(0..rank);
        (g, if rng.gen_bool(0.5) { 1i64 } else { -1 })
    }))
}

/// Product of `1..=max_count` commutators of random words.
pub fn random_commutator_product(
    rng: &mut impl Rng,
    rank: usize,
    max_count: usize,
    len: usize,
) -> Word {
    let count = rng.gen_range(1..=max_count);
    let mut acc = Word::identity();
    for _ in 0..count {
        let a = random_word(rng, rank, len);
        let b = random_word(rng, rank, len);
        acc.mul_assign(&Word::commutator(&a, &b));
    }
    acc
}

pub fn word(rank: usize, max_syllables: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, -3i64..=3), 0..=max_syllables)
        .prop_map(|raw| Word::from_raw(raw.into_iter().filter(|(_, e)| *e != 0)))
}

/// Words that tend to lie deep in the lower central series.
pub fn commutator_word(rank: usize) -> impl Strategy<Value = Word> {
    (
        word(rank, 3),
        word(rank, 3),
        word(rank, 3),
        0usize..3,
        word(rank, 2),
    )
        .prop_map(|(a, b, c, shape, tail)| match shape {
            0 => Word::commutator(&a, &b),
            1 => Word::left_normed(&[a, b, c]).unwrap(),
            _ => Word::commutator(&a, &b).mul(&Word::commutator(&tail, &c)),
        })
}
