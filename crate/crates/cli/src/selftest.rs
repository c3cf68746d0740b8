//! Seeded cross-checks of the solvers against the independent oracles.

use std::fmt;

use foxcalc::{
    collect, finite_probe, fox_derivative, truncated_series_eval, wreath_eval, Error, Quotient,
    RingElement, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({ "check": self.name, "ok": self.ok, "detail": self.detail })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.ok { "ok  " } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_raw((0..len).map(|_| {
        (
            rng.gen_range(0..rank),
            if rng.gen_bool(0.5) { 1 } else { -1 },
        )
    }))
}

/// Mix of random words, commutators and second commutators.
fn corpus(rng: &mut ChaCha8Rng, trials: usize) -> Vec<(usize, Word)> {
    (0..trials)
        .map(|n| {
            let rank = rng.gen_range(2..=3);
            let c = |rng: &mut ChaCha8Rng| {
                let a = random_word(rng, rank, 3);
                Word::commutator(&a, &random_word(rng, rank, 3))
            };
            let w = match n % 3 {
                0 => random_word(rng, rank, 16),
                1 => c(rng),
                _ => {
                    let (p, q) = (c(rng), c(rng));
                    Word::commutator(&p, &q)
                }
            };
            (rank, w)
        })
        .collect()
}

pub fn run(trials: usize, seed: u64) -> Result<Vec<Check>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = corpus(&mut rng, trials);
    let mut report = Vec::new();

    let mut disagree = 0;
    let mut probe_conflict = 0;
    let mut witnessed = 0;
    let mut nontrivial = 0;
    for (n, (rank, w)) in words.iter().enumerate() {
        let trivial = Quotient::metabelian(*rank).is_identity(w)?;
        disagree += usize::from(trivial != wreath_eval(w, *rank)?.is_identity());
        let probe = finite_probe(w, 20, seed.wrapping_add(n as u64));
        if trivial {
            probe_conflict += usize::from(probe.is_some());
        } else {
            nontrivial += 1;
            witnessed += usize::from(probe.is_some());
        }
    }
    report.push(Check {
        name: "metabelian word problem vs wreath model",
        ok: disagree == 0,
        detail: format!("{} words, {disagree} disagreements", words.len()),
    });
    report.push(Check {
        name: "finite affine probes",
        ok: probe_conflict == 0,
        detail: format!(
            "{witnessed}/{nontrivial} nontrivial words witnessed, {probe_conflict} conflicts"
        ),
    });

    let mut disagree = 0;
    for (rank, w) in &words {
        for c in 2..=4 {
            let by_collection = collect(w, *rank, c)?.is_identity();
            disagree += usize::from(by_collection != truncated_series_eval(w, c + 1)?.is_one());
        }
    }
    report.push(Check {
        name: "collection vs dimension subgroups",
        ok: disagree == 0,
        detail: format!(
            "{} words x classes 2..4, {disagree} disagreements",
            words.len()
        ),
    });

    let mut broken = 0;
    for pair in words.chunks(2) {
        let [(rank, a), (rank_b, b)] = pair else {
            continue;
        };
        let rank = *rank.max(rank_b);
        let f = Quotient::free(rank);
        for i in 0..rank {
            let lhs = fox_derivative(&a.mul(b), i, rank)?;
            let rhs = fox_derivative(a, i, rank)?
                .add(&RingElement::from_word(f, a)?.mul(&fox_derivative(b, i, rank)?)?)?;
            broken += usize::from(lhs != rhs);
        }
    }
    report.push(Check {
        name: "Fox product rule",
        ok: broken == 0,
        detail: format!("{} pairs, {broken} failures", words.len() / 2),
    });
    Ok(report)
}
