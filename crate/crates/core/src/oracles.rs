//! Independent models used to cross-check the Fox/Magnus and collection code.
//!
//! Nothing here calls into the group-ring, Magnus or collection code: the
//! wreath model uses plain `i64` lattice arithmetic and the series model its
//! own noncommutative polynomials.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::{self, Meter};
use crate::error::Result;
use crate::words::{Alphabet, Generator, Word};

fn letter_total(a: &Word) -> Result<usize> {
    let n = a.letter_count().to_usize().unwrap_or(usize::MAX);
    budget::check("oracle evaluation", n)?;
    Ok(n)
}

/// Element of `Z^n ≀ Z^n`-style model of `F/F''`: a translation in `Z^n` and
/// a finitely supported map `Z^n → Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathElement {
    translation: Vec<i64>,
    function: BTreeMap<Vec<i64>, Vec<i64>>,
}

impl WreathElement {
    pub fn identity(rank: usize) -> Self {
        WreathElement {
            translation: vec![0; rank],
            function: BTreeMap::new(),
        }
    }

    /// `(e_i, t_i at the origin)`.
    pub fn generator(i: Generator, rank: usize) -> Self {
        let mut translation = vec![0; rank];
        translation[i] = 1;
        let mut value = vec![0; rank];
        value[i] = 1;
        WreathElement {
            translation,
            function: BTreeMap::from([(vec![0; rank], value)]),
        }
    }

    pub fn rank(&self) -> usize {
        self.translation.len()
    }

    pub fn translation(&self) -> &[i64] {
        &self.translation
    }

    pub fn function(&self) -> &BTreeMap<Vec<i64>, Vec<i64>> {
        &self.function
    }

    fn add_shifted(&mut self, shift: &[i64], g: &BTreeMap<Vec<i64>, Vec<i64>>, sign: i64) {
        for (z, v) in g {
            let at: Vec<i64> = z.iter().zip(shift).map(|(a, b)| a + b).collect();
            let slot = self
                .function
                .entry(at.clone())
                .or_insert_with(|| vec![0; v.len()]);
            for (s, x) in slot.iter_mut().zip(v) {
                *s += sign * x;
            }
            if slot.iter().all(|&c| c == 0) {
                self.function.remove(&at);
            }
        }
    }

    /// `(p, f)(q, g) = (p + q, f + p·g)` where `(p·g)(z) = g(z - p)`.
    pub fn mul(&self, other: &WreathElement) -> WreathElement {
        let mut out = self.clone();
        out.add_shifted(&self.translation, &other.function, 1);
        for (a, b) in out.translation.iter_mut().zip(&other.translation) {
            *a += b;
        }
        out
    }

    /// `(p, f)^-1 = (-p, -(-p)·f)`.
    pub fn inverse(&self) -> WreathElement {
        let neg: Vec<i64> = self.translation.iter().map(|a| -a).collect();
        let mut out = WreathElement::identity(self.rank());
        out.add_shifted(&neg, &self.function, -1);
        out.translation = neg;
        out
    }

    pub fn is_identity(&self) -> bool {
        self.function.is_empty() && self.translation.iter().all(|&a| a == 0)
    }
}

/// Image of `a` in the wreath model of the free metabelian group of `rank`.
pub fn wreath_eval(a: &Word, rank: usize) -> Result<WreathElement> {
    if let Some(index) = a.max_generator().filter(|&g| g >= rank) {
        return Err(crate::error::Error::GeneratorOutOfRange { index, rank });
    }
    letter_total(a)?;
    let mut acc = WreathElement::identity(rank);
    for s in a.syllables() {
        let mut step = WreathElement::generator(s.gen, rank);
        if s.exp.is_negative() {
            step = step.inverse();
        }
        for _ in 0..s.exp.magnitude().to_usize().unwrap_or(0) {
            acc = acc.mul(&step);
        }
    }
    Ok(acc)
}

/// Noncommutative polynomial in `X_1 .. X_n` with all terms of degree `< degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    degree: usize,
    terms: BTreeMap<Vec<Generator>, BigInt>,
}

impl TruncatedSeries {
    pub fn one(degree: usize) -> Self {
        let mut terms = BTreeMap::new();
        if degree > 0 {
            terms.insert(Vec::new(), BigInt::one());
        }
        TruncatedSeries { degree, terms }
    }

    /// `(1 + X_i)^k = Σ_j binom(k, j) X_i^j`, for any integer `k`.
    pub fn letter_power(gen: Generator, k: &BigInt, degree: usize) -> Self {
        let mut terms = BTreeMap::new();
        let mut binom = BigInt::one();
        for j in 0..degree {
            if !binom.is_zero() {
                terms.insert(vec![gen; j], binom.clone());
            }
            binom = binom * (k - BigInt::from(j)) / BigInt::from(j + 1);
        }
        TruncatedSeries { degree, terms }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Generator>, BigInt> {
        &self.terms
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        let degree = self.degree.min(other.degree);
        let mut terms: BTreeMap<Vec<Generator>, BigInt> = BTreeMap::new();
        let mut meter = Meter::new("truncated series");
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.len() + m2.len() >= degree {
                    continue;
                }
                meter.tick()?;
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                let slot = terms.entry(m).or_default();
                *slot += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        budget::check("truncated series", terms.len())?;
        Ok(TruncatedSeries { degree, terms })
    }

    pub fn is_one(&self) -> bool {
        *self == TruncatedSeries::one(self.degree)
    }

    /// Letters print as upper-cased generator names.
    pub fn format(&self, alphabet: &Alphabet) -> String {
        let mut items: Vec<(&Vec<Generator>, &BigInt)> = self.terms.iter().collect();
        items.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));
        if items.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in items.into_iter().enumerate() {
            let mono = if m.is_empty() {
                None
            } else {
                Some(
                    m.iter()
                        .map(|&g| alphabet.name(g).to_uppercase())
                        .collect::<Vec<_>>()
                        .join("*"),
                )
            };
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            match mono {
                None => out.push_str(&mag.to_string()),
                Some(t) if mag.is_one() => out.push_str(&t),
                Some(t) => out.push_str(&format!("{mag}*{t}")),
            }
        }
        out
    }
}

/// Image of `a` under `x_i ↦ 1 + X_i`, truncated below `degree`.
pub fn truncated_series_eval(a: &Word, degree: usize) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(degree);
    for s in a.syllables() {
        acc = acc.mul(&TruncatedSeries::letter_power(s.gen, &s.exp, degree))?;
    }
    Ok(acc)
}

/// Affine map `t ↦ alpha·t + beta` of `Z/m`.
type Affine = (u64, u64);

fn aff_mul(m: u64, g: Affine, h: Affine) -> Affine {
    ((g.0 * h.0) % m, (g.0 * h.1 + g.1) % m)
}

fn aff_inv(m: u64, g: Affine) -> Affine {
    let ainv = (1..m).find(|&b| (g.0 * b) % m == 1).unwrap_or(1);
    (ainv, (m - (ainv * g.1) % m) % m)
}

fn aff_pow(m: u64, g: Affine, k: &BigInt) -> Affine {
    let mut base = if k.is_negative() { aff_inv(m, g) } else { g };
    let mut e = k.magnitude().clone();
    let mut acc = (1 % m, 0);
    while !e.is_zero() {
        if e.bit(0) {
            acc = aff_mul(m, acc, base);
        }
        base = aff_mul(m, base, base);
        e >>= 1;
    }
    acc
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A homomorphism to `Aff(Z/m)` that does not kill the probed word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeWitness {
    pub modulus: u64,
    /// `(alpha, beta)` for each generator.
    pub images: Vec<Affine>,
    pub value: Affine,
}

impl fmt::Display for ProbeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aff(Z/{}):", self.modulus)?;
        for (a, b) in &self.images {
            write!(f, " t->{a}t+{b}")?;
        }
        write!(f, " gives t->{}t+{}", self.value.0, self.value.1)
    }
}

const PROBE_MODULI: [u64; 10] = [3, 4, 5, 7, 8, 9, 11, 13, 16, 25];

/// Random substitutions into small affine (metabelian) groups. A witness
/// certifies `a ∉ F''`; `None` proves nothing.
pub fn finite_probe(a: &Word, trials: usize, seed: u64) -> Option<ProbeWitness> {
    let rank = a.max_generator().map_or(0, |g| g + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let m = PROBE_MODULI[rng.gen_range(0..PROBE_MODULI.len())];
        let images: Vec<Affine> = (0..rank)
            .map(|_| loop {
                let alpha = rng.gen_range(1..m);
                if gcd(alpha, m) == 1 {
                    break (alpha, rng.gen_range(0..m));
                }
            })
            .collect();
        let value = a.syllables().iter().fold((1, 0), |acc, s| {
            aff_mul(m, acc, aff_pow(m, images[s.gen], &s.exp))
        });
        if value != (1, 0) {
            return Some(ProbeWitness {
                modulus: m,
                images,
                value,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, &Alphabet::standard(3)).unwrap()
    }

    #[test]
    fn wreath_examples() {
        let x = wreath_eval(&w("x"), 3).unwrap();
        assert_eq!(x, WreathElement::generator(0, 3));
        assert!(wreath_eval(&w("[[x,y],[x,z]]"), 3).unwrap().is_identity());
        let c = wreath_eval(&w("[x,y]"), 3).unwrap();
        assert_eq!(c.translation(), &[0, 0, 0]);
        assert!(!c.function().is_empty());
        let a = wreath_eval(&w("x*y^-2"), 3).unwrap();
        assert!(a.mul(&a.inverse()).is_identity());
        assert!(!wreath_eval(&w("[x,[x,y]]"), 3).unwrap().is_identity());
    }

    #[test]
    fn series_examples() {
        let a = Alphabet::standard(2);
        let p = |s: &str| parse_word(s, &a).unwrap();
        assert_eq!(
            truncated_series_eval(&p("x"), 2).unwrap().format(&a),
            "1 + X"
        );
        assert_eq!(
            truncated_series_eval(&p("[x,y]"), 3).unwrap().format(&a),
            "1 + X*Y - Y*X"
        );
        assert_eq!(
            truncated_series_eval(&p("x^-1"), 4).unwrap().format(&a),
            "1 - X + X*X - X*X*X"
        );
        assert!(truncated_series_eval(&p("x^3*x^-3"), 5).unwrap().is_one());
        assert!(truncated_series_eval(&p("[x,y,x]"), 3).unwrap().is_one());
        assert!(!truncated_series_eval(&p("[x,y,x]"), 4).unwrap().is_one());
        let chain = p("[x^2,y^2,x^2]*[x,y,x]^-8");
        assert!(truncated_series_eval(&chain, 4).unwrap().is_one());
        assert!(!truncated_series_eval(&chain, 5).unwrap().is_one());
    }

    /// S3 as permutations of {0,1,2}, composed left to right.
    fn s3() -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    fn s3_eval(word: &Word, images: &[[usize; 3]]) -> [usize; 3] {
        let mut acc = [0, 1, 2];
        for (g, positive) in word.letters().unwrap() {
            let p = images[g];
            let p = if positive {
                p
            } else {
                let mut inv = [0; 3];
                for i in 0..3 {
                    inv[p[i]] = i;
                }
                inv
            };
            acc = [p[acc[0]], p[acc[1]], p[acc[2]]];
        }
        acc
    }

    #[test]
    fn probe_agrees_with_exhaustive_s3() {
        let group = s3();
        let c = w("[x,y]");
        let nontrivial = group
            .iter()
            .flat_map(|&p| group.iter().map(move |&q| [p, q]))
            .any(|imgs| s3_eval(&c, &imgs) != [0, 1, 2]);
        assert!(nontrivial);
        let deep = w("[[x,y],[x,z]]");
        for p in &group {
            for q in &group {
                for r in &group {
                    assert_eq!(s3_eval(&deep, &[*p, *q, *r]), [0, 1, 2]);
                }
            }
        }
        assert!(finite_probe(&c, 50, 1).is_some());
        assert!(finite_probe(&Word::identity(), 50, 1).is_none());
        assert!(finite_probe(&deep, 200, 7).is_none());
        assert_eq!(finite_probe(&c, 50, 3), finite_probe(&c, 50, 3));
    }
}
