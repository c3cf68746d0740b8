//! Freely reduced words over a finite-rank alphabet.
//!
//! A [`Word`] is stored in syllable form: a sequence of `(generator, exponent)`
//! pairs with nonzero exponents and no two adjacent syllables on the same
//! generator. The rank of the ambient free group is not stored in the word;
//! it is carried by an [`Alphabet`] alongside it.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget;
use crate::error::{Error, Result};

/// Index of a basis element, `0 <= index < rank`.
pub type Generator = usize;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub gen: Generator,
    pub exp: BigInt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(gen: Generator) -> Self {
        Word::power_of(gen, BigInt::one())
    }

    pub fn power_of(gen: Generator, exp: impl Into<BigInt>) -> Self {
        let mut w = Word::identity();
        w.push(gen, exp.into());
        w
    }

    /// Free reduction of an arbitrary syllable sequence. Generators are not
    /// range-checked here; see [`Alphabet::word`].
    pub fn from_raw<I, E>(raw: I) -> Self
    where
        I: IntoIterator<Item = (Generator, E)>,
        E: Into<BigInt>,
    {
        let mut w = Word::identity();
        for (gen, exp) in raw {
            w.push(gen, exp.into());
        }
        w
    }

    /// Appends `gen^exp`, cancelling against the last syllable.
    fn push(&mut self, gen: Generator, exp: BigInt) {
        if exp.is_zero() {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.gen == gen {
                last.exp += exp;
                if last.exp.is_zero() {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable { gen, exp });
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Length in letters, i.e. the sum of the absolute exponents.
    pub fn letter_count(&self) -> BigInt {
        self.syllables.iter().map(|s| s.exp.abs()).sum()
    }

    pub fn max_generator(&self) -> Option<Generator> {
        self.syllables.iter().map(|s| s.gen).max()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn mul_assign(&mut self, other: &Word) {
        for s in &other.syllables {
            self.push(s.gen, s.exp.clone());
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    gen: s.gen,
                    exp: -&s.exp,
                })
                .collect(),
        }
    }

    /// `self^k`. Conjugates of single syllables are powered in closed form;
    /// anything else is repeated and checked against the term budget.
    pub fn pow(&self, k: &BigInt) -> Result<Word> {
        if k.is_zero() || self.is_identity() {
            return Ok(Word::identity());
        }
        if k.is_negative() {
            return self.inverse().pow(&-k);
        }
        if k.is_one() {
            return Ok(self.clone());
        }
        // self = conj * core * conj^-1 with core cyclically reduced
        let mut conj = Word::identity();
        let mut lo = 0;
        let mut hi = self.syllables.len();
        let mut core_head: Option<Syllable> = None;
        while hi - lo >= 2 && self.syllables[lo].gen == self.syllables[hi - 1].gen {
            let first = &self.syllables[lo];
            let last = &self.syllables[hi - 1];
            let sum = &first.exp + &last.exp;
            if sum.is_zero() {
                conj.push(first.gen, first.exp.clone());
                lo += 1;
                hi -= 1;
            } else {
                conj.push(first.gen, -&last.exp);
                core_head = Some(Syllable {
                    gen: first.gen,
                    exp: sum,
                });
                lo += 1;
                hi -= 1;
                break;
            }
        }
        let mut core = Word::identity();
        if let Some(h) = core_head {
            core.push(h.gen, h.exp);
        }
        for s in &self.syllables[lo..hi] {
            core.push(s.gen, s.exp.clone());
        }
        let mut out = conj.clone();
        if core.syllables.len() == 1 {
            let s = &core.syllables[0];
            out.push(s.gen, &s.exp * k);
        } else {
            let reps = k.to_usize().unwrap_or(usize::MAX);
            budget::check("word power", reps.saturating_mul(core.syllables.len()))?;
            for _ in 0..reps {
                out.mul_assign(&core);
            }
        }
        out.mul_assign(&conj.inverse());
        Ok(out)
    }

    pub fn pow_i64(&self, k: i64) -> Result<Word> {
        self.pow(&BigInt::from(k))
    }

    /// Image under the endomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        let mut out = Word::identity();
        for s in &self.syllables {
            let image = images.get(s.gen).ok_or(Error::MissingImage(s.gen))?;
            out.mul_assign(&image.pow(&s.exp)?);
        }
        Ok(out)
    }

    pub fn exponent_sum(&self, gen: Generator) -> BigInt {
        self.syllables
            .iter()
            .filter(|s| s.gen == gen)
            .map(|s| s.exp.clone())
            .sum()
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        let mut out = a.inverse();
        out.mul_assign(&b.inverse());
        out.mul_assign(a);
        out.mul_assign(b);
        out
    }

    /// `[a1, ..., an] = [[a1, ..., a(n-1)], an]`.
    pub fn left_normed(entries: &[Word]) -> Result<Word> {
        if entries.len() < 2 {
            return Err(Error::CommutatorArity(entries.len()));
        }
        let mut acc = entries[0].clone();
        for e in &entries[1..] {
            acc = Word::commutator(&acc, e);
        }
        Ok(acc)
    }

    /// `g self g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        let mut out = g.clone();
        out.mul_assign(self);
        out.mul_assign(&g.inverse());
        out
    }

    /// Expands into single letters `(generator, +1/-1)`.
    pub fn letters(&self) -> Result<Vec<(Generator, bool)>> {
        let total = self.letter_count().to_usize().unwrap_or(usize::MAX);
        budget::check("letter expansion", total)?;
        let mut out = Vec::with_capacity(total);
        for s in &self.syllables {
            let n = s.exp.magnitude().to_usize().unwrap_or(usize::MAX);
            let positive = s.exp.is_positive();
            out.extend(std::iter::repeat_n((s.gen, positive), n));
        }
        Ok(out)
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        Word::mul(self, rhs)
    }
}

const STANDARD_NAMES: [&str; 7] = ["x", "y", "z", "t", "u", "v", "w"];

/// Generator names for a free group of finite rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Arc<[String]>,
}

pub(crate) fn is_placeholder_name(name: &str) -> bool {
    name.len() > 1 && name.starts_with('_') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

fn is_identifier(name: &str) -> bool {
    let mut bytes = name.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) || is_placeholder_name(n) || names[..i].contains(n) {
                return Err(Error::InvalidName(n.clone()));
            }
        }
        Ok(Alphabet {
            names: names.into(),
        })
    }

    /// `x, y, z, t, u, v, w`, then `g7, g8, ...`.
    pub fn standard(rank: usize) -> Self {
        Alphabet {
            names: (0..rank).map(standard_name).collect::<Vec<_>>().into(),
        }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, gen: Generator) -> &str {
        &self.names[gen]
    }

    pub fn index_of(&self, name: &str) -> Option<Generator> {
        self.names.iter().position(|n| n == name)
    }

    /// Adjoins `extra` fresh generators after the existing ones.
    pub fn extended(&self, extra: usize) -> Alphabet {
        let mut names = self.names.to_vec();
        let mut k = 0;
        while names.len() < self.rank() + extra {
            let candidate = format!("_f{k}");
            k += 1;
            if !names.contains(&candidate) {
                names.push(candidate);
            }
        }
        Alphabet {
            names: names.into(),
        }
    }

    /// Free reduction with range-checked generators.
    pub fn word<I, E>(&self, raw: I) -> Result<Word>
    where
        I: IntoIterator<Item = (Generator, E)>,
        E: Into<BigInt>,
    {
        let raw: Vec<(Generator, BigInt)> = raw.into_iter().map(|(g, e)| (g, e.into())).collect();
        if let Some(&(index, _)) = raw.iter().find(|(g, _)| *g >= self.rank()) {
            return Err(Error::GeneratorOutOfRange {
                index,
                rank: self.rank(),
            });
        }
        Ok(Word::from_raw(raw))
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(index) if index >= self.rank() => Err(Error::GeneratorOutOfRange {
                index,
                rank: self.rank(),
            }),
            _ => Ok(()),
        }
    }

    pub fn generator(&self, name: &str) -> Result<Word> {
        self.index_of(name)
            .map(Word::generator)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> WordDisplay<'a> {
        WordDisplay {
            alphabet: self,
            word: w,
        }
    }

    pub fn format(&self, w: &Word) -> String {
        self.display(w).to_string()
    }
}

pub fn standard_name(i: usize) -> String {
    STANDARD_NAMES
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("g{i}"))
}

/// Canonical text: syllables joined by `*`, `^` only when the exponent is not 1.
pub struct WordDisplay<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (i, s) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match self.alphabet.names.get(s.gen) {
                Some(n) => f.write_str(n)?,
                None => write!(f, "g{}", s.gen)?,
            }
            if !s.exp.is_one() {
                write!(f, "^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Word {
        Word::generator(0)
    }
    fn y() -> Word {
        Word::generator(1)
    }

    #[test]
    fn free_reduce_examples() {
        let a = Alphabet::standard(2);
        assert!(a.word([(0, 1), (0, -1)]).unwrap().is_identity());
        assert_eq!(
            a.word([(0, 2), (1, 1), (1, -1), (0, 1)]).unwrap(),
            Word::power_of(0, 3)
        );
        let w = a.word([(0, 1), (1, 3), (0, -1)]).unwrap();
        assert_eq!(a.format(&w), "x*y^3*x^-1");
        assert_eq!(
            a.word([(2, 1)]),
            Err(Error::GeneratorOutOfRange { index: 2, rank: 2 })
        );
    }

    #[test]
    fn multiply_and_invert() {
        let xy = x().mul(&y());
        let yinv_x = y().inverse().mul(&x());
        assert_eq!(xy.mul(&yinv_x), Word::power_of(0, 2));
        assert!(xy.mul(&xy.inverse()).is_identity());
        let a = Alphabet::standard(2);
        assert_eq!(a.format(&xy.mul(&xy)), "x*y*x*y");
        let xy2 = x().mul(&Word::power_of(1, 2));
        assert_eq!(a.format(&xy2.inverse()), "y^-2*x^-1");
        assert!(Word::identity().inverse().is_identity());
        assert_eq!(x().inverse().inverse(), x());
    }

    #[test]
    fn substitute_examples() {
        let w = x().mul(&y()).mul(&x().inverse());
        assert!(w
            .substitute(&[x(), Word::identity()])
            .unwrap()
            .is_identity());
        let c = Word::commutator(&x(), &y());
        assert!(c.substitute(&[x(), x()]).unwrap().is_identity());
        let yz = Word::generator(1).mul(&Word::generator(2));
        assert_eq!(x().substitute(std::slice::from_ref(&yz)).unwrap(), yz);
        assert_eq!(y().substitute(&[x()]), Err(Error::MissingImage(1)));
    }

    #[test]
    fn exponent_sum_examples() {
        let w = x().mul(&y()).mul(&Word::power_of(0, -2));
        assert_eq!(w.exponent_sum(0), BigInt::from(-1));
        assert_eq!(Word::commutator(&x(), &y()).exponent_sum(0), BigInt::zero());
        assert_eq!(
            x().mul(&y()).pow_i64(3).unwrap().exponent_sum(1),
            BigInt::from(3)
        );
    }

    #[test]
    fn commutator_examples() {
        let a = Alphabet::standard(2);
        assert!(Word::commutator(&x(), &x()).is_identity());
        assert_eq!(a.format(&Word::commutator(&x(), &y())), "x^-1*y^-1*x*y");
        let c = Word::commutator(&x(), &y());
        let expected = c.inverse().mul(&x().inverse()).mul(&c).mul(&x());
        assert_eq!(Word::left_normed(&[x(), y(), x()]).unwrap(), expected);
        assert_eq!(Word::left_normed(&[x()]), Err(Error::CommutatorArity(1)));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let cases = [
            x().mul(&y()),
            x().mul(&y()).mul(&x().inverse()),
            Word::power_of(0, 2).mul(&y()).mul(&x().inverse()),
            Word::commutator(&x(), &y()),
        ];
        for w in cases {
            for k in -4i64..=4 {
                let mut expected = Word::identity();
                let step = if k < 0 { w.inverse() } else { w.clone() };
                for _ in 0..k.abs() {
                    expected.mul_assign(&step);
                }
                assert_eq!(w.pow_i64(k).unwrap(), expected, "{w:?}^{k}");
            }
        }
    }

    #[test]
    fn huge_power_of_conjugated_syllable() {
        let w = y().mul(&x()).mul(&y().inverse());
        let k = BigInt::from(10).pow(40);
        let p = w.pow(&k).unwrap();
        assert_eq!(p.syllables().len(), 3);
        assert_eq!(p.syllables()[1].exp, k);
    }

    #[test]
    fn alphabet_names() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["_1"]).is_err());
        assert!(Alphabet::new(["1a"]).is_err());
        let a = Alphabet::new(["t", "x"]).unwrap();
        assert_eq!(a.index_of("x"), Some(1));
        let e = a.extended(2);
        assert_eq!(e.rank(), 4);
        assert_eq!(e.name(1), "x");
        assert_eq!(Alphabet::standard(9).name(8), "g8");
    }
}
