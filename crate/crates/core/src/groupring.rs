//! Integral group rings of relatively free groups with canonical keys.
//!
//! A [`Quotient`] names one of the effective relatively free groups of a given
//! rank. Each element of such a group has a canonical [`Key`]; equal elements
//! have equal keys, so a [`RingElement`] is a finite map from keys to nonzero
//! integers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::budget;
use crate::error::{Error, Result};
use crate::magnus::{self, SolvableKey};
use crate::nilpotent::{self, NilpotentNF};
use crate::words::{Alphabet, Generator, Word};

/// Relatively free group of finite rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quotient {
    /// The free group itself.
    Free { rank: usize },
    /// `F / γ_{class+1}(F)`.
    Nilpotent { rank: usize, class: usize },
    /// `F / F^{(length)}`: length 0 is trivial, 1 abelian, 2 metabelian.
    Solvable { rank: usize, length: usize },
}

impl Quotient {
    pub fn free(rank: usize) -> Self {
        Quotient::Free { rank }
    }

    pub fn abelian(rank: usize) -> Self {
        Quotient::Solvable { rank, length: 1 }
    }

    pub fn metabelian(rank: usize) -> Self {
        Quotient::Solvable { rank, length: 2 }
    }

    pub fn nilpotent(rank: usize, class: usize) -> Self {
        Quotient::Nilpotent { rank, class }
    }

    pub fn solvable(rank: usize, length: usize) -> Self {
        Quotient::Solvable { rank, length }
    }

    /// Parses `free`, `trivial`, `abelian`, `metabelian`, `nilpotent:c` or
    /// `solvable:k`.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let bad = || Error::BadDescriptor(text.to_string());
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h, Some(a.parse::<usize>().map_err(|_| bad())?)),
            None => (text, None),
        };
        Ok(match (head, arg) {
            ("free", None) => Quotient::free(rank),
            ("trivial", None) => Quotient::solvable(rank, 0),
            ("abelian", None) => Quotient::abelian(rank),
            ("metabelian", None) => Quotient::metabelian(rank),
            ("nilpotent", Some(c)) if c >= 1 => Quotient::nilpotent(rank, c),
            ("solvable", Some(k)) if k >= 1 => Quotient::solvable(rank, k),
            _ => return Err(bad()),
        })
    }

    pub fn rank(&self) -> usize {
        match *self {
            Quotient::Free { rank }
            | Quotient::Nilpotent { rank, .. }
            | Quotient::Solvable { rank, .. } => rank,
        }
    }

    pub fn with_rank(&self, rank: usize) -> Self {
        match *self {
            Quotient::Free { .. } => Quotient::Free { rank },
            Quotient::Nilpotent { class, .. } => Quotient::Nilpotent { rank, class },
            Quotient::Solvable { length, .. } => Quotient::Solvable { rank, length },
        }
    }

    /// Name without the rank, as accepted by [`Quotient::parse`].
    pub fn name(&self) -> String {
        match *self {
            Quotient::Free { .. } => "free".into(),
            Quotient::Nilpotent { class, .. } => format!("nilpotent:{class}"),
            Quotient::Solvable { length: 0, .. } => "trivial".into(),
            Quotient::Solvable { length: 1, .. } => "abelian".into(),
            Quotient::Solvable { length: 2, .. } => "metabelian".into(),
            Quotient::Solvable { length, .. } => format!("solvable:{length}"),
        }
    }

    pub fn descriptor_json(&self) -> serde_json::Value {
        json!({ "variety": self.name(), "rank": self.rank() })
    }

    /// `F/R` for the variety `F/R'` when `R` is a term of the derived series.
    pub fn coefficient_quotient(&self) -> Option<Quotient> {
        match *self {
            Quotient::Solvable { rank, length } if length >= 1 => {
                Some(Quotient::solvable(rank, length - 1))
            }
            _ => None,
        }
    }

    pub fn identity_key(&self) -> Key {
        match *self {
            Quotient::Free { .. } => Key::Free(Word::identity()),
            Quotient::Nilpotent { rank, class } => {
                Key::Nilpotent(NilpotentNF::identity(rank, class))
            }
            Quotient::Solvable { length: 0, .. } => Key::Trivial,
            Quotient::Solvable { rank, length: 1 } => Key::Abelian(vec![BigInt::zero(); rank]),
            Quotient::Solvable { rank, length } => Key::Solvable(Box::new(SolvableKey::identity(
                Quotient::solvable(rank, length - 1),
            ))),
        }
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(index) if index >= self.rank() => Err(Error::GeneratorOutOfRange {
                index,
                rank: self.rank(),
            }),
            _ => Ok(()),
        }
    }

    /// Canonical key of the image of `w`.
    pub fn key_of(&self, w: &Word) -> Result<Key> {
        self.check_word(w)?;
        Ok(match *self {
            Quotient::Free { .. } => Key::Free(w.clone()),
            Quotient::Nilpotent { rank, class } => {
                Key::Nilpotent(nilpotent::collect(w, rank, class)?)
            }
            Quotient::Solvable { length: 0, .. } => Key::Trivial,
            Quotient::Solvable { rank, length: 1 } => {
                Key::Abelian((0..rank).map(|g| w.exponent_sum(g)).collect())
            }
            Quotient::Solvable { rank, length } => Key::Solvable(Box::new(magnus::solvable_key(
                w,
                Quotient::solvable(rank, length - 1),
            )?)),
        })
    }

    /// Whether `a` and `b` are equal in this group.
    pub fn equal(&self, a: &Word, b: &Word) -> Result<bool> {
        Ok(self.key_of(a)? == self.key_of(b)?)
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.key_of(w)? == self.identity_key())
    }

    /// Right multiplication of `key` by a generator or its inverse.
    pub fn mul_generator(&self, key: &mut Key, gen: Generator, positive: bool) -> Result<()> {
        if gen >= self.rank() {
            return Err(Error::GeneratorOutOfRange {
                index: gen,
                rank: self.rank(),
            });
        }
        match (self, key) {
            (Quotient::Free { .. }, Key::Free(w)) => {
                w.mul_assign(&Word::power_of(gen, if positive { 1 } else { -1 }));
            }
            (Quotient::Solvable { length: 0, .. }, Key::Trivial) => {}
            (Quotient::Solvable { length: 1, .. }, Key::Abelian(v)) => {
                if positive {
                    v[gen] += 1;
                } else {
                    v[gen] -= 1;
                }
            }
            (Quotient::Nilpotent { rank, class }, Key::Nilpotent(nf)) => {
                nilpotent::collector(*rank, *class)?.mul_generator(
                    nf.exponents_mut(),
                    gen,
                    positive,
                )?;
            }
            (Quotient::Solvable { .. }, Key::Solvable(k)) => k.mul_generator(gen, positive)?,
            (q, _) => return Err(key_mismatch(q)),
        }
        Ok(())
    }

    pub fn mul(&self, a: &Key, b: &Key) -> Result<Key> {
        Ok(match (self, a, b) {
            (Quotient::Free { .. }, Key::Free(x), Key::Free(y)) => Key::Free(x.mul(y)),
            (Quotient::Solvable { length: 0, .. }, Key::Trivial, Key::Trivial) => Key::Trivial,
            (Quotient::Solvable { length: 1, .. }, Key::Abelian(x), Key::Abelian(y)) => {
                Key::Abelian(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (Quotient::Nilpotent { rank, class }, Key::Nilpotent(x), Key::Nilpotent(y)) => {
                Key::Nilpotent(nilpotent::collector(*rank, *class)?.multiply(x, y)?)
            }
            (Quotient::Solvable { .. }, Key::Solvable(x), Key::Solvable(y)) => {
                Key::Solvable(Box::new(x.mul(y)?))
            }
            (q, _, _) => return Err(key_mismatch(q)),
        })
    }

    pub fn inverse(&self, a: &Key) -> Result<Key> {
        Ok(match (self, a) {
            (Quotient::Free { .. }, Key::Free(x)) => Key::Free(x.inverse()),
            (Quotient::Solvable { length: 0, .. }, Key::Trivial) => Key::Trivial,
            (Quotient::Solvable { length: 1, .. }, Key::Abelian(x)) => {
                Key::Abelian(x.iter().map(|p| -p).collect())
            }
            (Quotient::Nilpotent { rank, class }, Key::Nilpotent(x)) => {
                Key::Nilpotent(nilpotent::collector(*rank, *class)?.inverse(x)?)
            }
            (Quotient::Solvable { .. }, Key::Solvable(x)) => Key::Solvable(Box::new(x.inverse()?)),
            (q, _) => return Err(key_mismatch(q)),
        })
    }

    /// Canonical text of a key. The identity prints as `1`.
    pub fn key_text(&self, key: &Key, alphabet: &Alphabet) -> String {
        match key {
            Key::Trivial => "1".into(),
            Key::Free(w) => alphabet.format(w),
            Key::Abelian(v) => alphabet.format(&Word::from_raw(
                v.iter().enumerate().map(|(g, e)| (g, e.clone())),
            )),
            Key::Nilpotent(nf) => nf.display(alphabet).to_string(),
            Key::Solvable(k) => k.text(alphabet),
        }
    }
}

fn key_mismatch(q: &Quotient) -> Error {
    Error::AmbientMismatch(q.name(), "key of another group".into())
}

impl fmt::Display for Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rank {})", self.name(), self.rank())
    }
}

/// Canonical key of a group element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    Trivial,
    Free(Word),
    /// Exponent vector, i.e. a Laurent monomial.
    Abelian(Vec<BigInt>),
    Nilpotent(NilpotentNF),
    Solvable(Box<SolvableKey>),
}

/// Support of a ring element: key -> nonzero coefficient.
pub type Terms = BTreeMap<Key, BigInt>;

pub(crate) fn add_term(terms: &mut Terms, key: Key, coeff: BigInt) {
    if coeff.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Element of the integral group ring `Z[Q]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElement {
    group: Quotient,
    terms: Terms,
}

impl RingElement {
    pub fn zero(group: Quotient) -> Self {
        RingElement {
            group,
            terms: Terms::new(),
        }
    }

    pub fn one(group: Quotient) -> Self {
        RingElement::from_key(group, group.identity_key(), BigInt::one())
    }

    pub fn from_key(group: Quotient, key: Key, coeff: BigInt) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, key, coeff);
        RingElement { group, terms }
    }

    pub(crate) fn from_terms(group: Quotient, terms: Terms) -> Self {
        RingElement { group, terms }
    }

    /// The group element `w` as a ring element.
    pub fn from_word(group: Quotient, w: &Word) -> Result<Self> {
        Ok(RingElement::from_key(
            group,
            group.key_of(w)?,
            BigInt::one(),
        ))
    }

    /// `Σ c_i w_i`.
    pub fn from_words<'a>(
        group: Quotient,
        terms: impl IntoIterator<Item = (i64, &'a Word)>,
    ) -> Result<Self> {
        let mut out = Terms::new();
        for (c, w) in terms {
            add_term(&mut out, group.key_of(w)?, BigInt::from(c));
        }
        Ok(RingElement { group, terms: out })
    }

    pub fn group(&self) -> Quotient {
        self.group
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &Key) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    fn same_group(&self, other: &RingElement) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(
                self.group.to_string(),
                other.group.to_string(),
            ))
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_group(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            add_term(&mut terms, k.clone(), c.clone());
        }
        Ok(RingElement {
            group: self.group,
            terms,
        })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RingElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, c: &BigInt) -> RingElement {
        if c.is_zero() {
            return RingElement::zero(self.group);
        }
        RingElement {
            group: self.group,
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    /// Convolution product.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_group(other)?;
        budget::check("ring product", self.len().saturating_mul(other.len()))?;
        let mut terms = Terms::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                add_term(&mut terms, self.group.mul(a, b)?, x * y);
            }
        }
        Ok(RingElement {
            group: self.group,
            terms,
        })
    }

    /// `g · self` for a group element given by its key.
    pub fn left_mul_key(&self, g: &Key) -> Result<RingElement> {
        let mut terms = Terms::new();
        for (k, c) in &self.terms {
            add_term(&mut terms, self.group.mul(g, k)?, c.clone());
        }
        Ok(RingElement {
            group: self.group,
            terms,
        })
    }

    /// Sum of the coefficients.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `Some((±1, g))` when `self = ±g` for a single group element `g`.
    pub fn as_trivial_unit(&self) -> Option<(i8, Key)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        if c.is_one() {
            Some((1, k.clone()))
        } else if (-c).is_one() {
            Some((-1, k.clone()))
        } else {
            None
        }
    }

    /// Image under `Z[F] -> Z[target]`; `self` must live over the free group.
    pub fn project(&self, target: Quotient) -> Result<RingElement> {
        if !matches!(self.group, Quotient::Free { .. }) {
            return Err(Error::AmbientMismatch(
                self.group.to_string(),
                "free group".into(),
            ));
        }
        if self.group.rank() != target.rank() {
            return Err(Error::RankMismatch {
                expected: self.group.rank(),
                found: target.rank(),
            });
        }
        let mut terms = Terms::new();
        for (k, c) in &self.terms {
            let Key::Free(w) = k else {
                unreachable!("free ring keys are words")
            };
            add_term(&mut terms, target.key_of(w)?, c.clone());
        }
        Ok(RingElement {
            group: target,
            terms,
        })
    }

    /// Terms in canonical order: sorted by key text.
    fn sorted_terms(&self, alphabet: &Alphabet) -> Vec<(String, &BigInt)> {
        let mut v: Vec<(String, &BigInt)> = self
            .terms
            .iter()
            .map(|(k, c)| (self.group.key_text(k, alphabet), c))
            .collect();
        v.sort();
        v
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> RingDisplay<'a> {
        RingDisplay {
            elem: self,
            alphabet,
        }
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        self.display(alphabet).to_string()
    }

    /// `{"group": <descriptor>, "terms": [{"coeff": "..", "key": ".."}]}`.
    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .sorted_terms(alphabet)
            .into_iter()
            .map(|(k, c)| json!({ "coeff": c.to_string(), "key": k }))
            .collect();
        json!({ "group": self.group.descriptor_json(), "terms": terms })
    }
}

pub struct RingDisplay<'a> {
    elem: &'a RingElement,
    alphabet: &'a Alphabet,
}

impl fmt::Display for RingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.elem.sorted_terms(self.alphabet);
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (key, c)) in terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let mag = c.magnitude();
            if key == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(key)?;
            } else {
                write!(f, "{mag}*{key}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, &Alphabet::standard(3)).unwrap()
    }

    #[test]
    fn add_examples() {
        let q = Quotient::abelian(2);
        let a = Alphabet::standard(2);
        let one_x = RingElement::from_words(q, [(1, &w("1")), (1, &w("x"))]).unwrap();
        let minus_x = RingElement::from_words(q, [(-1, &w("x"))]).unwrap();
        assert_eq!(one_x.add(&minus_x).unwrap(), RingElement::one(q));
        assert_eq!(one_x.add(&RingElement::zero(q)).unwrap(), one_x);
        let x = RingElement::from_word(q, &w("x")).unwrap();
        assert_eq!(x.add(&x).unwrap().format(&a), "2*x");
        assert!(x.add(&RingElement::zero(Quotient::free(2))).is_err());
    }

    #[test]
    fn multiply_examples() {
        let q = Quotient::abelian(2);
        let a = Alphabet::standard(2);
        let x = RingElement::from_word(q, &w("x")).unwrap();
        let xi = RingElement::from_word(q, &w("x^-1")).unwrap();
        assert_eq!(x.mul(&xi).unwrap(), RingElement::one(q));
        let p = RingElement::from_words(q, [(1, &w("1")), (1, &w("x"))]).unwrap();
        let m = RingElement::from_words(q, [(1, &w("1")), (-1, &w("x"))]).unwrap();
        assert_eq!(p.mul(&m).unwrap().format(&a), "1 - x^2");
        let v = RingElement::from_word(q, &w("x*y")).unwrap().neg();
        let vi = RingElement::from_word(q, &w("y^-1*x^-1")).unwrap().neg();
        assert_eq!(v.mul(&vi).unwrap(), RingElement::one(q));
    }

    #[test]
    fn augmentation_examples() {
        let q = Quotient::abelian(2);
        let u =
            RingElement::from_words(q, [(1, &w("1")), (1, &w("x*y")), (1, &w("(x*y)^2"))]).unwrap();
        assert_eq!(u.augmentation(), BigInt::from(3));
        let v = RingElement::from_word(q, &w("y")).unwrap().neg();
        assert_eq!(v.augmentation(), BigInt::from(-1));
        assert_eq!(RingElement::zero(q).augmentation(), BigInt::zero());
    }

    #[test]
    fn trivial_unit_examples() {
        let q = Quotient::abelian(2);
        let u = RingElement::from_word(q, &w("x*y")).unwrap().neg();
        assert_eq!(
            u.as_trivial_unit(),
            Some((-1, q.key_of(&w("x*y")).unwrap()))
        );
        let p = RingElement::from_words(q, [(1, &w("1")), (1, &w("x"))]).unwrap();
        assert_eq!(p.as_trivial_unit(), None);
        let two = RingElement::from_words(q, [(2, &w("x"))]).unwrap();
        assert_eq!(two.as_trivial_unit(), None);
    }

    #[test]
    fn project_examples() {
        let f = Quotient::free(2);
        let ab = Quotient::abelian(2);
        let a = Alphabet::standard(2);
        let u = RingElement::from_word(f, &w("x*y*x^-1*y^-1")).unwrap();
        assert_eq!(u.project(ab).unwrap(), RingElement::one(ab));
        let u = RingElement::from_words(f, [(1, &w("x")), (-1, &w("y*x*y^-1"))]).unwrap();
        assert!(u.project(ab).unwrap().is_zero());
        let u =
            RingElement::from_words(f, [(1, &w("1")), (1, &w("x*y")), (1, &w("x*y*x*y"))]).unwrap();
        assert_eq!(u.project(ab).unwrap().format(&a), "1 + x*y + x^2*y^2");
        assert!(u.project(Quotient::abelian(3)).is_err());
    }

    #[test]
    fn descriptors_round_trip() {
        for d in [
            "free",
            "trivial",
            "abelian",
            "metabelian",
            "nilpotent:3",
            "solvable:3",
        ] {
            assert_eq!(Quotient::parse(d, 2).unwrap().name(), d);
        }
        assert_eq!(
            Quotient::parse("solvable:2", 2).unwrap(),
            Quotient::metabelian(2)
        );
        assert!(Quotient::parse("nilpotent:0", 2).is_err());
        assert!(Quotient::parse("nilpotent", 2).is_err());
        assert!(Quotient::parse("cyclic", 2).is_err());
    }

    #[test]
    fn json_form_is_sorted() {
        let q = Quotient::abelian(2);
        let a = Alphabet::standard(2);
        let u = RingElement::from_words(q, [(2, &w("y")), (-1, &w("x")), (1, &w("1"))]).unwrap();
        assert_eq!(
            u.to_json(&a).to_string(),
            r#"{"group":{"rank":2,"variety":"abelian"},"terms":[{"coeff":"1","key":"1"},{"coeff":"-1","key":"x"},{"coeff":"2","key":"y"}]}"#
        );
        assert_eq!(u.format(&a), "1 - x + 2*y");
    }
}
