//! Fox derivatives and the Magnus embedding.
//!
//! For a quotient `Q = F/R` the Magnus derivation sends `a ∈ F` to
//! `∂a = Σ_i D_i(a)‾ t_i` in the free `Z[Q]`-module on `t_1 .. t_n`. It is
//! injective on `F/R'`, which gives both a word-problem decision for `F/R'`
//! and, iterated along the derived series, canonical keys for free solvable
//! groups: an element of `F/F^{(k)}` is keyed by the pair
//! `(∂a over F/F^{(k-1)}, key of a in F/F^{(k-1)})`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::autos::HomWord;
use crate::budget::{self, Meter};
use crate::error::{Error, Result};
use crate::groupring::{add_term, Key, Quotient, RingElement, Terms};
use crate::words::{Alphabet, Generator, Word};

/// Key of an element of a free solvable group of derived length >= 2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolvableKey {
    lower: Quotient,
    coords: BTreeMap<Generator, Terms>,
    base: Key,
}

impl SolvableKey {
    pub(crate) fn identity(lower: Quotient) -> Self {
        SolvableKey {
            lower,
            coords: BTreeMap::new(),
            base: lower.identity_key(),
        }
    }

    /// The group `F/F^{(k-1)}` the coordinates live over.
    pub fn lower(&self) -> Quotient {
        self.lower
    }

    pub fn base(&self) -> &Key {
        &self.base
    }

    pub fn derivation(&self) -> ModuleVector {
        ModuleVector {
            quotient: self.lower,
            coords: self
                .coords
                .iter()
                .map(|(g, t)| (*g, RingElement::from_terms(self.lower, t.clone())))
                .collect(),
        }
    }

    fn add_at(&mut self, gen: Generator, key: Key, coeff: BigInt) {
        let terms = self.coords.entry(gen).or_default();
        add_term(terms, key, coeff);
        if terms.is_empty() {
            self.coords.remove(&gen);
        }
    }

    /// `(c, b) · x^±1` where `x = (t_x, x̄)`.
    pub(crate) fn mul_generator(&mut self, gen: Generator, positive: bool) -> Result<()> {
        if positive {
            self.add_at(gen, self.base.clone(), BigInt::from(1));
            self.lower.mul_generator(&mut self.base, gen, true)
        } else {
            self.lower.mul_generator(&mut self.base, gen, false)?;
            self.add_at(gen, self.base.clone(), BigInt::from(-1));
            Ok(())
        }
    }

    /// `(c, b)(c', b') = (c + b·c', b b')`.
    pub(crate) fn mul(&self, other: &SolvableKey) -> Result<SolvableKey> {
        let mut out = self.clone();
        for (g, terms) in &other.coords {
            for (k, c) in terms {
                out.add_at(*g, self.lower.mul(&self.base, k)?, c.clone());
            }
        }
        out.base = self.lower.mul(&self.base, &other.base)?;
        Ok(out)
    }

    /// `(c, b)^-1 = (-b^-1·c, b^-1)`.
    pub(crate) fn inverse(&self) -> Result<SolvableKey> {
        let binv = self.lower.inverse(&self.base)?;
        let mut out = SolvableKey::identity(self.lower);
        for (g, terms) in &self.coords {
            for (k, c) in terms {
                out.add_at(*g, self.lower.mul(&binv, k)?, -c);
            }
        }
        out.base = binv;
        Ok(out)
    }

    fn is_identity(&self) -> bool {
        self.coords.is_empty() && self.base == self.lower.identity_key()
    }

    fn term_count(&self) -> usize {
        self.coords.values().map(BTreeMap::len).sum()
    }

    /// `<base | x: D_x; y: D_y>`, or `1` for the identity.
    pub fn text(&self, alphabet: &Alphabet) -> String {
        if self.is_identity() {
            return "1".into();
        }
        format!(
            "<{} | {}>",
            self.lower.key_text(&self.base, alphabet),
            self.derivation().format(alphabet)
        )
    }
}

fn letter_count(s: &BigInt) -> Result<usize> {
    let n = s.magnitude().to_usize().unwrap_or(usize::MAX);
    budget::check("letter expansion", n)?;
    Ok(n)
}

/// Canonical key of `a` in `F/F^{(k)}`, given `lower = F/F^{(k-1)}`.
pub(crate) fn solvable_key(a: &Word, lower: Quotient) -> Result<SolvableKey> {
    let mut key = SolvableKey::identity(lower);
    let mut meter = Meter::new("Magnus key");
    for s in a.syllables() {
        let positive = s.exp.is_positive();
        for _ in 0..letter_count(&s.exp)? {
            meter.tick()?;
            key.mul_generator(s.gen, positive)?;
        }
    }
    budget::check("Magnus key", key.term_count())?;
    Ok(key)
}

/// Key of `a` in the free solvable group of derived length `length`.
pub fn solvable_key_of(a: &Word, rank: usize, length: usize) -> Result<Key> {
    Quotient::solvable(rank, length).key_of(a)
}

/// Fox derivative `D_gen(a)`, computed directly in `Z[q]`.
pub fn fox_derivative_in(a: &Word, gen: Generator, q: Quotient) -> Result<RingElement> {
    if let Some(index) = a.max_generator().filter(|&g| g >= q.rank()) {
        return Err(Error::GeneratorOutOfRange {
            index,
            rank: q.rank(),
        });
    }
    let mut prefix = q.identity_key();
    let mut terms = Terms::new();
    let mut meter = Meter::new("Fox derivative");
    for s in a.syllables() {
        if s.gen != gen {
            prefix = q.mul(&prefix, &q.key_of(&Word::power_of(s.gen, s.exp.clone()))?)?;
            continue;
        }
        let positive = s.exp.is_positive();
        for _ in 0..letter_count(&s.exp)? {
            meter.tick()?;
            if positive {
                add_term(&mut terms, prefix.clone(), BigInt::from(1));
                q.mul_generator(&mut prefix, gen, true)?;
            } else {
                q.mul_generator(&mut prefix, gen, false)?;
                add_term(&mut terms, prefix.clone(), BigInt::from(-1));
            }
        }
    }
    Ok(RingElement::from_terms(q, terms))
}

/// Fox derivative `D_gen(a) ∈ Z[F]` for the free group of the given rank.
pub fn fox_derivative(a: &Word, gen: Generator, rank: usize) -> Result<RingElement> {
    fox_derivative_in(a, gen, Quotient::free(rank))
}

/// Finitely supported vector `Σ r_i t_i` over `Z[Q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleVector {
    quotient: Quotient,
    coords: BTreeMap<Generator, RingElement>,
}

impl ModuleVector {
    pub fn zero(quotient: Quotient) -> Self {
        ModuleVector {
            quotient,
            coords: BTreeMap::new(),
        }
    }

    pub fn quotient(&self) -> Quotient {
        self.quotient
    }

    pub fn coord(&self, gen: Generator) -> RingElement {
        self.coords
            .get(&gen)
            .cloned()
            .unwrap_or_else(|| RingElement::zero(self.quotient))
    }

    pub fn coords(&self) -> &BTreeMap<Generator, RingElement> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn insert(&mut self, gen: Generator, r: RingElement) {
        if r.is_zero() {
            self.coords.remove(&gen);
        } else {
            self.coords.insert(gen, r);
        }
    }

    pub fn add(&self, other: &ModuleVector) -> Result<ModuleVector> {
        if self.quotient != other.quotient {
            return Err(Error::AmbientMismatch(
                self.quotient.to_string(),
                other.quotient.to_string(),
            ));
        }
        let mut out = self.clone();
        for (g, r) in &other.coords {
            let sum = out.coord(*g).add(r)?;
            out.insert(*g, sum);
        }
        Ok(out)
    }

    pub fn neg(&self) -> ModuleVector {
        ModuleVector {
            quotient: self.quotient,
            coords: self.coords.iter().map(|(g, r)| (*g, r.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &ModuleVector) -> Result<ModuleVector> {
        self.add(&other.neg())
    }

    /// Scalar multiplication by a ring element on the left.
    pub fn scale(&self, r: &RingElement) -> Result<ModuleVector> {
        let mut out = ModuleVector::zero(self.quotient);
        for (g, c) in &self.coords {
            out.insert(*g, r.mul(c)?);
        }
        Ok(out)
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coords
            .iter()
            .map(|(g, r)| format!("{}: {}", alphabet.name(*g), r.format(alphabet)))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// `{"quotient": <descriptor>, "coords": [[gen, <ring element>], ...]}`.
    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        let coords: Vec<serde_json::Value> = self
            .coords
            .iter()
            .map(|(g, r)| json!([alphabet.name(*g), r.to_json(alphabet)]))
            .collect();
        json!({ "quotient": self.quotient.descriptor_json(), "coords": coords })
    }
}

/// `∂a = Σ_i D_i(a)‾ t_i` with coefficients in `Z[q]`.
pub fn magnus_derivation(a: &Word, q: Quotient) -> Result<ModuleVector> {
    if let Some(index) = a.max_generator().filter(|&g| g >= q.rank()) {
        return Err(Error::GeneratorOutOfRange {
            index,
            rank: q.rank(),
        });
    }
    Ok(solvable_key(a, q)?.derivation())
}

/// Which `R` is meant in `F/R'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelatorSubgroup {
    /// `R = F^{(k)}`, `k >= 0`; `k = 1` is the commutator subgroup.
    Derived(usize),
    /// `R = γ_{c+1}(F)`.
    LowerCentral(usize),
}

impl RelatorSubgroup {
    /// `F/R` as a quotient of rank `rank`.
    pub fn coefficient_quotient(&self, rank: usize) -> Quotient {
        match *self {
            RelatorSubgroup::Derived(k) => Quotient::solvable(rank, k),
            RelatorSubgroup::LowerCentral(c) => Quotient::nilpotent(rank, c),
        }
    }
}

/// Whether `a ∈ R'`: every Fox derivative of `a` vanishes in `Z[F/R]`.
pub fn is_identity_mod_r_prime(a: &Word, r: RelatorSubgroup, rank: usize) -> Result<bool> {
    Ok(magnus_derivation(a, r.coefficient_quotient(rank))?.is_zero())
}

/// `v_1 *^{k_1} v_2 *^{k_2} ... v_m *^{k_m}` with each `v_j` free of `*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalShape {
    pub blocks: Vec<(Word, BigInt)>,
}

impl NormalShape {
    /// Splits `w` at the syllables of `placeholder`. The leading `v_1` may be
    /// trivial and the trailing exponent may be zero.
    pub fn of(w: &Word, placeholder: Generator) -> Self {
        let mut blocks = Vec::new();
        let mut v = Word::identity();
        for s in w.syllables() {
            if s.gen == placeholder {
                blocks.push((std::mem::take(&mut v), s.exp.clone()));
            } else {
                v.mul_assign(&Word::power_of(s.gen, s.exp.clone()));
            }
        }
        if !v.is_identity() || blocks.is_empty() {
            blocks.push((v, BigInt::zero()));
        }
        NormalShape { blocks }
    }

    /// `c_i = v_1 ... v_i`.
    pub fn prefixes(&self) -> Vec<Word> {
        let mut acc = Word::identity();
        self.blocks
            .iter()
            .map(|(v, _)| {
                acc.mul_assign(v);
                acc.clone()
            })
            .collect()
    }

    pub fn exponent_sum(&self) -> BigInt {
        self.blocks.iter().map(|(_, k)| k).sum()
    }

    /// `f = Σ k_i c̄_i ∈ Z[q]`.
    pub fn f_sigma(&self, q: Quotient) -> Result<RingElement> {
        let mut terms = Terms::new();
        for ((_, k), c) in self.blocks.iter().zip(self.prefixes()) {
            add_term(&mut terms, q.key_of(&c)?, k.clone());
        }
        Ok(RingElement::from_terms(q, terms))
    }
}

/// `f_σ` of a homomorphism word, with coefficients in `Z[q]`.
pub fn f_sigma(w: &HomWord, q: Quotient) -> Result<RingElement> {
    w.normal_shape()?.f_sigma(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InnerWitness {
    /// `f = v̄`: σ acts on `R/R'` as conjugation by any preimage of `v̄`.
    Conjugator(Key),
    /// `f = -v̄`, which no automorphism can realize.
    NegativeUnit,
}

impl InnerWitness {
    pub fn format(&self, q: Quotient, alphabet: &Alphabet) -> String {
        match self {
            InnerWitness::Conjugator(k) => q.key_text(k, alphabet),
            InnerWitness::NegativeUnit => "impossible: negative unit".into(),
        }
    }
}

pub fn inner_on_r_witness(f: &RingElement) -> Option<InnerWitness> {
    match f.as_trivial_unit()? {
        (1, k) => Some(InnerWitness::Conjugator(k)),
        _ => Some(InnerWitness::NegativeUnit),
    }
}

impl fmt::Display for RelatorSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelatorSubgroup::Derived(k) => write!(f, "F^({k})"),
            RelatorSubgroup::LowerCentral(c) => write!(f, "gamma_{}", c + 1),
        }
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
    fn fox_examples() {
        let a = Alphabet::standard(2);
        assert_eq!(fox_derivative(&w("x"), 0, 2).unwrap().format(&a), "1");
        assert!(fox_derivative(&w("y"), 0, 2).unwrap().is_zero());
        assert_eq!(
            fox_derivative(&w("x^-1"), 0, 2).unwrap().format(&a),
            "-x^-1"
        );
        assert_eq!(
            fox_derivative(&w("(x*y)^3"), 0, 2).unwrap().format(&a),
            "1 + x*y + x*y*x*y"
        );
    }

    #[test]
    fn magnus_of_commutator_over_abelian() {
        // hand expansion: D_x [x,y] = -x^-1 + x^-1 y^-1, D_y [x,y] = -x^-1 y^-1 + x^-1 y^-1 x
        let a = Alphabet::standard(2);
        let q = Quotient::abelian(2);
        let m = magnus_derivation(&w("[x,y]"), q).unwrap();
        assert_eq!(m.coord(0).format(&a), "-x^-1 + x^-1*y^-1");
        assert_eq!(m.coord(1).format(&a), "-x^-1*y^-1 + y^-1");
        assert!(magnus_derivation(&w("x"), q).unwrap().coord(1).is_zero());
        assert_eq!(
            magnus_derivation(&w("x"), q).unwrap().coord(0),
            RingElement::one(q)
        );
        let c = w("[x,y]");
        let r = Word::commutator(&c, &c.conjugate_by(&w("x")));
        assert!(magnus_derivation(&r, q).unwrap().is_zero());
        assert!(magnus_derivation(&w("x"), Quotient::abelian(0)).is_err());
    }

    #[test]
    fn magnus_coordinates_are_projected_fox_derivatives() {
        let q = Quotient::nilpotent(3, 3);
        let a = w("x*y^2*z^-1*[x,z]*y^-3");
        let m = magnus_derivation(&a, q).unwrap();
        for g in 0..3 {
            let direct = fox_derivative(&a, g, 3).unwrap().project(q).unwrap();
            assert_eq!(m.coord(g), direct);
            assert_eq!(fox_derivative_in(&a, g, q).unwrap(), direct);
        }
    }

    #[test]
    fn solvable_key_examples() {
        let id2 = Quotient::metabelian(3).identity_key();
        let kx = solvable_key_of(&w("x"), 3, 2).unwrap();
        let Key::Solvable(k) = &kx else { panic!() };
        assert_eq!(k.base(), &Quotient::abelian(3).key_of(&w("x")).unwrap());
        assert_eq!(
            k.derivation().coord(0),
            RingElement::one(Quotient::abelian(3))
        );
        assert_eq!(solvable_key_of(&w("[[x,y],[x,z]]"), 3, 2).unwrap(), id2);
        assert_ne!(solvable_key_of(&w("[x,[x,y]]"), 3, 2).unwrap(), id2);
        assert_eq!(
            kx.clone(),
            solvable_key_of(&w("x*[[x,y],[y,z]]"), 3, 2).unwrap()
        );
    }

    #[test]
    fn solvable_key_multiplication_is_group_law() {
        for q in [Quotient::metabelian(3), Quotient::solvable(2, 3)] {
            let a = w("x*y^-1*x^2*y");
            let b = w("y*x^-1*y^-2");
            let (ka, kb) = (q.key_of(&a).unwrap(), q.key_of(&b).unwrap());
            assert_eq!(q.mul(&ka, &kb).unwrap(), q.key_of(&a.mul(&b)).unwrap());
            assert_eq!(q.inverse(&ka).unwrap(), q.key_of(&a.inverse()).unwrap());
        }
    }

    #[test]
    fn word_problem_examples() {
        let f1 = RelatorSubgroup::Derived(1);
        assert!(is_identity_mod_r_prime(&w("[[x,y],[y,x]]"), f1, 3).unwrap());
        assert!(is_identity_mod_r_prime(&w("[[x,y],[x,z]]"), f1, 3).unwrap());
        assert!(!is_identity_mod_r_prime(&w("[x,y]"), f1, 3).unwrap());
        // F/γ_3' : [[x,y],[x,z]] has weight 4, so it lies in γ_3' only via R' ⊇ [γ_3,γ_3]? it does not
        let lc = RelatorSubgroup::LowerCentral(2);
        assert!(is_identity_mod_r_prime(&w("[[x,y,z],[y,z,x]]"), lc, 3).unwrap());
        assert!(!is_identity_mod_r_prime(&w("[[x,y],[x,z]]"), lc, 3).unwrap());
    }

    #[test]
    fn f_sigma_shapes() {
        let q = Quotient::abelian(3);
        let x = 3; // placeholder generator
        let v = w("y*z");
        let w0 = v.mul(&Word::generator(x)).mul(&v.inverse());
        let shape = NormalShape::of(&w0, x);
        assert_eq!(shape.blocks.len(), 2);
        let f = shape.f_sigma(q).unwrap();
        assert_eq!(f, RingElement::from_word(q, &v).unwrap());
        assert_eq!(f.augmentation(), BigInt::from(1));
        let w1 = v.mul(&Word::power_of(x, -1)).mul(&v.inverse());
        let f1 = NormalShape::of(&w1, x).f_sigma(q).unwrap();
        assert_eq!(f1, RingElement::from_word(q, &v).unwrap().neg());
        assert_eq!(inner_on_r_witness(&f1), Some(InnerWitness::NegativeUnit));
        let id = NormalShape::of(&Word::generator(x), x).f_sigma(q).unwrap();
        assert_eq!(id, RingElement::one(q));
        assert_eq!(
            inner_on_r_witness(&f),
            Some(InnerWitness::Conjugator(q.key_of(&v).unwrap()))
        );
        let p = RingElement::from_words(q, [(1, &w("1")), (1, &w("x"))]).unwrap();
        assert_eq!(inner_on_r_witness(&p), None);
    }
}
