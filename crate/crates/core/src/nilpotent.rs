//! Hall basic commutators and collection in free nilpotent groups.
//!
//! Basic commutators are ordered by weight, then lexicographically by the ids
//! of their two components. Every element of `F / γ_{c+1}(F)` has a unique
//! normal form `b_1^{e_1} ... b_N^{e_N}` over the basic commutators of weight
//! at most `c`.
//!
//! Collection works from the left against a polycyclic presentation whose
//! relations are the conjugates `b_m^{b_h}` and `b_m^{b_h^-1}` for `h < m`.
//! Those are derived once per `(rank, class)`:
//!
//! * if `[b_m, b_h]` is itself basic, `b_m^{b_h} = b_m [b_m, b_h]`;
//! * otherwise `b_m = [b_s, b_t]` with `t > h` and
//!   `b_m^{b_h} = [b_s^{b_h}, b_t^{b_h}]`, collected with the relations of
//!   conjugators `> h`, which are already known;
//! * `b_m^{b_h^-1}` inverts the previous map from the top of the basis down.
//!
//! Moving `b_h^k` past a tail conjugates the whole tail at once. Large `k`
//! and large tail exponents are handled by repeated squaring, so the cost
//! grows with the logarithm of the exponents.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::budget::Meter;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Generator, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Generator(Generator),
    /// `[left, right]` by basis id.
    Bracket(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicCommutator {
    pub id: usize,
    pub weight: usize,
    pub shape: Shape,
}

#[derive(Debug)]
pub struct HallBasis {
    rank: usize,
    class: usize,
    elems: Vec<BasicCommutator>,
    pairs: HashMap<(usize, usize), usize>,
}

impl HallBasis {
    fn build(rank: usize, class: usize) -> Self {
        let mut elems: Vec<BasicCommutator> = Vec::new();
        let mut pairs = HashMap::new();
        if class >= 1 {
            for g in 0..rank {
                elems.push(BasicCommutator {
                    id: g,
                    weight: 1,
                    shape: Shape::Generator(g),
                });
            }
        }
        for w in 2..=class {
            let mut fresh = Vec::new();
            for s in 0..elems.len() {
                for t in 0..s {
                    if elems[s].weight + elems[t].weight != w {
                        continue;
                    }
                    if let Shape::Bracket(_, q) = elems[s].shape {
                        if q > t {
                            continue;
                        }
                    }
                    fresh.push((s, t));
                }
            }
            fresh.sort_unstable();
            for (s, t) in fresh {
                let id = elems.len();
                pairs.insert((s, t), id);
                elems.push(BasicCommutator {
                    id,
                    weight: w,
                    shape: Shape::Bracket(s, t),
                });
            }
        }
        HallBasis {
            rank,
            class,
            elems,
            pairs,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[BasicCommutator] {
        &self.elems
    }

    pub fn weight(&self, id: usize) -> usize {
        self.elems[id].weight
    }

    /// Id of the basic commutator `[left, right]`, if it is basic.
    pub fn pair(&self, left: usize, right: usize) -> Option<usize> {
        self.pairs.get(&(left, right)).copied()
    }

    pub fn count_of_weight(&self, w: usize) -> usize {
        self.elems.iter().filter(|b| b.weight == w).count()
    }

    /// The basic commutator as a word in the generators.
    pub fn word(&self, id: usize) -> Word {
        match self.elems[id].shape {
            Shape::Generator(g) => Word::generator(g),
            Shape::Bracket(s, t) => Word::commutator(&self.word(s), &self.word(t)),
        }
    }

    /// Nested-bracket text such as `[[y,x],x]`.
    pub fn text(&self, id: usize, alphabet: &Alphabet) -> String {
        match self.elems[id].shape {
            Shape::Generator(g) => alphabet.name(g).to_string(),
            Shape::Bracket(s, t) => {
                format!("[{},{}]", self.text(s, alphabet), self.text(t, alphabet))
            }
        }
    }
}

type Sparse = Vec<(usize, BigInt)>;

/// Collection machinery for `F / γ_{class+1}(F)` of a given rank.
#[derive(Debug)]
pub struct Collector {
    basis: Arc<HallBasis>,
    // conj[h][m]: normal form of b_m^{b_h}; empty when b_m and b_h commute
    conj: Vec<Vec<Sparse>>,
    conj_inv: Vec<Vec<Sparse>>,
}

impl Collector {
    fn build(basis: Arc<HallBasis>) -> Result<Self> {
        let n = basis.len();
        let mut c = Collector {
            basis,
            conj: vec![Vec::new(); n],
            conj_inv: vec![Vec::new(); n],
        };
        let mut meter = Meter::new("pc presentation");
        for h in (0..n).rev() {
            let (pos, neg) = c.derive_relations(h, &mut meter)?;
            c.conj[h] = pos;
            c.conj_inv[h] = neg;
        }
        Ok(c)
    }

    pub fn basis(&self) -> &Arc<HallBasis> {
        &self.basis
    }

    fn commutes(&self, a: usize, b: usize) -> bool {
        self.basis.weight(a) + self.basis.weight(b) > self.basis.class
    }

    fn derive_relations(&self, h: usize, meter: &mut Meter) -> Result<(Vec<Sparse>, Vec<Sparse>)> {
        let n = self.basis.len();
        let mut pos: Vec<Sparse> = vec![Vec::new(); n];
        let mut neg: Vec<Sparse> = vec![Vec::new(); n];
        let one = BigInt::from(1);
        for m in h + 1..n {
            if self.commutes(m, h) {
                continue;
            }
            pos[m] = match self.basis.elems[m].shape {
                Shape::Bracket(s, t) if t > h => {
                    let image = |j: usize| -> Sparse {
                        if self.commutes(j, h) {
                            vec![(j, one.clone())]
                        } else {
                            pos[j].clone()
                        }
                    };
                    let (u, v) = (image(s), image(t));
                    let mut e = vec![BigInt::zero(); n];
                    self.mul_word_inv(&mut e, &u, meter)?;
                    self.mul_word_inv(&mut e, &v, meter)?;
                    self.mul_word(&mut e, &u, meter)?;
                    self.mul_word(&mut e, &v, meter)?;
                    sparse(&e)
                }
                _ => {
                    let c = self
                        .basis
                        .pair(m, h)
                        .expect("Hall condition makes [b_m, b_h] basic");
                    vec![(m, one.clone()), (c, one.clone())]
                }
            };
        }
        for m in (h + 1..n).rev() {
            if self.commutes(m, h) {
                continue;
            }
            debug_assert_eq!(pos[m].first(), Some(&(m, one.clone())));
            // b_m^{b_h} = b_m * rest, so b_m^{b_h^-1} = b_m * (phi^-1(rest))^-1
            let mut pre = vec![BigInt::zero(); n];
            for (j, x) in &pos[m][1..] {
                let image = if self.commutes(*j, h) {
                    vec![(*j, one.clone())]
                } else {
                    neg[*j].clone()
                };
                let p = self.power(&dense(&image, n), x, meter)?;
                self.mul_nf(&mut pre, &p, meter)?;
            }
            let mut e = vec![BigInt::zero(); n];
            e[m] = one.clone();
            self.mul_word_inv(&mut e, &sparse(&pre), meter)?;
            neg[m] = sparse(&e);
        }
        Ok((pos, neg))
    }

    fn mul_word(&self, e: &mut [BigInt], w: &[(usize, BigInt)], meter: &mut Meter) -> Result<()> {
        for (j, x) in w {
            self.mul_pow(e, *j, x, meter)?;
        }
        Ok(())
    }

    fn mul_word_inv(
        &self,
        e: &mut [BigInt],
        w: &[(usize, BigInt)],
        meter: &mut Meter,
    ) -> Result<()> {
        for (j, x) in w.iter().rev() {
            self.mul_pow(e, *j, &-x, meter)?;
        }
        Ok(())
    }

    /// Multiplies the normal form `e` on the right by `b_m^k`.
    fn mul_pow(&self, e: &mut [BigInt], m: usize, k: &BigInt, meter: &mut Meter) -> Result<()> {
        if k.is_zero() {
            return Ok(());
        }
        let blocked = (m + 1..e.len()).any(|j| !e[j].is_zero() && !self.commutes(j, m));
        if !blocked {
            e[m] += k;
            return Ok(());
        }
        meter.tick()?;
        // p b_m^a t b_m^k = p b_m^(a+k) t^(b_m^k)
        let mut tail = self.zeros();
        for j in m + 1..e.len() {
            tail[j] = std::mem::take(&mut e[j]);
        }
        e[m] += k;
        let tail = self.conjugate_pow(m, k, tail, meter)?;
        for (j, x) in tail.into_iter().enumerate().skip(m + 1) {
            e[j] = x;
        }
        Ok(())
    }

    /// `t^(b_m^k)` for `t` supported above `m`, squaring the conjugation map.
    fn conjugate_pow(
        &self,
        m: usize,
        k: &BigInt,
        mut t: Vec<BigInt>,
        meter: &mut Meter,
    ) -> Result<Vec<BigInt>> {
        let n = self.basis.len();
        let table = if k.is_positive() {
            &self.conj[m]
        } else {
            &self.conj_inv[m]
        };
        let mut images: Vec<Option<Vec<BigInt>>> = (0..n)
            .map(|j| (j > m && !self.commutes(j, m)).then(|| dense(&table[j], n)))
            .collect();
        // squaring re-images the whole table, so only pays off for large k
        let mut rest = k.magnitude().clone();
        if rest <= BigUint::from(n) {
            for _ in 0..rest.to_usize().unwrap_or(n) {
                t = self.apply(&images, &t, meter)?;
            }
            return Ok(t);
        }
        loop {
            if rest.bit(0) {
                t = self.apply(&images, &t, meter)?;
            }
            rest >>= 1;
            if rest.is_zero() {
                return Ok(t);
            }
            images = images
                .iter()
                .map(|img| {
                    img.as_ref()
                        .map(|v| self.apply(&images, v, meter))
                        .transpose()
                })
                .collect::<Result<_>>()?;
        }
    }

    /// Image of `v` under the endomorphism `b_j -> images[j]` (identity where `None`).
    fn apply(
        &self,
        images: &[Option<Vec<BigInt>>],
        v: &[BigInt],
        meter: &mut Meter,
    ) -> Result<Vec<BigInt>> {
        let mut out = self.zeros();
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match &images[j] {
                None => self.mul_pow(&mut out, j, x, meter)?,
                Some(img) if x.magnitude() <= &BigUint::from(3u8) => {
                    let img = if x.is_negative() {
                        &self.invert(img, meter)?
                    } else {
                        img
                    };
                    for _ in 0..x.magnitude().to_usize().unwrap_or(0) {
                        self.mul_nf(&mut out, img, meter)?;
                    }
                }
                Some(img) => {
                    let p = self.power(img, x, meter)?;
                    self.mul_nf(&mut out, &p, meter)?;
                }
            }
        }
        Ok(out)
    }

    fn mul_nf(&self, e: &mut [BigInt], v: &[BigInt], meter: &mut Meter) -> Result<()> {
        for (j, x) in v.iter().enumerate() {
            self.mul_pow(e, j, x, meter)?;
        }
        Ok(())
    }

    fn invert(&self, v: &[BigInt], meter: &mut Meter) -> Result<Vec<BigInt>> {
        let mut e = self.zeros();
        for (j, x) in v.iter().enumerate().rev() {
            self.mul_pow(&mut e, j, &-x, meter)?;
        }
        Ok(e)
    }

    /// `v^k` by repeated squaring.
    fn power(&self, v: &[BigInt], k: &BigInt, meter: &mut Meter) -> Result<Vec<BigInt>> {
        let mut base = if k.is_negative() {
            self.invert(v, meter)?
        } else {
            v.to_vec()
        };
        let mut acc = self.zeros();
        let mut rest = k.magnitude().clone();
        loop {
            if rest.bit(0) {
                self.mul_nf(&mut acc, &base, meter)?;
            }
            rest >>= 1;
            if rest.is_zero() {
                return Ok(acc);
            }
            let square = base.clone();
            self.mul_nf(&mut base, &square, meter)?;
        }
    }

    fn zeros(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.basis.len()]
    }

    fn nf(&self, exponents: Vec<BigInt>) -> NilpotentNF {
        NilpotentNF {
            rank: self.basis.rank,
            class: self.basis.class,
            exponents,
        }
    }

    pub fn collect(&self, a: &Word) -> Result<NilpotentNF> {
        if let Some(index) = a.max_generator().filter(|&g| g >= self.basis.rank) {
            return Err(Error::GeneratorOutOfRange {
                index,
                rank: self.basis.rank,
            });
        }
        let mut meter = Meter::new("collection");
        let mut e = self.zeros();
        if self.basis.class == 0 {
            return Ok(self.nf(e));
        }
        for s in a.syllables() {
            self.mul_pow(&mut e, s.gen, &s.exp, &mut meter)?;
        }
        Ok(self.nf(e))
    }

    /// Right multiplication by a single generator letter.
    pub(crate) fn mul_generator(
        &self,
        e: &mut [BigInt],
        gen: Generator,
        positive: bool,
    ) -> Result<()> {
        if self.basis.class == 0 {
            return Ok(());
        }
        let mut meter = Meter::new("collection");
        let k = if positive {
            BigInt::from(1)
        } else {
            BigInt::from(-1)
        };
        self.mul_pow(e, gen, &k, &mut meter)
    }

    pub fn multiply(&self, a: &NilpotentNF, b: &NilpotentNF) -> Result<NilpotentNF> {
        let mut meter = Meter::new("collection");
        let mut e = a.exponents.clone();
        self.mul_word(&mut e, &sparse(&b.exponents), &mut meter)?;
        Ok(self.nf(e))
    }

    pub fn inverse(&self, a: &NilpotentNF) -> Result<NilpotentNF> {
        let mut meter = Meter::new("collection");
        let mut e = self.zeros();
        self.mul_word_inv(&mut e, &sparse(&a.exponents), &mut meter)?;
        Ok(self.nf(e))
    }
}

fn dense(w: &[(usize, BigInt)], n: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    for (j, x) in w {
        e[*j] += x;
    }
    e
}

fn sparse(e: &[BigInt]) -> Sparse {
    e.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (j, x.clone()))
        .collect()
}

/// Exponent vector over the Hall basis of weight at most `class`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NilpotentNF {
    rank: usize,
    class: usize,
    exponents: Vec<BigInt>,
}

impl NilpotentNF {
    pub fn identity(rank: usize, class: usize) -> Self {
        NilpotentNF {
            rank,
            class,
            exponents: vec![BigInt::zero(); hall_basis(rank, class).len()],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.exponents
    }

    pub(crate) fn exponents_mut(&mut self) -> &mut [BigInt] {
        &mut self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    /// Smallest weight carrying a nonzero exponent.
    pub fn min_weight(&self) -> Option<usize> {
        let basis = hall_basis(self.rank, self.class);
        self.exponents
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_zero())
            .map(|(j, _)| basis.weight(j))
    }

    /// `Π b_j^{e_j}` expanded into the generators.
    pub fn to_word(&self) -> Result<Word> {
        let basis = hall_basis(self.rank, self.class);
        let mut w = Word::identity();
        for (j, x) in self.exponents.iter().enumerate() {
            if !x.is_zero() {
                w.mul_assign(&basis.word(j).pow(x)?);
            }
        }
        Ok(w)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> NfDisplay<'a> {
        NfDisplay { nf: self, alphabet }
    }

    /// `{"class": c, "exponents": [[commutator-text, int-as-string], ...]}`.
    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        let basis = hall_basis(self.rank, self.class);
        let exps: Vec<serde_json::Value> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| json!([basis.text(j, alphabet), x.to_string()]))
            .collect();
        json!({ "class": self.class, "exponents": exps })
    }
}

pub struct NfDisplay<'a> {
    nf: &'a NilpotentNF,
    alphabet: &'a Alphabet,
}

impl fmt::Display for NfDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nf.is_identity() {
            return f.write_str("1");
        }
        let basis = hall_basis(self.nf.rank, self.nf.class);
        let mut first = true;
        for (j, x) in self.nf.exponents.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&basis.text(j, self.alphabet))?;
            if *x != BigInt::from(1) {
                write!(f, "^{x}")?;
            }
        }
        Ok(())
    }
}

type Cache<T> = Mutex<HashMap<(usize, usize), Arc<T>>>;

fn basis_cache() -> &'static Cache<HallBasis> {
    static CACHE: OnceLock<Cache<HallBasis>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn collector_cache() -> &'static Cache<Collector> {
    static CACHE: OnceLock<Cache<Collector>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// All Hall basic commutators of weight at most `class`, memoized.
pub fn hall_basis(rank: usize, class: usize) -> Arc<HallBasis> {
    if let Some(b) = basis_cache().lock().unwrap().get(&(rank, class)) {
        return b.clone();
    }
    let b = Arc::new(HallBasis::build(rank, class));
    basis_cache()
        .lock()
        .unwrap()
        .entry((rank, class))
        .or_insert(b)
        .clone()
}

/// The collector for `F / γ_{class+1}(F)`, memoized.
pub fn collector(rank: usize, class: usize) -> Result<Arc<Collector>> {
    if let Some(c) = collector_cache().lock().unwrap().get(&(rank, class)) {
        return Ok(c.clone());
    }
    let c = Arc::new(Collector::build(hall_basis(rank, class))?);
    Ok(collector_cache()
        .lock()
        .unwrap()
        .entry((rank, class))
        .or_insert(c)
        .clone())
}

/// Normal form of `a` in `F / γ_{class+1}(F)`.
pub fn collect(a: &Word, rank: usize, class: usize) -> Result<NilpotentNF> {
    collector(rank, class)?.collect(a)
}

/// Whether `a b^-1` lies in `γ_k(F)`.
pub fn congruent_mod_gamma(a: &Word, b: &Word, rank: usize, k: usize) -> Result<bool> {
    if k <= 1 {
        return Ok(true);
    }
    Ok(collect(&a.mul(&b.inverse()), rank, k - 1)?.is_identity())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcsWeight {
    /// `a ∈ γ_k \ γ_{k+1}`.
    Exactly(usize),
    /// Trivial at the class examined: `a ∈ γ_k`.
    AtLeast(usize),
}

impl fmt::Display for LcsWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcsWeight::Exactly(k) => write!(f, "{k}"),
            LcsWeight::AtLeast(k) => write!(f, ">= {k}"),
        }
    }
}

/// Position of `a` in the lower central series, looked at up to `max_class`.
pub fn lcs_weight(a: &Word, rank: usize, max_class: usize) -> Result<LcsWeight> {
    let nf = collect(a, rank, max_class)?;
    Ok(match nf.min_weight() {
        Some(w) => LcsWeight::Exactly(w),
        None => LcsWeight::AtLeast(max_class + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget;
    use crate::parser::parse_word;

    fn lyndon_counts(n: usize, max_len: usize) -> Vec<usize> {
        // brute force: a word is Lyndon iff strictly smaller than all its proper rotations
        let mut counts = vec![0; max_len + 1];
        for (len, count) in counts.iter_mut().enumerate().skip(1) {
            let total = n.pow(len as u32);
            for code in 0..total {
                let mut w = Vec::with_capacity(len);
                let mut c = code;
                for _ in 0..len {
                    w.push(c % n);
                    c /= n;
                }
                let lyndon = (1..len).all(|r| {
                    let rot: Vec<usize> = w[r..].iter().chain(&w[..r]).copied().collect();
                    w < rot
                });
                if lyndon {
                    *count += 1;
                }
            }
        }
        counts
    }

    #[test]
    fn hall_basis_small_cases() {
        let b = hall_basis(2, 2);
        let a = Alphabet::standard(2);
        let texts: Vec<String> = (0..b.len()).map(|j| b.text(j, &a)).collect();
        assert_eq!(texts, ["x", "y", "[y,x]"]);
        let b = hall_basis(2, 4);
        let counts: Vec<usize> = (1..=4).map(|w| b.count_of_weight(w)).collect();
        assert_eq!(counts, [2, 1, 2, 3]);
        assert_eq!(hall_basis(1, 3).len(), 1);
        assert!(hall_basis(0, 3).is_empty());
    }

    #[test]
    fn hall_counts_match_lyndon_words() {
        for n in 1..=3 {
            let lyndon = lyndon_counts(n, 6);
            let b = hall_basis(n, 6);
            for (w, &expected) in lyndon.iter().enumerate().skip(1) {
                assert_eq!(b.count_of_weight(w), expected, "rank {n} weight {w}");
            }
        }
    }

    #[test]
    fn hall_conditions_hold() {
        let b = hall_basis(3, 5);
        for e in b.elements() {
            if let Shape::Bracket(s, t) = e.shape {
                assert!(s > t);
                assert_eq!(e.weight, b.weight(s) + b.weight(t));
                if let Shape::Bracket(_, q) = b.elements()[s].shape {
                    assert!(q <= t);
                }
            }
        }
    }

    // Heisenberg group: x -> I + E12, y -> I + E23 is faithful on F/γ_3 of rank 2.
    type M3 = [[i64; 3]; 3];
    fn m_mul(a: &M3, b: &M3) -> M3 {
        let mut c = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    }
    fn m_word(w: &Word) -> M3 {
        let mut acc = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for (g, pos) in w.letters().unwrap() {
            let s = if pos { 1 } else { -1 };
            let m = if g == 0 {
                [[1, s, 0], [0, 1, 0], [0, 0, 1]]
            } else {
                [[1, 0, 0], [0, 1, s], [0, 0, 1]]
            };
            acc = m_mul(&acc, &m);
        }
        acc
    }

    #[test]
    fn collect_yx_class_two() {
        let a = Alphabet::standard(2);
        let yx = parse_word("y*x", &a).unwrap();
        let nf = collect(&yx, 2, 2).unwrap();
        let expected: Vec<BigInt> = vec![1.into(), 1.into(), 1.into()];
        assert_eq!(nf.exponents(), expected.as_slice());
        assert_eq!(nf.display(&a).to_string(), "x*y*[y,x]");
        // oracle: unitriangular matrices
        assert_eq!(m_word(&yx), m_word(&nf.to_word().unwrap()));
    }

    #[test]
    fn collect_agrees_with_heisenberg_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let len = rng.gen_range(0..16);
            let w = Word::from_raw(
                (0..len).map(|_| (rng.gen_range(0..2usize), rng.gen_range(-3i64..=3))),
            );
            let nf = collect(&w, 2, 2).unwrap();
            assert_eq!(m_word(&w), m_word(&nf.to_word().unwrap()), "{w:?}");
        }
    }

    #[test]
    fn collect_examples() {
        let a = Alphabet::new(["t", "x"]).unwrap();
        let w = parse_word("[t,x,t]", &a).unwrap();
        assert!(collect(&w, 2, 2).unwrap().is_identity());
        let w = parse_word("[t^2,x^2,t^2]*([t,x,t]^8)^-1", &a).unwrap();
        assert!(collect(&w, 2, 3).unwrap().is_identity());
        assert!(!collect(&parse_word("[t,x,t]", &a).unwrap(), 2, 3)
            .unwrap()
            .is_identity());
    }

    #[test]
    fn normal_form_of_basic_commutator_is_itself() {
        for (n, c) in [(2, 5), (3, 4)] {
            let b = hall_basis(n, c);
            for j in 0..b.len() {
                let nf = collect(&b.word(j), n, c).unwrap();
                for (i, x) in nf.exponents().iter().enumerate() {
                    assert_eq!(*x, BigInt::from((i == j) as i64), "b_{j} at ({n},{c})");
                }
            }
        }
    }

    #[test]
    fn congruence_examples() {
        let a = Alphabet::new(["t", "x"]).unwrap();
        let p = |s: &str| parse_word(s, &a).unwrap();
        assert!(congruent_mod_gamma(&p("[t^2,x^2,t^2]"), &p("[t,x,t]^8"), 2, 4).unwrap());
        assert!(congruent_mod_gamma(&p("[t^2,x^2,t^2]"), &p("[t,x^2,t^2]^2"), 2, 4).unwrap());
        assert!(congruent_mod_gamma(&p("x*t"), &p("t*x"), 2, 2).unwrap());
        assert!(!congruent_mod_gamma(&p("x*t"), &p("t*x"), 2, 3).unwrap());
    }

    #[test]
    fn lcs_weight_examples() {
        let a = Alphabet::standard(2);
        let p = |s: &str| parse_word(s, &a).unwrap();
        assert_eq!(
            lcs_weight(&p("[x,y]"), 2, 4).unwrap(),
            LcsWeight::Exactly(2)
        );
        assert_eq!(lcs_weight(&p("x"), 2, 4).unwrap(), LcsWeight::Exactly(1));
        assert_eq!(
            lcs_weight(&p("[x,y,y,x]"), 2, 3).unwrap(),
            LcsWeight::AtLeast(4)
        );
        let claim2 = p("x^2*y^3*x^-2*x*y*x^-1*x^2*y^-3*x^-2*x*y^-1*x^-1");
        assert!(matches!(
            lcs_weight(&claim2, 2, 3).unwrap(),
            LcsWeight::AtLeast(_) | LcsWeight::Exactly(3)
        ));
    }

    #[test]
    fn normal_forms_with_large_exponents_recollect() {
        let a = Alphabet::standard(3);
        let nf = collect(&parse_word("y^2*z*y^2*x^13", &a).unwrap(), 3, 4).unwrap();
        assert!(nf.exponents().iter().any(|x| *x > BigInt::from(1000)));
        assert_eq!(collect(&nf.to_word().unwrap(), 3, 4).unwrap(), nf);
    }

    #[test]
    fn collection_respects_budget() {
        let a = Alphabet::standard(3);
        let w = parse_word("[x^40,y^40,z^40,x^40]", &a).unwrap();
        let r = budget::with_max_terms(50, || collect(&w, 3, 4));
        assert!(matches!(r, Err(Error::Budget { .. })));
    }

    #[test]
    fn nf_multiply_and_inverse() {
        let a = Alphabet::standard(3);
        let u = parse_word("x*y^2*z^-1*x", &a).unwrap();
        let v = parse_word("z*y^-1*x^3*y", &a).unwrap();
        let c = collector(3, 4).unwrap();
        let cu = c.collect(&u).unwrap();
        let cv = c.collect(&v).unwrap();
        assert_eq!(
            c.multiply(&cu, &cv).unwrap(),
            c.collect(&u.mul(&v)).unwrap()
        );
        assert_eq!(c.inverse(&cu).unwrap(), c.collect(&u.inverse()).unwrap());
    }
}
