//! Endomorphisms of finite-rank relatively free groups and homomorphism words.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groupring::Quotient;
use crate::magnus::NormalShape;
use crate::parser::{parse_term, parse_word, Expr, TermExpr};
use crate::words::{Alphabet, Generator, Word};

/// A map of the basis, extended to an endomorphism of the variety.
///
/// Constructors that produce automorphisms also record the images of the
/// inverse map; that record is the only invertibility certificate used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    images: Vec<Word>,
    inverse: Option<Vec<Word>>,
    variety: Quotient,
}

fn check_rank(w: &Word, rank: usize) -> Result<()> {
    match w.max_generator() {
        Some(index) if index >= rank => Err(Error::GeneratorOutOfRange { index, rank }),
        _ => Ok(()),
    }
}

fn substitute_all(ws: &[Word], images: &[Word]) -> Result<Vec<Word>> {
    ws.iter().map(|w| w.substitute(images)).collect()
}

impl Endomorphism {
    pub fn identity(rank: usize) -> Self {
        let images: Vec<Word> = (0..rank).map(Word::generator).collect();
        Endomorphism {
            inverse: Some(images.clone()),
            images,
            variety: Quotient::free(rank),
        }
    }

    /// Endomorphism with the given basis images and no certificate.
    pub fn from_images(images: Vec<Word>) -> Result<Self> {
        let rank = images.len();
        for w in &images {
            check_rank(w, rank)?;
        }
        Ok(Endomorphism {
            images,
            inverse: None,
            variety: Quotient::free(rank),
        })
    }

    /// `x ↦ g x g^-1`.
    pub fn inner(g: &Word, rank: usize) -> Result<Self> {
        check_rank(g, rank)?;
        let conj = |h: &Word| {
            (0..rank)
                .map(|i| Word::generator(i).conjugate_by(h))
                .collect()
        };
        Ok(Endomorphism {
            images: conj(g),
            inverse: Some(conj(&g.inverse())),
            variety: Quotient::free(rank),
        })
    }

    /// `x_i ↦ x_{p(i)}`.
    pub fn permutational(p: &[Generator]) -> Result<Self> {
        let rank = p.len();
        let mut inv = vec![usize::MAX; rank];
        for (i, &j) in p.iter().enumerate() {
            if j >= rank || inv[j] != usize::MAX {
                return Err(Error::NotBijective);
            }
            inv[j] = i;
        }
        Ok(Endomorphism {
            images: p.iter().map(|&j| Word::generator(j)).collect(),
            inverse: Some(inv.into_iter().map(Word::generator).collect()),
            variety: Quotient::free(rank),
        })
    }

    /// `target ↦ target·v`, all other generators fixed.
    pub fn transvection(target: Generator, v: &Word, rank: usize) -> Result<Self> {
        if target >= rank {
            return Err(Error::GeneratorOutOfRange {
                index: target,
                rank,
            });
        }
        check_rank(v, rank)?;
        let build = |v: &Word| {
            let mut images: Vec<Word> = (0..rank).map(Word::generator).collect();
            images[target] = images[target].mul(v);
            images
        };
        let inverse = v
            .syllables()
            .iter()
            .all(|s| s.gen != target)
            .then(|| build(&v.inverse()));
        Ok(Endomorphism {
            images: build(v),
            inverse,
            variety: Quotient::free(rank),
        })
    }

    /// Common extension of endomorphisms of the free factors spanned by a
    /// partition of the basis. Each part is given at full rank; only its
    /// images of the generators in its block are used.
    pub fn star_product(parts: &[(Vec<Generator>, Endomorphism)]) -> Result<Self> {
        let rank = parts.first().map_or(0, |(_, e)| e.rank());
        let mut owner = vec![None; rank];
        for (k, (block, e)) in parts.iter().enumerate() {
            if e.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: e.rank(),
                });
            }
            for &g in block {
                match owner.get(g) {
                    None => return Err(Error::GeneratorOutOfRange { index: g, rank }),
                    Some(Some(_)) => {
                        return Err(Error::Partition(format!("generator {g} is in two blocks")))
                    }
                    Some(None) => owner[g] = Some(k),
                }
            }
        }
        if let Some(g) = owner.iter().position(Option::is_none) {
            return Err(Error::Partition(format!("generator {g} is in no block")));
        }
        let inside = |w: &Word, k: usize| w.syllables().iter().all(|s| owner[s.gen] == Some(k));
        let mut images = vec![Word::identity(); rank];
        let mut inverse = Some(vec![Word::identity(); rank]);
        for (k, (block, e)) in parts.iter().enumerate() {
            for &g in block {
                if !inside(&e.images[g], k) {
                    return Err(Error::FactorEscape(g));
                }
                images[g] = e.images[g].clone();
                match (&mut inverse, &e.inverse) {
                    (Some(inv), Some(part)) if inside(&part[g], k) => inv[g] = part[g].clone(),
                    _ => inverse = None,
                }
            }
        }
        Ok(Endomorphism {
            images,
            inverse,
            variety: Quotient::free(rank),
        })
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn variety(&self) -> Quotient {
        self.variety
    }

    pub fn with_variety(mut self, variety: Quotient) -> Result<Self> {
        if variety.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: variety.rank(),
            });
        }
        self.variety = variety;
        Ok(self)
    }

    pub fn has_inverse_certificate(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn apply(&self, g: &Word) -> Result<Word> {
        check_rank(g, self.rank())?;
        g.substitute(&self.images)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        let inverse = match (&self.inverse, &other.inverse) {
            (Some(a), Some(b)) => Some(substitute_all(a, b)?),
            _ => None,
        };
        Ok(Endomorphism {
            images: substitute_all(&other.images, &self.images)?,
            inverse,
            variety: self.variety,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.inverse.clone().ok_or(Error::NotInvertible)?;
        Ok(Endomorphism {
            images: inv,
            inverse: Some(self.images.clone()),
            variety: self.variety,
        })
    }

    /// Whether both maps agree on every generator in the ambient variety.
    pub fn equal_in_variety(&self, other: &Endomorphism) -> Result<bool> {
        for (a, b) in self.images.iter().zip(&other.images) {
            if !self.variety.equal(a, b)? {
                return Ok(false);
            }
        }
        Ok(self.rank() == other.rank())
    }

    /// Determinant of the induced map on `Z^n`. An automorphism has `±1`.
    pub fn abelianization_determinant(&self) -> BigInt {
        let n = self.rank();
        let mut m: Vec<Vec<BigInt>> = self
            .images
            .iter()
            .map(|w| (0..n).map(|j| w.exponent_sum(j)).collect())
            .collect();
        bareiss_determinant(&mut m)
    }

    /// `{"rank": n, "images": [...], "variety": <descriptor>}`.
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "rank": self.rank(),
            "images": self.images.iter().map(|w| alphabet.format(w)).collect::<Vec<_>>(),
            "variety": self.variety.descriptor_json(),
        })
    }

    pub fn from_json(v: &Value, alphabet: &Alphabet) -> Result<Self> {
        let bad = |m: &str| Error::Json(format!("endomorphism: {m}"));
        let images = v["images"]
            .as_array()
            .ok_or_else(|| bad("missing `images` array"))?
            .iter()
            .map(|t| {
                parse_word(
                    t.as_str().ok_or_else(|| bad("images must be strings"))?,
                    alphabet,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(r) = v.get("rank").and_then(Value::as_u64) {
            if r as usize != images.len() {
                return Err(Error::RankMismatch {
                    expected: r as usize,
                    found: images.len(),
                });
            }
        }
        let e = Endomorphism::from_images(images)?;
        match v.get("variety") {
            None | Some(Value::Null) => Ok(e),
            Some(d) => {
                let name = d
                    .get("variety")
                    .or(Some(d))
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("bad `variety`"))?;
                let q = Quotient::parse(name, e.rank())?;
                e.with_variety(q)
            }
        }
    }
}

fn bareiss_determinant(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

/// A term `w(_0; _1, ..., _s)` together with its argument tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomWord {
    alphabet: Alphabet,
    term: TermExpr,
    args: Vec<Word>,
}

impl HomWord {
    pub fn new(alphabet: Alphabet, term: TermExpr, args: Vec<Word>) -> Result<Self> {
        if args.len() != term.arity() {
            return Err(Error::Arity {
                expected: term.arity(),
                found: args.len(),
            });
        }
        for a in &args {
            alphabet.check(a)?;
        }
        for name in term.expr().generator_names() {
            alphabet.generator(&name)?;
        }
        Ok(HomWord {
            alphabet,
            term,
            args,
        })
    }

    pub fn parse(alphabet: Alphabet, term: &str, args: &[&str]) -> Result<Self> {
        let args = args
            .iter()
            .map(|a| parse_word(a, &alphabet))
            .collect::<Result<Vec<_>>>()?;
        HomWord::new(alphabet, parse_term(term)?, args)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn term(&self) -> &TermExpr {
        &self.term
    }

    pub fn args(&self) -> &[Word] {
        &self.args
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    /// `w(g; u)` for `g` over `alphabet` or any extension of it.
    fn evaluate_over(&self, alphabet: &Alphabet, g: &Word) -> Result<Word> {
        self.term.evaluate(alphabet, g, &self.args)
    }

    /// `w(X; u)` with `X` a fresh generator of index `rank`.
    fn on_fresh(&self) -> Result<Word> {
        let ext = self.alphabet.extended(1);
        self.evaluate_over(&ext, &Word::generator(self.rank()))
    }

    /// The shape `v_1 *^{k_1} ... v_m *^{k_m}`.
    pub fn normal_shape(&self) -> Result<NormalShape> {
        Ok(NormalShape::of(&self.on_fresh()?, self.rank()))
    }

    /// Exponent sum of the placeholder `_0` in the term.
    pub fn placeholder_exponent_sum(&self) -> Result<BigInt> {
        Ok(self.on_fresh()?.exponent_sum(self.rank()))
    }

    /// `{"term": text, "args": [...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "term": self.term.to_string(),
            "args": self.args.iter().map(|w| self.alphabet.format(w)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, alphabet: Alphabet) -> Result<Self> {
        let bad = |m: &str| Error::Json(format!("homomorphism word: {m}"));
        let term = v["term"].as_str().ok_or_else(|| bad("missing `term`"))?;
        let args = match v.get("args") {
            None | Some(Value::Null) => Vec::new(),
            Some(a) => a
                .as_array()
                .ok_or_else(|| bad("`args` must be an array"))?
                .iter()
                .map(|t| t.as_str().ok_or_else(|| bad("args must be strings")))
                .collect::<Result<Vec<_>>>()?,
        };
        HomWord::parse(alphabet, term, &args)
    }
}

/// `w(g; u)`.
pub fn hom_word_apply(w: &HomWord, g: &Word) -> Result<Word> {
    w.alphabet.check(g)?;
    w.evaluate_over(&w.alphabet, g)
}

/// Outcome of the homomorphism-law check, with diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomVerdict {
    /// `w(XY; u) = w(X; u) w(Y; u)` for fresh `X`, `Y`.
    pub hom_law: bool,
    /// `w(1; u) = 1`.
    pub identity_preserved: bool,
    pub placeholder_exponent_sum: BigInt,
}

impl HomVerdict {
    pub fn accepted(&self) -> bool {
        self.hom_law
    }

    pub fn reason(&self) -> Option<String> {
        if self.hom_law {
            return None;
        }
        let mut r = String::from("homomorphism law fails");
        if !self.identity_preserved {
            r.push_str("; w(1) is not 1");
        }
        if !self.placeholder_exponent_sum.is_one() {
            r.push_str(&format!(
                "; placeholder exponent sum is {}",
                self.placeholder_exponent_sum
            ));
        }
        Some(r)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "accepted": self.accepted(),
            "reason": self.reason(),
            "hom_law": self.hom_law,
            "identity_preserved": self.identity_preserved,
            "placeholder_exponent_sum": self.placeholder_exponent_sum.to_string(),
        })
    }
}

/// Checks the homomorphism law in `variety` using two fresh generators.
pub fn is_hom_word(w: &HomWord, variety: Quotient) -> Result<HomVerdict> {
    let n = w.rank();
    if variety.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: variety.rank(),
        });
    }
    let ext = w.alphabet.extended(2);
    let (x, y) = (Word::generator(n), Word::generator(n + 1));
    let lhs = w.evaluate_over(&ext, &x.mul(&y))?;
    let wx = w.evaluate_over(&ext, &x)?;
    let rhs = wx.mul(&w.evaluate_over(&ext, &y)?);
    let hom_law = variety.with_rank(n + 2).equal(&lhs, &rhs)?;
    let identity_preserved =
        variety.is_identity(&w.evaluate_over(&w.alphabet, &Word::identity())?)?;
    Ok(HomVerdict {
        hom_law,
        identity_preserved,
        placeholder_exponent_sum: wx.exponent_sum(n),
    })
}

/// The homomorphism word of `p σ p^-1`, where `σ = w`.
///
/// Generator constants of the term become extra arguments so that every
/// constant is transported by `p` as well.
pub fn conjugate_hom_word(p: &Endomorphism, w: &HomWord) -> Result<HomWord> {
    if !p.has_inverse_certificate() {
        return Err(Error::NotInvertible);
    }
    if p.rank() != w.rank() {
        return Err(Error::RankMismatch {
            expected: w.rank(),
            found: p.rank(),
        });
    }
    let names = w.term.expr().generator_names();
    let base = w.term.arity() + 1;
    let expr = w.term.expr().map_generators(&|n: &str| {
        names
            .iter()
            .position(|m| m == n)
            .map(|k| Expr::Placeholder(base + k))
    });
    let mut args = w.args.clone();
    for n in &names {
        args.push(w.alphabet.generator(n)?);
    }
    let args = args
        .iter()
        .map(|a| p.apply(a))
        .collect::<Result<Vec<_>>>()?;
    HomWord::new(w.alphabet.clone(), TermExpr::new(expr)?, args)
}

/// Whether `e` is IA on `R̄ = R/R'` in `variety = F/R'`.
///
/// Supported for `R = F` (abelian variety) and `R = F'` (metabelian variety).
/// Checks `x^-1 e(x) ∈ R̄` for every generator and that `e` fixes the module
/// generators `[x_i, x_j]` (`i < j`) of `R̄`.
pub fn is_ia_on_r(e: &Endomorphism, variety: Quotient) -> Result<bool> {
    let n = e.rank();
    if variety.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: variety.rank(),
        });
    }
    let lower = match variety {
        Quotient::Solvable { length: 1 | 2, .. } => variety.coefficient_quotient().unwrap(),
        _ => {
            return Err(Error::UnsupportedVariety {
                op: "IA check",
                variety: variety.name(),
            })
        }
    };
    for (i, img) in e.images.iter().enumerate() {
        if !lower.is_identity(&Word::generator(i).inverse().mul(img))? {
            return Ok(false);
        }
    }
    let module_generators: Vec<Word> = match variety {
        Quotient::Solvable { length: 1, .. } => (0..n).map(Word::generator).collect(),
        _ => (0..n)
            .flat_map(|i| {
                (i + 1..n).map(move |j| Word::commutator(&Word::generator(i), &Word::generator(j)))
            })
            .collect(),
    };
    for r in &module_generators {
        if !variety.equal(&e.apply(r)?, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}
