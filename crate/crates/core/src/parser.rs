//! Text grammar for words and group-theoretic terms.
//!
//! ```text
//! word   := factor { "*" factor }
//! factor := atom [ "^" int ]
//! atom   := name | "1" | "(" word ")" | "[" word "," word { "," word } "]"
//! ```
//!
//! Names are ASCII identifiers. `_0, _1, ...` are placeholders in terms: `_0`
//! is the subject and `_1 .. _s` are the arguments. Brackets with more than
//! two entries are left-normed commutators. Whitespace is ignored.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::words::{is_placeholder_name, Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Identity,
    Generator(String),
    Placeholder(usize),
    Product(Vec<Expr>),
    Power(Box<Expr>, BigInt),
    Commutator(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Name(String),
    Placeholder(usize),
    Int(BigInt),
    Star,
    Caret,
    Minus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'*' => Token::Star,
            b'^' => Token::Caret,
            b'-' => Token::Minus,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'[' => Token::LBracket,
            b']' => Token::RBracket,
            b',' => Token::Comma,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Token::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &text[start..i];
                let tok = if is_placeholder_name(name) {
                    let k = name[1..]
                        .parse()
                        .map_err(|_| Error::syntax(start, "placeholder index too large"))?;
                    Token::Placeholder(k)
                } else {
                    Token::Name(name.to_string())
                };
                out.push((start, tok));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Token, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(Error::syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn word(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.eat(&Token::Star) {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr> {
        let atom = self.atom()?;
        if self.eat(&Token::Caret) {
            let negative = self.eat(&Token::Minus);
            let at = self.offset();
            match self.peek().cloned() {
                Some(Token::Int(n)) => {
                    self.pos += 1;
                    Ok(Expr::Power(Box::new(atom), if negative { -n } else { n }))
                }
                _ => Err(Error::syntax(at, "expected integer exponent")),
            }
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Token::Name(n)) => {
                self.pos += 1;
                Ok(Expr::Generator(n))
            }
            Some(Token::Placeholder(k)) => {
                self.pos += 1;
                Ok(Expr::Placeholder(k))
            }
            Some(Token::Int(n)) if n.is_one() => {
                self.pos += 1;
                Ok(Expr::Identity)
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.word()?;
                self.expect(&Token::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Token::LBracket) => {
                self.pos += 1;
                let mut entries = vec![self.word()?];
                self.expect(&Token::Comma, "`,` inside commutator")?;
                entries.push(self.word()?);
                while self.eat(&Token::Comma) {
                    entries.push(self.word()?);
                }
                self.expect(&Token::RBracket, "`]`")?;
                Ok(Expr::Commutator(entries))
            }
            Some(_) => Err(Error::syntax(at, "expected a generator, `1`, `(` or `[`")),
            None => Err(Error::syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses text into an expression tree without resolving names.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let e = p.word()?;
    if p.pos != p.tokens.len() {
        return Err(Error::syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    fn collect_placeholders(&self, out: &mut BTreeSet<usize>) {
        match self {
            Expr::Placeholder(k) => {
                out.insert(*k);
            }
            Expr::Product(v) | Expr::Commutator(v) => {
                v.iter().for_each(|e| e.collect_placeholders(out))
            }
            Expr::Power(b, _) => b.collect_placeholders(out),
            Expr::Identity | Expr::Generator(_) => {}
        }
    }

    pub fn placeholders(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_placeholders(&mut out);
        out
    }

    /// Distinct generator names in order of first appearance.
    pub fn generator_names(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Generator(n) => {
                    if !out.contains(n) {
                        out.push(n.clone());
                    }
                }
                Expr::Product(v) | Expr::Commutator(v) => v.iter().for_each(|e| walk(e, out)),
                Expr::Power(b, _) => walk(b, out),
                Expr::Identity | Expr::Placeholder(_) => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Evaluates with `slots[k]` substituted for `_k`.
    pub fn evaluate(&self, alphabet: &Alphabet, slots: &[&Word]) -> Result<Word> {
        Ok(match self {
            Expr::Identity => Word::identity(),
            Expr::Generator(n) => alphabet.generator(n)?,
            Expr::Placeholder(k) => slots.get(*k).map(|w| (*w).clone()).ok_or(Error::Arity {
                expected: k + 1,
                found: slots.len(),
            })?,
            Expr::Product(v) => {
                let mut acc = Word::identity();
                for e in v {
                    acc.mul_assign(&e.evaluate(alphabet, slots)?);
                }
                acc
            }
            Expr::Power(b, k) => b.evaluate(alphabet, slots)?.pow(k)?,
            Expr::Commutator(v) => {
                let entries = v
                    .iter()
                    .map(|e| e.evaluate(alphabet, slots))
                    .collect::<Result<Vec<_>>>()?;
                Word::left_normed(&entries)?
            }
        })
    }

    /// Replaces generator names by other expressions.
    pub fn map_generators(&self, f: &impl Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Generator(n) => f(n).unwrap_or_else(|| self.clone()),
            Expr::Product(v) => Expr::Product(v.iter().map(|e| e.map_generators(f)).collect()),
            Expr::Commutator(v) => {
                Expr::Commutator(v.iter().map(|e| e.map_generators(f)).collect())
            }
            Expr::Power(b, k) => Expr::Power(Box::new(b.map_generators(f)), k.clone()),
            Expr::Identity | Expr::Placeholder(_) => self.clone(),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Product(_) | Expr::Power(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Identity => f.write_str("1"),
            Expr::Generator(n) => f.write_str(n),
            Expr::Placeholder(k) => write!(f, "_{k}"),
            Expr::Product(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    match e {
                        Expr::Product(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
            Expr::Power(b, k) => {
                b.fmt_atom(f)?;
                write!(f, "^{k}")
            }
            Expr::Commutator(v) => {
                f.write_str("[")?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Parses a word over `alphabet` and freely reduces it.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    let e = parse_expr(text)?;
    if let Some(&k) = e.placeholders().iter().next() {
        return Err(Error::PlaceholderInWord(k));
    }
    e.evaluate(alphabet, &[])
}

/// A term `w(_0; _1, ..., _s)` of the language of groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermExpr {
    expr: Expr,
    arity: usize,
}

impl TermExpr {
    pub fn new(expr: Expr) -> Result<Self> {
        let used = expr.placeholders();
        let max = used
            .iter()
            .next_back()
            .copied()
            .ok_or(Error::Placeholders(0))?;
        if let Some(missing) = (0..=max).find(|k| !used.contains(k)) {
            return Err(Error::Placeholders(missing));
        }
        Ok(TermExpr { expr, arity: max })
    }

    /// The identity term `_0`.
    pub fn subject() -> Self {
        TermExpr {
            expr: Expr::Placeholder(0),
            arity: 0,
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Number of argument placeholders `s`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `w(subject; args)`, freely reduced.
    pub fn evaluate(&self, alphabet: &Alphabet, subject: &Word, args: &[Word]) -> Result<Word> {
        if args.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                found: args.len(),
            });
        }
        let mut slots = Vec::with_capacity(args.len() + 1);
        slots.push(subject);
        slots.extend(args.iter());
        self.expr.evaluate(alphabet, &slots)
    }
}

impl fmt::Display for TermExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

pub fn parse_term(text: &str) -> Result<TermExpr> {
    TermExpr::new(parse_expr(text)?)
}

impl std::str::FromStr for TermExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_term(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::standard(3)
    }

    #[test]
    fn parse_word_examples() {
        let a = ab();
        let w = parse_word("x*y^-1", &a).unwrap();
        assert_eq!(w, Word::from_raw([(0, 1), (1, -1)]));
        let c = Word::commutator(&Word::generator(0), &Word::generator(1));
        assert_eq!(parse_word("[x,y]^2", &a).unwrap(), c.mul(&c));
        assert_eq!(a.format(&parse_word("(x*y)^3", &a).unwrap()), "x*y*x*y*x*y");
        assert_eq!(a.format(&parse_word(" 1 ", &a).unwrap()), "1");
        assert_eq!(
            parse_word("[x,y,x]", &a).unwrap(),
            Word::left_normed(&[Word::generator(0), Word::generator(1), Word::generator(0)])
                .unwrap()
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let a = ab();
        assert_eq!(
            parse_word("x**y", &a),
            Err(Error::syntax(2, "expected a generator, `1`, `(` or `[`"))
        );
        assert!(matches!(
            parse_word("x^", &a),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_word("[x]", &a),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_word("(x", &a),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_word("x y", &a),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_word("x$", &a),
            Err(Error::Syntax { position: 1, .. })
        ));
        assert_eq!(
            parse_word("q", &a),
            Err(Error::UnknownGenerator("q".into()))
        );
        assert_eq!(parse_word("x*_1", &a), Err(Error::PlaceholderInWord(1)));
        assert!(parse_word("2", &a).is_err());
    }

    #[test]
    fn parse_term_examples() {
        let w0 = parse_term("_1*_0*_1^-1").unwrap();
        assert_eq!(w0.arity(), 1);
        assert_eq!(
            w0.expr(),
            &Expr::Product(vec![
                Expr::Placeholder(1),
                Expr::Placeholder(0),
                Expr::Power(Box::new(Expr::Placeholder(1)), BigInt::from(-1)),
            ])
        );
        let w1 = parse_term("_1*_0^-1*_1^-1").unwrap();
        assert_eq!(w1.arity(), 1);
        let id = parse_term("_0").unwrap();
        assert_eq!(id.arity(), 0);
        assert_eq!(id, TermExpr::subject());
        assert_eq!(parse_term("_0*_2"), Err(Error::Placeholders(1)));
        assert_eq!(parse_term("_1"), Err(Error::Placeholders(0)));
    }

    #[test]
    fn evaluate_term_examples() {
        let a = ab();
        let x = Word::generator(0);
        let y = Word::generator(1);
        let w0 = parse_term("_1*_0*_1^-1").unwrap();
        let w1 = parse_term("_1*_0^-1*_1^-1").unwrap();
        assert_eq!(
            a.format(&w0.evaluate(&a, &x, std::slice::from_ref(&y)).unwrap()),
            "y*x*y^-1"
        );
        assert_eq!(
            a.format(&w1.evaluate(&a, &x, std::slice::from_ref(&y)).unwrap()),
            "y*x^-1*y^-1"
        );
        let g = parse_word("x*z^2*y", &a).unwrap();
        assert_eq!(
            parse_term("_0^1").unwrap().evaluate(&a, &g, &[]).unwrap(),
            g
        );
        assert_eq!(
            w0.evaluate(&a, &x, &[]),
            Err(Error::Arity {
                expected: 1,
                found: 0
            })
        );
    }

    #[test]
    fn printer_is_canonical() {
        for text in [
            "(x*y)^3",
            "[x,y,x]",
            "(x^2)^-3",
            "_1*(_0*x)*_1^-1",
            "[x*y,z^2]^4",
            "1",
        ] {
            let e = parse_expr(text).unwrap();
            assert_eq!(e.to_string(), text);
        }
    }
}
