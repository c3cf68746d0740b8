use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use foxcalc::words::standard_name;
use foxcalc::{
    budget, collect, congruent_mod_gamma, f_sigma, fox_derivative_in, hall_basis, hom_word_apply,
    inner_on_r_witness, is_hom_word, is_ia_on_r, lcs_weight, magnus_derivation, parse_word,
    Alphabet, Endomorphism, Error, HomWord, InnerWitness, Quotient, Word,
};
use serde_json::{json, Value};

mod selftest;

#[derive(Parser)]
#[command(
    name = "foxcalc",
    version,
    about = "Free-group calculus: Fox derivatives, Magnus embeddings, Hall collection"
)]
struct Cli {
    /// Rank of the standard alphabet x, y, z, t, u, v, w, g7, ...
    #[arg(long, global = true)]
    rank: Option<usize>,
    /// Comma-separated generator names; overrides the standard alphabet.
    #[arg(long, global = true)]
    gens: Option<String>,
    /// free | trivial | abelian | metabelian | nilpotent:c | solvable:k
    #[arg(long, global = true)]
    variety: Option<String>,
    /// Emit JSON instead of canonical text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of ring terms or work steps before giving up.
    #[arg(long, global = true, value_name = "MAX_TERMS")]
    budget: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TermArgs {
    /// Term over `_0` (subject) and `_1.._s` (arguments).
    #[arg(long)]
    term: String,
    /// Argument words, separated by `;` or given repeatedly.
    #[arg(long, value_delimiter = ';')]
    args: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce a word.
    Reduce { word: String },
    /// Exponent sums of a word.
    Expsum {
        word: String,
        #[arg(long)]
        gen: Option<String>,
    },
    /// Fox derivative, projected to --variety (default free).
    Fox {
        word: String,
        #[arg(long)]
        gen: String,
    },
    /// Magnus derivation with coefficients in --coeff, or in F/R for --variety F/R'.
    Magnus {
        word: String,
        #[arg(long)]
        coeff: Option<String>,
    },
    /// Whether a word is trivial in --variety.
    Istrivial { word: String },
    /// Whether two words are equal in --variety.
    Equal { a: String, b: String },
    /// Normal form in the free nilpotent group of the given class.
    Collect {
        word: String,
        #[arg(long)]
        class: usize,
        /// Also report the lower-central weight.
        #[arg(long)]
        lcs: bool,
    },
    /// Whether a and b agree modulo gamma_k.
    Congruent {
        a: String,
        b: String,
        #[arg(long)]
        k: usize,
    },
    /// Hall basic commutators up to the given class.
    Hallbasis {
        #[arg(long)]
        class: usize,
    },
    /// Check the homomorphism law for a term and arguments in --variety.
    HomwordCheck(TermArgs),
    /// Evaluate a term at a subject word.
    HomwordApply {
        #[command(flatten)]
        term: TermArgs,
        word: String,
    },
    /// The element f_sigma of a term, with unit and witness report.
    Fsigma {
        #[command(flatten)]
        term: TermArgs,
        #[arg(long)]
        coeff: Option<String>,
    },
    /// Apply endomorphisms (composed right to left) to a word.
    AutApply {
        #[arg(long = "aut", required = true)]
        auts: Vec<String>,
        word: String,
    },
    /// Compose endomorphisms; the last one acts first.
    AutCompose {
        #[arg(long = "aut", required = true)]
        auts: Vec<String>,
    },
    /// Whether an endomorphism is IA on R/R' for --variety F/R'.
    IaCheck {
        #[arg(long = "aut")]
        aut: String,
    },
    /// Cross-check the solvers against the independent oracles.
    Selftest {
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget { .. } => 3,
            Error::Syntax { .. }
            | Error::UnknownGenerator(_)
            | Error::InvalidName(_)
            | Error::Placeholders(_)
            | Error::PlaceholderInWord(_)
            | Error::Arity { .. }
            | Error::BadDescriptor(_)
            | Error::Json(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Reads `@path` arguments from disk.
fn resolve(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn standard_index(name: &str) -> Option<usize> {
    (0..7).find(|&i| standard_name(i) == name).or_else(|| {
        name.strip_prefix('g')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i >= 7 && standard_name(i) == name)
    })
}

/// Identifiers that look like generator names.
fn identifiers(text: &str) -> Vec<&str> {
    text.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .filter(|s| s.starts_with(|c: char| c.is_ascii_alphabetic()))
        .collect()
}

const SPEC_KEYWORDS: [&str; 5] = ["id", "inner", "perm", "transvect", "images"];

struct Context {
    alphabet: Alphabet,
    json: bool,
    variety: Option<String>,
}

impl Context {
    fn new(cli: &Cli, texts: &[String], min_rank: usize) -> Result<Self, Failure> {
        let alphabet = match (&cli.gens, cli.rank) {
            (Some(g), r) => {
                let a = Alphabet::new(g.split(',').map(str::trim).filter(|s| !s.is_empty()))?;
                if r.is_some_and(|r| r != a.rank()) {
                    return Err(usage("--rank disagrees with the number of --gens"));
                }
                a
            }
            (None, Some(r)) => Alphabet::standard(r),
            (None, None) => {
                let mut rank = min_rank;
                for t in texts {
                    for id in identifiers(t) {
                        if SPEC_KEYWORDS.contains(&id) {
                            continue;
                        }
                        let i = standard_index(id).ok_or_else(|| {
                            usage(format!("unknown generator `{id}`; pass --gens"))
                        })?;
                        rank = rank.max(i + 1);
                    }
                }
                Alphabet::standard(rank)
            }
        };
        Ok(Context {
            alphabet,
            json: cli.json,
            variety: cli.variety.clone(),
        })
    }

    fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    fn word(&self, text: &str) -> Result<Word, Failure> {
        Ok(parse_word(text, &self.alphabet)?)
    }

    fn quotient(&self, text: Option<&str>, default: &str) -> Result<Quotient, Failure> {
        Ok(Quotient::parse(text.unwrap_or(default), self.rank())?)
    }

    fn variety(&self, default: &str) -> Result<Quotient, Failure> {
        self.quotient(self.variety.as_deref(), default)
    }

    /// Coefficients `F/R` for the variety `F/R'`, or `coeff` if given.
    fn coefficients(&self, coeff: Option<&str>) -> Result<Quotient, Failure> {
        if coeff.is_some() {
            return self.quotient(coeff, "abelian");
        }
        let v = self.variety("metabelian")?;
        Ok(v.coefficient_quotient().unwrap_or(v))
    }

    fn generator(&self, name: &str) -> Result<usize, Failure> {
        self.alphabet
            .index_of(name)
            .or_else(|| name.parse().ok().filter(|&i: &usize| i < self.rank()))
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()).into())
    }

    fn hom_word(&self, t: &TermArgs) -> Result<HomWord, Failure> {
        let args: Vec<&str> = t.args.iter().map(String::as_str).collect();
        Ok(HomWord::parse(self.alphabet.clone(), &t.term, &args)?)
    }

    fn endomorphism(&self, spec: &str) -> Result<Endomorphism, Failure> {
        let n = self.rank();
        let e = if spec.trim_start().starts_with('{') {
            let v: Value =
                serde_json::from_str(spec).map_err(|e| usage(format!("bad JSON: {e}")))?;
            Endomorphism::from_json(&v, &self.alphabet)?
        } else if spec == "id" {
            Endomorphism::identity(n)
        } else if let Some(w) = spec.strip_prefix("inner:") {
            Endomorphism::inner(&self.word(w)?, n)?
        } else if let Some(p) = spec.strip_prefix("perm:") {
            let p = p
                .split(',')
                .map(|s| self.generator(s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            if p.len() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    found: p.len(),
                }
                .into());
            }
            Endomorphism::permutational(&p)?
        } else if let Some(rest) = spec.strip_prefix("transvect:") {
            let (g, w) = rest
                .split_once(':')
                .ok_or_else(|| usage("expected transvect:<generator>:<word>"))?;
            Endomorphism::transvection(self.generator(g.trim())?, &self.word(w)?, n)?
        } else if let Some(list) = spec.strip_prefix("images:") {
            let images = list
                .split(';')
                .map(|w| self.word(w))
                .collect::<Result<Vec<_>, _>>()?;
            if images.len() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    found: images.len(),
                }
                .into());
            }
            Endomorphism::from_images(images)?
        } else {
            return Err(usage(format!(
                "unknown endomorphism `{spec}`; use id, inner:w, perm:.., transvect:g:w, images:w;.. or JSON"
            )));
        };
        match &self.variety {
            Some(_) => Ok(e.with_variety(self.variety("free")?)?),
            None => Ok(e),
        }
    }

    fn composed(&self, specs: &[String]) -> Result<Endomorphism, Failure> {
        let mut acc = Endomorphism::identity(self.rank());
        if self.variety.is_some() {
            acc = acc.with_variety(self.variety("free")?)?;
        }
        for s in specs {
            acc = acc.compose(&self.endomorphism(s)?)?;
        }
        Ok(acc)
    }

    fn fmt(&self, w: &Word) -> String {
        self.alphabet.format(w)
    }

    fn boolean(&self, b: bool) -> String {
        if self.json {
            json!({ "result": b }).to_string()
        } else {
            b.to_string()
        }
    }
}

/// Resolves `@file` arguments in place and returns the texts that name
/// generators, plus a lower bound on the rank.
fn inputs(cmd: &mut Command) -> Result<(Vec<String>, usize), Failure> {
    fn term(t: &mut TermArgs) -> Result<Vec<String>, Failure> {
        t.term = resolve(&t.term)?;
        for a in t.args.iter_mut() {
            *a = resolve(a)?;
        }
        Ok(std::iter::once(t.term.clone())
            .chain(t.args.iter().cloned())
            .collect())
    }
    fn specs(auts: &mut [String]) -> Result<(Vec<String>, usize), Failure> {
        let mut texts = Vec::new();
        let mut min_rank = 0;
        for a in auts.iter_mut() {
            *a = resolve(a)?;
            if let Some(p) = a.strip_prefix("perm:") {
                min_rank = min_rank.max(p.split(',').count());
            }
            if let Some(list) = a.strip_prefix("images:") {
                min_rank = min_rank.max(list.split(';').count());
            }
            if a.trim_start().starts_with('{') {
                if let Ok(v) = serde_json::from_str::<Value>(a) {
                    let images = v["images"].as_array().cloned().unwrap_or_default();
                    min_rank = min_rank.max(images.len());
                    texts.extend(images.iter().filter_map(|i| i.as_str().map(String::from)));
                }
                continue;
            }
            texts.push(a.clone());
        }
        Ok((texts, min_rank))
    }
    Ok(match cmd {
        Command::Reduce { word }
        | Command::Istrivial { word }
        | Command::Magnus { word, .. }
        | Command::Collect { word, .. }
        | Command::Expsum { word, .. }
        | Command::Fox { word, .. } => {
            *word = resolve(word)?;
            let mut texts = vec![word.clone()];
            if let Command::Fox { gen, .. } | Command::Expsum { gen: Some(gen), .. } = cmd {
                texts.push(gen.clone());
            }
            (texts, 0)
        }
        Command::Equal { a, b } | Command::Congruent { a, b, .. } => {
            *a = resolve(a)?;
            *b = resolve(b)?;
            (vec![a.clone(), b.clone()], 0)
        }
        Command::HomwordCheck(t) | Command::Fsigma { term: t, .. } => (term(t)?, 0),
        Command::HomwordApply { term: t, word } => {
            *word = resolve(word)?;
            let mut texts = term(t)?;
            texts.push(word.clone());
            (texts, 0)
        }
        Command::AutApply { auts, word } => {
            *word = resolve(word)?;
            let (mut texts, r) = specs(auts)?;
            texts.push(word.clone());
            (texts, r)
        }
        Command::AutCompose { auts } => specs(auts)?,
        Command::IaCheck { aut } => specs(std::slice::from_mut(aut))?,
        Command::Hallbasis { .. } | Command::Selftest { .. } => (Vec::new(), 2),
    })
}

fn run(mut cli: Cli) -> Result<String, Failure> {
    if let Some(b) = cli.budget {
        budget::set_max_terms(b);
    }
    let (texts, min_rank) = inputs(&mut cli.command)?;
    let cx = Context::new(&cli, &texts, min_rank)?;
    let al = &cx.alphabet;
    Ok(match &cli.command {
        Command::Reduce { word } => {
            let w = cx.word(word)?;
            if cx.json {
                json!({ "word": cx.fmt(&w) }).to_string()
            } else {
                cx.fmt(&w)
            }
        }
        Command::Expsum { word, gen } => {
            let w = cx.word(word)?;
            let gens: Vec<usize> = match gen {
                Some(g) => vec![cx.generator(g)?],
                None => (0..cx.rank()).collect(),
            };
            if cx.json {
                let map: serde_json::Map<String, Value> = gens
                    .iter()
                    .map(|&g| (al.name(g).to_string(), json!(w.exponent_sum(g).to_string())))
                    .collect();
                Value::Object(map).to_string()
            } else if gen.is_some() {
                w.exponent_sum(gens[0]).to_string()
            } else {
                gens.iter()
                    .map(|&g| format!("{}: {}", al.name(g), w.exponent_sum(g)))
                    .collect::<Vec<_>>()
                    .join("\n")
            }
        }
        Command::Fox { word, gen } => {
            let q = cx.variety("free")?;
            let d = fox_derivative_in(&cx.word(word)?, cx.generator(gen)?, q)?;
            if cx.json {
                d.to_json(al).to_string()
            } else {
                d.format(al)
            }
        }
        Command::Magnus { word, coeff } => {
            let q = cx.coefficients(coeff.as_deref())?;
            let m = magnus_derivation(&cx.word(word)?, q)?;
            if cx.json {
                m.to_json(al).to_string()
            } else {
                m.format(al)
            }
        }
        Command::Istrivial { word } => {
            cx.boolean(cx.variety("free")?.is_identity(&cx.word(word)?)?)
        }
        Command::Equal { a, b } => {
            cx.boolean(cx.variety("free")?.equal(&cx.word(a)?, &cx.word(b)?)?)
        }
        Command::Collect { word, class, lcs } => {
            if *class == 0 {
                return Err(usage("--class must be at least 1"));
            }
            let w = cx.word(word)?;
            let nf = collect(&w, cx.rank(), *class)?;
            let weight = lcs.then(|| lcs_weight(&w, cx.rank(), *class)).transpose()?;
            if cx.json {
                let mut v = nf.to_json(al);
                if let Some(k) = weight {
                    v["lcs_weight"] = json!(k.to_string());
                }
                v.to_string()
            } else {
                let mut out = nf.display(al).to_string();
                if let Some(k) = weight {
                    out.push_str(&format!("\nweight: {k}"));
                }
                out
            }
        }
        Command::Congruent { a, b, k } => {
            if *k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            cx.boolean(congruent_mod_gamma(
                &cx.word(a)?,
                &cx.word(b)?,
                cx.rank(),
                *k,
            )?)
        }
        Command::Hallbasis { class } => {
            if *class == 0 {
                return Err(usage("--class must be at least 1"));
            }
            let basis = hall_basis(cx.rank(), *class);
            let rows = basis
                .elements()
                .iter()
                .map(|b| (b.id, b.weight, basis.text(b.id, al)));
            if cx.json {
                Value::Array(
                    rows.map(|(id, w, t)| json!({ "id": id, "weight": w, "commutator": t }))
                        .collect(),
                )
                .to_string()
            } else {
                rows.map(|(id, w, t)| format!("{id} {w} {t}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            }
        }
        Command::HomwordCheck(t) => {
            let hw = cx.hom_word(t)?;
            let v = is_hom_word(&hw, cx.variety("free")?)?;
            if cx.json {
                v.to_json().to_string()
            } else {
                let head = match v.reason() {
                    None => "accepted".to_string(),
                    Some(r) => format!("rejected: {r}"),
                };
                format!(
                    "{head}\nhom law: {}\nw(1) = 1: {}\nplaceholder exponent sum: {}",
                    v.hom_law, v.identity_preserved, v.placeholder_exponent_sum
                )
            }
        }
        Command::HomwordApply { term, word } => {
            let w = hom_word_apply(&cx.hom_word(term)?, &cx.word(word)?)?;
            if cx.json {
                json!({ "word": cx.fmt(&w) }).to_string()
            } else {
                cx.fmt(&w)
            }
        }
        Command::Fsigma { term, coeff } => {
            let q = cx.coefficients(coeff.as_deref())?;
            let f = f_sigma(&cx.hom_word(term)?, q)?;
            let unit = f
                .as_trivial_unit()
                .map(|(s, k)| format!("({s}, {})", q.key_text(&k, al)));
            let witness = inner_on_r_witness(&f);
            if cx.json {
                json!({
                    "f_sigma": f.to_json(al),
                    "augmentation": f.augmentation().to_string(),
                    "trivial_unit": unit,
                    "witness": witness.as_ref().map(|w| match w {
                        InnerWitness::Conjugator(k) => json!({ "conjugator": q.key_text(k, al) }),
                        InnerWitness::NegativeUnit => json!("impossible: negative unit"),
                    }),
                })
                .to_string()
            } else {
                format!(
                    "f_sigma: {}\naugmentation: {}\ntrivial unit: {}\nwitness: {}",
                    f.format(al),
                    f.augmentation(),
                    unit.unwrap_or_else(|| "none".into()),
                    witness.map_or_else(|| "none".into(), |w| w.format(q, al)),
                )
            }
        }
        Command::AutApply { auts, word } => {
            let w = cx.composed(auts)?.apply(&cx.word(word)?)?;
            if cx.json {
                json!({ "word": cx.fmt(&w) }).to_string()
            } else {
                cx.fmt(&w)
            }
        }
        Command::AutCompose { auts } => {
            let e = cx.composed(auts)?;
            if cx.json {
                e.to_json(al).to_string()
            } else {
                let mut lines: Vec<String> = e
                    .images()
                    .iter()
                    .enumerate()
                    .map(|(i, w)| format!("{} -> {}", al.name(i), cx.fmt(w)))
                    .collect();
                lines.push(format!(
                    "abelianization determinant: {}",
                    e.abelianization_determinant()
                ));
                lines.push(format!(
                    "inverse certificate: {}",
                    if e.has_inverse_certificate() {
                        "yes"
                    } else {
                        "no"
                    }
                ));
                lines.join("\n")
            }
        }
        Command::IaCheck { aut } => {
            let q = cx.variety("metabelian")?;
            cx.boolean(is_ia_on_r(&cx.endomorphism(aut)?, q)?)
        }
        Command::Selftest { trials } => {
            let report = selftest::run(*trials, cli.seed)?;
            let ok = report.iter().all(|r| r.ok);
            let text = if cx.json {
                Value::Array(report.iter().map(selftest::Check::to_json).collect()).to_string()
            } else {
                report
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            if !ok {
                return Err(Failure {
                    code: 1,
                    message: text,
                });
            }
            text
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
