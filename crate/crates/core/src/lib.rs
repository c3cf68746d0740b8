//! Free-group calculus: reduced words, Fox derivatives, group rings of
//! relatively free groups, the Magnus embedding, Hall collection and
//! homomorphism-word checks for automorphisms.

pub mod autos;
pub mod budget;
pub mod error;
pub mod groupring;
pub mod magnus;
pub mod nilpotent;
pub mod oracles;
pub mod parser;
pub mod words;

pub use autos::{
    conjugate_hom_word, hom_word_apply, is_hom_word, is_ia_on_r, Endomorphism, HomVerdict, HomWord,
};
pub use error::{Error, Result};
pub use groupring::{Key, Quotient, RingElement};
pub use magnus::{
    f_sigma, fox_derivative, fox_derivative_in, inner_on_r_witness, is_identity_mod_r_prime,
    magnus_derivation, InnerWitness, ModuleVector, NormalShape, RelatorSubgroup, SolvableKey,
};
pub use nilpotent::{collect, congruent_mod_gamma, hall_basis, lcs_weight, LcsWeight, NilpotentNF};
pub use oracles::{
    finite_probe, truncated_series_eval, wreath_eval, TruncatedSeries, WreathElement,
};
pub use parser::{parse_term, parse_word, TermExpr};
pub use words::{Alphabet, Generator, Syllable, Word};
