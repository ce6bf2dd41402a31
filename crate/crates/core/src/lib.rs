//! Categorial-grammar semantic parsing of controlled English into typed
//! lambda-term logical forms.
//!
//! ```
//! use catgram::{parse_sentence, Lexicon, ParseOptions};
//!
//! let lex = Lexicon::demo();
//! let r = parse_sentence("four is even", &lex, &ParseOptions::default()).unwrap();
//! assert_eq!(r.classes.len(), 1);
//! assert_eq!(r.classes[0].sem.to_string(), "even 4");
//! ```

pub mod backends;
pub mod certificate;
pub mod corpus;
pub mod derivation;
pub mod elab;
pub mod grammar;
pub mod lexicon;
pub mod normalize;
pub mod parser;
pub mod rules;
pub mod syntax;
pub mod term;
pub mod types;

pub use backends::{emit_term, emit_theorem, EmitOptions, Target};
pub use certificate::{check_certificate, emit_certificate, CertMeta, Certificate, CheckMode, Verdict};
pub use corpus::{run_case, Case, CaseReport, Corpus, Expectation, Outcome};
pub use derivation::{Derivation, Leaf, SemClass};
pub use grammar::{Cat, LiftSpec};
pub use lexicon::{LexEntry, Lexicon, LexiconError};
pub use normalize::{beta_normalize, normal_form, simplify};
pub use parser::{
    naive_enumerate, parse, parse_sentence, parse_with_stats, tokenize, Ambiguity, Limits, ParseError, ParseOptions,
    ParseResult, Stats,
};
pub use rules::Rule;
pub use term::{alpha_eq, type_of, HeytingOp, Signature, Term};
pub use types::{SemType, TypeSubst};
