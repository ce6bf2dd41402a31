//! Loading, linting and querying lexicon files.
//!
//! A lexicon file is TOML:
//!
//! ```toml
//! [types]
//! Nat = { numerals = true, lean = "Nat", coq = "nat" }
//!
//! [constants]
//! even = "Nat -> Prop"
//!
//! [coordinators]
//! and = "and"
//!
//! [macros]
//! Pred = { vars = ["A"], cat = "NP<A>\\S" }
//!
//! [[entry]]
//! word = "is"
//! vars = ["T"]
//! cat = "(NP<T>\\S)/ADJ<T>"
//! sem = "\\a. \\n. a n"
//! ```
//!
//! An entry may carry `feature = "name"`; it is then only visible to
//! parses that enable that feature.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::elab::{elaborate, ElabError};
use crate::grammar::{unify_cats, Cat};
use crate::syntax::{parse_cat, parse_surface, Macros, SyntaxError};
use crate::term::{HeytingOp, Signature, SignatureError, TargetNames, Term};
use crate::types::{SemType, TyVar, TypeSubst, VarSupply};

pub const DEMO_SOURCE: &str = "demo.toml";
pub const DEMO_TEXT: &str = include_str!("../data/demo.toml");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub vars: Vec<String>,
    pub cat: Cat,
    pub sem: Term,
    pub feature: Option<String>,
    /// File name the entry was loaded from.
    pub source: String,
    pub line: usize,
    /// Position among the entries for the same word in the same file.
    pub ordinal: usize,
}

impl LexEntry {
    pub fn var_set(&self) -> BTreeSet<String> {
        self.vars.iter().cloned().collect()
    }

    /// The entry with its type variables renamed apart.
    pub fn instantiate(&self, supply: &mut VarSupply) -> (Cat, Term) {
        let s: TypeSubst = self
            .vars
            .iter()
            .map(|v| (TyVar::new(v.clone()), SemType::Var(supply.fresh(v))))
            .collect();
        (self.cat.apply_subst(&s), self.sem.apply_subst(&s))
    }
}

impl fmt::Display for LexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}:{})", self.word, self.source, self.line)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LintKind {
    #[error("category syntax: {0}")]
    CatSyntax(SyntaxError),
    #[error("semantics syntax: {0}")]
    SemSyntax(SyntaxError),
    #[error("undeclared base type `{0}` (missing from [types] or from vars?)")]
    UnknownType(String),
    #[error("type variable `{0}` is declared twice or shadows a base type")]
    BadVar(String),
    #[error("ill-typed semantics: expected {expected}, found {found}")]
    TypeMismatch { expected: SemType, found: SemType },
    #[error("ill-typed semantics: {0}")]
    Sem(ElabError),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{file}:{line}: entry `{word}`: {kind}")]
pub struct LintError {
    pub file: String,
    pub line: usize,
    pub word: String,
    pub kind: LintKind,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{file}: {message}")]
    Io { file: String, message: String },
    #[error("{file}: {message}")]
    Parse { file: String, message: String },
    #[error("{file}: {error}")]
    Signature { file: String, error: SignatureError },
    #[error("{}", render_lint(.0))]
    Lint(Vec<LintError>),
}

fn render_lint(errs: &[LintError]) -> String {
    let lines: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
    lines.join("\n")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    types: BTreeMap<String, RawType>,
    #[serde(default)]
    constants: BTreeMap<String, String>,
    #[serde(default)]
    coordinators: BTreeMap<String, String>,
    #[serde(default)]
    macros: BTreeMap<String, RawMacro>,
    #[serde(default)]
    entry: Vec<toml::Spanned<RawEntry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawType {
    #[serde(default)]
    numerals: bool,
    lean: Option<String>,
    coq: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMacro {
    #[serde(default)]
    vars: Vec<String>,
    cat: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    word: String,
    #[serde(default)]
    vars: Vec<String>,
    cat: String,
    sem: String,
    feature: Option<String>,
    #[allow(dead_code)]
    comment: Option<String>,
}

/// An immutable, linted word database.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    pub signature: Signature,
    pub coordinators: BTreeMap<String, HeytingOp>,
    pub macros: Macros,
    entries: BTreeMap<String, Vec<LexEntry>>,
}

/// A lexicon entry with fresh type variables, ready for one chart.
#[derive(Clone, Debug)]
pub struct Instance<'a> {
    pub entry: &'a LexEntry,
    pub cat: Cat,
    pub sem: Term,
}

impl Lexicon {
    /// The demo lexicon shipped with the library.
    pub fn demo() -> Lexicon {
        Lexicon::from_sources(&[(DEMO_SOURCE, DEMO_TEXT)]).expect("demo lexicon is valid")
    }

    pub fn load_files<P: AsRef<Path>>(paths: &[P]) -> Result<Lexicon, LexiconError> {
        let mut texts = Vec::new();
        for p in paths {
            let p = p.as_ref();
            let name = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string());
            let text = std::fs::read_to_string(p).map_err(|e| LexiconError::Io {
                file: p.display().to_string(),
                message: e.to_string(),
            })?;
            texts.push((name, text));
        }
        let refs: Vec<(&str, &str)> = texts.iter().map(|(n, t)| (n.as_str(), t.as_str())).collect();
        Lexicon::from_sources(&refs)
    }

    /// Merges `(file name, contents)` pairs left to right, then lints every
    /// entry against the merged signature. All lint errors are reported.
    pub fn from_sources(sources: &[(&str, &str)]) -> Result<Lexicon, LexiconError> {
        let mut raws = Vec::new();
        for (name, text) in sources {
            let raw: RawFile = toml::from_str(text).map_err(|e| LexiconError::Parse {
                file: name.to_string(),
                message: e.to_string().trim_end().to_string(),
            })?;
            raws.push((*name, *text, raw));
        }

        let mut lex = Lexicon::default();
        for (name, _, raw) in &raws {
            let file_sig = file_signature(raw).map_err(|message| LexiconError::Parse {
                file: name.to_string(),
                message,
            })?;
            lex.signature
                .merge(&file_sig)
                .map_err(|error| LexiconError::Signature {
                    file: name.to_string(),
                    error,
                })?;
            for (word, op) in &raw.coordinators {
                let op = HeytingOp::from_name(op).ok_or_else(|| LexiconError::Parse {
                    file: name.to_string(),
                    message: format!("coordinator `{word}`: unknown operation `{op}`"),
                })?;
                lex.coordinators.insert(word.clone(), op);
            }
        }
        for (name, _, raw) in &raws {
            for (mname, m) in &raw.macros {
                let before = lex.macros.0.get(mname).cloned();
                lex.macros
                    .define(mname, m.vars.clone(), &m.cat)
                    .map_err(|e| LexiconError::Parse {
                        file: name.to_string(),
                        message: format!("macro `{mname}`: {e}"),
                    })?;
                if let Some(prev) = before {
                    if lex.macros.0.get(mname) != Some(&prev) {
                        return Err(LexiconError::Parse {
                            file: name.to_string(),
                            message: format!("macro `{mname}` redefined differently"),
                        });
                    }
                }
            }
        }
        for b in lex.signature.constants.values() {
            if let Err(error) = lex.signature.check_type(b) {
                return Err(LexiconError::Signature {
                    file: sources.first().map(|s| s.0).unwrap_or("").to_string(),
                    error,
                });
            }
        }

        let mut lint = Vec::new();
        for (name, text, raw) in &raws {
            let mut ordinals: BTreeMap<&str, usize> = BTreeMap::new();
            for spanned in &raw.entry {
                let e = spanned.get_ref();
                let line = line_of(text, spanned.span().start);
                let ord = ordinals.entry(e.word.as_str()).or_insert(0);
                let ordinal = *ord;
                *ord += 1;
                match lint_scheme(&e.vars, &e.cat, &e.sem, &lex.signature, &lex.macros) {
                    Ok((cat, sem)) => {
                        lex.entries.entry(e.word.clone()).or_default().push(LexEntry {
                            word: e.word.clone(),
                            vars: e.vars.clone(),
                            cat,
                            sem,
                            feature: e.feature.clone(),
                            source: name.to_string(),
                            line,
                            ordinal,
                        });
                    }
                    Err(kind) => lint.push(LintError {
                        file: name.to_string(),
                        line,
                        word: e.word.clone(),
                        kind,
                    }),
                }
            }
        }
        if lint.is_empty() {
            Ok(lex)
        } else {
            Err(LexiconError::Lint(lint))
        }
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self, word: &str) -> &[LexEntry] {
        self.entries.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn all_entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values().flatten()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn find_entry(&self, source: &str, word: &str, ordinal: usize) -> Option<&LexEntry> {
        self.entries(word)
            .iter()
            .find(|e| e.source == source && e.ordinal == ordinal)
    }

    pub fn coordinator(&self, word: &str) -> Option<HeytingOp> {
        self.coordinators.get(word).copied()
    }

    /// Entries for `word` visible under `features`, each renamed apart.
    pub fn lookup<'a>(&'a self, word: &str, features: &BTreeSet<String>, supply: &mut VarSupply) -> Vec<Instance<'a>> {
        self.entries(word)
            .iter()
            .filter(|e| e.feature.as_ref().is_none_or(|f| features.contains(f)))
            .map(|entry| {
                let (cat, sem) = entry.instantiate(supply);
                Instance { entry, cat, sem }
            })
            .collect()
    }

    /// Pairs of entries for the same word whose categories overlap.
    pub fn ambiguity_audit(&self) -> AuditReport {
        let mut supply = VarSupply::new();
        let mut pairs = Vec::new();
        for (word, es) in &self.entries {
            for i in 0..es.len() {
                for j in i + 1..es.len() {
                    let (a, _) = es[i].instantiate(&mut supply);
                    let (b, _) = es[j].instantiate(&mut supply);
                    pairs.push(AuditPair {
                        word: word.clone(),
                        first: EntryLoc::of(&es[i]),
                        second: EntryLoc::of(&es[j]),
                        overlapping: unify_cats(&a, &b, &TypeSubst::new()).is_ok(),
                    });
                }
            }
        }
        AuditReport { pairs }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|b| *b == b'\n').count() + 1
}

fn file_signature(raw: &RawFile) -> Result<Signature, String> {
    let mut sig = Signature::new();
    for (name, t) in &raw.types {
        if name == "Prop" {
            return Err("`Prop` is built in and cannot be declared".into());
        }
        sig.types.insert(
            name.clone(),
            TargetNames {
                lean: t.lean.clone(),
                coq: t.coq.clone(),
            },
        );
        if t.numerals {
            if let Some(prev) = &sig.numeral_type {
                return Err(format!("numeral type declared as both {prev} and {name}"));
            }
            sig.numeral_type = Some(name.clone());
        }
    }
    for (name, ty) in &raw.constants {
        let ty = crate::syntax::parse_type(ty, &BTreeSet::new()).map_err(|e| format!("constant `{name}`: {e}"))?;
        sig.constants.insert(name.clone(), ty);
    }
    Ok(sig)
}

/// Parses and type-checks one entry scheme.
pub fn lint_scheme(
    vars: &[String],
    cat_src: &str,
    sem_src: &str,
    sig: &Signature,
    macros: &Macros,
) -> Result<(Cat, Term), LintKind> {
    let mut var_set = BTreeSet::new();
    for v in vars {
        if !var_set.insert(v.clone()) || sig.has_type(v) || v == "Prop" {
            return Err(LintKind::BadVar(v.clone()));
        }
    }
    let cat = parse_cat(cat_src, &var_set, macros).map_err(LintKind::CatSyntax)?;
    let mut unknown = None;
    cat.for_each_type(&mut |t| {
        if unknown.is_none() {
            if let Err(SignatureError::UnknownType(b)) = sig.check_type(t) {
                unknown = Some(b);
            }
        }
    });
    if let Some(b) = unknown {
        return Err(LintKind::UnknownType(b));
    }
    let surface = parse_surface(sem_src, &var_set).map_err(LintKind::SemSyntax)?;
    let expected = cat.interp();
    let sem = elaborate(&surface, sig, Some(&expected)).map_err(|e| match e {
        ElabError::Expected { expected, found } => LintKind::TypeMismatch { expected, found },
        ElabError::UnknownType(b) => LintKind::UnknownType(b),
        other => LintKind::Sem(other),
    })?;
    Ok((cat, sem))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryLoc {
    pub source: String,
    pub line: usize,
    pub cat: Cat,
}

impl EntryLoc {
    fn of(e: &LexEntry) -> Self {
        EntryLoc {
            source: e.source.clone(),
            line: e.line,
            cat: e.cat.clone(),
        }
    }
}

impl fmt::Display for EntryLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}:{}", self.cat, self.source, self.line)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditPair {
    pub word: String,
    pub first: EntryLoc,
    pub second: EntryLoc,
    /// The two categories unify, so the word can be truly ambiguous.
    pub overlapping: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub pairs: Vec<AuditPair>,
}

impl AuditReport {
    pub fn flagged(&self) -> impl Iterator<Item = &AuditPair> {
        self.pairs.iter().filter(|p| p.overlapping)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
[types]
Nat = { numerals = true }
List = {}

[constants]
even = "Nat -> Prop"
sorted = "List -> Prop"

[[entry]]
word = "four"
cat = "NP<Nat>"
sem = "4"

[[entry]]
word = "is"
vars = ["T"]
cat = "(NP<T>\\S)/ADJ<T>"
sem = "\\a. \\n. a n"

[[entry]]
word = "is"
vars = ["T"]
cat = "(NP<T>\\S)/NP<T>"
sem = "\\a. \\n. n = a"
"#;

    fn small() -> Lexicon {
        Lexicon::from_sources(&[("small.toml", SMALL)]).unwrap()
    }

    #[test]
    fn loads_and_looks_up() {
        let lex = small();
        let mut supply = VarSupply::new();
        let four = lex.lookup("four", &BTreeSet::new(), &mut supply);
        assert_eq!(four.len(), 1);
        assert_eq!(four[0].entry.line, 10);
        assert_eq!(lex.lookup("is", &BTreeSet::new(), &mut supply).len(), 2);
        assert!(lex.lookup("zzzz", &BTreeSet::new(), &mut supply).is_empty());
    }

    #[test]
    fn lookups_are_fresh() {
        let lex = small();
        let mut supply = VarSupply::new();
        let a = lex.lookup("is", &BTreeSet::new(), &mut supply);
        let b = lex.lookup("is", &BTreeSet::new(), &mut supply);
        let va = a[0].cat.type_vars();
        let vb = b[0].cat.type_vars();
        assert_eq!(va.len(), 1);
        assert!(va.is_disjoint(&vb));
    }

    #[test]
    fn ill_typed_entry_rejected_with_types() {
        let bad = format!("{SMALL}\n[[entry]]\nword = \"even\"\ncat = \"ADJ<Nat>\"\nsem = \"sorted\"\n");
        match Lexicon::from_sources(&[("bad.toml", &bad)]) {
            Err(LexiconError::Lint(errs)) => {
                assert_eq!(errs.len(), 1);
                let msg = errs[0].to_string();
                assert!(msg.contains("expected Nat -> Prop"), "{msg}");
                assert!(msg.contains("found List -> Prop"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_where_predicate_expected() {
        let sig = small().signature;
        let e = lint_scheme(&[], "ADJ<Nat>", "4", &sig, &Macros::default()).unwrap_err();
        assert_eq!(
            e,
            LintKind::TypeMismatch {
                expected: SemType::arrow(SemType::base("Nat"), SemType::Truth),
                found: SemType::base("Nat")
            }
        );
    }

    #[test]
    fn given_scheme_lints() {
        let sig = small().signature;
        let vars = vec!["A".to_string(), "B".to_string()];
        assert!(lint_scheme(
            &vars,
            "NP<A -> B>\\(NP<B>/NP<A>)",
            "\\f. \\arg. f arg",
            &sig,
            &Macros::default()
        )
        .is_ok());
    }

    #[test]
    fn generic_variable_must_stay_generic() {
        let sig = small().signature;
        let vars = vec!["T".to_string()];
        assert!(lint_scheme(&vars, "ADJ<T>", "even", &sig, &Macros::default()).is_err());
    }

    #[test]
    fn signature_conflict_detected() {
        let other = "[types]\nList = {}\n[constants]\neven = \"List -> Prop\"\n";
        let r = Lexicon::from_sources(&[("a.toml", SMALL), ("b.toml", other)]);
        assert!(matches!(r, Err(LexiconError::Signature { .. })));
    }

    #[test]
    fn disjoint_files_merge() {
        let extra = "[types]\nNat = {}\n[constants]\nodd = \"Nat -> Prop\"\n[[entry]]\nword = \"odd\"\ncat = \"ADJ<Nat>\"\nsem = \"odd\"\n";
        let lex = Lexicon::from_sources(&[("a.toml", SMALL), ("b.toml", extra)]).unwrap();
        assert_eq!(lex.entries("odd").len(), 1);
        assert_eq!(lex.entries("four").len(), 1);
        assert_eq!(lex.entries("odd")[0].source, "b.toml");
    }

    #[test]
    fn audit_separates_copulas() {
        let report = small().ambiguity_audit();
        assert_eq!(report.pairs.len(), 1);
        assert_eq!(report.flagged().count(), 0);
    }

    #[test]
    fn audit_flags_duplicate_adjectives() {
        let text = SMALL.replace(
            "[constants]\n",
            "[constants]\npositive = \"Nat -> Prop\"\n",
        ) + "\n[[entry]]\nword = \"even\"\ncat = \"ADJ<Nat>\"\nsem = \"even\"\n\n[[entry]]\nword = \"even\"\ncat = \"ADJ<Nat>\"\nsem = \"positive\"\n";
        let report = Lexicon::from_sources(&[("dup.toml", &text)]).unwrap().ambiguity_audit();
        let flagged: Vec<_> = report.flagged().collect();
        assert_eq!(flagged.len(), 1);
        assert_eq!(flagged[0].word, "even");
    }

    #[test]
    fn empty_lexicon_has_empty_audit() {
        let lex = Lexicon::from_sources(&[("empty.toml", "")]).unwrap();
        assert!(lex.ambiguity_audit().pairs.is_empty());
    }

    #[test]
    fn feature_gated_entries_hidden_by_default() {
        let text =
            format!("{SMALL}\n[[entry]]\nword = \"four\"\ncat = \"NP<Nat>\"\nsem = \"3\"\nfeature = \"odd-four\"\n");
        let lex = Lexicon::from_sources(&[("f.toml", &text)]).unwrap();
        let mut supply = VarSupply::new();
        assert_eq!(lex.lookup("four", &BTreeSet::new(), &mut supply).len(), 1);
        let on: BTreeSet<String> = ["odd-four".to_string()].into();
        assert_eq!(lex.lookup("four", &on, &mut supply).len(), 2);
    }
}
