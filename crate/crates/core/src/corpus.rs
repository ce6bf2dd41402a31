//! Corpus files: sentences paired with the logical form they must produce.
//!
//! ```toml
//! budget_ms = 2000
//!
//! [[case]]
//! id = "even"
//! sentence = "four is even"
//! expect = "alpha-eq"
//! term = "even 4"
//! ```
//!
//! `expect` is one of `alpha-eq` (the parse is unique and alpha-equivalent
//! to `term`), `true-ambiguity` (at least two classes; if `terms` is given,
//! exactly those up to alpha-equivalence, in any order) and `no-parse`.
//! A case may set `features`, `max_lift` and `fuel`.

use std::collections::BTreeSet;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elab::parse_term;
use crate::lexicon::Lexicon;
use crate::parser::{parse_sentence, ParseError, ParseOptions, ParseResult};
use crate::term::{alpha_eq, Signature, Term};
use crate::types::SemType;

pub const VFA_SOURCE: &str = "vfa.toml";
pub const VFA_TEXT: &str = include_str!("../data/vfa.toml");
pub const WORKED_SOURCE: &str = "worked.toml";
pub const WORKED_TEXT: &str = include_str!("../data/worked.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    AlphaEq,
    TrueAmbiguity,
    NoParse,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    budget_ms: Option<u64>,
    #[serde(default)]
    case: Vec<RawCase>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    id: String,
    sentence: String,
    expect: Expectation,
    term: Option<String>,
    terms: Option<Vec<String>>,
    #[serde(default)]
    features: Vec<String>,
    max_lift: Option<usize>,
    fuel: Option<u64>,
    #[allow(dead_code)]
    comment: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Case {
    pub id: String,
    pub sentence: String,
    pub expect: Expectation,
    /// Expected logical forms: one for `alpha-eq`, any number for
    /// `true-ambiguity`, none for `no-parse`.
    pub terms: Vec<Term>,
    pub features: Vec<String>,
    pub max_lift: Option<usize>,
    pub fuel: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub budget: Option<Duration>,
    pub cases: Vec<Case>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("{file}: {message}")]
    Parse { file: String, message: String },
    #[error("{file}: case `{id}`: {message}")]
    Case { file: String, id: String, message: String },
}

impl Corpus {
    /// Parses a corpus and type-checks its expected terms against `sig`.
    pub fn from_str(file: &str, text: &str, sig: &Signature) -> Result<Corpus, CorpusError> {
        let raw: RawCorpus = toml::from_str(text).map_err(|e| CorpusError::Parse {
            file: file.to_string(),
            message: e.to_string().trim_end().to_string(),
        })?;
        let mut seen = BTreeSet::new();
        let mut cases = Vec::new();
        for c in raw.case {
            let err = |message: String| CorpusError::Case {
                file: file.to_string(),
                id: c.id.clone(),
                message,
            };
            if !seen.insert(c.id.clone()) {
                return Err(err("duplicate case id".into()));
            }
            let srcs: Vec<&String> = match (c.expect, &c.term, &c.terms) {
                (Expectation::AlphaEq, Some(t), None) => vec![t],
                (Expectation::AlphaEq, _, _) => return Err(err("`alpha-eq` needs exactly `term`".into())),
                (Expectation::TrueAmbiguity, None, ts) => ts.iter().flatten().collect(),
                (Expectation::TrueAmbiguity, Some(_), _) => {
                    return Err(err("`true-ambiguity` takes `terms`, not `term`".into()))
                }
                (Expectation::NoParse, None, None) => vec![],
                (Expectation::NoParse, _, _) => return Err(err("`no-parse` takes no terms".into())),
            };
            let mut terms = Vec::new();
            for s in srcs {
                let t = parse_term(s, sig, &BTreeSet::new(), Some(&SemType::Truth))
                    .map_err(|e| err(format!("expected term `{s}`: {e}")))?;
                terms.push(t);
            }
            cases.push(Case {
                id: c.id,
                sentence: c.sentence,
                expect: c.expect,
                terms,
                features: c.features,
                max_lift: c.max_lift,
                fuel: c.fuel,
            });
        }
        Ok(Corpus {
            budget: raw.budget_ms.map(Duration::from_millis),
            cases,
        })
    }

    pub fn vfa(lex: &Lexicon) -> Corpus {
        Corpus::from_str(VFA_SOURCE, VFA_TEXT, &lex.signature).expect("shipped corpus is valid")
    }

    pub fn worked(lex: &Lexicon) -> Corpus {
        Corpus::from_str(WORKED_SOURCE, WORKED_TEXT, &lex.signature).expect("shipped corpus is valid")
    }
}

impl Case {
    /// `base` with this case's features and limits applied.
    pub fn options(&self, base: &ParseOptions) -> ParseOptions {
        let mut o = base.clone();
        o.features.extend(self.features.iter().cloned());
        if let Some(m) = self.max_lift {
            o.limits.max_lift = m;
        }
        if let Some(f) = self.fuel {
            o.limits.fuel = f;
        }
        o
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub result: Outcome,
    pub ms: f64,
    pub items: usize,
    pub derivations: usize,
    pub classes: usize,
    pub detail: String,
    /// Normalized meanings found, one per class.
    #[serde(skip)]
    pub found: Vec<Term>,
}

impl CaseReport {
    /// One JSON object, no trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn same_set(found: &[Term], want: &[Term]) -> bool {
    found.len() == want.len() && want.iter().all(|w| found.iter().any(|f| alpha_eq(f, w)))
}

fn judge(case: &Case, res: &Result<ParseResult, ParseError>) -> Result<(), String> {
    match (case.expect, res) {
        (Expectation::NoParse, Err(ParseError::NoParse)) => Ok(()),
        (Expectation::NoParse, Err(e)) => Err(format!("expected no parse, got error: {e}")),
        (Expectation::NoParse, Ok(r)) => Err(format!("expected no parse, got {} classes", r.classes.len())),
        (_, Err(e)) => Err(e.to_string()),
        (Expectation::AlphaEq, Ok(r)) => {
            if r.classes.len() != 1 {
                return Err(format!(
                    "{} semantics classes, expected a unique parse",
                    r.classes.len()
                ));
            }
            if alpha_eq(&r.classes[0].sem, &case.terms[0]) {
                Ok(())
            } else {
                Err(format!("got {}", r.classes[0].sem))
            }
        }
        (Expectation::TrueAmbiguity, Ok(r)) => {
            let found: Vec<Term> = r.classes.iter().map(|c| c.sem.clone()).collect();
            if found.len() < 2 {
                return Err("unique parse, expected true ambiguity".into());
            }
            if !case.terms.is_empty() && !same_set(&found, &case.terms) {
                let shown: Vec<String> = found.iter().map(Term::to_string).collect();
                return Err(format!("classes differ: {}", shown.join(" | ")));
            }
            Ok(())
        }
    }
}

/// Parses one case and compares the result with its expectation.
pub fn run_case(case: &Case, lex: &Lexicon, base: &ParseOptions, budget: Option<Duration>) -> CaseReport {
    let opts = case.options(base);
    let start = std::time::Instant::now();
    let res = parse_sentence(&case.sentence, lex, &opts);
    let elapsed = start.elapsed();
    let mut verdict = judge(case, &res);
    if let (Ok(()), Some(b)) = (&verdict, budget) {
        if elapsed > b {
            verdict = Err(format!(
                "took {} ms, over the {} ms budget",
                elapsed.as_millis(),
                b.as_millis()
            ));
        }
    }
    let (items, derivations, found) = match &res {
        Ok(r) => (
            r.stats.items,
            r.derivations.len(),
            r.classes.iter().map(|c| c.sem.clone()).collect(),
        ),
        Err(_) => (0, 0, Vec::new()),
    };
    CaseReport {
        id: case.id.clone(),
        result: if verdict.is_ok() { Outcome::Pass } else { Outcome::Fail },
        ms: elapsed.as_secs_f64() * 1000.0,
        items,
        derivations,
        classes: found.len(),
        detail: verdict.err().unwrap_or_default(),
        found,
    }
}
