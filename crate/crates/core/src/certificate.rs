//! Derivation certificates: a JSON serialization of a derivation that can be
//! re-verified node by node without running the parser.
//!
//! The checker works in two modes. Against a live lexicon it also confirms
//! that every inlined entry still matches the lexicon, which is the only way
//! to notice an entry whose meaning was quietly redefined. Standalone, it
//! trusts the inlined entries and checks only internal consistency.
//!
//! Outside its tests this module must not depend on `crate::parser`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derivation::{Derivation, Leaf};
use crate::elab::parse_term;
use crate::grammar::{unify_cats, Cat};
use crate::lexicon::{lint_scheme, Lexicon};
use crate::normalize::beta_normalize;
use crate::rules::{combine, coordinator, lift_adjective, Rule};
use crate::syntax::{parse_cat, parse_type, print_term, Macros};
use crate::term::{alpha_eq, is_numeral, type_of, HeytingOp, Signature, TargetNames, Term};
use crate::types::{SemType, TypeSubst};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub format_version: u32,
    pub tool: String,
    pub sentence: String,
    pub tokens: Vec<String>,
    pub features: Vec<String>,
    pub limits: CertLimits,
    pub signature: SignatureDoc,
    pub root: NodeDoc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertLimits {
    pub max_lift: usize,
    pub fuel: u64,
    pub max_entries_per_word: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lean: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coq: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureDoc {
    pub types: BTreeMap<String, TypeDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub numerals: Option<String>,
    pub constants: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub span: (usize, usize),
    pub rule: String,
    pub cat: String,
    pub sem: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub leaf: Option<LeafDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub children: Vec<NodeDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LeafDoc {
    Entry {
        token: String,
        source: String,
        word: String,
        ordinal: usize,
        vars: Vec<String>,
        cat: String,
        sem: String,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        feature: Option<String>,
    },
    Numeral {
        token: String,
    },
    Coordinator {
        token: String,
        op: String,
    },
}

impl LeafDoc {
    fn token(&self) -> &str {
        match self {
            LeafDoc::Entry { token, .. } | LeafDoc::Numeral { token } | LeafDoc::Coordinator { token, .. } => token,
        }
    }
}

#[derive(Debug, Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported certificate format version {0}")]
    Version(u32),
    #[error("bad signature in certificate: {0}")]
    Signature(String),
}

impl Certificate {
    /// Pretty JSON with fields in declaration order and maps sorted by key,
    /// so equal certificates serialize to equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertError> {
        let c: Certificate = serde_json::from_str(text)?;
        if c.format_version != FORMAT_VERSION {
            return Err(CertError::Version(c.format_version));
        }
        Ok(c)
    }

    /// The embedded signature, used in standalone checking.
    pub fn decode_signature(&self) -> Result<Signature, CertError> {
        let none = BTreeSet::new();
        let mut sig = Signature::new();
        for (name, t) in &self.signature.types {
            sig.types.insert(
                name.clone(),
                TargetNames {
                    lean: t.lean.clone(),
                    coq: t.coq.clone(),
                },
            );
        }
        sig.numeral_type = self.signature.numerals.clone();
        for (name, src) in &self.signature.constants {
            let ty = parse_type(src, &none).map_err(|e| CertError::Signature(format!("{name}: {e}")))?;
            sig.check_type(&ty)
                .map_err(|e| CertError::Signature(format!("{name}: {e}")))?;
            sig.constants.insert(name.clone(), ty);
        }
        Ok(sig)
    }
}

pub struct CertMeta<'a> {
    pub sentence: &'a str,
    pub tokens: &'a [String],
    pub features: &'a BTreeSet<String>,
    pub limits: CertLimits,
    /// Signature to embed; it is cut down to the constants actually used.
    pub signature: &'a Signature,
}

fn node_doc(d: &Derivation) -> NodeDoc {
    let leaf = d.leaf.as_ref().map(|l| match l {
        Leaf::Entry { token, entry } => LeafDoc::Entry {
            token: token.clone(),
            source: entry.source.clone(),
            word: entry.word.clone(),
            ordinal: entry.ordinal,
            vars: entry.vars.clone(),
            cat: entry.cat.to_string(),
            sem: print_term(&entry.sem),
            feature: entry.feature.clone(),
        },
        Leaf::Numeral { token } => LeafDoc::Numeral { token: token.clone() },
        Leaf::Coordinator { token, op } => LeafDoc::Coordinator {
            token: token.clone(),
            op: op.name().to_string(),
        },
    });
    NodeDoc {
        span: d.span,
        rule: d.rule.name().to_string(),
        cat: d.cat.to_string(),
        sem: print_term(&d.sem),
        leaf,
        children: d.children.iter().map(node_doc).collect(),
    }
}

pub fn emit_certificate(d: &Derivation, meta: &CertMeta) -> Certificate {
    let mut terms: Vec<&Term> = Vec::new();
    for n in d.nodes() {
        terms.push(&n.sem);
        if let Some(Leaf::Entry { entry, .. }) = &n.leaf {
            terms.push(&entry.sem);
        }
    }
    let sig = meta.signature.restrict_to(&terms);
    Certificate {
        format_version: FORMAT_VERSION,
        tool: format!("catgram {}", env!("CARGO_PKG_VERSION")),
        sentence: meta.sentence.to_string(),
        tokens: meta.tokens.to_vec(),
        features: meta.features.iter().cloned().collect(),
        limits: meta.limits,
        signature: SignatureDoc {
            types: sig
                .types
                .iter()
                .map(|(n, t)| {
                    (
                        n.clone(),
                        TypeDoc {
                            lean: t.lean.clone(),
                            coq: t.coq.clone(),
                        },
                    )
                })
                .collect(),
            numerals: sig.numeral_type.clone(),
            constants: sig.constants.iter().map(|(n, t)| (n.clone(), t.to_string())).collect(),
        },
        root: node_doc(d),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FailureKind {
    UnknownRule,
    CatMismatch,
    SemMismatch,
    LexMismatch,
    TypeError,
    SpanError,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// `root`, `root.0`, `root.0.1`, ...
    pub path: String,
    pub kind: FailureKind,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.path, self.kind, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub accepted: bool,
    pub failures: Vec<Failure>,
}

impl Verdict {
    pub fn has(&self, kind: FailureKind) -> bool {
        self.failures.iter().any(|f| f.kind == kind)
    }
}

#[derive(Clone, Copy)]
pub enum CheckMode<'a> {
    /// Inlined entries must also match this lexicon.
    Live(&'a Lexicon),
    Standalone,
}

struct Checker<'a> {
    sig: Signature,
    macros: Macros,
    live: Option<&'a Lexicon>,
    tokens: &'a [String],
    features: BTreeSet<String>,
    max_lift: usize,
    failures: Vec<Failure>,
}

/// A node's recorded category and meaning, when they could be read back.
type Decoded = Option<(Cat, Term)>;

impl Checker<'_> {
    fn fail(&mut self, path: &str, kind: FailureKind, detail: impl Into<String>) {
        self.failures.push(Failure {
            path: path.to_string(),
            kind,
            detail: detail.into(),
        });
    }

    fn decode(&mut self, n: &NodeDoc, path: &str) -> Decoded {
        let none = BTreeSet::new();
        let cat = match parse_cat(&n.cat, &none, &self.macros) {
            Ok(c) if c.is_ground() => c,
            Ok(c) => {
                self.fail(path, FailureKind::CatMismatch, format!("category {c} is not ground"));
                return None;
            }
            Err(e) => {
                self.fail(path, FailureKind::CatMismatch, format!("unreadable category: {e}"));
                return None;
            }
        };
        if let Err(e) = self.sig.check_type(&cat.interp()) {
            self.fail(path, FailureKind::TypeError, e.to_string());
            return None;
        }
        let sem = match parse_term(&n.sem, &self.sig, &none, None) {
            Ok(t) => t,
            Err(e) => {
                self.fail(path, FailureKind::TypeError, format!("semantics do not elaborate: {e}"));
                return None;
            }
        };
        match type_of(&sem, &self.sig) {
            Ok(ty) if ty == cat.interp() => Some((cat, sem)),
            Ok(ty) => {
                self.fail(
                    path,
                    FailureKind::TypeError,
                    format!("semantics have type {ty}, category {cat} needs {}", cat.interp()),
                );
                None
            }
            Err(e) => {
                self.fail(path, FailureKind::TypeError, e.to_string());
                None
            }
        }
    }

    fn compare(&mut self, path: &str, recorded: &(Cat, Term), computed: &Cat, computed_sem: &Term, why: &str) {
        if &recorded.0 != computed {
            self.fail(
                path,
                FailureKind::CatMismatch,
                format!("{why} gives {computed}, recorded {}", recorded.0),
            );
        } else if !alpha_eq(&beta_normalize(&recorded.1), &beta_normalize(computed_sem)) {
            self.fail(
                path,
                FailureKind::SemMismatch,
                format!(
                    "{why} gives {}, recorded {}",
                    print_term(computed_sem),
                    print_term(&recorded.1)
                ),
            );
        }
    }

    fn node(&mut self, n: &NodeDoc, path: &str, expected_span: (usize, usize)) -> Decoded {
        if n.span != expected_span {
            self.fail(
                path,
                FailureKind::SpanError,
                format!(
                    "span [{},{}) where [{},{}) was expected",
                    n.span.0, n.span.1, expected_span.0, expected_span.1
                ),
            );
        }
        let me = self.decode(n, path);
        let Some(rule) = Rule::from_name(&n.rule) else {
            self.fail(path, FailureKind::UnknownRule, format!("unknown rule `{}`", n.rule));
            for (i, c) in n.children.iter().enumerate() {
                self.node(c, &format!("{path}.{i}"), c.span);
            }
            return me;
        };
        match (&n.leaf, n.children.len()) {
            (Some(leaf), 0) => {
                self.leaf(n, leaf, rule, path, me.as_ref());
            }
            (None, 1) if rule == Rule::Lift => {
                let child = self.node(&n.children[0], &format!("{path}.0"), n.span);
                if let (Some(me), Some((cc, cs))) = (&me, child) {
                    match lift_adjective(&cc, &cs) {
                        Some(r) => self.compare(path, me, &r.cat, &r.sem, "LIFT"),
                        None => self.fail(path, FailureKind::CatMismatch, format!("LIFT does not apply to {cc}")),
                    }
                }
            }
            (None, 2) if rule.arity() == 2 => self.binary(n, rule, path, me.as_ref()),
            _ => {
                self.fail(
                    path,
                    FailureKind::UnknownRule,
                    format!("rule {} cannot label a node with {} children", n.rule, n.children.len()),
                );
                for (i, c) in n.children.iter().enumerate() {
                    self.node(c, &format!("{path}.{i}"), c.span);
                }
            }
        }
        me
    }

    fn binary(&mut self, n: &NodeDoc, rule: Rule, path: &str, me: Option<&(Cat, Term)>) {
        let (l, r) = (&n.children[0], &n.children[1]);
        let mid = l.span.1;
        if !(n.span.0 < mid && mid < n.span.1) {
            self.fail(
                path,
                FailureKind::SpanError,
                format!("split point {mid} outside [{},{})", n.span.0, n.span.1),
            );
        }
        let lpath = format!("{path}.0");
        let rpath = format!("{path}.1");
        let right = self.node(r, &rpath, (mid, n.span.1));
        let left = match &l.leaf {
            // A coordinator's category depends on the conjunct to its right.
            Some(LeafDoc::Coordinator { .. }) => {
                let ld = self.node(l, &lpath, (n.span.0, mid));
                if let (Some(ld), Some(LeafDoc::Coordinator { op, .. }), Some((rc, _))) = (&ld, &l.leaf, &right) {
                    if rule != Rule::FA {
                        self.fail(path, FailureKind::CatMismatch, "a coordinator only combines by FA");
                    }
                    if let Some(op) = HeytingOp::from_name(op) {
                        match coordinator(op, rc, self.max_lift) {
                            Some(co) => self.compare(&lpath, ld, &co.cat, &co.sem, "coordination"),
                            None => self.fail(&lpath, FailureKind::CatMismatch, format!("{rc} cannot be coordinated")),
                        }
                    }
                }
                ld
            }
            _ => self.node(l, &lpath, (n.span.0, mid)),
        };
        if let (Some(me), Some((lc, ls)), Some((rc, rs))) = (me, left, right) {
            match combine(rule, (&lc, &ls), (&rc, &rs), &mut TypeSubst::new()) {
                Some(c) => self.compare(path, me, &c.cat, &c.sem, rule.name()),
                None => self.fail(
                    path,
                    FailureKind::CatMismatch,
                    format!("{} does not apply to {lc} and {rc}", rule.name()),
                ),
            }
        }
    }

    fn leaf(&mut self, n: &NodeDoc, leaf: &LeafDoc, rule: Rule, path: &str, me: Option<&(Cat, Term)>) {
        if n.span.1 != n.span.0 + 1 || self.tokens.get(n.span.0).map(String::as_str) != Some(leaf.token()) {
            self.fail(
                path,
                FailureKind::SpanError,
                format!("token `{}` is not at position {}", leaf.token(), n.span.0),
            );
        }
        let want = match leaf {
            LeafDoc::Coordinator { .. } => Rule::Coord,
            _ => Rule::Lex,
        };
        if rule != want {
            self.fail(
                path,
                FailureKind::UnknownRule,
                format!("leaf labelled {} instead of {}", rule.name(), want.name()),
            );
        }
        match leaf {
            LeafDoc::Entry {
                token,
                source,
                word,
                ordinal,
                vars,
                cat,
                sem,
                feature,
            } => {
                if word != token {
                    self.fail(
                        path,
                        FailureKind::LexMismatch,
                        format!("entry for `{word}` used for token `{token}`"),
                    );
                }
                if let Some(f) = feature {
                    if !self.features.contains(f) {
                        self.fail(path, FailureKind::LexMismatch, format!("entry needs feature `{f}`"));
                    }
                }
                let scheme = match lint_scheme(vars, cat, sem, &self.sig, &self.macros) {
                    Ok(s) => s,
                    Err(e) => {
                        self.fail(path, FailureKind::TypeError, format!("inlined entry: {e}"));
                        return;
                    }
                };
                if let Some(lex) = self.live {
                    match lex.find_entry(source, word, *ordinal) {
                        None => self.fail(
                            path,
                            FailureKind::LexMismatch,
                            format!("lexicon has no entry {word}#{ordinal} in {source}"),
                        ),
                        Some(e) => {
                            if e.cat != scheme.0
                                || e.vars != *vars
                                || !alpha_eq(&e.sem, &scheme.1)
                                || e.feature != *feature
                            {
                                self.fail(
                                    path,
                                    FailureKind::LexMismatch,
                                    format!("lexicon entry {word}#{ordinal} in {source} differs from the inlined copy"),
                                );
                            }
                        }
                    }
                }
                if let Some(me) = me {
                    match unify_cats(&scheme.0, &me.0, &TypeSubst::new()) {
                        Ok(s) => {
                            let inst = scheme.1.apply_subst(&s);
                            let inst_cat = scheme.0.apply_subst(&s);
                            self.compare(path, me, &inst_cat, &inst, "the entry");
                        }
                        Err(_) => self.fail(
                            path,
                            FailureKind::CatMismatch,
                            format!("{} is not an instance of the entry category {}", me.0, scheme.0),
                        ),
                    }
                }
            }
            LeafDoc::Numeral { token } => {
                let Some(ty) = self.sig.numeral_type.clone().filter(|_| is_numeral(token)) else {
                    self.fail(path, FailureKind::LexMismatch, format!("`{token}` is not a numeral"));
                    return;
                };
                if let Some(me) = me {
                    let t = SemType::base(ty);
                    self.compare(
                        path,
                        me,
                        &Cat::np(t.clone()),
                        &Term::constant(token.as_str(), t),
                        "the numeral",
                    );
                }
            }
            LeafDoc::Coordinator { token, op } => {
                let Some(parsed) = HeytingOp::from_name(op) else {
                    self.fail(path, FailureKind::LexMismatch, format!("unknown coordination `{op}`"));
                    return;
                };
                if let Some(lex) = self.live {
                    if lex.coordinator(token) != Some(parsed) {
                        self.fail(
                            path,
                            FailureKind::LexMismatch,
                            format!("`{token}` is not a `{op}` coordinator"),
                        );
                    }
                }
                if !path_is_left_child(path) {
                    self.fail(path, FailureKind::CatMismatch, "coordinator outside a coordination");
                }
            }
        }
    }
}

fn path_is_left_child(path: &str) -> bool {
    path.ends_with(".0")
}

/// Re-verifies a certificate bottom-up. Every failure is reported; checking
/// does not stop at the first.
pub fn check_certificate(cert: &Certificate, mode: CheckMode) -> Verdict {
    let (sig, live) = match mode {
        CheckMode::Live(lex) => (lex.signature.clone(), Some(lex)),
        CheckMode::Standalone => match cert.decode_signature() {
            Ok(s) => (s, None),
            Err(e) => {
                return Verdict {
                    accepted: false,
                    failures: vec![Failure {
                        path: "signature".into(),
                        kind: FailureKind::TypeError,
                        detail: e.to_string(),
                    }],
                }
            }
        },
    };
    let macros = live.map(|l| l.macros.clone()).unwrap_or_default();
    let mut ck = Checker {
        sig,
        macros,
        live,
        tokens: &cert.tokens,
        features: cert.features.iter().cloned().collect(),
        max_lift: cert.limits.max_lift,
        failures: Vec::new(),
    };
    let words: Vec<&str> = cert.sentence.split_whitespace().collect();
    if words != cert.tokens.iter().map(String::as_str).collect::<Vec<_>>() {
        ck.fail("root", FailureKind::SpanError, "tokens do not match the sentence");
    }
    let root = ck.node(&cert.root, "root", (0, cert.tokens.len()));
    if let Some((cat, _)) = root {
        if cat != Cat::S {
            ck.fail(
                "root",
                FailureKind::CatMismatch,
                format!("root category is {cat}, not S"),
            );
        }
    }
    Verdict {
        accepted: ck.failures.is_empty(),
        failures: ck.failures,
    }
}
