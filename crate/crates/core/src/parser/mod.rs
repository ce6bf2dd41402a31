//! Span-indexed chart parsing with normal-form pruning.

mod naive;

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::certificate::CertLimits;
use crate::derivation::{classify_derivations, instantiate, Derivation, Leaf, RawTree, SemClass};
use crate::grammar::Cat;
use crate::lexicon::Lexicon;
use crate::rules::{combine, conjunct_allows, coordinator, lift_adjective, nf_allows, Rule, BINARY_RULES};
use crate::term::{is_numeral, type_of, Signature, Term};
use crate::types::{SemType, TyVar, TypeSubst, VarSupply};

pub use naive::naive_enumerate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Deepest pointwise lift a coordinator may undergo.
    pub max_lift: usize,
    /// Budget of rule applications attempted, lexical seeding included.
    pub fuel: u64,
    pub max_entries_per_word: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_lift: 2,
            fuel: 1_000_000,
            max_entries_per_word: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    pub limits: Limits,
    /// Optional lexicon features to enable.
    pub features: BTreeSet<String>,
    /// Apply the Eisner constraints.
    pub normal_form: bool,
    /// Type-check every chart item on insertion.
    pub check_invariants: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            limits: Limits::default(),
            features: BTreeSet::new(),
            normal_form: true,
            check_invariants: cfg!(debug_assertions),
        }
    }
}

impl ParseOptions {
    pub fn with_feature(mut self, f: &str) -> Self {
        self.features.insert(f.to_string());
        self
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("unknown word: {token}")]
    UnknownWord { token: String, position: usize },
    #[error("word `{token}` has {count} entries, more than the limit of {max}")]
    TooManyEntries { token: String, count: usize, max: usize },
    #[error("no parse")]
    NoParse,
    #[error("fuel exhausted after {fuel} rule applications")]
    FuelExhausted { fuel: u64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub items: usize,
    pub analyses: usize,
    pub rule_attempts: u64,
    pub fuel_used: u64,
    pub invariant_checks: usize,
    pub invariant_violations: usize,
    /// Derivation enumeration hit its cap.
    pub truncated: bool,
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub struct ParseResult {
    pub tokens: Vec<String>,
    pub derivations: Vec<Derivation>,
    pub classes: Vec<SemClass>,
    pub stats: Stats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambiguity {
    Unique(Term),
    TrueAmbiguity(Vec<Term>),
}

impl ParseResult {
    pub fn classify(&self) -> Ambiguity {
        if self.classes.len() == 1 {
            Ambiguity::Unique(self.classes[0].sem.clone())
        } else {
            Ambiguity::TrueAmbiguity(self.classes.iter().map(|c| c.sem.clone()).collect())
        }
    }

    /// One derivation per semantics class.
    pub fn witnesses(&self) -> impl Iterator<Item = &Derivation> {
        self.classes.iter().map(|c| &self.derivations[c.derivations[0]])
    }
}

/// Splits on whitespace; hyphenated words stay whole.
pub fn tokenize(input: &str) -> Result<Vec<String>, ParseError> {
    let toks: Vec<String> = input.split_whitespace().map(str::to_string).collect();
    if toks.is_empty() {
        Err(ParseError::EmptyInput)
    } else {
        Ok(toks)
    }
}

impl From<&Limits> for CertLimits {
    fn from(l: &Limits) -> Self {
        CertLimits {
            max_lift: l.max_lift,
            fuel: l.fuel,
            max_entries_per_word: l.max_entries_per_word,
        }
    }
}

pub fn parse_sentence(input: &str, lex: &Lexicon, opts: &ParseOptions) -> Result<ParseResult, ParseError> {
    parse(&tokenize(input)?, lex, opts)
}

/// Most derivations reconstructed from one chart.
pub const MAX_DERIVATIONS: usize = 10_000;

pub(crate) struct Fuel {
    pub budget: u64,
    pub used: u64,
}

impl Fuel {
    pub fn tick(&mut self) -> Result<(), ParseError> {
        if self.used >= self.budget {
            return Err(ParseError::FuelExhausted { fuel: self.budget });
        }
        self.used += 1;
        Ok(())
    }
}

pub(crate) fn numeral_cat(sig: &Signature, token: &str) -> Option<(Cat, Term)> {
    if !is_numeral(token) {
        return None;
    }
    let ty = SemType::base(sig.numeral_type.clone()?);
    Some((Cat::np(ty.clone()), Term::constant(token, ty)))
}

/// Lexical items per token.
pub(crate) type Seeds = Vec<Vec<(Leaf, Cat, Term)>>;

/// Lexical items for every token, in token order.
pub(crate) fn seed_leaves(
    tokens: &[String],
    lex: &Lexicon,
    opts: &ParseOptions,
    supply: &mut VarSupply,
    fuel: &mut Fuel,
) -> Result<Seeds, ParseError> {
    let mut out = Vec::with_capacity(tokens.len());
    for (i, tok) in tokens.iter().enumerate() {
        let mut leaves = Vec::new();
        let insts = lex.lookup(tok, &opts.features, supply);
        if insts.len() > opts.limits.max_entries_per_word {
            return Err(ParseError::TooManyEntries {
                token: tok.clone(),
                count: insts.len(),
                max: opts.limits.max_entries_per_word,
            });
        }
        for inst in insts {
            fuel.tick()?;
            leaves.push((
                Leaf::Entry {
                    token: tok.clone(),
                    entry: inst.entry.clone(),
                },
                inst.cat,
                inst.sem,
            ));
        }
        if let Some((cat, sem)) = numeral_cat(&lex.signature, tok) {
            fuel.tick()?;
            leaves.push((Leaf::Numeral { token: tok.clone() }, cat, sem));
        }
        if leaves.is_empty() && lex.coordinator(tok).is_none() {
            return Err(ParseError::UnknownWord {
                token: tok.clone(),
                position: i,
            });
        }
        out.push(leaves);
    }
    Ok(out)
}

type ItemId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Analysis {
    Leaf(Leaf),
    Lift(ItemId),
    Bin(Rule, ItemId, ItemId),
}

struct Item {
    span: (usize, usize),
    cat: Cat,
    sem: Term,
    nf: Rule,
    analyses: Vec<Analysis>,
}

/// Identifies an item up to type-variable renaming.
fn item_key(span: (usize, usize), nf: Rule, cat: &Cat, sem: &Term) -> String {
    let mut order = Vec::new();
    cat.for_each_type(&mut |t| t.vars_in_order(&mut order));
    sem.for_each_type(&mut |t| t.vars_in_order(&mut order));
    let s: TypeSubst = order
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, SemType::Var(TyVar::new(format!("_{i}")))))
        .collect();
    format!(
        "{}:{}:{}:{}|{}",
        span.0,
        span.1,
        nf.name(),
        cat.apply_subst(&s),
        sem.apply_subst(&s).alpha_key()
    )
}

struct Chart<'a> {
    items: Vec<Item>,
    by_span: HashMap<(usize, usize), Vec<ItemId>>,
    index: HashMap<String, ItemId>,
    sig: &'a Signature,
    check: bool,
    stats: &'a mut Stats,
}

impl Chart<'_> {
    fn insert(&mut self, span: (usize, usize), nf: Rule, cat: Cat, sem: Term, a: Analysis, listed: bool) -> ItemId {
        let key = item_key(span, nf, &cat, &sem);
        if let Some(&id) = self.index.get(&key) {
            if !self.items[id].analyses.contains(&a) {
                self.items[id].analyses.push(a);
                self.stats.analyses += 1;
            }
            return id;
        }
        if self.check {
            self.stats.invariant_checks += 1;
            if type_of(&sem, self.sig).ok() != Some(cat.interp()) {
                self.stats.invariant_violations += 1;
            }
        }
        let id = self.items.len();
        self.items.push(Item {
            span,
            cat,
            sem,
            nf,
            analyses: vec![a],
        });
        self.stats.items += 1;
        self.stats.analyses += 1;
        self.index.insert(key, id);
        if listed {
            self.by_span.entry(span).or_default().push(id);
        }
        id
    }

    fn span_items(&self, span: (usize, usize)) -> Vec<ItemId> {
        self.by_span.get(&span).cloned().unwrap_or_default()
    }

    fn lift_span(&mut self, span: (usize, usize), fuel: &mut Fuel) -> Result<(), ParseError> {
        for id in self.span_items(span) {
            if !matches!(self.items[id].cat, Cat::ADJ(_)) {
                continue;
            }
            fuel.tick()?;
            self.stats.rule_attempts += 1;
            if let Some(r) = lift_adjective(&self.items[id].cat, &self.items[id].sem) {
                self.insert(span, Rule::Lift, r.cat, r.sem, Analysis::Lift(id), true);
            }
        }
        Ok(())
    }

    /// Derivations rooted at `id`, at most `cap` of them.
    fn trees(
        &self,
        id: ItemId,
        cap: usize,
        memo: &mut HashMap<ItemId, Vec<RawTree>>,
        truncated: &mut bool,
    ) -> Vec<RawTree> {
        if let Some(ts) = memo.get(&id) {
            return ts.clone();
        }
        let item = &self.items[id];
        let mut out = Vec::new();
        'outer: for a in &item.analyses {
            match a {
                Analysis::Leaf(leaf) => out.push(RawTree::Leaf {
                    span: item.span,
                    leaf: leaf.clone(),
                    cat: item.cat.clone(),
                    sem: item.sem.clone(),
                }),
                Analysis::Lift(c) => {
                    for t in self.trees(*c, cap, memo, truncated) {
                        out.push(RawTree::Lift {
                            span: item.span,
                            child: Box::new(t),
                        });
                    }
                }
                Analysis::Bin(rule, l, r) => {
                    let ls = self.trees(*l, cap, memo, truncated);
                    let rs = self.trees(*r, cap, memo, truncated);
                    for lt in &ls {
                        for rt in &rs {
                            if out.len() >= cap {
                                *truncated = true;
                                break 'outer;
                            }
                            out.push(RawTree::Bin {
                                rule: *rule,
                                span: item.span,
                                left: Box::new(lt.clone()),
                                right: Box::new(rt.clone()),
                            });
                        }
                    }
                }
            }
            if out.len() >= cap {
                *truncated = true;
                break;
            }
        }
        out.truncate(cap);
        memo.insert(id, out.clone());
        out
    }
}

/// Parses a token sequence bottom-up over spans, shortest spans first and,
/// within a span, by increasing width of the left child.
pub fn parse(tokens: &[String], lex: &Lexicon, opts: &ParseOptions) -> Result<ParseResult, ParseError> {
    parse_with_stats(tokens, lex, opts).0
}

/// Like [`parse`], but the chart statistics come back even when parsing
/// fails.
pub fn parse_with_stats(
    tokens: &[String],
    lex: &Lexicon,
    opts: &ParseOptions,
) -> (Result<ParseResult, ParseError>, Stats) {
    let start_time = Instant::now();
    let mut stats = Stats::default();
    let mut fuel = Fuel {
        budget: opts.limits.fuel,
        used: 0,
    };
    let res = run(tokens, lex, opts, &mut fuel, &mut stats);
    stats.fuel_used = fuel.used;
    stats.wall_time = start_time.elapsed();
    let res = res.map(|(derivations, classes, truncated)| {
        stats.truncated = truncated;
        ParseResult {
            tokens: tokens.to_vec(),
            derivations,
            classes,
            stats: stats.clone(),
        }
    });
    (res, stats)
}

type Parsed = (Vec<Derivation>, Vec<SemClass>, bool);

fn run(
    tokens: &[String],
    lex: &Lexicon,
    opts: &ParseOptions,
    fuel: &mut Fuel,
    stats: &mut Stats,
) -> Result<Parsed, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let n = tokens.len();
    let mut supply = VarSupply::new();
    let seeds = seed_leaves(tokens, lex, opts, &mut supply, fuel)?;
    let mut chart = Chart {
        items: Vec::new(),
        by_span: HashMap::new(),
        index: HashMap::new(),
        sig: &lex.signature,
        check: opts.check_invariants,
        stats,
    };
    for (i, leaves) in seeds.into_iter().enumerate() {
        for (leaf, cat, sem) in leaves {
            chart.insert((i, i + 1), Rule::Lex, cat, sem, Analysis::Leaf(leaf), true);
        }
        chart.lift_span((i, i + 1), fuel)?;
    }

    for width in 2..=n {
        for start in 0..=n - width {
            let end = start + width;
            for mid in start + 1..end {
                let lefts = chart.span_items((start, mid));
                let rights = chart.span_items((mid, end));
                for &l in &lefts {
                    for &r in &rights {
                        for rule in BINARY_RULES {
                            fuel.tick()?;
                            chart.stats.rule_attempts += 1;
                            let (li, ri) = (&chart.items[l], &chart.items[r]);
                            if !conjunct_allows(rule, li.nf == Rule::Coord, ri.nf == Rule::Coord) {
                                continue;
                            }
                            if opts.normal_form && !nf_allows(rule, li.nf, ri.nf) {
                                continue;
                            }
                            let mut s = TypeSubst::new();
                            if let Some(c) = combine(rule, (&li.cat, &li.sem), (&ri.cat, &ri.sem), &mut s) {
                                chart.insert((start, end), rule, c.cat, c.sem, Analysis::Bin(rule, l, r), true);
                            }
                        }
                    }
                }
                if mid == start + 1 {
                    if let Some(op) = lex.coordinator(&tokens[start]) {
                        for &r in &rights {
                            let Some(co) = coordinator(op, &chart.items[r].cat, opts.limits.max_lift) else {
                                continue;
                            };
                            fuel.tick()?;
                            chart.stats.rule_attempts += 1;
                            let leaf = Leaf::Coordinator {
                                token: tokens[start].clone(),
                                op,
                            };
                            let cid =
                                chart.insert((start, mid), Rule::Coord, co.cat, co.sem, Analysis::Leaf(leaf), false);
                            let (ci, ri) = (&chart.items[cid], &chart.items[r]);
                            let mut s = TypeSubst::new();
                            if let Some(c) = combine(Rule::FA, (&ci.cat, &ci.sem), (&ri.cat, &ri.sem), &mut s) {
                                chart.insert(
                                    (start, end),
                                    Rule::Coord,
                                    c.cat,
                                    c.sem,
                                    Analysis::Bin(Rule::FA, cid, r),
                                    true,
                                );
                            }
                        }
                    }
                }
            }
            chart.lift_span((start, end), fuel)?;
        }
    }

    let roots: Vec<ItemId> = chart
        .span_items((0, n))
        .into_iter()
        .filter(|&id| chart.items[id].cat == Cat::S)
        .collect();
    let mut memo = HashMap::new();
    let mut truncated = false;
    let mut raw = Vec::new();
    for id in roots {
        let remaining = MAX_DERIVATIONS.saturating_sub(raw.len());
        if remaining == 0 {
            truncated = true;
            break;
        }
        raw.extend(chart.trees(id, remaining, &mut memo, &mut truncated));
    }
    let derivations: Vec<Derivation> = raw
        .iter()
        .filter_map(|t| instantiate(t, opts.limits.max_lift))
        .collect();
    if derivations.is_empty() {
        return Err(ParseError::NoParse);
    }
    let classes = classify_derivations(&derivations);
    Ok((derivations, classes, truncated))
}
