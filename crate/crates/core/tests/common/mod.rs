//! Random generators shared by the property tests and the acceptance run.
#![allow(dead_code)]

use catgram::{Lexicon, SemType, Signature, Term};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn nat() -> SemType {
    SemType::base("Nat")
}

pub fn list() -> SemType {
    SemType::base("List")
}

/// Small signature the term generator draws constants from.
pub fn term_signature() -> Signature {
    Signature::new()
        .with_type("Nat")
        .with_type("List")
        .with_numerals("Nat")
        .with_const("even", SemType::arrow(nat(), SemType::Truth))
        .with_const("sorted", SemType::arrow(list(), SemType::Truth))
        .with_const("addone", SemType::arrow(nat(), nat()))
        .with_const("le", SemType::arrow(nat(), SemType::arrow(nat(), SemType::Truth)))
        .with_const("insert", SemType::arrow(nat(), SemType::arrow(list(), list())))
        .with_const("nil", list())
}

fn small_types() -> Vec<SemType> {
    vec![
        nat(),
        list(),
        SemType::Truth,
        SemType::arrow(nat(), nat()),
        SemType::arrow(nat(), SemType::Truth),
        SemType::arrow(list(), list()),
    ]
}

/// Random closed, well-typed terms of bounded depth, with beta and
/// projection redexes mixed in.
pub struct TermGen<'a> {
    pub sig: &'a Signature,
    pub rng: StdRng,
    counter: usize,
}

impl<'a> TermGen<'a> {
    pub fn new(sig: &'a Signature, rng: StdRng) -> Self {
        TermGen { sig, rng, counter: 0 }
    }

    fn fresh(&mut self) -> String {
        const NAMES: [&str; 5] = ["x", "y", "z", "n", "l"];
        self.counter += 1;
        // Reusing names on purpose exercises shadowing and capture.
        NAMES[self.counter % NAMES.len()].to_string()
    }

    pub fn gen(&mut self, ty: &SemType, depth: usize) -> Term {
        self.go(ty, &mut Vec::new(), depth)
    }

    fn leaf(&mut self, ty: &SemType, ctx: &[(String, SemType)]) -> Option<Term> {
        let mut opts: Vec<Term> = ctx
            .iter()
            .rev()
            .scan(std::collections::BTreeSet::new(), |seen, (x, t)| {
                // only the innermost binding of a name is visible
                Some(if seen.insert(x.clone()) && t == ty {
                    Some(Term::var(x.clone(), t.clone()))
                } else {
                    None
                })
            })
            .flatten()
            .collect();
        for (c, t) in &self.sig.constants {
            if t == ty {
                opts.push(Term::constant(c.clone(), t.clone()));
            }
        }
        if *ty == nat() {
            opts.push(Term::constant(self.rng.gen_range(0..10).to_string(), nat()));
        }
        if *ty == SemType::Truth {
            opts.push(Term::tru());
            opts.push(Term::Lit(false));
        }
        opts.choose(&mut self.rng).cloned()
    }

    fn go(&mut self, ty: &SemType, ctx: &mut Vec<(String, SemType)>, depth: usize) -> Term {
        if depth == 0 || self.rng.gen_bool(0.2) {
            if let Some(t) = self.leaf(ty, ctx) {
                return t;
            }
        }
        let d = depth.saturating_sub(1);
        loop {
            match self.rng.gen_range(0..10) {
                // beta redex
                0 => {
                    let a = small_types().choose(&mut self.rng).unwrap().clone();
                    let x = self.fresh();
                    ctx.push((x.clone(), a.clone()));
                    let body = self.go(ty, ctx, d);
                    ctx.pop();
                    let arg = self.go(&a, ctx, d);
                    return Term::app(Term::lam(x, a, body), arg);
                }
                // projection redex
                1 => {
                    let other = small_types().choose(&mut self.rng).unwrap().clone();
                    let keep = self.go(ty, ctx, d);
                    let drop = self.go(&other, ctx, d);
                    return if self.rng.gen_bool(0.5) {
                        Term::fst(Term::pair(keep, drop))
                    } else {
                        Term::snd(Term::pair(drop, keep))
                    };
                }
                // application of a constant or variable with the right codomain
                2 | 3 => {
                    let heads: Vec<(Term, SemType)> = self
                        .sig
                        .constants
                        .iter()
                        .filter_map(|(c, t)| match t {
                            SemType::Arrow(a, b) if **b == *ty => {
                                Some((Term::constant(c.clone(), t.clone()), (**a).clone()))
                            }
                            _ => None,
                        })
                        .collect();
                    if let Some((h, a)) = heads.choose(&mut self.rng).cloned() {
                        let arg = self.go(&a, ctx, d);
                        return Term::app(h, arg);
                    }
                }
                _ => {}
            }
            match ty {
                SemType::Arrow(a, b) => {
                    let x = self.fresh();
                    ctx.push((x.clone(), (**a).clone()));
                    let body = self.go(b, ctx, d);
                    ctx.pop();
                    return Term::lam(x, (**a).clone(), body);
                }
                SemType::Truth => {
                    return match self.rng.gen_range(0..8) {
                        0 => Term::and(self.go(ty, ctx, d), self.go(ty, ctx, d)),
                        1 => Term::or(self.go(ty, ctx, d), self.go(ty, ctx, d)),
                        2 => Term::implies(self.go(ty, ctx, d), self.go(ty, ctx, d)),
                        3 => Term::not(self.go(ty, ctx, d)),
                        4 | 5 => {
                            let a = if self.rng.gen_bool(0.5) { nat() } else { list() };
                            let x = self.fresh();
                            ctx.push((x.clone(), a.clone()));
                            let body = self.go(ty, ctx, d);
                            ctx.pop();
                            if self.rng.gen_bool(0.5) {
                                Term::forall(x, a, body)
                            } else {
                                Term::exists(x, a, body)
                            }
                        }
                        6 => {
                            let a = if self.rng.gen_bool(0.5) { nat() } else { list() };
                            Term::eq(a.clone(), self.go(&a, ctx, d), self.go(&a, ctx, d))
                        }
                        _ => {
                            let a = nat();
                            let x = self.fresh();
                            ctx.push((x.clone(), a.clone()));
                            let guard = self.go(ty, ctx, d);
                            let body = self.go(ty, ctx, d);
                            ctx.pop();
                            Term::forall(x, a, Term::implies(guard, body))
                        }
                    };
                }
                _ => {
                    if let Some(t) = self.leaf(ty, ctx) {
                        return t;
                    }
                }
            }
        }
    }

    /// A random type from the generator's palette.
    pub fn small_type(&mut self) -> SemType {
        small_types().choose(&mut self.rng).unwrap().clone()
    }
}

/// Random token sequences over the demo vocabulary. Half follow sentence
/// templates, so a good share of them parse.
pub fn random_sentence(lex: &Lexicon, rng: &mut StdRng, max_len: usize) -> Vec<String> {
    const TEMPLATES: [&[&[&str]]; 5] = [
        &[
            &["four", "3", "addone", "sort", "union"],
            &["is"],
            &["even", "odd", "positive", "monotone", "commutative"],
        ],
        &[
            &["every", "some"],
            &["natural", "odd", "even"],
            &["natural", "naturals"],
            &["is"],
            &["even", "odd", "positive", "non-negative"],
        ],
        &[
            &["four", "3"],
            &["is"],
            &["even", "odd"],
            &["and", "or"],
            &["positive", "even", "odd"],
        ],
        &[
            &["addone"],
            &["given"],
            &["3", "four"],
            &["is", "returns"],
            &["4", "a", "four"],
            &["natural"],
        ],
        &[
            &["sort", "insertion"],
            &["is", "sorts", "preserves"],
            &["a", "contents", "sortedness"],
            &["permutation", "any"],
        ],
    ];
    let mut words: Vec<String> = lex.words().map(str::to_string).collect();
    words.extend(["and", "or", "3", "4"].map(String::from));
    let len = rng.gen_range(1..=max_len);
    if rng.gen_bool(0.5) {
        let t = TEMPLATES.choose(rng).unwrap();
        let mut out: Vec<String> = t.iter().map(|slot| slot.choose(rng).unwrap().to_string()).collect();
        // Occasionally corrupt one slot.
        if rng.gen_bool(0.3) {
            let i = rng.gen_range(0..out.len());
            out[i] = words.choose(rng).unwrap().clone();
        }
        out.truncate(max_len);
        out
    } else {
        (0..len).map(|_| words.choose(rng).unwrap().clone()).collect()
    }
}

use catgram::certificate::{LeafDoc, NodeDoc};
use catgram::syntax::print_term;
use catgram::{alpha_eq, emit_certificate, CertMeta, Certificate, Corpus, Expectation, ParseOptions};

/// Certificates for every parse of every case in the shipped corpora.
pub fn corpus_certificates(lex: &Lexicon) -> Vec<(String, Certificate)> {
    let base = ParseOptions::default();
    let mut out = Vec::new();
    for corpus in [Corpus::vfa(lex), Corpus::worked(lex)] {
        for case in corpus.cases {
            if case.expect == Expectation::NoParse {
                continue;
            }
            let opts = case.options(&base);
            let r = catgram::parse_sentence(&case.sentence, lex, &opts).expect("corpus case parses");
            for d in &r.derivations {
                let cert = emit_certificate(
                    d,
                    &CertMeta {
                        sentence: &case.sentence,
                        tokens: &r.tokens,
                        features: &opts.features,
                        limits: (&opts.limits).into(),
                        signature: &lex.signature,
                    },
                );
                out.push((case.id.clone(), cert));
            }
        }
    }
    out
}

fn paths(n: &NodeDoc, here: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    for (i, c) in n.children.iter().enumerate() {
        let mut p = here.clone();
        p.push(i);
        paths(c, p, out);
    }
    out.push(here);
}

fn node_at<'a>(mut n: &'a mut NodeDoc, path: &[usize]) -> &'a mut NodeDoc {
    for &i in path {
        n = &mut n.children[i];
    }
    n
}

fn rebuild(t: &Term, k: &mut usize, target: usize, sig: &Signature, rng: &mut StdRng) -> (Term, bool) {
    let here = *k == target;
    *k += 1;
    if here {
        if let Some(m) = local_change(t, sig, rng) {
            return (m, true);
        }
    }
    let b = |x: &Term, k: &mut usize, rng: &mut StdRng| rebuild(x, k, target, sig, rng);
    match t {
        Term::Lam(x, ty, body) => {
            let (nb, c) = b(body, k, rng);
            (Term::lam(x.clone(), ty.clone(), nb), c)
        }
        Term::ForAll(x, ty, body) => {
            let (nb, c) = b(body, k, rng);
            (Term::forall(x.clone(), ty.clone(), nb), c)
        }
        Term::Exists(x, ty, body) => {
            let (nb, c) = b(body, k, rng);
            (Term::exists(x.clone(), ty.clone(), nb), c)
        }
        Term::App(f, a) => {
            let (nf, c1) = b(f, k, rng);
            let (na, c2) = b(a, k, rng);
            (Term::app(nf, na), c1 || c2)
        }
        Term::And(l, r) | Term::Or(l, r) | Term::Implies(l, r) | Term::Pair(l, r) => {
            let (nl, c1) = b(l, k, rng);
            let (nr, c2) = b(r, k, rng);
            let t = match t {
                Term::And(..) => Term::and(nl, nr),
                Term::Or(..) => Term::or(nl, nr),
                Term::Implies(..) => Term::implies(nl, nr),
                _ => Term::pair(nl, nr),
            };
            (t, c1 || c2)
        }
        Term::Eq(ty, l, r) => {
            let (nl, c1) = b(l, k, rng);
            let (nr, c2) = b(r, k, rng);
            (Term::eq(ty.clone(), nl, nr), c1 || c2)
        }
        Term::Not(x) => {
            let (n, c) = b(x, k, rng);
            (Term::not(n), c)
        }
        Term::Fst(x) => {
            let (n, c) = b(x, k, rng);
            (Term::fst(n), c)
        }
        Term::Snd(x) => {
            let (n, c) = b(x, k, rng);
            (Term::snd(n), c)
        }
        Term::Var(..) | Term::Const(..) | Term::Lit(_) => (t.clone(), false),
    }
}

/// One type-preserving edit at the root of `t`, if any applies.
fn local_change(t: &Term, sig: &Signature, rng: &mut StdRng) -> Option<Term> {
    Some(match t {
        Term::Const(c, ty) => {
            if let Ok(n) = c.parse::<u64>() {
                Term::constant((n + rng.gen_range(1..5)).to_string(), ty.clone())
            } else {
                let others: Vec<&String> = sig
                    .constants
                    .iter()
                    .filter(|(o, oty)| *o != c && *oty == ty)
                    .map(|(o, _)| o)
                    .collect();
                Term::constant((*others.choose(rng)?).clone(), ty.clone())
            }
        }
        Term::And(l, r) => Term::or((**l).clone(), (**r).clone()),
        Term::Or(l, r) => Term::and((**l).clone(), (**r).clone()),
        Term::Implies(l, r) => Term::and((**l).clone(), (**r).clone()),
        Term::ForAll(x, ty, b) => Term::exists(x.clone(), ty.clone(), (**b).clone()),
        Term::Exists(x, ty, b) => Term::forall(x.clone(), ty.clone(), (**b).clone()),
        Term::Eq(ty, l, r) => Term::eq(ty.clone(), (**r).clone(), (**l).clone()),
        Term::Not(x) => (**x).clone(),
        Term::Lit(b) => Term::Lit(!b),
        Term::Pair(l, r) if l.as_ref() != r.as_ref() => Term::pair((**r).clone(), (**l).clone()),
        _ => return None,
    })
}

const RULE_NAMES: [&str; 7] = ["FA", "BA", "FC", "BC", "Lift", "Coord", "Lex"];

/// A copy of `cert` with exactly one field of one node changed in a way
/// that alters its meaning, with a description, or `None` when the drawn
/// edit happens to be a no-op or meaning-preserving.
pub fn mutate(cert: &Certificate, rng: &mut StdRng) -> Option<(String, Certificate)> {
    let sig = cert.decode_signature().ok()?;
    let mut m = cert.clone();
    let mut all = Vec::new();
    paths(&m.root, Vec::new(), &mut all);
    let path = all.choose(rng)?.clone();
    let n = node_at(&mut m.root, &path);
    let what = match rng.gen_range(0..6) {
        0 => {
            let new = *RULE_NAMES
                .iter()
                .filter(|r| **r != n.rule)
                .collect::<Vec<_>>()
                .choose(rng)?;
            let d = format!("rule {} -> {}", n.rule, new);
            n.rule = new.to_string();
            d
        }
        1 => {
            const BASES: [&str; 3] = ["Nat", "List", "Multiset"];
            let present: Vec<&str> = BASES.iter().copied().filter(|b| n.cat.contains(b)).collect();
            let from = *present.choose(rng)?;
            let to = *BASES.iter().filter(|b| **b != from).collect::<Vec<_>>().choose(rng)?;
            let old = n.cat.clone();
            n.cat = n.cat.replacen(from, to, 1);
            format!("cat {old} -> {}", n.cat)
        }
        2 | 3 => {
            let t = catgram::elab::parse_term(&n.sem, &sig, &Default::default(), None).ok()?;
            let size = t.size();
            let mut k = 0;
            let (new, changed) = rebuild(&t, &mut k, rng.gen_range(0..size.max(1)), &sig, rng);
            if !changed || alpha_eq(&new, &t) {
                return None;
            }
            let d = format!("sem {} -> {}", n.sem, print_term(&new));
            n.sem = print_term(&new);
            d
        }
        4 => {
            let (a, b) = n.span;
            let span = match rng.gen_range(0..4) {
                0 => (a + 1, b),
                1 => (a.checked_sub(1)?, b),
                2 => (a, b + 1),
                _ => (a, b.checked_sub(1)?),
            };
            n.span = span;
            format!("span ({a}, {b}) -> {span:?}")
        }
        _ => {
            let leaf = n.leaf.as_mut()?;
            let tok = match leaf {
                LeafDoc::Entry { token, .. } | LeafDoc::Numeral { token } | LeafDoc::Coordinator { token, .. } => token,
            };
            let old = tok.clone();
            *tok = format!("{old}s");
            format!("token {old} -> {tok}")
        }
    };
    Some((what, m))
}
