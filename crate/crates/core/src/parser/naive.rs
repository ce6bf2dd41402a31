//! Exhaustive search over explicit bracketings, without normal-form
//! constraints or item sharing. Exponential; intended as a test oracle.

use std::collections::HashMap;

use super::{seed_leaves, Fuel, ParseError, ParseOptions, ParseResult, Stats};
use crate::derivation::{classify_derivations, instantiate, Derivation, Leaf, RawTree};
use crate::grammar::Cat;
use crate::lexicon::Lexicon;
use crate::rules::{combine, conjunct_allows, coordinator, lift_adjective, BINARY_RULES};
use crate::term::Term;
use crate::types::{TypeSubst, VarSupply};

#[derive(Clone)]
struct Node {
    cat: Cat,
    sem: Term,
    tree: RawTree,
    conjunct: bool,
}

struct Search<'a> {
    tokens: &'a [String],
    lex: &'a Lexicon,
    opts: &'a ParseOptions,
    seeds: Vec<Vec<(Leaf, Cat, Term)>>,
    memo: HashMap<(usize, usize), Vec<Node>>,
    fuel: Fuel,
    attempts: u64,
}

impl Search<'_> {
    fn with_lifts(&mut self, mut nodes: Vec<Node>, span: (usize, usize)) -> Result<Vec<Node>, ParseError> {
        let mut extra = Vec::new();
        for n in &nodes {
            if !matches!(n.cat, Cat::ADJ(_)) {
                continue;
            }
            self.fuel.tick()?;
            self.attempts += 1;
            if let Some(r) = lift_adjective(&n.cat, &n.sem) {
                extra.push(Node {
                    cat: r.cat,
                    sem: r.sem,
                    conjunct: false,
                    tree: RawTree::Lift {
                        span,
                        child: Box::new(n.tree.clone()),
                    },
                });
            }
        }
        nodes.extend(extra);
        Ok(nodes)
    }

    fn span(&mut self, i: usize, j: usize) -> Result<Vec<Node>, ParseError> {
        if let Some(ns) = self.memo.get(&(i, j)) {
            return Ok(ns.clone());
        }
        let mut nodes = Vec::new();
        if j == i + 1 {
            for (leaf, cat, sem) in self.seeds[i].clone() {
                nodes.push(Node {
                    conjunct: false,
                    tree: RawTree::Leaf {
                        span: (i, j),
                        leaf,
                        cat: cat.clone(),
                        sem: sem.clone(),
                    },
                    cat,
                    sem,
                });
            }
        } else {
            for k in i + 1..j {
                let lefts = self.span(i, k)?;
                let rights = self.span(k, j)?;
                for l in &lefts {
                    for r in &rights {
                        for rule in BINARY_RULES {
                            if !conjunct_allows(rule, l.conjunct, r.conjunct) {
                                continue;
                            }
                            self.fuel.tick()?;
                            self.attempts += 1;
                            let mut s = TypeSubst::new();
                            if let Some(c) = combine(rule, (&l.cat, &l.sem), (&r.cat, &r.sem), &mut s) {
                                nodes.push(Node {
                                    cat: c.cat,
                                    sem: c.sem,
                                    conjunct: false,
                                    tree: RawTree::Bin {
                                        rule,
                                        span: (i, j),
                                        left: Box::new(l.tree.clone()),
                                        right: Box::new(r.tree.clone()),
                                    },
                                });
                            }
                        }
                    }
                }
                if k == i + 1 {
                    if let Some(op) = self.lex.coordinator(&self.tokens[i]) {
                        for r in &rights {
                            let Some(co) = coordinator(op, &r.cat, self.opts.limits.max_lift) else {
                                continue;
                            };
                            self.fuel.tick()?;
                            self.attempts += 1;
                            let leaf = RawTree::Leaf {
                                span: (i, k),
                                leaf: Leaf::Coordinator {
                                    token: self.tokens[i].clone(),
                                    op,
                                },
                                cat: co.cat.clone(),
                                sem: co.sem.clone(),
                            };
                            let mut s = TypeSubst::new();
                            if let Some(c) = combine(super::Rule::FA, (&co.cat, &co.sem), (&r.cat, &r.sem), &mut s) {
                                nodes.push(Node {
                                    cat: c.cat,
                                    sem: c.sem,
                                    conjunct: true,
                                    tree: RawTree::Bin {
                                        rule: super::Rule::FA,
                                        span: (i, j),
                                        left: Box::new(leaf),
                                        right: Box::new(r.tree.clone()),
                                    },
                                });
                            }
                        }
                    }
                }
            }
        }
        let nodes = self.with_lifts(nodes, (i, j))?;
        self.memo.insert((i, j), nodes.clone());
        Ok(nodes)
    }
}

/// Every derivation over every binary bracketing, using the same rules as
/// [`super::parse`] but no normal-form constraints.
pub fn naive_enumerate(tokens: &[String], lex: &Lexicon, opts: &ParseOptions) -> Result<ParseResult, ParseError> {
    let start = std::time::Instant::now();
    if tokens.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let mut supply = VarSupply::new();
    let mut fuel = Fuel {
        budget: opts.limits.fuel,
        used: 0,
    };
    let seeds = seed_leaves(tokens, lex, opts, &mut supply, &mut fuel)?;
    let mut search = Search {
        tokens,
        lex,
        opts,
        seeds,
        memo: HashMap::new(),
        fuel,
        attempts: 0,
    };
    let roots = search.span(0, tokens.len())?;
    let derivations: Vec<Derivation> = roots
        .iter()
        .filter(|n| n.cat == Cat::S)
        .filter_map(|n| instantiate(&n.tree, opts.limits.max_lift))
        .collect();
    if derivations.is_empty() {
        return Err(ParseError::NoParse);
    }
    let classes = classify_derivations(&derivations);
    Ok(ParseResult {
        tokens: tokens.to_vec(),
        derivations,
        classes,
        stats: Stats {
            rule_attempts: search.attempts,
            fuel_used: search.fuel.used,
            wall_time: start.elapsed(),
            ..Stats::default()
        },
    })
}
