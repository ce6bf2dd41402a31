//! Derivation trees and their reconstruction from parse forests.

use std::collections::HashMap;

use crate::grammar::Cat;
use crate::lexicon::LexEntry;
use crate::normalize::normal_form;
use crate::rules::{combine, coordinator, lift_adjective, Rule};
use crate::term::{HeytingOp, Term};
use crate::types::TypeSubst;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    Entry { token: String, entry: LexEntry },
    Numeral { token: String },
    Coordinator { token: String, op: HeytingOp },
}

impl Leaf {
    pub fn token(&self) -> &str {
        match self {
            Leaf::Entry { token, .. } | Leaf::Numeral { token } | Leaf::Coordinator { token, .. } => token,
        }
    }
}

/// A fully instantiated derivation: every node carries a ground category
/// and its beta-normal semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub span: (usize, usize),
    pub rule: Rule,
    pub cat: Cat,
    pub sem: Term,
    pub leaf: Option<Leaf>,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn leaves(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Derivation>) {
        if self.children.is_empty() {
            out.push(self);
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Derivation::node_count).sum::<usize>()
    }

    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.cat.is_ground() && self.sem.is_ground() && self.children.iter().all(Derivation::is_ground)
    }

    fn apply_subst(&mut self, s: &TypeSubst) {
        self.cat = self.cat.apply_subst(s);
        self.sem = self.sem.apply_subst(s);
        for c in &mut self.children {
            c.apply_subst(s);
        }
    }

    /// Indented one-node-per-line rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let label = match &self.leaf {
            Some(l) => format!("{} \"{}\"", self.rule, l.token()),
            None => self.rule.to_string(),
        };
        out.push_str(&format!(
            "{}{} [{},{}) {} : {}\n",
            "  ".repeat(depth),
            label,
            self.span.0,
            self.span.1,
            self.cat,
            self.sem
        ));
        for c in &self.children {
            c.render_into(depth + 1, out);
        }
    }
}

/// A derivation as found by search, before types are propagated across
/// the whole tree. Leaf categories still carry their fresh variables.
#[derive(Clone, Debug)]
pub(crate) enum RawTree {
    Leaf {
        span: (usize, usize),
        leaf: Leaf,
        cat: Cat,
        sem: Term,
    },
    Lift {
        span: (usize, usize),
        child: Box<RawTree>,
    },
    Bin {
        rule: Rule,
        span: (usize, usize),
        left: Box<RawTree>,
        right: Box<RawTree>,
    },
}

fn rebuild(t: &RawTree, s: &mut TypeSubst, max_lift: usize) -> Option<Derivation> {
    match t {
        RawTree::Leaf { span, leaf, cat, sem } => Some(Derivation {
            span: *span,
            rule: if matches!(leaf, Leaf::Coordinator { .. }) {
                Rule::Coord
            } else {
                Rule::Lex
            },
            cat: cat.clone(),
            sem: sem.clone(),
            leaf: Some(leaf.clone()),
            children: vec![],
        }),
        RawTree::Lift { span, child } => {
            let c = rebuild(child, s, max_lift)?;
            let r = lift_adjective(&c.cat.apply_subst(s), &c.sem.apply_subst(s))?;
            Some(Derivation {
                span: *span,
                rule: Rule::Lift,
                cat: r.cat,
                sem: r.sem,
                leaf: None,
                children: vec![c],
            })
        }
        RawTree::Bin {
            rule,
            span,
            left,
            right,
        } => {
            let (l, r) = match left.as_ref() {
                RawTree::Leaf {
                    span: lspan,
                    leaf: leaf @ Leaf::Coordinator { op, .. },
                    ..
                } => {
                    let r = rebuild(right, s, max_lift)?;
                    let c = coordinator(*op, &r.cat.apply_subst(s), max_lift)?;
                    let l = Derivation {
                        span: *lspan,
                        rule: Rule::Coord,
                        cat: c.cat,
                        sem: c.sem,
                        leaf: Some(leaf.clone()),
                        children: vec![],
                    };
                    (l, r)
                }
                _ => (rebuild(left, s, max_lift)?, rebuild(right, s, max_lift)?),
            };
            let lc = l.cat.apply_subst(s);
            let ls = l.sem.apply_subst(s);
            let rc = r.cat.apply_subst(s);
            let rs = r.sem.apply_subst(s);
            let out = combine(*rule, (&lc, &ls), (&rc, &rs), s)?;
            Some(Derivation {
                span: *span,
                rule: *rule,
                cat: out.cat,
                sem: out.sem,
                leaf: None,
                children: vec![l, r],
            })
        }
    }
}

/// Re-runs the rules over a raw tree, propagating type information across
/// the whole tree. Returns `None` unless the result is ground.
pub(crate) fn instantiate(t: &RawTree, max_lift: usize) -> Option<Derivation> {
    let mut s = TypeSubst::new();
    let mut d = rebuild(t, &mut s, max_lift)?;
    d.apply_subst(&s);
    d.is_ground().then_some(d)
}

/// Derivations with the same meaning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemClass {
    /// `simplify(beta_normalize(root sem))`.
    pub sem: Term,
    /// Indices into the derivation list.
    pub derivations: Vec<usize>,
}

/// Groups derivations by alpha-equivalence of their normalized meaning,
/// in order of first appearance.
pub fn classify_derivations(ds: &[Derivation]) -> Vec<SemClass> {
    let mut classes: Vec<SemClass> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (i, d) in ds.iter().enumerate() {
        let nf = normal_form(&d.sem);
        let key = nf.alpha_key();
        match index.get(&key) {
            Some(&c) => classes[c].derivations.push(i),
            None => {
                index.insert(key, classes.len());
                classes.push(SemClass {
                    sem: nf,
                    derivations: vec![i],
                });
            }
        }
    }
    classes
}
