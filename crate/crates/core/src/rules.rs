//! Combination rules. Used by the chart parser, the brute-force oracle and
//! the certificate checker alike.

use std::collections::BTreeSet;
use std::fmt;

use crate::grammar::{coordinator_cat, coordinator_sem, unify_cats_into, Cat};
use crate::normalize::beta_normalize;
use crate::term::{fresh_name, HeytingOp, Term};
use crate::types::{SemType, TypeSubst};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Lexical entry or numeral.
    Lex,
    /// Forward application `X/Y  Y => X`.
    FA,
    /// Backward application `Y  Y\X => X`.
    BA,
    /// Forward composition `X/Y  Y/Z => X/Z`.
    FC,
    /// Backward composition `X\Y  Y\Z => X\Z`.
    BC,
    /// Adjective lift `ADJ<x> => CN<x>/CN<x>`.
    Lift,
    /// Coordinator instantiated at `(X\X)/X`.
    Coord,
}

pub const BINARY_RULES: [Rule; 4] = [Rule::FA, Rule::BA, Rule::FC, Rule::BC];

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Lex => "LEX",
            Rule::FA => "FA",
            Rule::BA => "BA",
            Rule::FC => "FC",
            Rule::BC => "BC",
            Rule::Lift => "LIFT",
            Rule::Coord => "COORD",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Some(match s {
            "LEX" => Rule::Lex,
            "FA" => Rule::FA,
            "BA" => Rule::BA,
            "FC" => Rule::FC,
            "BC" => Rule::BC,
            "LIFT" => Rule::Lift,
            "COORD" => Rule::Coord,
            _ => return None,
        })
    }

    /// Number of children a node built by this rule has.
    pub fn arity(self) -> usize {
        match self {
            Rule::Lex | Rule::Coord => 0,
            Rule::Lift => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Eisner's normal-form constraints: the output of forward composition may
/// not be the functor of a forward rule, and likewise backward.
pub fn nf_allows(rule: Rule, left_nf: Rule, right_nf: Rule) -> bool {
    match rule {
        Rule::FA | Rule::FC => left_nf != Rule::FC,
        Rule::BA | Rule::BC => right_nf != Rule::BC,
        _ => true,
    }
}

/// A coordinated conjunct `X\\X` (coordinator plus its right conjunct) only
/// combines by backward application; composing it would let the conjunction
/// scope over material outside the coordinated phrase.
pub fn conjunct_allows(rule: Rule, left_is_conjunct: bool, right_is_conjunct: bool) -> bool {
    !left_is_conjunct && (!right_is_conjunct || rule == Rule::BA)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combined {
    pub cat: Cat,
    pub sem: Term,
}

fn names_of(ts: &[&Term]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for t in ts {
        t.all_names(&mut out);
    }
    out
}

/// Applies a binary rule. `s` is extended with the unifier; the returned
/// category and (beta-normal) semantics have `s` applied.
pub fn combine(rule: Rule, left: (&Cat, &Term), right: (&Cat, &Term), s: &mut TypeSubst) -> Option<Combined> {
    let (lc, ls) = left;
    let (rc, rs) = right;
    let mut trial = s.clone();
    let (cat, build): (Cat, Box<dyn Fn(Term, Term, &TypeSubst) -> Term>) = match (rule, lc, rc) {
        (Rule::FA, Cat::RSlash(x, y), _) => {
            unify_cats_into(y, rc, &mut trial).ok()?;
            ((**x).clone(), Box::new(|f, a, _| Term::app(f, a)))
        }
        (Rule::BA, _, Cat::LSlash(y, x)) => {
            unify_cats_into(lc, y, &mut trial).ok()?;
            ((**x).clone(), Box::new(|a, f, _| Term::app(f, a)))
        }
        (Rule::FC, Cat::RSlash(x, y1), Cat::RSlash(y2, z)) => {
            unify_cats_into(y1, y2, &mut trial).ok()?;
            let zt = z.interp();
            (
                Cat::rslash((**x).clone(), (**z).clone()),
                Box::new(move |f, g, s: &TypeSubst| {
                    let v = fresh_name("z", &names_of(&[&f, &g]));
                    let var = Term::var(v.clone(), s.apply_type(&zt));
                    Term::lam(v, s.apply_type(&zt), Term::app(f, Term::app(g, var)))
                }),
            )
        }
        (Rule::BC, Cat::LSlash(x, y1), Cat::LSlash(y2, z)) => {
            unify_cats_into(y1, y2, &mut trial).ok()?;
            let xt = x.interp();
            (
                Cat::lslash((**x).clone(), (**z).clone()),
                Box::new(move |e, f, s: &TypeSubst| {
                    let v = fresh_name("x", &names_of(&[&e, &f]));
                    let var = Term::var(v.clone(), s.apply_type(&xt));
                    Term::lam(v, s.apply_type(&xt), Term::app(f, Term::app(e, var)))
                }),
            )
        }
        _ => return None,
    };
    let sem = beta_normalize(&build(ls.apply_subst(&trial), rs.apply_subst(&trial), &trial));
    *s = trial;
    Some(Combined {
        cat: cat.apply_subst(s),
        sem,
    })
}

/// `ADJ<x> => CN<x>/CN<x>` with semantics `\n v. adj v /\ n v`.
pub fn lift_adjective(cat: &Cat, sem: &Term) -> Option<Combined> {
    let Cat::ADJ(x) = cat else { return None };
    let pred = SemType::arrow(x.clone(), SemType::Truth);
    let lifter = Term::lam(
        "p",
        pred.clone(),
        Term::lam(
            "n",
            pred.clone(),
            Term::lam(
                "v",
                x.clone(),
                Term::and(
                    Term::app(Term::var("p", pred.clone()), Term::var("v", x.clone())),
                    Term::app(Term::var("n", pred), Term::var("v", x.clone())),
                ),
            ),
        ),
    );
    Some(Combined {
        cat: Cat::rslash(Cat::cn(x.clone()), Cat::cn(x.clone())),
        sem: beta_normalize(&Term::app(lifter, sem.clone())),
    })
}

/// The coordinator item joining conjuncts of category `conjunct`, if that
/// category is Prop-like within `max_lift` lifts.
pub fn coordinator(op: HeytingOp, conjunct: &Cat, max_lift: usize) -> Option<Combined> {
    let spec = conjunct.prop_like()?;
    if spec.depth() > max_lift {
        return None;
    }
    Some(Combined {
        cat: coordinator_cat(conjunct),
        sem: coordinator_sem(op, &spec),
    })
}
