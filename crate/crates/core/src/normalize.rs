//! Beta normalization and the trivial-guard simplifier.

use crate::term::{substitute, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Contract the leftmost-outermost redex first (normal order).
    LeftmostOutermost,
    /// Normalize subterms before contracting the enclosing redex.
    Innermost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub strategy: Strategy,
    pub eta: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            strategy: Strategy::Innermost,
            eta: false,
        }
    }
}

pub fn beta_normalize(t: &Term) -> Term {
    normalize_with(t, NormalizeOptions::default())
}

pub fn normalize_with(t: &Term, opts: NormalizeOptions) -> Term {
    match opts.strategy {
        Strategy::Innermost => innermost(t, opts.eta),
        Strategy::LeftmostOutermost => {
            let mut cur = t.clone();
            while let Some(next) = outer_step(&cur, opts.eta) {
                cur = next;
            }
            cur
        }
    }
}

/// `simplify(beta_normalize(t))`, the normal form used to compare meanings.
pub fn normal_form(t: &Term) -> Term {
    simplify(&beta_normalize(t))
}

fn eta_contract(x: &str, body: &Term) -> Option<Term> {
    match body {
        Term::App(f, a) => match a.as_ref() {
            Term::Var(y, _) if y == x && !f.free_vars().contains(x) => Some((**f).clone()),
            _ => None,
        },
        _ => None,
    }
}

fn innermost(t: &Term, eta: bool) -> Term {
    match t {
        Term::Var(..) | Term::Const(..) | Term::Lit(_) => t.clone(),
        Term::Lam(x, ty, b) => {
            let b = innermost(b, eta);
            if eta {
                if let Some(f) = eta_contract(x, &b) {
                    return f;
                }
            }
            Term::Lam(x.clone(), ty.clone(), Box::new(b))
        }
        Term::ForAll(x, ty, b) => Term::ForAll(x.clone(), ty.clone(), Box::new(innermost(b, eta))),
        Term::Exists(x, ty, b) => Term::Exists(x.clone(), ty.clone(), Box::new(innermost(b, eta))),
        Term::App(f, a) => {
            let f = innermost(f, eta);
            let a = innermost(a, eta);
            match f {
                Term::Lam(x, _, body) => innermost(&substitute(&body, &x, &a), eta),
                f => Term::app(f, a),
            }
        }
        Term::Fst(p) => match innermost(p, eta) {
            Term::Pair(l, _) => *l,
            p => Term::fst(p),
        },
        Term::Snd(p) => match innermost(p, eta) {
            Term::Pair(_, r) => *r,
            p => Term::snd(p),
        },
        Term::And(a, b) => Term::and(innermost(a, eta), innermost(b, eta)),
        Term::Or(a, b) => Term::or(innermost(a, eta), innermost(b, eta)),
        Term::Implies(a, b) => Term::implies(innermost(a, eta), innermost(b, eta)),
        Term::Eq(ty, a, b) => Term::eq(ty.clone(), innermost(a, eta), innermost(b, eta)),
        Term::Pair(a, b) => Term::pair(innermost(a, eta), innermost(b, eta)),
        Term::Not(a) => Term::not(innermost(a, eta)),
    }
}

/// One leftmost-outermost reduction step, or `None` if `t` is normal.
fn outer_step(t: &Term, eta: bool) -> Option<Term> {
    match t {
        Term::Var(..) | Term::Const(..) | Term::Lit(_) => None,
        Term::App(f, a) => {
            if let Term::Lam(x, _, body) = f.as_ref() {
                return Some(substitute(body, x, a));
            }
            if let Some(f2) = outer_step(f, eta) {
                return Some(Term::app(f2, (**a).clone()));
            }
            outer_step(a, eta).map(|a2| Term::app((**f).clone(), a2))
        }
        Term::Fst(p) | Term::Snd(p) => {
            if let Term::Pair(l, r) = p.as_ref() {
                return Some(if matches!(t, Term::Fst(_)) {
                    (**l).clone()
                } else {
                    (**r).clone()
                });
            }
            let p2 = outer_step(p, eta)?;
            Some(if matches!(t, Term::Fst(_)) {
                Term::fst(p2)
            } else {
                Term::snd(p2)
            })
        }
        Term::Lam(x, ty, b) => {
            if eta {
                if let Some(f) = eta_contract(x, b) {
                    return Some(f);
                }
            }
            outer_step(b, eta).map(|b2| Term::Lam(x.clone(), ty.clone(), Box::new(b2)))
        }
        Term::ForAll(x, ty, b) => outer_step(b, eta).map(|b2| Term::ForAll(x.clone(), ty.clone(), Box::new(b2))),
        Term::Exists(x, ty, b) => outer_step(b, eta).map(|b2| Term::Exists(x.clone(), ty.clone(), Box::new(b2))),
        Term::Not(a) => outer_step(a, eta).map(Term::not),
        Term::And(a, b) | Term::Or(a, b) | Term::Implies(a, b) | Term::Pair(a, b) | Term::Eq(_, a, b) => {
            let rebuild = |l: Term, r: Term| match t {
                Term::And(..) => Term::and(l, r),
                Term::Or(..) => Term::or(l, r),
                Term::Implies(..) => Term::implies(l, r),
                Term::Pair(..) => Term::pair(l, r),
                Term::Eq(ty, ..) => Term::eq(ty.clone(), l, r),
                _ => unreachable!(),
            };
            if let Some(a2) = outer_step(a, eta) {
                return Some(rebuild(a2, (**b).clone()));
            }
            outer_step(b, eta).map(|b2| rebuild((**a).clone(), b2))
        }
    }
}

/// Removes `true` guards: `true -> P`, `true /\ P` and `P /\ true` become `P`.
pub fn simplify(t: &Term) -> Term {
    match t {
        Term::Var(..) | Term::Const(..) | Term::Lit(_) => t.clone(),
        Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), Box::new(simplify(b))),
        Term::ForAll(x, ty, b) => Term::ForAll(x.clone(), ty.clone(), Box::new(simplify(b))),
        Term::Exists(x, ty, b) => Term::Exists(x.clone(), ty.clone(), Box::new(simplify(b))),
        Term::App(a, b) => Term::app(simplify(a), simplify(b)),
        Term::Implies(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a == Term::Lit(true) {
                b
            } else {
                Term::implies(a, b)
            }
        }
        Term::And(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a == Term::Lit(true) {
                b
            } else if b == Term::Lit(true) {
                a
            } else {
                Term::and(a, b)
            }
        }
        Term::Or(a, b) => Term::or(simplify(a), simplify(b)),
        Term::Eq(ty, a, b) => Term::eq(ty.clone(), simplify(a), simplify(b)),
        Term::Pair(a, b) => Term::pair(simplify(a), simplify(b)),
        Term::Not(a) => Term::not(simplify(a)),
        Term::Fst(a) => Term::fst(simplify(a)),
        Term::Snd(a) => Term::snd(simplify(a)),
    }
}
