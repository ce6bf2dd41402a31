//! Grammatical categories and their semantic interpretation.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::normalize::beta_normalize;
use crate::term::{HeytingOp, Term};
use crate::types::{unify_into, SemType, TyVar, TypeSubst, UnifyError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cat {
    S,
    NP(SemType),
    ADJ(SemType),
    CN(SemType),
    PP(String, SemType),
    /// `result/arg`: looks for `arg` on the right.
    RSlash(Box<Cat>, Box<Cat>),
    /// `arg\result`: looks for `arg` on the left.
    LSlash(Box<Cat>, Box<Cat>),
}

impl Cat {
    pub fn rslash(result: Cat, arg: Cat) -> Cat {
        Cat::RSlash(Box::new(result), Box::new(arg))
    }

    pub fn lslash(arg: Cat, result: Cat) -> Cat {
        Cat::LSlash(Box::new(arg), Box::new(result))
    }

    pub fn np(t: SemType) -> Cat {
        Cat::NP(t)
    }

    pub fn adj(t: SemType) -> Cat {
        Cat::ADJ(t)
    }

    pub fn cn(t: SemType) -> Cat {
        Cat::CN(t)
    }

    pub fn pp(prep: impl Into<String>, t: SemType) -> Cat {
        Cat::PP(prep.into(), t)
    }

    pub fn map_types(&self, f: &mut impl FnMut(&SemType) -> SemType) -> Cat {
        match self {
            Cat::S => Cat::S,
            Cat::NP(t) => Cat::NP(f(t)),
            Cat::ADJ(t) => Cat::ADJ(f(t)),
            Cat::CN(t) => Cat::CN(f(t)),
            Cat::PP(p, t) => Cat::PP(p.clone(), f(t)),
            Cat::RSlash(r, a) => Cat::rslash(r.map_types(f), a.map_types(f)),
            Cat::LSlash(a, r) => Cat::lslash(a.map_types(f), r.map_types(f)),
        }
    }

    pub fn apply_subst(&self, s: &TypeSubst) -> Cat {
        if s.is_empty() {
            return self.clone();
        }
        self.map_types(&mut |t| s.apply_type(t))
    }

    pub fn for_each_type(&self, f: &mut impl FnMut(&SemType)) {
        match self {
            Cat::S => {}
            Cat::NP(t) | Cat::ADJ(t) | Cat::CN(t) | Cat::PP(_, t) => f(t),
            Cat::RSlash(a, b) | Cat::LSlash(a, b) => {
                a.for_each_type(f);
                b.for_each_type(f);
            }
        }
    }

    pub fn type_vars(&self) -> BTreeSet<TyVar> {
        let mut out = BTreeSet::new();
        self.for_each_type(&mut |t| t.collect_vars(&mut out));
        out
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.for_each_type(&mut |t| ground &= t.is_ground());
        ground
    }

    pub fn is_slash(&self) -> bool {
        matches!(self, Cat::RSlash(..) | Cat::LSlash(..))
    }

    /// Semantic type of the category; slash direction is erased.
    pub fn interp(&self) -> SemType {
        match self {
            Cat::S => SemType::Truth,
            Cat::NP(t) | Cat::PP(_, t) => t.clone(),
            Cat::ADJ(t) | Cat::CN(t) => SemType::arrow(t.clone(), SemType::Truth),
            Cat::RSlash(result, arg) | Cat::LSlash(arg, result) => SemType::arrow(arg.interp(), result.interp()),
        }
    }

    /// How the category can be coordinated pointwise, if at all.
    pub fn prop_like(&self) -> Option<LiftSpec> {
        match self {
            Cat::S => Some(LiftSpec { args: vec![] }),
            Cat::ADJ(t) | Cat::CN(t) => Some(LiftSpec { args: vec![t.clone()] }),
            Cat::RSlash(result, arg) | Cat::LSlash(arg, result) => {
                let inner = result.prop_like()?;
                let mut args = vec![arg.interp()];
                args.extend(inner.args);
                Some(LiftSpec { args })
            }
            _ => None,
        }
    }
}

impl fmt::Display for Cat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(c: &Cat, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if c.is_slash() {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        match self {
            Cat::S => f.write_str("S"),
            Cat::NP(t) => write!(f, "NP<{t}>"),
            Cat::ADJ(t) => write!(f, "ADJ<{t}>"),
            Cat::CN(t) => write!(f, "CN<{t}>"),
            Cat::PP(p, t) => write!(f, "PP[{p}]<{t}>"),
            Cat::RSlash(r, a) => {
                operand(r, f)?;
                f.write_str("/")?;
                operand(a, f)
            }
            Cat::LSlash(a, r) => {
                operand(a, f)?;
                f.write_str("\\")?;
                operand(r, f)
            }
        }
    }
}

/// Domains peeled off a Prop-like category; the lift depth is `args.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftSpec {
    pub args: Vec<SemType>,
}

impl LiftSpec {
    pub fn depth(&self) -> usize {
        self.args.len()
    }

    pub fn lifted_type(&self) -> SemType {
        SemType::predicate_over(&self.args)
    }
}

/// `\P Q x1 .. xd. op (P x1 .. xd) (Q x1 .. xd)`.
pub fn lift_op(op: HeytingOp, spec: &LiftSpec) -> Term {
    let lifted = spec.lifted_type();
    let xs: Vec<Term> = spec
        .args
        .iter()
        .enumerate()
        .map(|(i, t)| Term::var(format!("x{}", i + 1), t.clone()))
        .collect();
    let p = Term::apps(Term::var("P", lifted.clone()), xs.iter().cloned());
    let q = Term::apps(Term::var("Q", lifted.clone()), xs.iter().cloned());
    let mut body = op.apply(p, q);
    for (i, t) in spec.args.iter().enumerate().rev() {
        body = Term::lam(format!("x{}", i + 1), t.clone(), body);
    }
    Term::lam("P", lifted.clone(), Term::lam("Q", lifted, body))
}

/// Semantics of a coordinator joining two conjuncts of a Prop-like category:
/// takes the right conjunct first, then the left.
pub fn coordinator_sem(op: HeytingOp, spec: &LiftSpec) -> Term {
    let ty = spec.lifted_type();
    let body = Term::apps(
        lift_op(op, spec),
        [Term::var("l", ty.clone()), Term::var("r", ty.clone())],
    );
    beta_normalize(&Term::lam("r", ty.clone(), Term::lam("l", ty, body)))
}

/// `(X\X)/X` for a conjunct category `X`.
pub fn coordinator_cat(conjunct: &Cat) -> Cat {
    Cat::rslash(Cat::lslash(conjunct.clone(), conjunct.clone()), conjunct.clone())
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CatError {
    #[error("categories {0} and {1} do not match")]
    Clash(Cat, Cat),
    #[error(transparent)]
    Index(#[from] UnifyError),
}

pub fn unify_cats(a: &Cat, b: &Cat, s: &TypeSubst) -> Result<TypeSubst, CatError> {
    let mut out = s.clone();
    unify_cats_into(a, b, &mut out)?;
    Ok(out)
}

pub(crate) fn unify_cats_into(a: &Cat, b: &Cat, s: &mut TypeSubst) -> Result<(), CatError> {
    match (a, b) {
        (Cat::S, Cat::S) => Ok(()),
        (Cat::NP(x), Cat::NP(y)) | (Cat::ADJ(x), Cat::ADJ(y)) | (Cat::CN(x), Cat::CN(y)) => Ok(unify_into(x, y, s)?),
        (Cat::PP(p, x), Cat::PP(q, y)) if p == q => Ok(unify_into(x, y, s)?),
        (Cat::RSlash(r1, a1), Cat::RSlash(r2, a2)) | (Cat::LSlash(a1, r1), Cat::LSlash(a2, r2)) => {
            unify_cats_into(r1, r2, s)?;
            unify_cats_into(a1, a2, s)
        }
        _ => Err(CatError::Clash(a.apply_subst(s), b.apply_subst(s))),
    }
}
