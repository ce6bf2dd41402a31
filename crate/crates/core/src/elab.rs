//! Type inference for surface terms against a signature.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::{parse_surface, Binder, Surface, SyntaxError};
use crate::term::{is_numeral, Signature, Term};
use crate::types::{unify_into, SemType, TyVar, TypeSubst, UnifyError, VarSupply};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ElabError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("column {col}: unknown identifier `{name}`")]
    UnknownIdent { name: String, col: usize },
    #[error("column {col}: numeral `{name}` used but no numeral type is declared")]
    NoNumerals { name: String, col: usize },
    #[error("undeclared base type `{0}`")]
    UnknownType(String),
    #[error("{context}: cannot unify {left} with {right}")]
    Mismatch {
        context: String,
        left: SemType,
        right: SemType,
    },
    #[error("expected {expected}, found {found}")]
    Expected { expected: SemType, found: SemType },
    #[error("type variable {var} is declared generic but is forced to be {ty}")]
    RigidBound { var: String, ty: SemType },
    #[error("could not determine the type of {what}")]
    Ambiguous { what: String },
}

/// Result of elaborating a term before it is checked against an expected
/// type: metavariables may remain.
pub struct Elaborated {
    pub term: Term,
    pub ty: SemType,
    pub subst: TypeSubst,
}

struct Ctx<'a> {
    sig: &'a Signature,
    supply: VarSupply,
    subst: TypeSubst,
}

impl Ctx<'_> {
    fn meta(&mut self) -> SemType {
        SemType::Var(self.supply.fresh_meta())
    }

    fn unify(&mut self, a: &SemType, b: &SemType, context: impl FnOnce() -> String) -> Result<(), ElabError> {
        let before = self.subst.clone();
        unify_into(a, b, &mut self.subst).map_err(|e| {
            let (left, right) = match e {
                UnifyError::Clash(l, r) => (l, r),
                UnifyError::OccursCheck(v, t) => (SemType::Var(v), t),
            };
            ElabError::Mismatch {
                context: context(),
                left: before.apply_type(&left),
                right: before.apply_type(&right),
            }
        })
    }

    fn check_annotation(&self, t: &SemType) -> Result<(), ElabError> {
        let mut bases = BTreeSet::new();
        t.collect_bases(&mut bases);
        match bases.into_iter().find(|b| !self.sig.has_type(b)) {
            Some(b) => Err(ElabError::UnknownType(b)),
            None => Ok(()),
        }
    }

    fn infer(&mut self, s: &Surface, env: &mut Vec<(String, SemType)>) -> Result<(Term, SemType), ElabError> {
        match s {
            Surface::Ident(name, pos) => {
                if let Some((_, ty)) = env.iter().rev().find(|(n, _)| n == name) {
                    return Ok((Term::var(name.clone(), ty.clone()), ty.clone()));
                }
                if let Some(ty) = self.sig.constants.get(name) {
                    return Ok((Term::constant(name.clone(), ty.clone()), ty.clone()));
                }
                if is_numeral(name) {
                    return match &self.sig.numeral_type {
                        Some(b) => {
                            let ty = SemType::base(b.clone());
                            Ok((Term::constant(name.clone(), ty.clone()), ty))
                        }
                        None => Err(ElabError::NoNumerals {
                            name: name.clone(),
                            col: pos + 1,
                        }),
                    };
                }
                Err(ElabError::UnknownIdent {
                    name: name.clone(),
                    col: pos + 1,
                })
            }
            Surface::Lit(b) => Ok((Term::Lit(*b), SemType::Truth)),
            Surface::Bind(kind, x, ann, body) => {
                let ty = match ann {
                    Some(t) => {
                        self.check_annotation(t)?;
                        t.clone()
                    }
                    None => self.meta(),
                };
                env.push((x.clone(), ty.clone()));
                let r = self.infer(body, env);
                env.pop();
                let (b, bty) = r?;
                match kind {
                    Binder::Lam => Ok((Term::lam(x.clone(), ty.clone(), b), SemType::arrow(ty, bty))),
                    Binder::ForAll | Binder::Exists => {
                        self.unify(&bty, &SemType::Truth, || format!("body of quantifier over `{x}`"))?;
                        let t = if *kind == Binder::ForAll {
                            Term::forall(x.clone(), ty, b)
                        } else {
                            Term::exists(x.clone(), ty, b)
                        };
                        Ok((t, SemType::Truth))
                    }
                }
            }
            Surface::App(f, a) => {
                let (ft, fty) = self.infer(f, env)?;
                let (at, aty) = self.infer(a, env)?;
                let res = self.meta();
                let want = SemType::arrow(aty, res.clone());
                self.unify(&fty, &want, || {
                    format!("application of `{}`", crate::syntax::print_term(&ft))
                })?;
                Ok((Term::app(ft, at), res))
            }
            Surface::And(a, b) | Surface::Or(a, b) | Surface::Implies(a, b) => {
                let (at, aty) = self.infer(a, env)?;
                self.unify(&aty, &SemType::Truth, || "left operand of connective".to_string())?;
                let (bt, bty) = self.infer(b, env)?;
                self.unify(&bty, &SemType::Truth, || "right operand of connective".to_string())?;
                let t = match s {
                    Surface::And(..) => Term::and(at, bt),
                    Surface::Or(..) => Term::or(at, bt),
                    _ => Term::implies(at, bt),
                };
                Ok((t, SemType::Truth))
            }
            Surface::Not(a) => {
                let (at, aty) = self.infer(a, env)?;
                self.unify(&aty, &SemType::Truth, || "operand of negation".to_string())?;
                Ok((Term::not(at), SemType::Truth))
            }
            Surface::Eq(a, b, _) => {
                let (at, aty) = self.infer(a, env)?;
                let (bt, bty) = self.infer(b, env)?;
                self.unify(&aty, &bty, || "sides of equation".to_string())?;
                Ok((Term::eq(aty, at, bt), SemType::Truth))
            }
            Surface::Pair(a, b) => {
                let (at, aty) = self.infer(a, env)?;
                let (bt, bty) = self.infer(b, env)?;
                Ok((Term::pair(at, bt), SemType::prod(aty, bty)))
            }
            Surface::Fst(p, _) | Surface::Snd(p, _) => {
                let (pt, pty) = self.infer(p, env)?;
                let l = self.meta();
                let r = self.meta();
                self.unify(&pty, &SemType::prod(l.clone(), r.clone()), || "projection".to_string())?;
                if matches!(s, Surface::Fst(..)) {
                    Ok((Term::fst(pt), l))
                } else {
                    Ok((Term::snd(pt), r))
                }
            }
        }
    }
}

/// Infers a type for `s`. Metavariables may remain in the result.
pub fn infer_surface(s: &Surface, sig: &Signature) -> Result<Elaborated, ElabError> {
    let mut ctx = Ctx {
        sig,
        supply: VarSupply::new(),
        subst: TypeSubst::new(),
    };
    let (t, ty) = ctx.infer(s, &mut Vec::new())?;
    Ok(Elaborated {
        term: t.apply_subst(&ctx.subst),
        ty: ctx.subst.apply_type(&ty),
        subst: ctx.subst,
    })
}

fn has_meta(t: &SemType) -> bool {
    let mut vs = BTreeSet::new();
    t.collect_vars(&mut vs);
    vs.iter().any(TyVar::is_meta)
}

/// Elaborates `s` and checks it against `expected`. Type variables that
/// occur in `expected` or in binder annotations are rigid: they may not
/// be instantiated. No metavariables may remain.
pub fn elaborate(s: &Surface, sig: &Signature, expected: Option<&SemType>) -> Result<Term, ElabError> {
    let e = infer_surface(s, sig)?;
    let mut subst = TypeSubst::new();
    if let Some(want) = expected {
        if unify_into(want, &e.ty, &mut subst).is_err() {
            return Err(ElabError::Expected {
                expected: want.clone(),
                found: e.ty,
            });
        }
    }
    for (v, ty) in e.subst.iter() {
        if !v.is_meta() {
            return Err(ElabError::RigidBound {
                var: v.to_string(),
                ty: ty.clone(),
            });
        }
    }
    if let Some(want) = expected {
        if subst.domain().any(|v| !v.is_meta()) {
            return Err(ElabError::Expected {
                expected: want.clone(),
                found: e.ty,
            });
        }
    }
    let term = e.term.apply_subst(&subst);
    let mut stuck = false;
    term.for_each_type(&mut |t| stuck |= has_meta(t));
    if stuck {
        return Err(ElabError::Ambiguous {
            what: crate::syntax::print_term(&term),
        });
    }
    Ok(term)
}

/// Parses and elaborates a closed term in one step.
pub fn parse_term(
    src: &str,
    sig: &Signature,
    vars: &BTreeSet<String>,
    expected: Option<&SemType>,
) -> Result<Term, ElabError> {
    let s = parse_surface(src, vars)?;
    elaborate(&s, sig, expected)
}
