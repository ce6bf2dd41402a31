//! Printing logical forms as Lean 4 or Coq theorem statements, or as plain
//! surface terms.
//!
//! Precedence, tightest first: application, `=`, negation, `/\`, `\/`,
//! `->`. Conjunction, disjunction and implication associate to the right.
//! Quantifier and lambda bodies extend as far right as possible, and a
//! binder that is an operand of a connective is always parenthesized.
//! Adjacent binders of the same kind are merged: `forall a b c, ...`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{
    disambiguate_binders, print_term, LVL_AND, LVL_APP, LVL_ATOM, LVL_EQ, LVL_IMP, LVL_NOT, LVL_OR, LVL_TOP,
};
use crate::term::{Signature, Term};
use crate::types::SemType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Lean4,
    Coq,
    /// The lexicon's own term syntax; parses back with `parse_term`.
    Plain,
}

impl Target {
    pub fn from_name(s: &str) -> Option<Target> {
        match s {
            "lean" | "lean4" => Some(Target::Lean4),
            "coq" => Some(Target::Coq),
            "plain" => Some(Target::Plain),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmitOptions {
    /// Annotate binders with their types: `forall (a b : Nat), ...`.
    pub typed_binders: bool,
    /// Declare the signature constants the statement uses.
    pub stubs: bool,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EmitError {
    #[error("type variable {0} survived into an emitted term")]
    UnprintableType(String),
}

fn type_name(sig: &Signature, target: Target, base: &str) -> String {
    let names = sig.types.get(base);
    let chosen = match target {
        Target::Lean4 => names.and_then(|n| n.lean.clone()),
        Target::Coq => names.and_then(|n| n.coq.clone()),
        Target::Plain => None,
    };
    chosen.unwrap_or_else(|| base.to_string())
}

/// `prec`: 0 arrow position, 1 product operand, 2 right product operand.
fn write_type(t: &SemType, target: Target, sig: &Signature, prec: u8, out: &mut String) -> Result<(), EmitError> {
    match t {
        SemType::Truth => out.push_str("Prop"),
        SemType::Base(b) => out.push_str(&type_name(sig, target, b)),
        SemType::Var(v) => return Err(EmitError::UnprintableType(v.to_string())),
        SemType::Arrow(a, b) => {
            if prec > 0 {
                out.push('(');
            }
            write_type(a, target, sig, 1, out)?;
            out.push_str(" -> ");
            write_type(b, target, sig, 0, out)?;
            if prec > 0 {
                out.push(')');
            }
        }
        SemType::Prod(a, b) => {
            if prec > 1 {
                out.push('(');
            }
            write_type(a, target, sig, 1, out)?;
            out.push_str(if target == Target::Lean4 { " × " } else { " * " });
            write_type(b, target, sig, 2, out)?;
            if prec > 1 {
                out.push(')');
            }
        }
    }
    Ok(())
}

pub fn emit_type(t: &SemType, target: Target, sig: &Signature) -> Result<String, EmitError> {
    let mut out = String::new();
    write_type(t, target, sig, 0, &mut out)?;
    Ok(out)
}

struct Printer<'a> {
    target: Target,
    sig: &'a Signature,
    typed: bool,
    out: String,
}

impl Printer<'_> {
    fn ty(&mut self, t: &SemType) -> Result<(), EmitError> {
        write_type(t, self.target, self.sig, 0, &mut self.out)
    }

    fn term(&mut self, t: &Term, lvl: u8) -> Result<(), EmitError> {
        let own = match t {
            Term::Lam(..) | Term::ForAll(..) | Term::Exists(..) => LVL_TOP,
            Term::Implies(..) => LVL_IMP,
            Term::Or(..) => LVL_OR,
            Term::And(..) => LVL_AND,
            Term::Not(_) => LVL_NOT,
            Term::Eq(..) => LVL_EQ,
            Term::App(..) | Term::Fst(_) | Term::Snd(_) => LVL_APP,
            _ => LVL_ATOM,
        };
        let paren = own < lvl || (own == LVL_TOP && lvl > LVL_TOP);
        if paren {
            self.out.push('(');
        }
        match t {
            Term::Var(x, ty) | Term::Const(x, ty) => {
                if !ty.is_ground() {
                    return Err(EmitError::UnprintableType(ty.to_string()));
                }
                self.out.push_str(x);
            }
            Term::Lit(b) => self.out.push_str(if *b { "True" } else { "False" }),
            Term::Lam(..) | Term::ForAll(..) | Term::Exists(..) => self.binders(t)?,
            Term::App(f, a) => {
                self.term(f, LVL_APP)?;
                self.out.push(' ');
                self.term(a, LVL_ATOM)?;
            }
            Term::Fst(p) | Term::Snd(p) => {
                let first = matches!(t, Term::Fst(_));
                self.out.push_str(match (self.target, first) {
                    (Target::Lean4, true) => "Prod.fst ",
                    (Target::Lean4, false) => "Prod.snd ",
                    (_, true) => "fst ",
                    (_, false) => "snd ",
                });
                self.term(p, LVL_ATOM)?;
            }
            Term::Implies(a, b) => self.infix(a, " -> ", b, LVL_OR, LVL_IMP)?,
            Term::Or(a, b) => self.infix(a, " \\/ ", b, LVL_AND, LVL_OR)?,
            Term::And(a, b) => self.infix(a, " /\\ ", b, LVL_NOT, LVL_AND)?,
            Term::Eq(ty, a, b) => {
                if !ty.is_ground() {
                    return Err(EmitError::UnprintableType(ty.to_string()));
                }
                self.infix(a, " = ", b, LVL_APP, LVL_APP)?
            }
            Term::Not(a) => {
                self.out.push_str(if self.target == Target::Lean4 { "¬" } else { "~ " });
                self.term(a, LVL_NOT)?;
            }
            Term::Pair(a, b) => {
                self.out.push('(');
                self.term(a, LVL_TOP)?;
                self.out.push_str(", ");
                self.term(b, LVL_TOP)?;
                self.out.push(')');
            }
        }
        if paren {
            self.out.push(')');
        }
        Ok(())
    }

    fn infix(&mut self, a: &Term, op: &str, b: &Term, la: u8, lb: u8) -> Result<(), EmitError> {
        self.term(a, la)?;
        self.out.push_str(op);
        self.term(b, lb)
    }

    fn binders(&mut self, t: &Term) -> Result<(), EmitError> {
        let kind = std::mem::discriminant(t);
        let mut groups: Vec<(Vec<&str>, &SemType)> = Vec::new();
        let mut cur = t;
        loop {
            let (x, ty, body) = match cur {
                Term::Lam(x, ty, b) | Term::ForAll(x, ty, b) | Term::Exists(x, ty, b)
                    if std::mem::discriminant(cur) == kind =>
                {
                    (x, ty, b)
                }
                _ => break,
            };
            if !ty.is_ground() {
                return Err(EmitError::UnprintableType(ty.to_string()));
            }
            match groups.last_mut() {
                Some((names, gty)) if !self.typed || *gty == ty => names.push(x),
                _ => groups.push((vec![x.as_str()], ty)),
            }
            cur = body;
        }
        let kw = match t {
            Term::Lam(..) => "fun",
            Term::ForAll(..) => "forall",
            _ => "exists",
        };
        self.out.push_str(kw);
        for (names, ty) in &groups {
            self.out.push(' ');
            if self.typed {
                self.out.push('(');
                self.out.push_str(&names.join(" "));
                self.out.push_str(" : ");
                self.ty(ty)?;
                self.out.push(')');
            } else {
                self.out.push_str(&names.join(" "));
            }
        }
        self.out
            .push_str(if matches!(t, Term::Lam(..)) { " => " } else { ", " });
        self.term(cur, LVL_TOP)
    }
}

/// Prints a ground term for `target`.
pub fn emit_term(t: &Term, target: Target, sig: &Signature, opts: &EmitOptions) -> Result<String, EmitError> {
    if target == Target::Plain {
        if !t.is_ground() {
            let mut bad = None;
            t.for_each_type(&mut |ty| {
                if bad.is_none() && !ty.is_ground() {
                    bad = Some(ty.to_string());
                }
            });
            return Err(EmitError::UnprintableType(bad.unwrap_or_default()));
        }
        return Ok(print_term(t));
    }
    let mut p = Printer {
        target,
        sig,
        typed: opts.typed_binders,
        out: String::new(),
    };
    p.term(&disambiguate_binders(t), LVL_TOP)?;
    Ok(p.out)
}

/// Declarations for the base types without a target name and the
/// constants `t` mentions, in name order.
fn stubs(t: &Term, target: Target, sig: &Signature) -> Result<Vec<String>, EmitError> {
    let used_sig = sig.restrict_to(&[t]);
    let mut bases = BTreeSet::new();
    for ty in used_sig.constants.values() {
        ty.collect_bases(&mut bases);
    }
    t.for_each_type(&mut |ty| ty.collect_bases(&mut bases));
    let mut out = Vec::new();
    for b in bases {
        let native = match target {
            Target::Lean4 => sig.types.get(&b).and_then(|n| n.lean.as_ref()).is_some(),
            Target::Coq => sig.types.get(&b).and_then(|n| n.coq.as_ref()).is_some(),
            Target::Plain => false,
        };
        if !native {
            out.push(match target {
                Target::Lean4 => format!("axiom {b} : Type"),
                Target::Coq => format!("Parameter {b} : Type."),
                Target::Plain => format!("type {b}"),
            });
        }
    }
    for (name, ty) in &used_sig.constants {
        let ty = emit_type(ty, target, sig)?;
        out.push(match target {
            Target::Lean4 => format!("axiom {name} : {ty}"),
            Target::Coq => format!("Parameter {name} : {ty}."),
            Target::Plain => format!("{name} : {ty}"),
        });
    }
    Ok(out)
}

/// A complete theorem statement, proof left open.
pub fn emit_theorem(
    name: &str,
    t: &Term,
    target: Target,
    sig: &Signature,
    opts: &EmitOptions,
) -> Result<String, EmitError> {
    let body = emit_term(t, target, sig, opts)?;
    let mut out = String::new();
    if opts.stubs {
        for s in stubs(t, target, sig)? {
            out.push_str(&s);
            out.push('\n');
        }
        if !out.is_empty() {
            out.push('\n');
        }
    }
    match target {
        Target::Lean4 => out.push_str(&format!("theorem {name} : {body} := by sorry")),
        Target::Coq => out.push_str(&format!("Theorem {name} : {body}. Admitted.")),
        Target::Plain => out.push_str(&format!("{name} : {body}")),
    }
    Ok(out)
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Lean4 => "lean",
            Target::Coq => "coq",
            Target::Plain => "plain",
        })
    }
}
