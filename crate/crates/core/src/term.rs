//! Typed lambda terms over a declared signature.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::types::{SemType, TypeSubst};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String, SemType),
    Const(String, SemType),
    Lam(String, SemType, Box<Term>),
    App(Box<Term>, Box<Term>),
    ForAll(String, SemType, Box<Term>),
    Exists(String, SemType, Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Implies(Box<Term>, Box<Term>),
    Not(Box<Term>),
    /// Equality at an explicitly recorded type.
    Eq(SemType, Box<Term>, Box<Term>),
    Lit(bool),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
}

/// Binary truth-valued connectives usable for coordination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeytingOp {
    Meet,
    Join,
    Imp,
}

impl HeytingOp {
    pub fn apply(self, l: Term, r: Term) -> Term {
        match self {
            HeytingOp::Meet => Term::and(l, r),
            HeytingOp::Join => Term::or(l, r),
            HeytingOp::Imp => Term::implies(l, r),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HeytingOp::Meet => "and",
            HeytingOp::Join => "or",
            HeytingOp::Imp => "implies",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "and" => Some(HeytingOp::Meet),
            "or" => Some(HeytingOp::Join),
            "implies" => Some(HeytingOp::Imp),
            _ => None,
        }
    }
}

impl Term {
    pub fn var(name: impl Into<String>, ty: SemType) -> Term {
        Term::Var(name.into(), ty)
    }

    pub fn constant(name: impl Into<String>, ty: SemType) -> Term {
        Term::Const(name.into(), ty)
    }

    pub fn lam(x: impl Into<String>, ty: SemType, body: Term) -> Term {
        Term::Lam(x.into(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn forall(x: impl Into<String>, ty: SemType, body: Term) -> Term {
        Term::ForAll(x.into(), ty, Box::new(body))
    }

    pub fn exists(x: impl Into<String>, ty: SemType, body: Term) -> Term {
        Term::Exists(x.into(), ty, Box::new(body))
    }

    pub fn and(l: Term, r: Term) -> Term {
        Term::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Term, r: Term) -> Term {
        Term::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Term, r: Term) -> Term {
        Term::Implies(Box::new(l), Box::new(r))
    }

    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn eq(ty: SemType, l: Term, r: Term) -> Term {
        Term::Eq(ty, Box::new(l), Box::new(r))
    }

    pub fn pair(l: Term, r: Term) -> Term {
        Term::Pair(Box::new(l), Box::new(r))
    }

    pub fn fst(p: Term) -> Term {
        Term::Fst(Box::new(p))
    }

    pub fn snd(p: Term) -> Term {
        Term::Snd(Box::new(p))
    }

    pub fn tru() -> Term {
        Term::Lit(true)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x, _) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Const(..) | Term::Lit(_) => {}
            Term::Lam(x, _, b) | Term::ForAll(x, _, b) | Term::Exists(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(a, b)
            | Term::And(a, b)
            | Term::Or(a, b)
            | Term::Implies(a, b)
            | Term::Eq(_, a, b)
            | Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Not(a) | Term::Fst(a) | Term::Snd(a) => a.collect_free(bound, out),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every name used anywhere in the term, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x, _) => {
                out.insert(x.clone());
            }
            Term::Const(..) | Term::Lit(_) => {}
            Term::Lam(x, _, b) | Term::ForAll(x, _, b) | Term::Exists(x, _, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            Term::App(a, b)
            | Term::And(a, b)
            | Term::Or(a, b)
            | Term::Implies(a, b)
            | Term::Eq(_, a, b)
            | Term::Pair(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Term::Not(a) | Term::Fst(a) | Term::Snd(a) => a.all_names(out),
        }
    }

    pub fn constants(&self, out: &mut BTreeMap<String, SemType>) {
        match self {
            Term::Const(c, ty) => {
                out.insert(c.clone(), ty.clone());
            }
            Term::Var(..) | Term::Lit(_) => {}
            Term::Lam(_, _, b) | Term::ForAll(_, _, b) | Term::Exists(_, _, b) => b.constants(out),
            Term::App(a, b)
            | Term::And(a, b)
            | Term::Or(a, b)
            | Term::Implies(a, b)
            | Term::Eq(_, a, b)
            | Term::Pair(a, b) => {
                a.constants(out);
                b.constants(out);
            }
            Term::Not(a) | Term::Fst(a) | Term::Snd(a) => a.constants(out),
        }
    }

    /// Applies `f` to every type annotation in the term.
    pub fn map_types(&self, f: &mut impl FnMut(&SemType) -> SemType) -> Term {
        match self {
            Term::Var(x, t) => Term::Var(x.clone(), f(t)),
            Term::Const(c, t) => Term::Const(c.clone(), f(t)),
            Term::Lit(b) => Term::Lit(*b),
            Term::Lam(x, t, b) => Term::Lam(x.clone(), f(t), Box::new(b.map_types(f))),
            Term::ForAll(x, t, b) => Term::ForAll(x.clone(), f(t), Box::new(b.map_types(f))),
            Term::Exists(x, t, b) => Term::Exists(x.clone(), f(t), Box::new(b.map_types(f))),
            Term::App(a, b) => Term::app(a.map_types(f), b.map_types(f)),
            Term::And(a, b) => Term::and(a.map_types(f), b.map_types(f)),
            Term::Or(a, b) => Term::or(a.map_types(f), b.map_types(f)),
            Term::Implies(a, b) => Term::implies(a.map_types(f), b.map_types(f)),
            Term::Eq(t, a, b) => Term::Eq(f(t), Box::new(a.map_types(f)), Box::new(b.map_types(f))),
            Term::Pair(a, b) => Term::pair(a.map_types(f), b.map_types(f)),
            Term::Not(a) => Term::not(a.map_types(f)),
            Term::Fst(a) => Term::fst(a.map_types(f)),
            Term::Snd(a) => Term::snd(a.map_types(f)),
        }
    }

    pub fn apply_subst(&self, s: &TypeSubst) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        self.map_types(&mut |t| s.apply_type(t))
    }

    pub fn for_each_type(&self, f: &mut impl FnMut(&SemType)) {
        let _ = self.map_types(&mut |t| {
            f(t);
            t.clone()
        });
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.for_each_type(&mut |t| ground &= t.is_ground());
        ground
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(..) | Term::Const(..) | Term::Lit(_) => 1,
            Term::Lam(_, _, b) | Term::ForAll(_, _, b) | Term::Exists(_, _, b) => 1 + b.size(),
            Term::App(a, b)
            | Term::And(a, b)
            | Term::Or(a, b)
            | Term::Implies(a, b)
            | Term::Eq(_, a, b)
            | Term::Pair(a, b) => 1 + a.size() + b.size(),
            Term::Not(a) | Term::Fst(a) | Term::Snd(a) => 1 + a.size(),
        }
    }

    /// A string identifying the term up to alpha-equivalence: bound
    /// variables are written as de Bruijn indices.
    pub fn alpha_key(&self) -> String {
        let mut out = String::new();
        let mut env = Vec::new();
        self.write_key(&mut env, &mut out);
        out
    }

    fn write_key(&self, env: &mut Vec<String>, out: &mut String) {
        use std::fmt::Write;
        match self {
            Term::Var(x, t) => match env.iter().rev().position(|y| y == x) {
                Some(i) => {
                    let _ = write!(out, "#{i}");
                }
                None => {
                    let _ = write!(out, "free({x}:{t})");
                }
            },
            Term::Const(c, t) => {
                let _ = write!(out, "c({c}:{t})");
            }
            Term::Lit(b) => {
                let _ = write!(out, "{b}");
            }
            Term::Lam(x, t, b) | Term::ForAll(x, t, b) | Term::Exists(x, t, b) => {
                let tag = match self {
                    Term::Lam(..) => "L",
                    Term::ForAll(..) => "A",
                    _ => "E",
                };
                let _ = write!(out, "{tag}[{t}](");
                env.push(x.clone());
                b.write_key(env, out);
                env.pop();
                out.push(')');
            }
            Term::App(a, b) | Term::And(a, b) | Term::Or(a, b) | Term::Implies(a, b) | Term::Pair(a, b) => {
                let tag = match self {
                    Term::App(..) => "@",
                    Term::And(..) => "&",
                    Term::Or(..) => "|",
                    Term::Implies(..) => ">",
                    _ => ",",
                };
                let _ = write!(out, "{tag}(");
                a.write_key(env, out);
                out.push(' ');
                b.write_key(env, out);
                out.push(')');
            }
            Term::Eq(t, a, b) => {
                let _ = write!(out, "=[{t}](");
                a.write_key(env, out);
                out.push(' ');
                b.write_key(env, out);
                out.push(')');
            }
            Term::Not(a) | Term::Fst(a) | Term::Snd(a) => {
                let tag = match self {
                    Term::Not(_) => "~",
                    Term::Fst(_) => "fst",
                    _ => "snd",
                };
                let _ = write!(out, "{tag}(");
                a.write_key(env, out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go(a: &Term, b: &Term, ea: &mut Vec<String>, eb: &mut Vec<String>) -> bool {
        match (a, b) {
            (Term::Var(x, tx), Term::Var(y, ty)) => {
                let ix = ea.iter().rev().position(|n| n == x);
                let iy = eb.iter().rev().position(|n| n == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y && tx == ty,
                    _ => false,
                }
            }
            (Term::Const(c, tc), Term::Const(d, td)) => c == d && tc == td,
            (Term::Lit(p), Term::Lit(q)) => p == q,
            (Term::Lam(x, tx, bx), Term::Lam(y, ty, by))
            | (Term::ForAll(x, tx, bx), Term::ForAll(y, ty, by))
            | (Term::Exists(x, tx, bx), Term::Exists(y, ty, by)) => {
                if tx != ty {
                    return false;
                }
                ea.push(x.clone());
                eb.push(y.clone());
                let r = go(bx, by, ea, eb);
                ea.pop();
                eb.pop();
                r
            }
            (Term::App(a1, a2), Term::App(b1, b2))
            | (Term::And(a1, a2), Term::And(b1, b2))
            | (Term::Or(a1, a2), Term::Or(b1, b2))
            | (Term::Implies(a1, a2), Term::Implies(b1, b2))
            | (Term::Pair(a1, a2), Term::Pair(b1, b2)) => go(a1, b1, ea, eb) && go(a2, b2, ea, eb),
            (Term::Eq(ta, a1, a2), Term::Eq(tb, b1, b2)) => ta == tb && go(a1, b1, ea, eb) && go(a2, b2, ea, eb),
            (Term::Not(x), Term::Not(y)) | (Term::Fst(x), Term::Fst(y)) | (Term::Snd(x), Term::Snd(y)) => {
                go(x, y, ea, eb)
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

/// Target-language spellings for a declared base type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TargetNames {
    pub lean: Option<String>,
    pub coq: Option<String>,
}

/// Declared base types and typed constants that terms may mention.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub types: BTreeMap<String, TargetNames>,
    pub constants: BTreeMap<String, SemType>,
    /// Base type of numeric literals, if numerals are enabled.
    pub numeral_type: Option<String>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("constant `{name}` declared with conflicting types {first} and {second}")]
    Conflict {
        name: String,
        first: SemType,
        second: SemType,
    },
    #[error("numeral type declared as both {0} and {1}")]
    NumeralConflict(String, String),
    #[error("undeclared base type `{0}`")]
    UnknownType(String),
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_type(mut self, name: &str) -> Self {
        self.types.insert(name.to_string(), TargetNames::default());
        self
    }

    pub fn with_const(mut self, name: &str, ty: SemType) -> Self {
        self.constants.insert(name.to_string(), ty);
        self
    }

    pub fn with_numerals(mut self, ty: &str) -> Self {
        self.numeral_type = Some(ty.to_string());
        self
    }

    pub fn has_type(&self, name: &str) -> bool {
        self.types.contains_key(name)
    }

    /// The type of constant `name`, including numerals.
    pub fn const_type(&self, name: &str) -> Option<SemType> {
        if let Some(ty) = self.constants.get(name) {
            return Some(ty.clone());
        }
        if is_numeral(name) {
            return self.numeral_type.as_ref().map(SemType::base);
        }
        None
    }

    pub fn check_type(&self, t: &SemType) -> Result<(), SignatureError> {
        let mut bases = BTreeSet::new();
        t.collect_bases(&mut bases);
        match bases.into_iter().find(|b| !self.types.contains_key(b)) {
            Some(b) => Err(SignatureError::UnknownType(b)),
            None => Ok(()),
        }
    }

    /// Union of two signatures; constants declared twice must agree.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SignatureError> {
        for (name, targets) in &other.types {
            let slot = self.types.entry(name.clone()).or_default();
            if slot.lean.is_none() {
                slot.lean = targets.lean.clone();
            }
            if slot.coq.is_none() {
                slot.coq = targets.coq.clone();
            }
        }
        for (name, ty) in &other.constants {
            match self.constants.get(name) {
                Some(prev) if prev != ty => {
                    return Err(SignatureError::Conflict {
                        name: name.clone(),
                        first: prev.clone(),
                        second: ty.clone(),
                    })
                }
                Some(_) => {}
                None => {
                    self.constants.insert(name.clone(), ty.clone());
                }
            }
        }
        match (&self.numeral_type, &other.numeral_type) {
            (Some(a), Some(b)) if a != b => return Err(SignatureError::NumeralConflict(a.clone(), b.clone())),
            (None, Some(b)) => self.numeral_type = Some(b.clone()),
            _ => {}
        }
        Ok(())
    }

    /// The sub-signature needed to type `terms`.
    pub fn restrict_to(&self, terms: &[&Term]) -> Signature {
        let mut used = BTreeMap::new();
        for t in terms {
            t.constants(&mut used);
        }
        let mut out = Signature {
            types: self.types.clone(),
            constants: BTreeMap::new(),
            numeral_type: self.numeral_type.clone(),
        };
        for name in used.keys() {
            if let Some(ty) = self.constants.get(name) {
                out.constants.insert(name.clone(), ty.clone());
            }
        }
        out
    }
}

pub fn is_numeral(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("ill-typed at {path}: expected {expected}, found {found}")]
    IllTyped {
        path: String,
        expected: SemType,
        found: SemType,
    },
    #[error("ill-typed at {path}: {found} is not a function")]
    NotAFunction { path: String, found: SemType },
    #[error("ill-typed at {path}: {found} is not a pair")]
    NotAPair { path: String, found: SemType },
    #[error("unknown constant `{name}` at {path}")]
    UnknownConstant { path: String, name: String },
}

/// The unique type of `t`. Bound variables must carry their binder's type.
pub fn type_of(t: &Term, sig: &Signature) -> Result<SemType, TypeError> {
    let mut env: Vec<(String, SemType)> = Vec::new();
    let mut path = Vec::new();
    infer(t, sig, &mut env, &mut path)
}

fn path_str(path: &[&'static str]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        format!("root.{}", path.join("."))
    }
}

fn expect(found: SemType, expected: &SemType, path: &[&'static str]) -> Result<(), TypeError> {
    if &found == expected {
        Ok(())
    } else {
        Err(TypeError::IllTyped {
            path: path_str(path),
            expected: expected.clone(),
            found,
        })
    }
}

fn infer(
    t: &Term,
    sig: &Signature,
    env: &mut Vec<(String, SemType)>,
    path: &mut Vec<&'static str>,
) -> Result<SemType, TypeError> {
    let sub = |t: &Term, step: &'static str, env: &mut Vec<(String, SemType)>, path: &mut Vec<&'static str>| {
        path.push(step);
        let r = infer(t, sig, env, path);
        path.pop();
        r
    };
    match t {
        Term::Var(x, ty) => {
            if let Some((_, bound)) = env.iter().rev().find(|(n, _)| n == x) {
                expect(ty.clone(), bound, path)?;
            }
            Ok(ty.clone())
        }
        Term::Const(c, ty) => match sig.const_type(c) {
            Some(decl) => {
                expect(ty.clone(), &decl, path)?;
                Ok(decl)
            }
            None => Err(TypeError::UnknownConstant {
                path: path_str(path),
                name: c.clone(),
            }),
        },
        Term::Lit(_) => Ok(SemType::Truth),
        Term::Lam(x, ty, body) => {
            env.push((x.clone(), ty.clone()));
            let r = sub(body, "body", env, path);
            env.pop();
            Ok(SemType::arrow(ty.clone(), r?))
        }
        Term::ForAll(x, ty, body) | Term::Exists(x, ty, body) => {
            env.push((x.clone(), ty.clone()));
            let r = sub(body, "body", env, path);
            env.pop();
            path.push("body");
            let res = expect(r?, &SemType::Truth, path);
            path.pop();
            res?;
            Ok(SemType::Truth)
        }
        Term::App(f, a) => {
            let ft = sub(f, "fn", env, path)?;
            let at = sub(a, "arg", env, path)?;
            match ft {
                SemType::Arrow(dom, cod) => {
                    path.push("arg");
                    let r = expect(at, &dom, path);
                    path.pop();
                    r?;
                    Ok(*cod)
                }
                other => {
                    path.push("fn");
                    let p = path_str(path);
                    path.pop();
                    Err(TypeError::NotAFunction { path: p, found: other })
                }
            }
        }
        Term::And(a, b) | Term::Or(a, b) | Term::Implies(a, b) => {
            for (side, step) in [(a, "left"), (b, "right")] {
                let ty = sub(side, step, env, path)?;
                path.push(step);
                let r = expect(ty, &SemType::Truth, path);
                path.pop();
                r?;
            }
            Ok(SemType::Truth)
        }
        Term::Not(a) => {
            let ty = sub(a, "arg", env, path)?;
            path.push("arg");
            let r = expect(ty, &SemType::Truth, path);
            path.pop();
            r?;
            Ok(SemType::Truth)
        }
        Term::Eq(ty, a, b) => {
            for (side, step) in [(a, "left"), (b, "right")] {
                let found = sub(side, step, env, path)?;
                path.push(step);
                let r = expect(found, ty, path);
                path.pop();
                r?;
            }
            Ok(SemType::Truth)
        }
        Term::Pair(a, b) => {
            let ta = sub(a, "left", env, path)?;
            let tb = sub(b, "right", env, path)?;
            Ok(SemType::prod(ta, tb))
        }
        Term::Fst(p) | Term::Snd(p) => {
            let pt = sub(p, "arg", env, path)?;
            match pt {
                SemType::Prod(l, r) => Ok(if matches!(t, Term::Fst(_)) { *l } else { *r }),
                other => Err(TypeError::NotAPair {
                    path: path_str(path),
                    found: other,
                }),
            }
        }
    }
}

/// Pick a name based on `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply of names")
}

/// Capture-avoiding substitution `t[x := s]`.
pub fn substitute(t: &Term, x: &str, s: &Term) -> Term {
    let fv = s.free_vars();
    subst_rec(t, x, s, &fv)
}

fn subst_rec(t: &Term, x: &str, s: &Term, fv_s: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(y, _) => {
            if y == x {
                s.clone()
            } else {
                t.clone()
            }
        }
        Term::Const(..) | Term::Lit(_) => t.clone(),
        Term::Lam(y, ty, body) | Term::ForAll(y, ty, body) | Term::Exists(y, ty, body) => {
            let rebuild = |name: String, body: Term| match t {
                Term::Lam(..) => Term::Lam(name, ty.clone(), Box::new(body)),
                Term::ForAll(..) => Term::ForAll(name, ty.clone(), Box::new(body)),
                _ => Term::Exists(name, ty.clone(), Box::new(body)),
            };
            if y == x {
                return t.clone();
            }
            if !body.free_vars().contains(x) {
                return t.clone();
            }
            if fv_s.contains(y) {
                let mut avoid = fv_s.clone();
                body.all_names(&mut avoid);
                avoid.insert(x.to_string());
                let y2 = fresh_name(y, &avoid);
                let renamed = substitute(body, y, &Term::Var(y2.clone(), ty.clone()));
                rebuild(y2, subst_rec(&renamed, x, s, fv_s))
            } else {
                rebuild(y.clone(), subst_rec(body, x, s, fv_s))
            }
        }
        Term::App(a, b) => Term::app(subst_rec(a, x, s, fv_s), subst_rec(b, x, s, fv_s)),
        Term::And(a, b) => Term::and(subst_rec(a, x, s, fv_s), subst_rec(b, x, s, fv_s)),
        Term::Or(a, b) => Term::or(subst_rec(a, x, s, fv_s), subst_rec(b, x, s, fv_s)),
        Term::Implies(a, b) => Term::implies(subst_rec(a, x, s, fv_s), subst_rec(b, x, s, fv_s)),
        Term::Eq(ty, a, b) => Term::eq(ty.clone(), subst_rec(a, x, s, fv_s), subst_rec(b, x, s, fv_s)),
        Term::Pair(a, b) => Term::pair(subst_rec(a, x, s, fv_s), subst_rec(b, x, s, fv_s)),
        Term::Not(a) => Term::not(subst_rec(a, x, s, fv_s)),
        Term::Fst(a) => Term::fst(subst_rec(a, x, s, fv_s)),
        Term::Snd(a) => Term::snd(subst_rec(a, x, s, fv_s)),
    }
}
