//! Semantic types of the target logic and first-order unification over them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A type variable. Ids beginning with `?` are elaboration metavariables and
/// are preferred as the bound side when two variables are unified.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TyVar(pub String);

impl TyVar {
    pub fn new(id: impl Into<String>) -> Self {
        TyVar(id.into())
    }

    pub fn is_meta(&self) -> bool {
        self.0.starts_with('?')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TyVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    /// The proposition type.
    Truth,
    Base(String),
    Arrow(Box<SemType>, Box<SemType>),
    Prod(Box<SemType>, Box<SemType>),
    Var(TyVar),
}

impl SemType {
    pub fn base(name: impl Into<String>) -> Self {
        SemType::Base(name.into())
    }

    pub fn var(id: impl Into<String>) -> Self {
        SemType::Var(TyVar::new(id))
    }

    pub fn arrow(dom: SemType, cod: SemType) -> Self {
        SemType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn prod(l: SemType, r: SemType) -> Self {
        SemType::Prod(Box::new(l), Box::new(r))
    }

    /// `a1 -> a2 -> ... -> Truth`
    pub fn predicate_over(args: &[SemType]) -> Self {
        args.iter()
            .rev()
            .fold(SemType::Truth, |acc, a| SemType::arrow(a.clone(), acc))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            SemType::Truth | SemType::Base(_) => true,
            SemType::Arrow(a, b) | SemType::Prod(a, b) => a.is_ground() && b.is_ground(),
            SemType::Var(_) => false,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<TyVar>) {
        match self {
            SemType::Truth | SemType::Base(_) => {}
            SemType::Arrow(a, b) | SemType::Prod(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            SemType::Var(v) => {
                out.insert(v.clone());
            }
        }
    }

    /// Type variables in order of first occurrence.
    pub fn vars_in_order(&self, out: &mut Vec<TyVar>) {
        match self {
            SemType::Truth | SemType::Base(_) => {}
            SemType::Arrow(a, b) | SemType::Prod(a, b) => {
                a.vars_in_order(out);
                b.vars_in_order(out);
            }
            SemType::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
    }

    pub fn occurs(&self, v: &TyVar) -> bool {
        match self {
            SemType::Truth | SemType::Base(_) => false,
            SemType::Arrow(a, b) | SemType::Prod(a, b) => a.occurs(v) || b.occurs(v),
            SemType::Var(w) => w == v,
        }
    }

    pub fn collect_bases(&self, out: &mut BTreeSet<String>) {
        match self {
            SemType::Truth | SemType::Var(_) => {}
            SemType::Base(b) => {
                out.insert(b.clone());
            }
            SemType::Arrow(a, b) | SemType::Prod(a, b) => {
                a.collect_bases(out);
                b.collect_bases(out);
            }
        }
    }

    /// Rename type variables through `f`; variables for which `f` returns
    /// `None` are left alone.
    pub fn rename_vars(&self, f: &mut impl FnMut(&TyVar) -> Option<TyVar>) -> SemType {
        match self {
            SemType::Truth | SemType::Base(_) => self.clone(),
            SemType::Arrow(a, b) => SemType::arrow(a.rename_vars(f), b.rename_vars(f)),
            SemType::Prod(a, b) => SemType::prod(a.rename_vars(f), b.rename_vars(f)),
            SemType::Var(v) => SemType::Var(f(v).unwrap_or_else(|| v.clone())),
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(self, 0, f)
    }
}

// 0: arrow position, 1: product operand, 2: atom
fn fmt_type(t: &SemType, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        SemType::Truth => f.write_str("Prop"),
        SemType::Base(b) => f.write_str(b),
        SemType::Var(v) => write!(f, "{v}"),
        SemType::Arrow(a, b) => {
            if prec > 0 {
                f.write_str("(")?;
            }
            fmt_type(a, 1, f)?;
            f.write_str(" -> ")?;
            fmt_type(b, 0, f)?;
            if prec > 0 {
                f.write_str(")")?;
            }
            Ok(())
        }
        SemType::Prod(a, b) => {
            if prec > 1 {
                f.write_str("(")?;
            }
            fmt_type(a, 1, f)?;
            f.write_str(" * ")?;
            fmt_type(b, 2, f)?;
            if prec > 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

/// Substitution of type variables. Kept idempotent: no variable in the
/// range is itself bound.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeSubst {
    map: BTreeMap<TyVar, SemType>,
}

impl TypeSubst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, v: &TyVar) -> Option<&SemType> {
        self.map.get(v)
    }

    pub fn domain(&self) -> impl Iterator<Item = &TyVar> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TyVar, &SemType)> {
        self.map.iter()
    }

    pub fn apply_type(&self, t: &SemType) -> SemType {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            SemType::Truth | SemType::Base(_) => t.clone(),
            SemType::Arrow(a, b) => SemType::arrow(self.apply_type(a), self.apply_type(b)),
            SemType::Prod(a, b) => SemType::prod(self.apply_type(a), self.apply_type(b)),
            SemType::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
        }
    }

    /// Extend with `v ↦ t`. `t` must already be normalized under `self`
    /// and must not mention `v`.
    fn bind(&mut self, v: TyVar, t: SemType) {
        let single = TypeSubst {
            map: BTreeMap::from([(v.clone(), t.clone())]),
        };
        for range in self.map.values_mut() {
            *range = single.apply_type(range);
        }
        self.map.insert(v, t);
    }

    /// Compose: the result applies `self` first, then `other`.
    pub fn then(&self, other: &TypeSubst) -> TypeSubst {
        let mut map: BTreeMap<TyVar, SemType> =
            self.map.iter().map(|(k, v)| (k.clone(), other.apply_type(v))).collect();
        for (k, v) in &other.map {
            map.entry(k.clone()).or_insert_with(|| v.clone());
        }
        TypeSubst { map }
    }
}

impl FromIterator<(TyVar, SemType)> for TypeSubst {
    fn from_iter<I: IntoIterator<Item = (TyVar, SemType)>>(iter: I) -> Self {
        let mut s = TypeSubst::new();
        for (k, v) in iter {
            let v = s.apply_type(&v);
            s.bind(k, v);
        }
        s
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UnifyError {
    #[error("cannot unify {0} with {1}")]
    Clash(SemType, SemType),
    #[error("occurs check: {0} occurs in {1}")]
    OccursCheck(TyVar, SemType),
}

/// Most general extension of `s` equating `a` and `b`.
pub fn unify_types(a: &SemType, b: &SemType, s: &TypeSubst) -> Result<TypeSubst, UnifyError> {
    let mut out = s.clone();
    unify_into(a, b, &mut out)?;
    Ok(out)
}

pub(crate) fn unify_into(a: &SemType, b: &SemType, s: &mut TypeSubst) -> Result<(), UnifyError> {
    let a = s.apply_type(a);
    let b = s.apply_type(b);
    match (&a, &b) {
        (SemType::Var(x), SemType::Var(y)) if x == y => Ok(()),
        (SemType::Var(x), SemType::Var(y)) => {
            // bind the metavariable when there is a choice
            if y.is_meta() && !x.is_meta() {
                s.bind(y.clone(), a.clone());
            } else {
                s.bind(x.clone(), b.clone());
            }
            Ok(())
        }
        (SemType::Var(x), other) | (other, SemType::Var(x)) => {
            if other.occurs(x) {
                return Err(UnifyError::OccursCheck(x.clone(), other.clone()));
            }
            s.bind(x.clone(), other.clone());
            Ok(())
        }
        (SemType::Truth, SemType::Truth) => Ok(()),
        (SemType::Base(x), SemType::Base(y)) if x == y => Ok(()),
        (SemType::Arrow(a1, b1), SemType::Arrow(a2, b2)) | (SemType::Prod(a1, b1), SemType::Prod(a2, b2)) => {
            unify_into(a1, a2, s)?;
            unify_into(b1, b2, s)
        }
        _ => Err(UnifyError::Clash(a.clone(), b.clone())),
    }
}

/// Supplies globally distinct type variable ids for one chart (or one
/// certificate check). Fresh ids contain `#`, which the surface syntax
/// never produces, so they cannot collide with declared names.
#[derive(Debug, Default)]
pub struct VarSupply {
    next: u64,
}

impl VarSupply {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, hint: &str) -> TyVar {
        let base = hint.split('#').next().unwrap_or(hint);
        let id = self.next;
        self.next += 1;
        TyVar(format!("{base}#{id}"))
    }

    pub fn fresh_meta(&mut self) -> TyVar {
        let id = self.next;
        self.next += 1;
        TyVar(format!("?{id}"))
    }
}
