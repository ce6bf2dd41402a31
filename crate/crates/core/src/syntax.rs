//! Surface syntax for types, categories and terms.
//!
//! Types: `Prop`, base names, type variables, `A -> B` (right associative),
//! `A * B` (left associative, binds tighter than `->`).
//!
//! Categories: `S`, `NP<T>`, `ADJ<T>`, `CN<T>`, `PP[prep]<T>`, macros such as
//! `Quant<T>`, `X/Y` (left associative) and `Y\X` (right associative). The
//! two slashes cannot be mixed without parentheses.
//!
//! Terms, loosest first: binders `\x y:T. b`, `forall x:T. b`,
//! `exists x. b` (body extends right); `->` (right); `\/` (right); `/\`
//! (right); `~`; `=`; application; atoms `x`, `3`, `true`, `false`,
//! `(a, b)`, `fst p`, `snd p`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::grammar::Cat;
use crate::term::{fresh_name, Term};
use crate::types::{SemType, TyVar, TypeSubst};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("column {col}: {msg}")]
pub struct SyntaxError {
    pub col: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError {
        col: pos + 1,
        msg: msg.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    Lt,
    Gt,
    LBrack,
    RBrack,
    Slash,
    Backslash,
    Arrow,
    Star,
    Comma,
    Dot,
    Colon,
    OrOp,
    AndOp,
    Tilde,
    Equals,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Num(s) => return write!(f, "`{s}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::Slash => "`/`",
            Tok::Backslash => "`\\`",
            Tok::Arrow => "`->`",
            Tok::Star => "`*`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Colon => "`:`",
            Tok::OrOp => "`\\/`",
            Tok::AndOp => "`/\\`",
            Tok::Tilde => "`~`",
            Tok::Equals => "`=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Cat,
    Term,
}

fn lex(src: &str, mode: Mode) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let next = bytes.get(i + 1).copied();
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'<' => Tok::Lt,
            b'>' => Tok::Gt,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'*' => Tok::Star,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b':' => Tok::Colon,
            b'~' => Tok::Tilde,
            b'=' => Tok::Equals,
            b'-' if next == Some(b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'/' if mode == Mode::Term && next == Some(b'\\') => {
                i += 1;
                Tok::AndOp
            }
            b'\\' if mode == Mode::Term && next == Some(b'/') => {
                i += 1;
                Tok::OrOp
            }
            b'/' if mode == Mode::Cat => Tok::Slash,
            b'\\' => Tok::Backslash,
            c if c.is_ascii_digit() => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(src[start..=i].to_string())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_' || bytes[i + 1] == b'\'')
                {
                    i += 1;
                }
                Tok::Ident(src[start..=i].to_string())
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return err(start, format!("unexpected character `{ch}`"));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

/// Named category abbreviations with type parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Macro {
    pub params: Vec<String>,
    pub body: Cat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Macros(pub BTreeMap<String, Macro>);

impl Default for Macros {
    fn default() -> Self {
        let a = SemType::var("A");
        let quant = Cat::rslash(Cat::rslash(Cat::S, Cat::lslash(Cat::np(a.clone()), Cat::S)), Cat::cn(a));
        let mut m = BTreeMap::new();
        m.insert(
            "Quant".to_string(),
            Macro {
                params: vec!["A".to_string()],
                body: quant,
            },
        );
        Macros(m)
    }
}

impl Macros {
    pub fn define(&mut self, name: &str, params: Vec<String>, body_src: &str) -> Result<(), SyntaxError> {
        const RESERVED: [&str; 5] = ["S", "NP", "ADJ", "CN", "PP"];
        if RESERVED.contains(&name) {
            return err(0, format!("`{name}` is a built-in category"));
        }
        let vars: BTreeSet<String> = params.iter().cloned().collect();
        let body = parse_cat(body_src, &vars, self)?;
        self.0.insert(name.to_string(), Macro { params, body });
        Ok(())
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a BTreeSet<String>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, mode: Mode, vars: &'a BTreeSet<String>) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: lex(src, mode)?,
            pos: 0,
            vars,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            err(self.offset(), format!("expected {t}, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            other => {
                self.pos -= 1;
                err(self.offset(), format!("expected identifier, found {other}"))
            }
        }
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            err(self.offset(), format!("unexpected {}", self.peek()))
        }
    }

    fn ty(&mut self) -> Result<SemType, SyntaxError> {
        let lhs = self.ty_prod()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(SemType::arrow(lhs, self.ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn ty_prod(&mut self) -> Result<SemType, SyntaxError> {
        let mut lhs = self.ty_atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = SemType::prod(lhs, self.ty_atom()?);
        }
        Ok(lhs)
    }

    fn ty_atom(&mut self) -> Result<SemType, SyntaxError> {
        let at = self.offset();
        match self.bump() {
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if s == "Prop" => Ok(SemType::Truth),
            Tok::Ident(s) if self.vars.contains(&s) => Ok(SemType::var(s)),
            Tok::Ident(s) => Ok(SemType::base(s)),
            other => err(at, format!("expected a type, found {other}")),
        }
    }

    fn cat(&mut self, macros: &Macros) -> Result<Cat, SyntaxError> {
        let first = self.cat_atom(macros)?;
        match self.peek() {
            Tok::Slash => {
                let mut lhs = first;
                while *self.peek() == Tok::Slash {
                    self.bump();
                    lhs = Cat::rslash(lhs, self.cat_atom(macros)?);
                }
                if *self.peek() == Tok::Backslash {
                    return err(self.offset(), "mixed `/` and `\\` need parentheses");
                }
                Ok(lhs)
            }
            Tok::Backslash => {
                let mut parts = vec![first];
                while *self.peek() == Tok::Backslash {
                    self.bump();
                    parts.push(self.cat_atom(macros)?);
                }
                if *self.peek() == Tok::Slash {
                    return err(self.offset(), "mixed `/` and `\\` need parentheses");
                }
                let mut acc = parts.pop().expect("at least two parts");
                while let Some(arg) = parts.pop() {
                    acc = Cat::lslash(arg, acc);
                }
                Ok(acc)
            }
            _ => Ok(first),
        }
    }

    fn angle_type(&mut self) -> Result<SemType, SyntaxError> {
        self.expect(Tok::Lt)?;
        let t = self.ty()?;
        self.expect(Tok::Gt)?;
        Ok(t)
    }

    fn cat_atom(&mut self, macros: &Macros) -> Result<Cat, SyntaxError> {
        let at = self.offset();
        match self.bump() {
            Tok::LParen => {
                let c = self.cat(macros)?;
                self.expect(Tok::RParen)?;
                Ok(c)
            }
            Tok::Ident(s) => match s.as_str() {
                "S" => Ok(Cat::S),
                "NP" => Ok(Cat::NP(self.angle_type()?)),
                "ADJ" => Ok(Cat::ADJ(self.angle_type()?)),
                "CN" => Ok(Cat::CN(self.angle_type()?)),
                "PP" => {
                    self.expect(Tok::LBrack)?;
                    let prep = self.ident()?;
                    self.expect(Tok::RBrack)?;
                    Ok(Cat::PP(prep, self.angle_type()?))
                }
                name => {
                    let Some(m) = macros.0.get(name) else {
                        return err(at, format!("unknown category `{name}`"));
                    };
                    let mut args = Vec::new();
                    if *self.peek() == Tok::Lt {
                        self.bump();
                        loop {
                            args.push(self.ty()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        self.expect(Tok::Gt)?;
                    }
                    if args.len() != m.params.len() {
                        return err(
                            at,
                            format!(
                                "`{name}` takes {} type argument(s), given {}",
                                m.params.len(),
                                args.len()
                            ),
                        );
                    }
                    let s: TypeSubst = m.params.iter().map(|p| TyVar::new(p.clone())).zip(args).collect();
                    Ok(m.body.apply_subst(&s))
                }
            },
            other => err(at, format!("expected a category, found {other}")),
        }
    }
}

/// Parses a type; identifiers in `vars` are type variables.
pub fn parse_type(src: &str, vars: &BTreeSet<String>) -> Result<SemType, SyntaxError> {
    let mut p = Parser::new(src, Mode::Cat, vars)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_cat(src: &str, vars: &BTreeSet<String>, macros: &Macros) -> Result<Cat, SyntaxError> {
    let mut p = Parser::new(src, Mode::Cat, vars)?;
    let c = p.cat(macros)?;
    p.finish()?;
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Binder {
    Lam,
    ForAll,
    Exists,
}

/// A parsed but not yet type-checked term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surface {
    Ident(String, usize),
    Lit(bool),
    Bind(Binder, String, Option<SemType>, Box<Surface>),
    App(Box<Surface>, Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Implies(Box<Surface>, Box<Surface>),
    Not(Box<Surface>),
    Eq(Box<Surface>, Box<Surface>, usize),
    Pair(Box<Surface>, Box<Surface>),
    Fst(Box<Surface>, usize),
    Snd(Box<Surface>, usize),
}

const KEYWORDS: [&str; 6] = ["forall", "exists", "true", "false", "fst", "snd"];

impl Parser<'_> {
    fn term(&mut self) -> Result<Surface, SyntaxError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Surface::Implies(Box::new(lhs), Box::new(self.term()?)))
        } else {
            Ok(lhs)
        }
    }

    fn disj(&mut self) -> Result<Surface, SyntaxError> {
        let lhs = self.conj()?;
        if *self.peek() == Tok::OrOp {
            self.bump();
            Ok(Surface::Or(Box::new(lhs), Box::new(self.disj()?)))
        } else {
            Ok(lhs)
        }
    }

    fn conj(&mut self) -> Result<Surface, SyntaxError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::AndOp {
            self.bump();
            Ok(Surface::And(Box::new(lhs), Box::new(self.conj()?)))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Surface, SyntaxError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Surface::Not(Box::new(self.unary()?)))
            }
            Tok::Backslash => {
                self.bump();
                self.binder(Binder::Lam)
            }
            Tok::Ident(s) if s == "forall" => {
                self.bump();
                self.binder(Binder::ForAll)
            }
            Tok::Ident(s) if s == "exists" => {
                self.bump();
                self.binder(Binder::Exists)
            }
            _ => self.equation(),
        }
    }

    fn binder(&mut self, kind: Binder) -> Result<Surface, SyntaxError> {
        let mut names = Vec::new();
        while let Tok::Ident(s) = self.peek().clone() {
            if KEYWORDS.contains(&s.as_str()) {
                return err(self.offset(), format!("`{s}` cannot be bound"));
            }
            self.bump();
            names.push(s);
        }
        if names.is_empty() {
            return err(self.offset(), format!("expected a binder name, found {}", self.peek()));
        }
        let ann = if *self.peek() == Tok::Colon {
            self.bump();
            Some(self.ty()?)
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        let mut body = self.term()?;
        for name in names.into_iter().rev() {
            body = Surface::Bind(kind, name, ann.clone(), Box::new(body));
        }
        Ok(body)
    }

    fn equation(&mut self) -> Result<Surface, SyntaxError> {
        let lhs = self.application()?;
        if *self.peek() == Tok::Equals {
            let at = self.offset();
            self.bump();
            let rhs = self.application()?;
            Ok(Surface::Eq(Box::new(lhs), Box::new(rhs), at))
        } else {
            Ok(lhs)
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::Num(_) => true,
            Tok::Ident(s) => !matches!(s.as_str(), "forall" | "exists" | "fst" | "snd"),
            _ => false,
        }
    }

    fn application(&mut self) -> Result<Surface, SyntaxError> {
        let at = self.offset();
        let mut head = match self.peek().clone() {
            Tok::Ident(s) if s == "fst" || s == "snd" => {
                self.bump();
                let arg = Box::new(self.atom()?);
                if s == "fst" {
                    Surface::Fst(arg, at)
                } else {
                    Surface::Snd(arg, at)
                }
            }
            _ => self.atom()?,
        };
        while self.starts_atom() {
            let arg = self.atom()?;
            head = Surface::App(Box::new(head), Box::new(arg));
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Surface, SyntaxError> {
        let at = self.offset();
        match self.bump() {
            Tok::LParen => {
                let first = self.term()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let second = self.term()?;
                    self.expect(Tok::RParen)?;
                    Ok(Surface::Pair(Box::new(first), Box::new(second)))
                } else {
                    self.expect(Tok::RParen)?;
                    Ok(first)
                }
            }
            Tok::Num(n) => Ok(Surface::Ident(n, at)),
            Tok::Ident(s) => match s.as_str() {
                "true" => Ok(Surface::Lit(true)),
                "false" => Ok(Surface::Lit(false)),
                kw if KEYWORDS.contains(&kw) => err(at, format!("unexpected keyword `{kw}`")),
                _ => Ok(Surface::Ident(s, at)),
            },
            other => err(at, format!("expected a term, found {other}")),
        }
    }
}

/// Parses a term; identifiers in `vars` may appear as type variables in
/// binder annotations.
pub fn parse_surface(src: &str, vars: &BTreeSet<String>) -> Result<Surface, SyntaxError> {
    let mut p = Parser::new(src, Mode::Term, vars)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Renames binders that would print identically to a constant they enclose.
pub fn disambiguate_binders(t: &Term) -> Term {
    let mut consts = BTreeMap::new();
    t.constants(&mut consts);
    if consts.is_empty() {
        return t.clone();
    }
    let mut avoid: BTreeSet<String> = consts.keys().cloned().collect();
    t.all_names(&mut avoid);
    rename_clashing(t, &consts.keys().cloned().collect(), &mut avoid)
}

fn rename_clashing(t: &Term, consts: &BTreeSet<String>, avoid: &mut BTreeSet<String>) -> Term {
    let go = |s: &Term, avoid: &mut BTreeSet<String>| rename_clashing(s, consts, avoid);
    match t {
        Term::Var(..) | Term::Const(..) | Term::Lit(_) => t.clone(),
        Term::Lam(x, ty, b) | Term::ForAll(x, ty, b) | Term::Exists(x, ty, b) => {
            let (name, body) = if consts.contains(x) {
                let fresh = fresh_name(x, avoid);
                avoid.insert(fresh.clone());
                let renamed = crate::term::substitute(b, x, &Term::Var(fresh.clone(), ty.clone()));
                (fresh, go(&renamed, avoid))
            } else {
                (x.clone(), go(b, avoid))
            };
            let body = Box::new(body);
            match t {
                Term::Lam(..) => Term::Lam(name, ty.clone(), body),
                Term::ForAll(..) => Term::ForAll(name, ty.clone(), body),
                _ => Term::Exists(name, ty.clone(), body),
            }
        }
        Term::App(a, b) => Term::app(go(a, avoid), go(b, avoid)),
        Term::And(a, b) => Term::and(go(a, avoid), go(b, avoid)),
        Term::Or(a, b) => Term::or(go(a, avoid), go(b, avoid)),
        Term::Implies(a, b) => Term::implies(go(a, avoid), go(b, avoid)),
        Term::Eq(ty, a, b) => Term::eq(ty.clone(), go(a, avoid), go(b, avoid)),
        Term::Pair(a, b) => Term::pair(go(a, avoid), go(b, avoid)),
        Term::Not(a) => Term::not(go(a, avoid)),
        Term::Fst(a) => Term::fst(go(a, avoid)),
        Term::Snd(a) => Term::snd(go(a, avoid)),
    }
}

// Precedence levels: a term printed at level `n` may only be a construct
// whose own level is >= n without parentheses.
pub(crate) const LVL_TOP: u8 = 0;
pub(crate) const LVL_IMP: u8 = 1;
pub(crate) const LVL_OR: u8 = 2;
pub(crate) const LVL_AND: u8 = 3;
pub(crate) const LVL_NOT: u8 = 4;
pub(crate) const LVL_EQ: u8 = 5;
pub(crate) const LVL_APP: u8 = 6;
pub(crate) const LVL_ATOM: u8 = 7;

/// Prints `t` in the surface syntax with annotated binders; the output
/// parses back to an alpha-equivalent term.
pub fn print_term(t: &Term) -> String {
    let t = disambiguate_binders(t);
    let mut out = String::new();
    write_term(&t, LVL_TOP, &mut out);
    out
}

fn write_term(t: &Term, lvl: u8, out: &mut String) {
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
    // Binders are parenthesized whenever they are an operand.
    let paren = own < lvl || (own == LVL_TOP && lvl > LVL_TOP);
    if paren {
        out.push('(');
    }
    match t {
        Term::Var(x, _) | Term::Const(x, _) => out.push_str(x),
        Term::Lit(b) => out.push_str(if *b { "true" } else { "false" }),
        Term::Lam(..) | Term::ForAll(..) | Term::Exists(..) => {
            let (kw, names, ty, body) = collect_binders(t);
            out.push_str(kw);
            if kw != "\\" {
                out.push(' ');
            }
            out.push_str(&names.join(" "));
            out.push(':');
            out.push_str(&ty.to_string());
            out.push_str(". ");
            write_term(body, LVL_TOP, out);
        }
        Term::App(f, a) => {
            write_term(f, LVL_APP, out);
            out.push(' ');
            write_term(a, LVL_ATOM, out);
        }
        Term::Fst(p) | Term::Snd(p) => {
            out.push_str(if matches!(t, Term::Fst(_)) { "fst " } else { "snd " });
            write_term(p, LVL_ATOM, out);
        }
        Term::Implies(a, b) => infix(a, " -> ", b, LVL_OR, LVL_IMP, out),
        Term::Or(a, b) => infix(a, " \\/ ", b, LVL_AND, LVL_OR, out),
        Term::And(a, b) => infix(a, " /\\ ", b, LVL_NOT, LVL_AND, out),
        Term::Eq(_, a, b) => infix(a, " = ", b, LVL_APP, LVL_APP, out),
        Term::Not(a) => {
            out.push('~');
            write_term(a, LVL_NOT, out);
        }
        Term::Pair(a, b) => {
            out.push('(');
            write_term(a, LVL_TOP, out);
            out.push_str(", ");
            write_term(b, LVL_TOP, out);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

fn infix(a: &Term, op: &str, b: &Term, la: u8, lb: u8, out: &mut String) {
    write_term(a, la, out);
    out.push_str(op);
    write_term(b, lb, out);
}

/// Collects a run of same-kind, same-type binders for coalesced printing.
fn collect_binders(t: &Term) -> (&'static str, Vec<String>, SemType, &Term) {
    let (kw, first_ty) = match t {
        Term::Lam(_, ty, _) => ("\\", ty),
        Term::ForAll(_, ty, _) => ("forall", ty),
        Term::Exists(_, ty, _) => ("exists", ty),
        _ => unreachable!("not a binder"),
    };
    let mut names = Vec::new();
    let mut cur = t;
    loop {
        let next = match (kw, cur) {
            ("\\", Term::Lam(x, ty, b)) | ("forall", Term::ForAll(x, ty, b)) | ("exists", Term::Exists(x, ty, b))
                if ty == first_ty =>
            {
                names.push(x.clone());
                b.as_ref()
            }
            _ => break,
        };
        cur = next;
    }
    (kw, names, first_ty.clone(), cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_vars() -> BTreeSet<String> {
        BTreeSet::new()
    }

    fn vars(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn types_parse_with_precedence() {
        let t = parse_type("Nat * List -> Prop", &no_vars()).unwrap();
        assert_eq!(
            t,
            SemType::arrow(
                SemType::prod(SemType::base("Nat"), SemType::base("List")),
                SemType::Truth
            )
        );
        let t = parse_type("A -> B -> A", &vars(&["A", "B"])).unwrap();
        assert_eq!(t.to_string(), "A -> B -> A");
        assert!(!t.is_ground());
    }

    #[test]
    fn copula_category() {
        let c = parse_cat("(NP<T>\\S)/ADJ<T>", &vars(&["T"]), &Macros::default()).unwrap();
        let t = SemType::var("T");
        assert_eq!(c, Cat::rslash(Cat::lslash(Cat::np(t.clone()), Cat::S), Cat::adj(t)));
        assert_eq!(c.to_string(), "(NP<T>\\S)/ADJ<T>");
    }

    #[test]
    fn slash_associativity() {
        let m = Macros::default();
        let c = parse_cat("S/NP<Nat>/NP<Nat>", &no_vars(), &m).unwrap();
        assert_eq!(c.to_string(), "(S/NP<Nat>)/NP<Nat>");
        let c = parse_cat("NP<Nat>\\NP<Nat>\\S", &no_vars(), &m).unwrap();
        assert_eq!(c.to_string(), "NP<Nat>\\(NP<Nat>\\S)");
        assert!(parse_cat("S/NP<Nat>\\S", &no_vars(), &m).is_err());
    }

    #[test]
    fn quant_macro_expands() {
        let c = parse_cat("Quant<Nat>", &no_vars(), &Macros::default()).unwrap();
        assert_eq!(c.to_string(), "(S/(NP<Nat>\\S))/CN<Nat>");
    }

    #[test]
    fn arrow_inside_angle_brackets() {
        let c = parse_cat("NP<Nat -> List>", &no_vars(), &Macros::default()).unwrap();
        assert_eq!(c, Cat::np(SemType::arrow(SemType::base("Nat"), SemType::base("List"))));
    }

    #[test]
    fn preposition_category() {
        let c = parse_cat("PP[of]<Nat>", &no_vars(), &Macros::default()).unwrap();
        assert_eq!(c, Cat::pp("of", SemType::base("Nat")));
    }

    #[test]
    fn binder_groups_desugar() {
        let s = parse_surface("forall a b : M. f a b", &no_vars()).unwrap();
        match s {
            Surface::Bind(Binder::ForAll, a, Some(_), body) => {
                assert_eq!(a, "a");
                assert!(matches!(*body, Surface::Bind(Binder::ForAll, ref b, Some(_), _) if b == "b"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn connective_precedence() {
        let s = parse_surface("a /\\ b -> c \\/ ~d = e", &no_vars()).unwrap();
        match s {
            Surface::Implies(l, r) => {
                assert!(matches!(*l, Surface::And(..)));
                match *r {
                    Surface::Or(_, n) => assert!(matches!(*n, Surface::Not(ref e) if matches!(**e, Surface::Eq(..)))),
                    other => panic!("{other:?}"),
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn projections_and_pairs() {
        let s = parse_surface("(fst p a, snd p a)", &no_vars()).unwrap();
        match s {
            Surface::Pair(l, _) => match *l {
                Surface::App(f, _) => assert!(matches!(*f, Surface::Fst(..))),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let e = parse_surface("\\x. (f x", &no_vars()).unwrap_err();
        assert_eq!(e.col, 9);
        assert!(parse_surface("forall . x", &no_vars()).is_err());
        assert!(parse_cat("NP<Nat", &no_vars(), &Macros::default()).is_err());
        assert!(parse_cat("Foo<Nat>", &no_vars(), &Macros::default()).is_err());
    }

    #[test]
    fn printer_coalesces_and_parenthesizes() {
        let m = SemType::base("M");
        let f = Term::constant("f", SemType::arrow(m.clone(), SemType::arrow(m.clone(), m.clone())));
        let a = Term::var("a", m.clone());
        let b = Term::var("b", m.clone());
        let t = Term::forall(
            "a",
            m.clone(),
            Term::forall(
                "b",
                m.clone(),
                Term::eq(
                    m.clone(),
                    Term::apps(f.clone(), [a.clone(), b.clone()]),
                    Term::apps(f, [b, a]),
                ),
            ),
        );
        assert_eq!(print_term(&t), "forall a b:M. f a b = f b a");

        let p = Term::var("p", SemType::Truth);
        let q = Term::var("q", SemType::Truth);
        let left_nested = Term::and(Term::and(p.clone(), q.clone()), p.clone());
        assert_eq!(print_term(&left_nested), "(p /\\ q) /\\ p");
        let guarded = Term::implies(q.clone(), Term::exists("x", SemType::base("M"), p.clone()));
        assert_eq!(print_term(&guarded), "q -> (exists x:M. p)");
        assert_eq!(print_term(&Term::not(Term::not(p))), "~~p");
    }

    #[test]
    fn printer_renames_binder_shadowing_constant() {
        let l = SemType::base("List");
        let sort = Term::constant("sort", SemType::arrow(l.clone(), l.clone()));
        let t = Term::lam("sort", l.clone(), Term::app(sort, Term::var("sort", l)));
        assert_eq!(print_term(&t), "\\sort1:List. sort sort1");
    }
}
