//! Formulas of the first-order language with `=`, `∈` and the two type
//! predicates, with a parser, a printer and the axiom schedule.
//!
//! Grammar (ASCII keywords, unicode aliases accepted):
//!
//! ```text
//! formula := quant | impl
//! quant   := ("forall" | "exists") IDENT ["in" IDENT] "." formula
//! impl    := disj ["->" impl]
//! disj    := conj {"or" conj}
//! conj    := neg {"and" neg}
//! neg     := "not" neg | atom
//! atom    := "(" formula ")" | IDENT ":" ("atom" | "set") | IDENT ("=" | "in") IDENT
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub type Var = String;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    IsAtom(Var),
    IsSet(Var),
    Eq(Var, Var),
    Mem(Var, Var),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    /// `∀x ∈ t. φ`
    BForall(Var, Var, Box<Formula>),
    /// `∃x ∈ t. φ`
    BExists(Var, Var, Box<Formula>),
}

use Formula::*;

fn b(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn is_atom(x: &str) -> Self {
        IsAtom(x.into())
    }
    pub fn is_set(x: &str) -> Self {
        IsSet(x.into())
    }
    pub fn eq(x: &str, y: &str) -> Self {
        Eq(x.into(), y.into())
    }
    pub fn mem(x: &str, y: &str) -> Self {
        Mem(x.into(), y.into())
    }
    pub fn and(self, other: Formula) -> Self {
        And(b(self), b(other))
    }
    pub fn or(self, other: Formula) -> Self {
        Or(b(self), b(other))
    }
    pub fn implies(self, other: Formula) -> Self {
        Implies(b(self), b(other))
    }
    pub fn iff(self, other: Formula) -> Self {
        self.clone().implies(other.clone()).and(other.implies(self))
    }
    pub fn not(self) -> Self {
        Not(b(self))
    }
    pub fn forall(x: &str, body: Formula) -> Self {
        Forall(x.into(), b(body))
    }
    pub fn exists(x: &str, body: Formula) -> Self {
        Exists(x.into(), b(body))
    }
    pub fn forall_in(x: &str, t: &str, body: Formula) -> Self {
        BForall(x.into(), t.into(), b(body))
    }
    pub fn exists_in(x: &str, t: &str, body: Formula) -> Self {
        BExists(x.into(), t.into(), b(body))
    }
    /// `∀x:set φ`, i.e. `∀x (x:set → φ)`.
    pub fn forall_set(x: &str, body: Formula) -> Self {
        Self::forall(x, Self::is_set(x).implies(body))
    }
    /// `∃x:set φ`, i.e. `∃x (x:set ∧ φ)`.
    pub fn exists_set(x: &str, body: Formula) -> Self {
        Self::exists(x, Self::is_set(x).and(body))
    }
    /// `∀x:atom φ`.
    pub fn forall_atom(x: &str, body: Formula) -> Self {
        Self::forall(x, Self::is_atom(x).implies(body))
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn all(items: Vec<Formula>) -> Self {
        items
            .into_iter()
            .reduce(|a, c| a.and(c))
            .expect("nonempty conjunction")
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut note = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            IsAtom(x) | IsSet(x) => note(x, bound),
            Eq(x, y) | Mem(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            And(p, q) | Or(p, q) | Implies(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
            Not(p) => p.collect_free(bound, out),
            Forall(x, p) | Exists(x, p) => {
                bound.push(x.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
            BForall(x, t, p) | BExists(x, t, p) => {
                note(t, bound);
                bound.push(x.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            IsAtom(x) | IsSet(x) | Forall(x, _) | Exists(x, _) => {
                out.insert(x.clone());
            }
            Eq(x, y) | Mem(x, y) | BForall(x, y, _) | BExists(x, y, _) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            And(p, q) | Or(p, q) | Implies(p, q) => {
                p.visit(f);
                q.visit(f);
            }
            Not(p) | Forall(_, p) | Exists(_, p) | BForall(_, _, p) | BExists(_, _, p) => p.visit(f),
            _ => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Whether any quantifier is unbounded.
    pub fn has_unbounded_quantifier(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Forall(..) | Exists(..)));
        found
    }

    /// Only `=`, `∈`, connectives and bounded quantifiers.
    pub fn is_delta0(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| ok &= !matches!(f, Forall(..) | Exists(..) | IsAtom(_) | IsSet(_)));
        ok
    }

    pub fn depth(&self) -> usize {
        match self {
            IsAtom(_) | IsSet(_) | Eq(..) | Mem(..) => 0,
            And(p, q) | Or(p, q) | Implies(p, q) => 1 + p.depth().max(q.depth()),
            Not(p) | Forall(_, p) | Exists(_, p) | BForall(_, _, p) | BExists(_, _, p) => 1 + p.depth(),
        }
    }

    /// Unfolds bounded quantifiers into unbounded ones.
    pub fn desugar(&self) -> Formula {
        match self {
            IsAtom(_) | IsSet(_) | Eq(..) | Mem(..) => self.clone(),
            And(p, q) => p.desugar().and(q.desugar()),
            Or(p, q) => p.desugar().or(q.desugar()),
            Implies(p, q) => p.desugar().implies(q.desugar()),
            Not(p) => p.desugar().not(),
            Forall(x, p) => Forall(x.clone(), b(p.desugar())),
            Exists(x, p) => Exists(x.clone(), b(p.desugar())),
            BForall(x, t, p) => {
                let (x, body) = Self::unshadow(x, t, p);
                Forall(x.clone(), b(Mem(x, t.clone()).implies(body)))
            }
            BExists(x, t, p) => {
                let (x, body) = Self::unshadow(x, t, p);
                Exists(x.clone(), b(Mem(x, t.clone()).and(body)))
            }
        }
    }

    // In `forall x in x . p` the bound refers to an outer x, so the
    // quantified variable has to be renamed before the guard is built.
    fn unshadow(x: &Var, t: &Var, p: &Formula) -> (Var, Formula) {
        if x != t {
            return (x.clone(), p.desugar());
        }
        let mut avoid = p.all_vars();
        avoid.insert(x.clone());
        let fresh = fresh_var(x, &avoid);
        (fresh.clone(), p.rename_free(x, &fresh).desugar())
    }

    /// Universal closure over the free variables, in sorted order.
    pub fn closure(&self) -> Formula {
        self.free_vars()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, v| Forall(v, b(acc)))
    }

    /// Capture-avoiding replacement of the free variable `from` by `to`.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let r = |v: &Var| if v == from { to.to_string() } else { v.clone() };
        match self {
            IsAtom(x) => IsAtom(r(x)),
            IsSet(x) => IsSet(r(x)),
            Eq(x, y) => Eq(r(x), r(y)),
            Mem(x, y) => Mem(r(x), r(y)),
            And(p, q) => p.rename_free(from, to).and(q.rename_free(from, to)),
            Or(p, q) => p.rename_free(from, to).or(q.rename_free(from, to)),
            Implies(p, q) => p.rename_free(from, to).implies(q.rename_free(from, to)),
            Not(p) => p.rename_free(from, to).not(),
            Forall(x, p) | Exists(x, p) => {
                let (x, p) = self.rebind(x, p, from, to);
                if matches!(self, Forall(..)) {
                    Forall(x, b(p))
                } else {
                    Exists(x, b(p))
                }
            }
            BForall(x, t, p) | BExists(x, t, p) => {
                let t = r(t);
                let (x, p) = self.rebind(x, p, from, to);
                if matches!(self, BForall(..)) {
                    BForall(x, t, b(p))
                } else {
                    BExists(x, t, b(p))
                }
            }
        }
    }

    fn rebind(&self, x: &Var, body: &Formula, from: &str, to: &str) -> (Var, Formula) {
        if x == from {
            return (x.clone(), body.clone());
        }
        if x == to && body.free_vars().contains(from) {
            let mut avoid = body.all_vars();
            avoid.insert(to.to_string());
            avoid.insert(from.to_string());
            let fresh = fresh_var(x, &avoid);
            let body = body.rename_free(x, &fresh);
            return (fresh, body.rename_free(from, to));
        }
        (x.clone(), body.rename_free(from, to))
    }
}

/// A variable name derived from `base` that is not in `avoid`.
pub fn fresh_var(base: &str, avoid: &BTreeSet<Var>) -> Var {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|v| !avoid.contains(v))
        .expect("unbounded supply of names")
}

fn is_tight(f: &Formula) -> bool {
    matches!(f, IsAtom(_) | IsSet(_) | Eq(..) | Mem(..) | Not(_))
}

struct Operand<'a>(&'a Formula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if is_tight(self.0) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsAtom(x) => write!(f, "{x} : atom"),
            IsSet(x) => write!(f, "{x} : set"),
            Eq(x, y) => write!(f, "{x} = {y}"),
            Mem(x, y) => write!(f, "{x} in {y}"),
            And(p, q) => write!(f, "{} and {}", Operand(p), Operand(q)),
            Or(p, q) => write!(f, "{} or {}", Operand(p), Operand(q)),
            Implies(p, q) => write!(f, "{} -> {}", Operand(p), Operand(q)),
            Not(p) => write!(f, "not {}", Operand(p)),
            Forall(x, p) => write!(f, "forall {x} . {p}"),
            Exists(x, p) => write!(f, "exists {x} . {p}"),
            BForall(x, t, p) => write!(f, "forall {x} in {t} . {p}"),
            BExists(x, t, p) => write!(f, "exists {x} in {t} . {p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    In,
    And,
    Or,
    Not,
    Arrow,
    Dot,
    Colon,
    Equals,
    LParen,
    RParen,
    AtomKw,
    SetKw,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let single = match c {
            '∀' => Some(Tok::Forall),
            '∃' => Some(Tok::Exists),
            '∈' => Some(Tok::In),
            '∧' => Some(Tok::And),
            '∨' => Some(Tok::Or),
            '¬' => Some(Tok::Not),
            '→' => Some(Tok::Arrow),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Equals),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            it.next();
            out.push((pos, t));
            continue;
        }
        if c == '-' {
            it.next();
            match it.next() {
                Some((_, '>')) => out.push((pos, Tok::Arrow)),
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected '->'".into(),
                    })
                }
            }
            continue;
        }
        if c.is_alphanumeric() || c == '_' {
            let mut word = String::new();
            while let Some(&(_, d)) = it.peek() {
                if d.is_alphanumeric() || d == '_' || d == '\'' {
                    word.push(d);
                    it.next();
                } else {
                    break;
                }
            }
            let t = match word.as_str() {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "in" => Tok::In,
                "and" => Tok::And,
                "or" => Tok::Or,
                "not" => Tok::Not,
                "atom" => Tok::AtomKw,
                "set" => Tok::SetKw,
                _ => Tok::Ident(word),
            };
            out.push((pos, t));
            continue;
        }
        return Err(Error::Syntax {
            pos,
            msg: format!("unexpected character '{c}'"),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => self.err("expected a variable"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.i += 1;
                let x = self.ident()?;
                let bound = if self.eat(&Tok::In) {
                    Some(self.ident()?)
                } else {
                    None
                };
                self.eat(&Tok::Dot);
                let body = self.formula()?;
                Ok(match (universal, bound) {
                    (true, None) => Forall(x, b(body)),
                    (false, None) => Exists(x, b(body)),
                    (true, Some(t)) => BForall(x, t, b(body)),
                    (false, Some(t)) => BExists(x, t, b(body)),
                })
            }
            _ => self.implication(),
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            acc = acc.or(self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.negation()?;
        while self.eat(&Tok::And) {
            acc = acc.and(self.negation()?);
        }
        Ok(acc)
    }

    fn negation(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Not) {
            Ok(self.negation()?.not())
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(f);
        }
        if matches!(self.peek(), Some(Tok::Forall) | Some(Tok::Exists)) {
            return self.err("a quantifier in operand position needs parentheses");
        }
        let x = self.ident()?;
        match self.peek() {
            Some(Tok::Colon) => {
                self.i += 1;
                if self.eat(&Tok::AtomKw) {
                    Ok(IsAtom(x))
                } else if self.eat(&Tok::SetKw) {
                    Ok(IsSet(x))
                } else {
                    self.err("expected 'atom' or 'set'")
                }
            }
            Some(Tok::Equals) => {
                self.i += 1;
                Ok(Eq(x, self.ident()?))
            }
            Some(Tok::In) => {
                self.i += 1;
                Ok(Mem(x, self.ident()?))
            }
            _ => self.err("expected ':', '=' or 'in'"),
        }
    }
}

/// Parses a formula; free variables are allowed.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        i: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.i != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// Parses a formula whose free variables must all be among `scope`.
pub fn parse_scoped(text: &str, scope: &[&str]) -> Result<Formula> {
    let f = parse(text)?;
    if let Some(v) = f.free_vars().into_iter().find(|v| !scope.contains(&v.as_str())) {
        return Err(Error::Unbound(v));
    }
    Ok(f)
}

/// The axiom schemas that take a parameter formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schema {
    /// parameter `φ(x)`
    Separation,
    /// parameter `φ(x, y)`
    Collection,
    /// parameter `φ(x)`
    EpsInduction,
}

impl Schema {
    pub fn name(self) -> &'static str {
        match self {
            Schema::Separation => "Separation",
            Schema::Collection => "Collection",
            Schema::EpsInduction => "EpsInduction",
        }
    }

    fn slots(self) -> &'static [&'static str] {
        match self {
            Schema::Separation | Schema::EpsInduction => &["x"],
            Schema::Collection => &["x", "y"],
        }
    }
}

/// Instantiates a schema with `param`, whose free variables must be among
/// the schema's slots. Other variables are chosen fresh for `param`.
pub fn axiom_instances(schema: Schema, param: &Formula) -> Result<Vec<Formula>> {
    if let Some(v) = param
        .free_vars()
        .into_iter()
        .find(|v| !schema.slots().contains(&v.as_str()))
    {
        return Err(Error::Unbound(v));
    }
    let mut avoid = param.all_vars();
    avoid.insert("x".into());
    avoid.insert("y".into());
    let u = fresh_var("u", &avoid);
    avoid.insert(u.clone());
    let v = fresh_var("v", &avoid);
    avoid.insert(v.clone());
    let inst = match schema {
        Schema::Separation => Formula::forall_set(
            &u,
            Formula::exists_set(
                &v,
                Formula::forall(
                    "x",
                    Formula::mem("x", &v).iff(Formula::mem("x", &u).and(param.clone())),
                ),
            ),
        ),
        Schema::Collection => Formula::forall_set(
            &u,
            Formula::forall_in("x", &u, Formula::exists("y", param.clone())).implies(
                Formula::exists_set(
                    &v,
                    Formula::forall_in("x", &u, Formula::exists_in("y", &v, param.clone())),
                ),
            ),
        ),
        Schema::EpsInduction => {
            let y = fresh_var("y", &avoid);
            let at_y = param.rename_free("x", &y);
            Formula::forall("x", Formula::forall_in(&y, "x", at_y).implies(param.clone()))
                .implies(Formula::forall("x", param.clone()))
        }
    };
    Ok(vec![inst])
}

/// A named axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub formula: Formula,
    /// Axioms checked only as bounded instances at a finite rank.
    pub instance_only: bool,
}

fn p(text: &str) -> Formula {
    parse(text).unwrap_or_else(|e| panic!("built-in formula {text:?}: {e}"))
}

fn axiom(name: &str, formula: Formula, instance_only: bool) -> Axiom {
    Axiom {
        name: name.into(),
        formula,
        instance_only,
    }
}

/// The axioms with fixed statements, followed by one instance of each schema.
pub fn axiom_schedule() -> Vec<Axiom> {
    let empty_in_u = p("exists e in u . (e : set and (forall t . not (t in e)))");
    let succ_in_u = p("exists s in u . (s : set and (forall t . ((t in s -> (t in x or t = x)) and ((t in x or t = x) -> t in s))))");
    let mut out = vec![
        axiom("SetExistence", p("exists x . x : set"), false),
        axiom(
            "Extensionality",
            p("forall x . (x : set -> (forall y . (y : set -> ((forall z . ((z in x -> z in y) and (z in y -> z in x))) -> x = y))))"),
            false,
        ),
        axiom(
            "Pairing",
            p("forall x . forall y . exists z . forall w . ((w in z -> (w = x or w = y)) and ((w = x or w = y) -> w in z))"),
            false,
        ),
        axiom(
            "Union",
            p("forall u . (u : set -> (exists v . (v : set and (forall x . ((x in v -> (exists y in u . x in y)) and ((exists y in u . x in y) -> x in v))))))"),
            false,
        ),
        axiom(
            "PowerSet",
            p("forall u . (u : set -> (exists v . (v : set and (forall x . ((x in v -> (forall y in x . y in u)) and ((forall y in x . y in u) -> x in v))))))"),
            true,
        ),
        axiom(
            "Infinity",
            Formula::exists(
                "u",
                empty_in_u.and(Formula::forall_in("x", "u", succ_in_u)),
            ),
            true,
        ),
        axiom("Atom1", p("forall x . (x : atom -> (forall y . not (y in x)))"), false),
        axiom("Atom2", p("forall x . (x : atom or x : set)"), false),
        axiom("Atom3", p("forall x . not (x : atom and x : set)"), false),
    ];
    let params = [
        (Schema::Separation, p("x : atom")),
        (Schema::Collection, p("x = y")),
        (Schema::EpsInduction, p("x : set")),
    ];
    for (schema, param) in params {
        for f in axiom_instances(schema, &param).expect("built-in schema parameters") {
            out.push(axiom(&format!("{}[{}]", schema.name(), param), f, true));
        }
    }
    out
}

/// Sentences provable in intuitionistic first-order logic with equality.
/// Entries may have free variables; they are meant universally closed.
pub fn tautology_suite() -> Vec<Formula> {
    [
        "a = a -> a = a",
        "a = a",
        "a = b -> b = a",
        "(a = b and b = c) -> a = c",
        "(a in b and a = c) -> c in b",
        "(a in b and b = c) -> a in c",
        "(a : atom and a = b) -> b : atom",
        "(a : set and a = b) -> b : set",
        "a in b -> not not (a in b)",
        "(not not not (a in b)) -> not (a in b)",
        "(not (a in b)) -> not not not (a in b)",
        "(a in b and b : set) -> (b : set and a in b)",
        "(a in b or a = b) -> (a = b or a in b)",
        "(a in b -> a = b) -> ((not (a = b)) -> not (a in b))",
        "a : atom -> (a : atom or a : set)",
        "(not (a = a)) -> b in a",
        "((not (a in b)) or (not (b in a))) -> not (a in b and b in a)",
        "(forall x . x : set) -> (exists x . x : set)",
        "(forall x . ((exists y . y : set) -> (x : atom or x : set))) -> ((exists y . y : set) -> (forall x . (x : atom or x : set)))",
        "(forall x . (x : set -> (exists y . y : set))) -> ((exists x . x : set) -> (exists y . y : set))",
        "a = b -> (forall z . (z in a -> z in b))",
        "not not ((a in b) or (not (a in b)))",
        "(exists x . forall y . x in y) -> (forall y . exists x . x in y)",
        "a in b -> (exists z . z in b)",
        "(forall x . (x : set and x = x)) -> ((forall x . x : set) and (forall x . x = x))",
    ]
    .iter()
    .map(|t| p(t))
    .collect()
}

/// Classically valid sentences that intuitionistic logic does not prove.
pub fn non_theorem_suite() -> Vec<Formula> {
    [
        "a in b or not (a in b)",
        "(not not (a in b)) -> a in b",
        "((a in b -> a = b) -> a in b) -> a in b",
        "a = b or not (a = b)",
    ]
    .iter()
    .map(|t| p(t))
    .collect()
}
