//! Text syntax for statements and regions.
//!
//! ```text
//! statement  := [quants] ( block | constraints [">>" block] )
//! quants     := "forall" name* ["real" name*] ":"
//! block      := ["exists" name* ["real" name*] ":"] constraints
//! constraints:= "true" | constraint ("," constraint)*
//! constraint := expr ("<=" | ">=" | "==") expr
//! expr       := ["-"] term (("+" | "-") term)*
//! term       := [rational ["*"]] atom | rational
//! atom       := "H(" vars ["|" vars] ")" | "I(" vars ";" vars ["|" vars] ")" | name
//! ```
//!
//! Without a `forall` prefix, random variables and reals are inferred from
//! use, in order of first appearance.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::entropy::{EntropyExpr, VarContext};
use crate::error::{Error, Result};
use crate::model::{Eii, Eip};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    H(Vec<String>, Vec<String>),
    I(Vec<String>, Vec<String>, Vec<String>),
    Real(String),
    One,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Q,
    pub atom: Atom,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: Expr,
    pub rel: Rel,
    pub rhs: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Quants {
    pub rvs: Vec<String>,
    pub reals: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Block {
    /// Existentially quantified variables; `None` without an `exists`.
    pub exists: Option<Quants>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Statement {
    pub forall: Option<Quants>,
    pub premise: Option<Vec<Constraint>>,
    pub body: Block,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Q),
    Sym(&'static str),
}

const SYMBOLS: [&str; 16] = [
    ">>", "<=", ">=", "==", "(", ")", ";", "|", ",", ":", "+", "-", "*", "/", "&", "=",
];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            out.push((start, Tok::Num(decimal(&text[start..i], start)?)));
        } else if let Some(s) = SYMBOLS.iter().find(|s| text[i..].starts_with(**s)) {
            out.push((i, Tok::Sym(s)));
            i += s.len();
        } else {
            return Err(syntax(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn decimal(s: &str, pos: usize) -> Result<Q> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(syntax(pos, format!("bad number `{s}`")));
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| syntax(pos, "bad number"))?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(Q::new(num, den))
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

struct Scope {
    rvs: Vec<String>,
    reals: Vec<String>,
    /// Undeclared names are added instead of rejected.
    open: bool,
}

impl Scope {
    fn rv(&mut self, name: &str, pos: usize) -> Result<()> {
        if self.reals.iter().any(|r| r == name) {
            return Err(syntax(pos, format!("`{name}` is a real variable")));
        }
        if !self.rvs.iter().any(|r| r == name) {
            if !self.open {
                return Err(syntax(pos, format!("undeclared random variable `{name}`")));
            }
            self.rvs.push(name.to_string());
        }
        Ok(())
    }

    fn real(&mut self, name: &str, pos: usize) -> Result<()> {
        if self.rvs.iter().any(|r| r == name) {
            return Err(syntax(pos, format!("`{name}` is a random variable")));
        }
        if !self.reals.iter().any(|r| r == name) {
            if !self.open {
                return Err(syntax(pos, format!("undeclared real variable `{name}`")));
            }
            self.reals.push(name.to_string());
        }
        Ok(())
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    scope: Scope,
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "forall" | "exists" | "real" | "true")
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(x)) if x == w) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{s}`")))
        }
    }

    fn name(&mut self) -> Result<(usize, String)> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.at += 1;
                Ok((pos, s))
            }
            _ => Err(syntax(pos, "expected a variable name")),
        }
    }

    fn names_until_colon(&mut self) -> Result<Quants> {
        let mut q = Quants::default();
        let mut real = false;
        loop {
            if self.eat_sym(":") {
                return Ok(q);
            }
            if self.eat_word("real") {
                if real {
                    return Err(syntax(self.pos(), "`real` given twice"));
                }
                real = true;
                continue;
            }
            self.eat_sym(",");
            let (pos, n) = self.name()?;
            if q.rvs.contains(&n) || q.reals.contains(&n) {
                return Err(syntax(pos, format!("`{n}` declared twice")));
            }
            if real {
                q.reals.push(n);
            } else {
                q.rvs.push(n);
            }
        }
    }

    fn declare(&mut self, q: &Quants) -> Result<()> {
        let pos = self.pos();
        for n in q.rvs.iter().chain(&q.reals) {
            if self.scope.rvs.contains(n) || self.scope.reals.contains(n) {
                return Err(syntax(pos, format!("`{n}` is already bound")));
            }
        }
        self.scope.rvs.extend(q.rvs.iter().cloned());
        self.scope.reals.extend(q.reals.iter().cloned());
        Ok(())
    }

    fn statement(&mut self) -> Result<Statement> {
        let forall = if self.eat_word("forall") {
            let q = self.names_until_colon()?;
            self.scope = Scope {
                rvs: vec![],
                reals: vec![],
                open: false,
            };
            self.declare(&q)?;
            Some(q)
        } else {
            None
        };
        let mut st = Statement {
            forall,
            ..Statement::default()
        };
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "exists") {
            st.body = self.block()?;
        } else {
            let first = self.constraints()?;
            if self.eat_sym(">>") {
                st.premise = Some(first);
                st.body = self.block()?;
            } else {
                st.body = Block {
                    exists: None,
                    constraints: first,
                };
            }
        }
        if self.at < self.toks.len() {
            return Err(syntax(self.pos(), "unexpected trailing input"));
        }
        Ok(st)
    }

    fn block(&mut self) -> Result<Block> {
        let exists = if self.eat_word("exists") {
            let q = self.names_until_colon()?;
            self.declare(&q)?;
            Some(q)
        } else {
            None
        };
        Ok(Block {
            exists,
            constraints: self.constraints()?,
        })
    }

    fn constraints(&mut self) -> Result<Vec<Constraint>> {
        if self.eat_word("true") {
            return Ok(vec![]);
        }
        let mut out = vec![self.constraint()?];
        while self.eat_sym(",") || self.eat_sym("&") {
            out.push(self.constraint()?);
        }
        Ok(out)
    }

    fn constraint(&mut self) -> Result<Constraint> {
        let lhs = self.expr()?;
        let pos = self.pos();
        let rel = if self.eat_sym("<=") {
            Rel::Le
        } else if self.eat_sym(">=") {
            Rel::Ge
        } else if self.eat_sym("==") || self.eat_sym("=") {
            Rel::Eq
        } else {
            return Err(syntax(pos, "expected `<=`, `>=` or `==`"));
        };
        let rhs = self.expr()?;
        Ok(Constraint { lhs, rel, rhs })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut neg = self.eat_sym("-");
        if !neg {
            self.eat_sym("+");
        }
        loop {
            let mut t = self.term()?;
            if neg {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            if self.eat_sym("+") {
                neg = false;
            } else if self.eat_sym("-") {
                neg = true;
            } else {
                return Ok(Expr { terms });
            }
        }
    }

    fn number(&mut self) -> Result<Option<Q>> {
        let Some(Tok::Num(x)) = self.peek().cloned() else {
            return Ok(None);
        };
        self.at += 1;
        if self.eat_sym("/") {
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(d)) if !d.is_zero() => {
                    self.at += 1;
                    Ok(Some(x / d))
                }
                _ => Err(syntax(pos, "expected a nonzero denominator")),
            }
        } else {
            Ok(Some(x))
        }
    }

    fn term(&mut self) -> Result<Term> {
        let coeff = self.number()?;
        let starred = coeff.is_some() && self.eat_sym("*");
        let starts_atom = matches!(self.peek(), Some(Tok::Ident(s)) if !is_keyword(s));
        if coeff.is_some() && !starts_atom {
            if starred {
                return Err(syntax(self.pos(), "expected a term after `*`"));
            }
            return Ok(Term {
                coeff: coeff.unwrap(),
                atom: Atom::One,
            });
        }
        let atom = self.atom()?;
        Ok(Term {
            coeff: coeff.unwrap_or_else(Q::one),
            atom,
        })
    }

    fn vars(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        loop {
            let (pos, n) = self.name()?;
            self.scope.rv(&n, pos)?;
            out.push(n);
            if !self.eat_sym(",") {
                return Ok(out);
            }
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let (pos, n) = self.name()?;
        if self.eat_sym("(") {
            match n.as_str() {
                "H" => {
                    let a = self.vars()?;
                    let c = if self.eat_sym("|") { self.vars()? } else { vec![] };
                    self.expect_sym(")")?;
                    return Ok(Atom::H(a, c));
                }
                "I" => {
                    let a = self.vars()?;
                    self.expect_sym(";")?;
                    let b = self.vars()?;
                    let c = if self.eat_sym("|") { self.vars()? } else { vec![] };
                    self.expect_sym(")")?;
                    return Ok(Atom::I(a, b, c));
                }
                _ => return Err(syntax(pos, format!("unknown function `{n}`"))),
            }
        }
        self.scope.real(&n, pos)?;
        Ok(Atom::Real(n))
    }
}

pub fn parse(text: &str) -> Result<Statement> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        scope: Scope {
            rvs: vec![],
            reals: vec![],
            open: true,
        },
    };
    p.statement()
}

fn write_q(f: &mut fmt::Formatter<'_>, x: &Q) -> fmt::Result {
    if x.is_integer() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::H(a, c) if c.is_empty() => write!(f, "H({})", a.join(",")),
            Atom::H(a, c) => write!(f, "H({}|{})", a.join(","), c.join(",")),
            Atom::I(a, b, c) if c.is_empty() => write!(f, "I({};{})", a.join(","), b.join(",")),
            Atom::I(a, b, c) => write!(f, "I({};{}|{})", a.join(","), b.join(","), c.join(",")),
            Atom::Real(r) => write!(f, "{r}"),
            Atom::One => write!(f, "1"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = t.coeff.abs();
            if t.atom == Atom::One {
                write_q(f, &mag)?;
            } else {
                if !mag.is_one() {
                    write_q(f, &mag)?;
                    write!(f, " ")?;
                }
                write!(f, "{}", t.atom)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.rel {
            Rel::Le => "<=",
            Rel::Ge => ">=",
            Rel::Eq => "==",
        };
        write!(f, "{} {op} {}", self.lhs, self.rhs)
    }
}

fn write_constraints(f: &mut fmt::Formatter<'_>, cs: &[Constraint]) -> fmt::Result {
    if cs.is_empty() {
        return write!(f, "true");
    }
    for (k, c) in cs.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

fn write_quants(f: &mut fmt::Formatter<'_>, word: &str, q: &Quants) -> fmt::Result {
    write!(f, "{word}")?;
    for v in &q.rvs {
        write!(f, " {v}")?;
    }
    if !q.reals.is_empty() {
        write!(f, " real")?;
        for v in &q.reals {
            write!(f, " {v}")?;
        }
    }
    write!(f, ": ")
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = &self.forall {
            write_quants(f, "forall", q)?;
        }
        if let Some(p) = &self.premise {
            write_constraints(f, p)?;
            write!(f, " >> ")?;
        }
        if let Some(q) = &self.body.exists {
            write_quants(f, "exists", q)?;
        }
        write_constraints(f, &self.body.constraints)
    }
}

fn push_unique(v: &mut Vec<String>, n: &str) {
    if !v.iter().any(|x| x == n) {
        v.push(n.to_string());
    }
}

fn collect_names(cs: &[Constraint], rvs: &mut Vec<String>, reals: &mut Vec<String>) {
    for c in cs {
        for t in c.lhs.terms.iter().chain(&c.rhs.terms) {
            match &t.atom {
                Atom::H(a, b) => a.iter().chain(b).for_each(|n| push_unique(rvs, n)),
                Atom::I(a, b, z) => a.iter().chain(b).chain(z).for_each(|n| push_unique(rvs, n)),
                Atom::Real(r) => push_unique(reals, r),
                Atom::One => {}
            }
        }
    }
}

fn lower_expr(ctx: &VarContext, e: &Expr) -> Result<EntropyExpr> {
    let mut out = EntropyExpr::zero();
    for t in &e.terms {
        let part = match &t.atom {
            Atom::H(a, c) => ctx.h(a, c)?,
            Atom::I(a, b, c) => ctx.i(a, b, c)?,
            Atom::Real(r) => {
                if !ctx.has_real(r) {
                    return Err(Error::UnknownVariable(r.clone()));
                }
                EntropyExpr::real(r)
            }
            Atom::One => EntropyExpr::constant_term(Q::one()),
        };
        out += &part.scale(&t.coeff);
    }
    Ok(out)
}

/// Rows `>= 0` of a list of constraints.
pub fn lower_constraints(ctx: &VarContext, cs: &[Constraint]) -> Result<Vec<EntropyExpr>> {
    let mut rows = Vec::new();
    for c in cs {
        let l = lower_expr(ctx, &c.lhs)?;
        let r = lower_expr(ctx, &c.rhs)?;
        match c.rel {
            Rel::Le => rows.push(&r - &l),
            Rel::Ge => rows.push(&l - &r),
            Rel::Eq => {
                rows.push(&l - &r);
                rows.push(&r - &l);
            }
        }
    }
    Ok(rows)
}

impl Statement {
    fn exists(&self) -> Quants {
        self.body.exists.clone().unwrap_or_default()
    }

    /// Universal random variables and reals, declared or inferred.
    pub fn base(&self) -> Result<VarContext> {
        if let Some(q) = &self.forall {
            return VarContext::new(&q.rvs, &q.reals);
        }
        let (mut rvs, mut reals) = (Vec::new(), Vec::new());
        collect_names(self.premise.as_deref().unwrap_or(&[]), &mut rvs, &mut reals);
        collect_names(&self.body.constraints, &mut rvs, &mut reals);
        let ex = self.exists();
        rvs.retain(|n| !ex.rvs.contains(n));
        reals.retain(|n| !ex.reals.contains(n));
        VarContext::new(&rvs, &reals)
    }

    pub fn to_eii(&self) -> Result<Eii> {
        let ex = self.exists();
        if !ex.reals.is_empty() {
            return Err(Error::Malformed(
                "existential reals are only allowed in regions".into(),
            ));
        }
        let base = self.base()?;
        let (full, _) = base.extend(&ex.rvs)?;
        let premise = lower_constraints(&base, self.premise.as_deref().unwrap_or(&[]))?;
        let cons = lower_constraints(&full, &self.body.constraints)?;
        Eii::new(base, ex.rvs, premise, cons)
    }

    pub fn to_eip(&self) -> Result<Eip> {
        if self.premise.as_ref().is_some_and(|p| !p.is_empty()) {
            return Err(Error::Malformed("a region has no premise".into()));
        }
        let ex = self.exists();
        let base = self.base()?;
        let mut rvs = base.rv_names().to_vec();
        rvs.extend(ex.rvs.iter().cloned());
        let mut reals = base.real_names().to_vec();
        reals.extend(ex.reals.iter().cloned());
        let full = VarContext::new(&rvs, &reals)?;
        let rows = lower_constraints(&full, &self.body.constraints)?;
        Eip::new(base, ex.rvs, ex.reals, rows)
    }

    pub fn from_eii(e: &Eii) -> Statement {
        let full = e.full_context();
        let premise = e.premise.iter().map(|r| row_constraint(&e.base, r)).collect();
        Statement {
            forall: Some(quants_of(&e.base)),
            premise: Some(premise),
            body: Block {
                exists: (!e.aux.is_empty()).then(|| Quants {
                    rvs: e.aux.clone(),
                    reals: vec![],
                }),
                constraints: e.consequence.iter().map(|r| row_constraint(&full, r)).collect(),
            },
        }
    }

    pub fn from_eip(p: &Eip) -> Statement {
        let full = p.full_context();
        let ex = Quants {
            rvs: p.aux.clone(),
            reals: p.exist_reals.clone(),
        };
        Statement {
            forall: Some(quants_of(&p.base)),
            premise: None,
            body: Block {
                exists: (!ex.rvs.is_empty() || !ex.reals.is_empty()).then_some(ex),
                constraints: p.rows.iter().map(|r| row_constraint(&full, r)).collect(),
            },
        }
    }
}

fn quants_of(ctx: &VarContext) -> Quants {
    Quants {
        rvs: ctx.rv_names().to_vec(),
        reals: ctx.real_names().to_vec(),
    }
}

/// `row >= 0` written as `positive part >= negative part`.
pub fn row_constraint(ctx: &VarContext, row: &EntropyExpr) -> Constraint {
    let mut lhs = Expr::default();
    let mut rhs = Expr::default();
    let mut push = |c: &Q, atom: Atom| {
        if c.is_positive() {
            lhs.terms.push(Term {
                coeff: c.clone(),
                atom,
            });
        } else {
            rhs.terms.push(Term { coeff: -c, atom });
        }
    };
    for (m, c) in row.h_coeffs() {
        let names = ctx.names_of(*m).into_iter().map(String::from).collect();
        push(c, Atom::H(names, vec![]));
    }
    for (r, c) in row.real_coeffs() {
        push(c, Atom::Real(r.clone()));
    }
    if !row.constant().is_zero() {
        push(row.constant(), Atom::One);
    }
    Constraint {
        lhs,
        rel: Rel::Ge,
        rhs,
    }
}

pub fn parse_eii(text: &str) -> Result<Eii> {
    parse(text)?.to_eii()
}

pub fn parse_eip(text: &str) -> Result<Eip> {
    parse(text)?.to_eip()
}

/// One expression over `ctx`, e.g. for printing a counterexample row.
pub fn format_expr(ctx: &VarContext, e: &EntropyExpr) -> String {
    let c = row_constraint(ctx, e);
    let mut terms = c.lhs.terms;
    terms.extend(c.rhs.terms.into_iter().map(|t| Term {
        coeff: -t.coeff,
        atom: t.atom,
    }));
    Expr { terms }.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::frl;
    use crate::prover::{prove_system, SystemOutcome};
    use crate::rules::same_statement;

    #[test]
    fn single_row() {
        let e = parse_eii("I(X;Y|Z) >= 0").unwrap();
        assert_eq!(e.base.rv_names(), ["X", "Y", "Z"]);
        assert_eq!(e.consequence, vec![EntropyExpr::mutual_info(1, 2, 4)]);
        assert!(e.premise.is_empty() && e.aux.is_empty());
    }

    #[test]
    fn chain_rule_is_two_provable_rows() {
        let e = parse_eii("H(X,Y) - H(X) == H(Y|X)").unwrap();
        assert_eq!(e.consequence.len(), 2);
        assert!(e.consequence.iter().all(|r| r.is_zero()));
        let out = prove_system(&e.base, &[], &e.consequence).unwrap();
        assert!(matches!(out, SystemOutcome::Proved(_)));
    }

    #[test]
    fn frl_statement() {
        let e = parse_eii("forall X Y: true >> exists U: I(X;U)==0, H(Y|X,U)==0").unwrap();
        assert!(same_statement(&e, &frl()));
    }

    #[test]
    fn coefficients_and_reals() {
        let st = parse("forall X Y real R: 3/2 I(X;Y) + 0.25*R - 2 <= H(X)").unwrap();
        let e = st.to_eii().unwrap();
        let mut want = EntropyExpr::h(1);
        want.add_h(1, -crate::rational::qr(3, 2));
        want.add_h(2, crate::rational::qr(-3, 2));
        want.add_h(3, crate::rational::qr(3, 2));
        want.add_real("R", crate::rational::qr(-1, 4));
        want.add_constant(crate::rational::q(2));
        assert_eq!(e.consequence, vec![want]);
        assert_eq!(parse(&st.to_string()).unwrap(), st);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("I(X;Y >= 0").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                pos: 6,
                msg: "expected `)`".into()
            }
        );
        assert!(matches!(
            parse("forall X: H(Y) >= 0"),
            Err(Error::Syntax { pos: 12, .. })
        ));
        assert!(matches!(parse("H(X) >= R, R(X) >= 0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("H(X) >= 0 )"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("H(X) ~ 0"), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse("H(X) >= X"), Err(Error::Syntax { pos: 8, .. })));
    }

    #[test]
    fn regions() {
        let p = parse_eip("exists U real T: R <= I(U;Y) + T, T <= H(X), T >= 0").unwrap();
        assert_eq!(p.base.rv_names(), ["Y", "X"]);
        assert_eq!(p.base.real_names(), ["R"]);
        assert_eq!(p.exist_reals, ["T"]);
        assert_eq!(p.rows.len(), 3);
        assert!(parse_eip("H(X) >= 0 >> H(Y) >= 0").is_err());
        assert!(parse_eii("exists real T: T >= 0").is_err());
    }

    #[test]
    fn statements_round_trip() {
        for e in [
            crate::catalog::wyner_superadditive().unwrap(),
            crate::catalog::gelfand_pinsker_converse().unwrap(),
            crate::model::copy_lemma(2, 2),
        ] {
            let text = Statement::from_eii(&e).to_string();
            assert_eq!(parse_eii(&text).unwrap(), e, "{text}");
        }
    }
}
