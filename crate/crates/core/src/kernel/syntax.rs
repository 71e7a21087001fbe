//! Textual pattern syntax.
//!
//! ```text
//! f(t1, ..., tn)   c   c()   x:Sort   x
//! ~p   p /\ q   p \/ q   p -> q   p <-> q   exists x:Sort . p
//! p = q   p in q   |_ p _|   top   bottom
//! ```
//!
//! Variable sorts may be omitted when the context fixes them. Equality,
//! membership, definedness, `top` and `bottom` take an optional `@Sort`
//! suffix for the sort of the whole pattern; it defaults to the sort the
//! context expects, or else to the sort of the operands.

use super::pattern::{Head, Pattern, Variable};
use super::signature::{Signature, Sort};
use super::term::Term;
use super::{is_ident, KernelError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    At,
    Tilde,
    And,
    Or,
    Imp,
    Iff,
    Eq,
    CeilOpen,
    CeilClose,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, KernelError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset, message: &str| KernelError::Parse { offset, message: message.to_string() };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let next = bytes.get(i + 1).map(|&b| b as char);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = match (c, next) {
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            (':', _) => (Tok::Colon, 1),
            ('.', _) => (Tok::Dot, 1),
            ('@', _) => (Tok::At, 1),
            ('~', _) => (Tok::Tilde, 1),
            ('=', _) => (Tok::Eq, 1),
            ('/', Some('\\')) => (Tok::And, 2),
            ('\\', Some('/')) => (Tok::Or, 2),
            ('-', Some('>')) => (Tok::Imp, 2),
            ('<', Some('-')) if bytes.get(i + 2) == Some(&b'>') => (Tok::Iff, 3),
            ('|', Some('_')) => (Tok::CeilOpen, 2),
            ('_', Some('|')) => (Tok::CeilClose, 2),
            _ if c.is_alphanumeric() || c == '_' || c == '\'' => {
                let start = i;
                let mut j = i;
                for ch in text[i..].chars() {
                    let ends_ceil = ch == '_' && text[j + 1..].starts_with('|');
                    if !(ch.is_alphanumeric() || ch == '_' || ch == '\'') || ends_ceil {
                        break;
                    }
                    j += ch.len_utf8();
                }
                out.push((start, Tok::Ident(text[start..j].to_string())));
                i = j;
                continue;
            }
            _ => return Err(err(i, &format!("unexpected character `{c}`"))),
        };
        out.push((i, tok));
        i += len;
    }
    Ok(out)
}

/// Surface syntax before sorts are resolved.
#[derive(Debug, Clone)]
enum Raw {
    Ident(usize, String, Option<Sort>),
    App(usize, String, Vec<Raw>),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Imp(Box<Raw>, Box<Raw>),
    Iff(Box<Raw>, Box<Raw>),
    Exists(Variable, Box<Raw>),
    Eq(usize, Box<Raw>, Box<Raw>, Option<Sort>),
    In(usize, Box<Raw>, Box<Raw>, Option<Sort>),
    Def(usize, Box<Raw>, Option<Sort>),
    Top(usize, Option<Sort>),
    Bottom(usize, Option<Sort>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.1)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, KernelError> {
        Err(KernelError::Parse { offset: self.offset(), message: message.into() })
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), KernelError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, KernelError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("expected an identifier"),
        }
    }

    fn sort(&mut self) -> Result<Sort, KernelError> {
        Ok(Sort::new(self.ident()?))
    }

    fn annotation(&mut self) -> Result<Option<Sort>, KernelError> {
        if self.eat(&Tok::At) {
            Ok(Some(self.sort()?))
        } else {
            Ok(None)
        }
    }

    fn iff(&mut self) -> Result<Raw, KernelError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Raw::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Raw, KernelError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Raw::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Raw, KernelError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Raw::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Raw, KernelError> {
        let lhs = self.eq()?;
        if self.eat(&Tok::And) {
            let rhs = self.and()?;
            return Ok(Raw::And(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn eq(&mut self) -> Result<Raw, KernelError> {
        let lhs = self.unary()?;
        let at = self.offset();
        if self.eat(&Tok::Eq) {
            let annot = self.annotation()?;
            let rhs = self.unary()?;
            return Ok(Raw::Eq(at, Box::new(lhs), Box::new(rhs), annot));
        }
        if self.peek() == Some(&Tok::Ident("in".into())) {
            self.pos += 1;
            let annot = self.annotation()?;
            let rhs = self.unary()?;
            return Ok(Raw::In(at, Box::new(lhs), Box::new(rhs), annot));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw, KernelError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Raw::Not(Box::new(self.unary()?)));
        }
        if self.peek() == Some(&Tok::Ident("exists".into())) && self.peek2() != Some(&Tok::Colon) {
            self.pos += 1;
            let name = self.ident()?;
            self.expect(&Tok::Colon, "`:` and the sort of the bound variable")?;
            let sort = self.sort()?;
            self.expect(&Tok::Dot, "`.`")?;
            let body = self.iff()?;
            return Ok(Raw::Exists(Variable::new(name, sort), Box::new(body)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Raw, KernelError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let p = self.iff()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(p)
            }
            Some(Tok::CeilOpen) => {
                self.pos += 1;
                let p = self.iff()?;
                self.expect(&Tok::CeilClose, "`_|`")?;
                let annot = self.annotation()?;
                Ok(Raw::Def(at, Box::new(p), annot))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let keyword = self.peek() != Some(&Tok::Colon) && self.peek() != Some(&Tok::LParen);
                match name.as_str() {
                    "top" if keyword => return Ok(Raw::Top(at, self.annotation()?)),
                    "bottom" if keyword => return Ok(Raw::Bottom(at, self.annotation()?)),
                    "in" | "exists" if keyword => return self.error(format!("unexpected keyword `{name}`")),
                    _ => {}
                }
                if self.eat(&Tok::Colon) {
                    return Ok(Raw::Ident(at, name, Some(self.sort()?)));
                }
                if self.eat(&Tok::LParen) {
                    let mut args = Vec::new();
                    if !self.eat(&Tok::RParen) {
                        loop {
                            args.push(self.iff()?);
                            if self.eat(&Tok::RParen) {
                                break;
                            }
                            self.expect(&Tok::Comma, "`,` or `)`")?;
                        }
                    }
                    return Ok(Raw::App(at, name, args));
                }
                Ok(Raw::Ident(at, name, None))
            }
            _ => self.error("expected a pattern"),
        }
    }
}

struct Elaborator<'a> {
    sig: &'a Signature,
    env: Vec<Variable>,
}

impl Elaborator<'_> {
    fn bound(&self, name: &str) -> Option<&Variable> {
        self.env.iter().rev().find(|v| v.name == name)
    }

    /// The sort a pattern has regardless of context, if any.
    fn natural(&mut self, raw: &Raw) -> Option<Sort> {
        match raw {
            Raw::Ident(_, _, Some(s)) => Some(s.clone()),
            Raw::Ident(_, name, None) => match self.bound(name) {
                Some(v) => Some(v.sort.clone()),
                None if self.sig.is_constant(name) => self.sig.symbol(name).map(|d| d.result.clone()),
                None => None,
            },
            Raw::App(_, f, _) => self.sig.symbol(f).map(|d| d.result.clone()),
            Raw::Not(p) => self.natural(p),
            Raw::And(l, r) | Raw::Or(l, r) | Raw::Imp(l, r) | Raw::Iff(l, r) => {
                self.natural(l).or_else(|| self.natural(r))
            }
            Raw::Exists(v, body) => {
                self.env.push(v.clone());
                let s = self.natural(body);
                self.env.pop();
                s
            }
            Raw::Eq(.., annot) | Raw::In(.., annot) | Raw::Def(.., annot) => annot.clone(),
            Raw::Top(_, annot) | Raw::Bottom(_, annot) => annot.clone(),
        }
    }

    fn fail<T>(offset: usize, message: String) -> Result<T, KernelError> {
        Err(KernelError::Parse { offset, message })
    }

    fn elab(&mut self, raw: &Raw, exp: Option<&Sort>) -> Result<Pattern, KernelError> {
        Ok(match raw {
            Raw::Ident(_, name, Some(s)) => Pattern::Var(Variable::new(name.clone(), s.clone())),
            Raw::Ident(at, name, None) => {
                if let Some(v) = self.bound(name) {
                    Pattern::Var(v.clone())
                } else if self.sig.is_constant(name) {
                    Pattern::app(name.clone(), Vec::new())
                } else if self.sig.symbol(name).is_some() {
                    return Self::fail(*at, format!("symbol `{name}` needs arguments"));
                } else if let Some(s) = exp {
                    Pattern::Var(Variable::new(name.clone(), s.clone()))
                } else {
                    return Self::fail(*at, format!("cannot infer the sort of `{name}`; write `{name}:Sort`"));
                }
            }
            Raw::App(at, f, args) => {
                let decl = match self.sig.symbol(f) {
                    Some(d) => d.clone(),
                    None => return Self::fail(*at, format!("unknown symbol `{f}`")),
                };
                if decl.arity.len() != args.len() {
                    return Self::fail(
                        *at,
                        format!("`{f}` takes {} arguments, got {}", decl.arity.len(), args.len()),
                    );
                }
                let args = args
                    .iter()
                    .zip(&decl.arity)
                    .map(|(a, s)| self.elab(a, Some(s)))
                    .collect::<Result<_, _>>()?;
                Pattern::app(f.clone(), args)
            }
            Raw::Not(p) => Pattern::not(self.elab(p, exp)?),
            Raw::And(l, r) | Raw::Or(l, r) | Raw::Imp(l, r) | Raw::Iff(l, r) => {
                let s = match exp {
                    Some(s) => Some(s.clone()),
                    None => self.natural(l).or_else(|| self.natural(r)),
                };
                let (l, r) = (self.elab(l, s.as_ref())?, self.elab(r, s.as_ref())?);
                match raw {
                    Raw::And(..) => Pattern::and(l, r),
                    Raw::Or(..) => Pattern::or(l, r),
                    Raw::Imp(..) => Pattern::implies(l, r),
                    _ => Pattern::iff(l, r),
                }
            }
            Raw::Exists(v, body) => {
                self.env.push(v.clone());
                let body = self.elab(body, exp);
                self.env.pop();
                Pattern::exists(v.clone(), body?)
            }
            Raw::Eq(at, l, r, annot) | Raw::In(at, l, r, annot) => {
                let inner = match self.natural(l).or_else(|| self.natural(r)) {
                    Some(s) => s,
                    None => return Self::fail(*at, "cannot infer the sort of the operands".into()),
                };
                let outer = annot.clone().or_else(|| exp.cloned()).unwrap_or_else(|| inner.clone());
                let (l, r) = (self.elab(l, Some(&inner))?, self.elab(r, Some(&inner))?);
                if matches!(raw, Raw::Eq(..)) {
                    Pattern::equal(l, r, inner, outer)
                } else {
                    Pattern::member(l, r, inner, outer)
                }
            }
            Raw::Def(at, p, annot) => {
                let inner = match self.natural(p) {
                    Some(s) => s,
                    None => return Self::fail(*at, "cannot infer the sort of the operand".into()),
                };
                let outer = annot.clone().or_else(|| exp.cloned()).unwrap_or_else(|| inner.clone());
                Pattern::ceil(self.elab(p, Some(&inner))?, inner, outer)
            }
            Raw::Top(at, annot) | Raw::Bottom(at, annot) => {
                let s = match annot.as_ref().or(exp) {
                    Some(s) => s.clone(),
                    None => return Self::fail(*at, "cannot infer the sort; write `top@Sort`".into()),
                };
                if matches!(raw, Raw::Top(..)) {
                    Pattern::top(s)
                } else {
                    Pattern::bottom(s)
                }
            }
        })
    }
}

fn parse_raw(text: &str) -> Result<Raw, KernelError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let raw = p.iff()?;
    if p.pos != p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(raw)
}

/// Parses and sort-checks a pattern.
pub fn parse_pattern(text: &str, sig: &Signature) -> Result<Pattern, KernelError> {
    let raw = parse_raw(text)?;
    let p = Elaborator { sig, env: Vec::new() }.elab(&raw, None)?;
    p.sort_of(sig)?;
    Ok(p)
}

/// Parses a pattern that is expected to have sort `sort`.
pub fn parse_pattern_at(text: &str, sig: &Signature, sort: &Sort) -> Result<Pattern, KernelError> {
    let raw = parse_raw(text)?;
    let p = Elaborator { sig, env: Vec::new() }.elab(&raw, Some(sort))?;
    let actual = p.sort_of(sig)?;
    if &actual != sort {
        return Err(KernelError::SortMismatch { left: sort.clone(), right: actual });
    }
    Ok(p)
}

/// Parses a term pattern.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, KernelError> {
    Term::from_pattern(&parse_pattern(text, sig)?, sig)
}

const P_IFF: u8 = 1;
const P_IMP: u8 = 2;
const P_OR: u8 = 3;
const P_AND: u8 = 4;
const P_EQ: u8 = 5;
const P_UNARY: u8 = 6;
const P_ATOM: u8 = 7;

struct Out {
    text: String,
    prec: u8,
    /// What the parser's `natural` would report for `text`.
    natural: Option<Sort>,
}

impl Out {
    fn at(self, min: u8) -> String {
        if self.prec < min {
            format!("({})", self.text)
        } else {
            self.text
        }
    }
}

struct Printer<'a> {
    sig: &'a Signature,
    env: Vec<Variable>,
}

impl Printer<'_> {
    fn bound(&self, name: &str) -> Option<&Variable> {
        self.env.iter().rev().find(|v| v.name == name)
    }

    fn annot(needed: bool, sort: &Sort) -> String {
        if needed {
            format!("@{sort}")
        } else {
            String::new()
        }
    }

    /// Prints `p` so that parsing it with expected sort `exp` gives `p` back.
    /// With `anchor`, the printed text must also carry its sort on its own.
    fn pr(&mut self, p: &Pattern, exp: Option<&Sort>, anchor: bool) -> Out {
        let sort = p.sort_of(self.sig).ok();
        if let Some(s) = p.as_top().or_else(|| p.as_bottom()) {
            let word = if p.as_top().is_some() { "top" } else { "bottom" };
            let needed = anchor || exp != Some(s);
            return Out { text: format!("{word}{}", Self::annot(needed, s)), prec: P_ATOM, natural: needed.then(|| s.clone()) };
        }
        if let Some((l, r, inner, outer)) = p.as_equal().or_else(|| p.as_member()) {
            let op = if p.as_equal().is_some() { "=" } else { "in" };
            let (l, r) = self.operands(l, r, inner);
            let needed = anchor || exp.unwrap_or(inner) != outer;
            let text = format!("{} {op}{} {}", l.at(P_UNARY), Self::annot(needed, outer), r.at(P_UNARY));
            return Out { text, prec: P_EQ, natural: needed.then(|| outer.clone()) };
        }
        if let Some((a, inner, outer)) = p.as_ceil() {
            let mut body = self.pr(a, Some(inner), false);
            if body.natural.is_none() {
                body = self.pr(a, Some(inner), true);
            }
            let needed = anchor || exp.unwrap_or(inner) != outer;
            let text = format!("|_ {} _|{}", body.text, Self::annot(needed, outer));
            return Out { text, prec: P_ATOM, natural: needed.then(|| outer.clone()) };
        }
        if let Some((a, b)) = p.as_iff() {
            return self.binary(a, b, sort.as_ref(), exp, anchor, "<->", P_IFF, P_IMP, P_IMP);
        }
        if let Some((a, b)) = p.as_implies() {
            return self.binary(a, b, sort.as_ref(), exp, anchor, "->", P_IMP, P_OR, P_IMP);
        }
        if let Some((a, b)) = p.as_or() {
            return self.binary(a, b, sort.as_ref(), exp, anchor, "\\/", P_OR, P_OR, P_AND);
        }
        match p {
            Pattern::Var(v) => {
                let inferable = self.sig.symbol(&v.name).is_none()
                    && !matches!(v.name.as_str(), "top" | "bottom" | "in" | "exists")
                    && is_ident(&v.name)
                    && match self.bound(&v.name) {
                        Some(b) => b == v,
                        None => !anchor && exp == Some(&v.sort),
                    };
                if inferable {
                    let natural = self.bound(&v.name).map(|b| b.sort.clone());
                    Out { text: v.name.clone(), prec: P_ATOM, natural }
                } else {
                    Out { text: v.to_string(), prec: P_ATOM, natural: Some(v.sort.clone()) }
                }
            }
            Pattern::App(Head::Symbol(f), args) => {
                let arity: Vec<Option<Sort>> = match self.sig.symbol(f) {
                    Some(d) => d.arity.iter().cloned().map(Some).collect(),
                    None => vec![None; args.len()],
                };
                let natural = self.sig.symbol(f).map(|d| d.result.clone());
                let text = if args.is_empty() && self.bound(f).is_none() {
                    f.clone()
                } else {
                    let parts: Vec<String> = args
                        .iter()
                        .zip(arity.iter().chain(std::iter::repeat(&None)))
                        .map(|(a, s)| self.pr(a, s.as_ref(), s.is_none()).text)
                        .collect();
                    format!("{f}({})", parts.join(", "))
                };
                Out { text, prec: P_ATOM, natural }
            }
            Pattern::App(Head::Ceil { inner, outer }, args) => {
                // Malformed arity: print the arguments as a conjunction.
                let parts: Vec<String> = args.iter().map(|a| self.pr(a, Some(inner), true).at(P_EQ)).collect();
                Out { text: format!("|_ {} _|@{outer}", parts.join(" /\\ ")), prec: P_ATOM, natural: Some(outer.clone()) }
            }
            Pattern::Not(a) => {
                let inner = self.pr(a, exp, anchor);
                let natural = inner.natural.clone();
                Out { text: format!("~{}", inner.at(P_UNARY)), prec: P_UNARY, natural }
            }
            Pattern::And(a, b) => self.binary(a, b, sort.as_ref(), exp, anchor, "/\\", P_AND, P_EQ, P_AND),
            Pattern::Exists(v, body) => {
                self.env.push(v.clone());
                let b = self.pr(body, exp, anchor);
                self.env.pop();
                Out { text: format!("exists {v} . {}", b.text), prec: 0, natural: b.natural }
            }
        }
    }

    /// Operands of `=` and `in`: the parser takes their sort from whichever
    /// side states it first.
    fn operands(&mut self, l: &Pattern, r: &Pattern, inner: &Sort) -> (Out, Out) {
        let lo = self.pr(l, Some(inner), false);
        let ro = self.pr(r, Some(inner), false);
        if lo.natural.is_none() && ro.natural.is_none() {
            (self.pr(l, Some(inner), true), ro)
        } else {
            (lo, ro)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn binary(
        &mut self,
        a: &Pattern,
        b: &Pattern,
        sort: Option<&Sort>,
        exp: Option<&Sort>,
        anchor: bool,
        op: &str,
        prec: u8,
        lmin: u8,
        rmin: u8,
    ) -> Out {
        let s = sort.or(exp);
        let settled = !anchor && exp.is_some() && exp == sort;
        // Without an expected sort the parser elaborates both operands without
        // one too, unless one of them states its sort.
        let child = if settled { s } else { None };
        let mut l = self.pr(a, child, false);
        let r = self.pr(b, child, false);
        if anchor && l.natural.is_none() && r.natural.is_none() {
            l = self.pr(a, s, true);
        }
        let natural = l.natural.clone().or_else(|| r.natural.clone());
        Out { text: format!("{} {op} {}", l.at(lmin), r.at(rmin)), prec, natural }
    }
}

/// Renders a pattern in the syntax accepted by [`parse_pattern`].
pub fn print_pattern(p: &Pattern, sig: &Signature) -> String {
    Printer { sig, env: Vec::new() }.pr(p, None, false).text
}

/// Renders a pattern for a context that expects sort `sort`
/// (the inverse of [`parse_pattern_at`]).
pub fn print_pattern_at(p: &Pattern, sig: &Signature, sort: &Sort) -> String {
    Printer { sig, env: Vec::new() }.pr(p, Some(sort), false).text
}

pub fn print_term(t: &Term, sig: &Signature) -> String {
    print_pattern(&t.to_pattern(), sig)
}
