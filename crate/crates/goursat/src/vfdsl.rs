//! Text grammar for vector fields, scalar and trigonometric expressions,
//! Kumpera-Ruiz words, singularity-type words and points.
//!
//! ```text
//! doc     := "dim" INT ";" expr
//! expr    := term (("+" | "-") term)*
//! term    := factor (("*" | "/") factor)*
//! factor  := "-" factor | atom ("^" INT)?
//! atom    := RATIONAL | VAR | "d/d" VAR | "(" expr ")" | FUNC "(" expr ")"
//! KRWORD  := STEP ("." STEP)*      STEP := "S" | "R" RATIONAL
//! STWORD  := LETTER ("." LETTER)*  LETTER := "a" INT
//! ```
//!
//! Kumpera-Ruiz side variables are `x1..xn`; trailer side variables are
//! `xi1, xi2, th0..thN`. Functions `sin cos tan atan` are only accepted in
//! trigonometric documents.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::krforms::{KRStep, KRWord};
use crate::sigtype::STWord;
use crate::symcore::rational::{fmt_rational, parse_rational};
use crate::symcore::{PolyVF, QPoint, RatFn, RatVF, Rational, Scalar, VectorField};
use crate::trailer::trig::{trailer_var_name, TrigExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undeclared variable `{name}` at {line}:{col}")]
    UndeclaredVariable { name: String, line: usize, col: usize },
    #[error("zero denominator at {line}:{col}")]
    ZeroDenominator { line: usize, col: usize },
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("malformed step `{0}` in word")]
    BadStep(String),
    #[error("malformed letter `{0}` in singularity type")]
    BadLetter(String),
    #[error("expected a {expected}, found a {found}")]
    Kind { expected: &'static str, found: &'static str },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Partial(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semi,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let syntax = |line, col, msg: String| DslError::Syntax { line, col, msg };
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        let simple = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, line: l0, col: c0 });
            advance(1, &mut i);
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Int(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            col += i - start;
            if ident == "d" && chars.get(i) == Some(&'/') && chars.get(i + 1) == Some(&'d') {
                let vstart = i + 2;
                let mut j = vstart;
                while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                    j += 1;
                }
                if j == vstart {
                    return Err(syntax(l0, c0, "expected a variable after `d/d`".into()));
                }
                col += j - i;
                out.push(Token {
                    tok: Tok::Partial(chars[vstart..j].iter().collect()),
                    line: l0,
                    col: c0,
                });
                i = j;
                continue;
            }
            out.push(Token {
                tok: Tok::Ident(ident),
                line: l0,
                col: c0,
            });
            continue;
        }
        return Err(syntax(l0, c0, format!("unexpected character `{ch}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Parsed syntax tree, independent of the value domain.
#[derive(Debug, Clone)]
enum Expr {
    Int(BigInt),
    Var(String, Pos),
    Partial(String, Pos),
    Bin(Op, Box<Expr>, Box<Expr>, Pos),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(String, Box<Expr>, Pos),
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

const FUNCS: [&str; 4] = ["sin", "cos", "tan", "atan"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, DslError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        let t = self.peek();
        Err(DslError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), DslError> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn header(&mut self) -> Result<usize, DslError> {
        match self.next().tok {
            Tok::Ident(s) if s == "dim" => {}
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return self.err("expected header `dim <n>;`");
            }
        }
        let n = match self.next().tok {
            Tok::Int(s) => s.parse::<usize>().ok(),
            _ => None,
        };
        let Some(n) = n else {
            self.pos -= 1;
            return self.err("expected dimension after `dim`");
        };
        self.expect(Tok::Semi, "`;` after header")?;
        Ok(n)
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => Op::Add,
                Tok::Minus => Op::Sub,
                _ => return Ok(lhs),
            };
            let t = self.next();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), Pos { line: t.line, col: t.col });
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => Op::Mul,
                Tok::Slash => Op::Div,
                _ => return Ok(lhs),
            };
            let t = self.next();
            let rhs = self.factor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), Pos { line: t.line, col: t.col });
        }
    }

    fn factor(&mut self) -> Result<Expr, DslError> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.next();
            let e = match self.next().tok {
                Tok::Int(s) => s.parse::<u32>().ok(),
                _ => None,
            };
            let Some(e) = e else {
                self.pos -= 1;
                return self.err("expected a non-negative integer exponent");
            };
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let t = self.next();
        let pos = Pos { line: t.line, col: t.col };
        match t.tok {
            Tok::Int(s) => Ok(Expr::Int(s.parse().expect("digits"))),
            Tok::Partial(v) => Ok(Expr::Partial(v, pos)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if FUNCS.contains(&name.as_str()) => {
                self.expect(Tok::LParen, "`(` after function name")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Call(name, Box::new(e), pos))
            }
            Tok::Ident(name) => Ok(Expr::Var(name, pos)),
            _ => {
                self.pos -= 1;
                self.err("expected a number, variable, partial or `(`")
            }
        }
    }

    fn finish(&mut self) -> Result<(), DslError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
}

fn kr_var_index(name: &str, n: usize) -> Option<usize> {
    let k: usize = name.strip_prefix('x')?.parse().ok()?;
    (name[1..].starts_with(|c: char| c != '0') && (1..=n).contains(&k)).then(|| k - 1)
}

fn trailer_var_index(name: &str, dim: usize) -> Option<usize> {
    let idx = match name {
        "xi1" => 0,
        "xi2" => 1,
        _ => {
            let k: usize = name.strip_prefix("th")?.parse().ok()?;
            if name.len() > 3 && name[2..].starts_with('0') {
                return None;
            }
            k + 2
        }
    };
    (idx < dim).then_some(idx)
}

/// Value of a Kumpera-Ruiz side expression: a scalar or a vector field.
#[derive(Debug, Clone)]
enum Val {
    Scalar(RatFn),
    Field(Vec<RatFn>),
}

fn kind_err(expected: &'static str, found: &'static str) -> DslError {
    DslError::Kind { expected, found }
}

fn eval_kr(e: &Expr, n: usize) -> Result<Val, DslError> {
    match e {
        Expr::Int(v) => Ok(Val::Scalar(RatFn::constant(n, Rational::from_integer(v.clone())))),
        Expr::Var(name, pos) => kr_var_index(name, n)
            .map(|i| Val::Scalar(RatFn::var(n, i)))
            .ok_or_else(|| DslError::UndeclaredVariable {
                name: name.clone(),
                line: pos.line,
                col: pos.col,
            }),
        Expr::Partial(name, pos) => {
            let i = kr_var_index(name, n).ok_or_else(|| DslError::UndeclaredVariable {
                name: name.clone(),
                line: pos.line,
                col: pos.col,
            })?;
            let mut comps = vec![RatFn::zero(n); n];
            comps[i] = RatFn::one(n);
            Ok(Val::Field(comps))
        }
        Expr::Call(_, _, pos) => Err(DslError::Syntax {
            line: pos.line,
            col: pos.col,
            msg: "trigonometric functions are not allowed here".into(),
        }),
        Expr::Neg(a) => Ok(match eval_kr(a, n)? {
            Val::Scalar(s) => Val::Scalar(-s),
            Val::Field(f) => Val::Field(f.iter().map(|c| -c).collect()),
        }),
        Expr::Pow(a, k) => match eval_kr(a, n)? {
            Val::Scalar(s) => Ok(Val::Scalar(s.pow(*k))),
            Val::Field(_) => Err(kind_err("scalar", "vector field")),
        },
        Expr::Bin(op, a, b, pos) => {
            let (a, b) = (eval_kr(a, n)?, eval_kr(b, n)?);
            match (op, a, b) {
                (Op::Add, Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(&x + &y)),
                (Op::Sub, Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(&x - &y)),
                (Op::Add, Val::Field(x), Val::Field(y)) => {
                    Ok(Val::Field(x.iter().zip(&y).map(|(a, b)| a + b).collect()))
                }
                (Op::Sub, Val::Field(x), Val::Field(y)) => {
                    Ok(Val::Field(x.iter().zip(&y).map(|(a, b)| a - b).collect()))
                }
                (Op::Add | Op::Sub, Val::Field(x), Val::Scalar(s))
                | (Op::Add | Op::Sub, Val::Scalar(s), Val::Field(x))
                    if s.is_zero() =>
                {
                    // `0 + field` is harmless and lets the zero field print as `0`.
                    Ok(Val::Field(x))
                }
                (Op::Add | Op::Sub, _, _) => Err(kind_err("terms of one kind", "scalar mixed with vector field")),
                (Op::Mul, Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(&x * &y)),
                (Op::Mul, Val::Scalar(s), Val::Field(f)) | (Op::Mul, Val::Field(f), Val::Scalar(s)) => {
                    Ok(Val::Field(f.iter().map(|c| c * &s).collect()))
                }
                (Op::Mul, Val::Field(_), Val::Field(_)) => Err(kind_err("scalar factor", "product of vector fields")),
                (Op::Div, num, Val::Scalar(d)) => {
                    if d.is_zero() {
                        return Err(DslError::ZeroDenominator {
                            line: pos.line,
                            col: pos.col,
                        });
                    }
                    let inv = d.recip().expect("nonzero");
                    Ok(match num {
                        Val::Scalar(s) => Val::Scalar(&s * &inv),
                        Val::Field(f) => Val::Field(f.iter().map(|c| c * &inv).collect()),
                    })
                }
                (Op::Div, _, Val::Field(_)) => Err(kind_err("scalar divisor", "vector field")),
            }
        }
    }
}

/// A parsed vector field: polynomial when every component is.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedField {
    Poly(PolyVF),
    Rat(RatVF),
}

impl ParsedField {
    pub fn into_poly(self) -> Option<PolyVF> {
        match self {
            ParsedField::Poly(p) => Some(p),
            ParsedField::Rat(_) => None,
        }
    }

    pub fn into_rat(self) -> RatVF {
        match self {
            ParsedField::Poly(p) => p.to_rat(),
            ParsedField::Rat(r) => r,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ParsedField::Poly(p) => p.dim(),
            ParsedField::Rat(r) => r.dim(),
        }
    }
}

pub fn parse_vector_field(text: &str) -> Result<ParsedField, DslError> {
    let mut p = Parser::new(text)?;
    let n = p.header()?;
    let e = p.expr()?;
    p.finish()?;
    let comps = match eval_kr(&e, n)? {
        Val::Field(f) => f,
        Val::Scalar(s) if s.is_zero() => vec![RatFn::zero(n); n],
        Val::Scalar(_) => return Err(kind_err("vector field", "scalar")),
    };
    if comps.iter().all(RatFn::is_poly) {
        let polys = comps.iter().map(|c| c.num().clone()).collect();
        Ok(ParsedField::Poly(VectorField::new(polys).expect("dims agree")))
    } else {
        Ok(ParsedField::Rat(VectorField::new(comps).expect("dims agree")))
    }
}

/// A rational function in `x1..xn`, e.g. `dim 3; x1/(1 - x1)`.
pub fn parse_scalar(text: &str) -> Result<RatFn, DslError> {
    let mut p = Parser::new(text)?;
    let n = p.header()?;
    let e = p.expr()?;
    p.finish()?;
    match eval_kr(&e, n)? {
        Val::Scalar(s) => Ok(s),
        Val::Field(_) => Err(kind_err("scalar", "vector field")),
    }
}

/// Three scalar components separated by `;`: `dim 3; e1; e2; e3`.
pub fn parse_contact_map(text: &str) -> Result<Vec<RatFn>, DslError> {
    let mut p = Parser::new(text)?;
    let n = p.header()?;
    let mut out = Vec::new();
    loop {
        let e = p.expr()?;
        match eval_kr(&e, n)? {
            Val::Scalar(s) => out.push(s),
            Val::Field(_) => return Err(kind_err("scalar", "vector field")),
        }
        if p.peek().tok == Tok::Semi {
            p.next();
            if p.peek().tok == Tok::Eof {
                break;
            }
        } else {
            break;
        }
    }
    p.finish()?;
    if out.len() != n {
        return p.err(format!("expected {n} components, found {}", out.len()));
    }
    Ok(out)
}

fn eval_trig(e: &Expr, dim: usize) -> Result<TrigExpr, DslError> {
    Ok(match e {
        Expr::Int(v) => TrigExpr::constant(Rational::from_integer(v.clone())),
        Expr::Var(name, pos) => {
            TrigExpr::var(trailer_var_index(name, dim).ok_or_else(|| DslError::UndeclaredVariable {
                name: name.clone(),
                line: pos.line,
                col: pos.col,
            })?)
        }
        Expr::Partial(..) => return Err(kind_err("scalar expression", "partial derivative")),
        Expr::Neg(a) => eval_trig(a, dim)?.neg(),
        Expr::Pow(a, k) => eval_trig(a, dim)?.pow(*k),
        Expr::Call(f, a, _) => {
            let a = eval_trig(a, dim)?;
            match f.as_str() {
                "sin" => a.sin(),
                "cos" => a.cos(),
                "tan" => a.tan(),
                _ => a.atan(),
            }
        }
        Expr::Bin(op, a, b, pos) => {
            let (a, b) = (eval_trig(a, dim)?, eval_trig(b, dim)?);
            match op {
                Op::Add => a.add(&b),
                Op::Sub => a.sub(&b),
                Op::Mul => a.mul(&b),
                Op::Div => {
                    if b.is_zero() {
                        return Err(DslError::ZeroDenominator {
                            line: pos.line,
                            col: pos.col,
                        });
                    }
                    a.div(&b)
                }
            }
        }
    })
}

/// Trigonometric expression over `xi1, xi2, th0..th{dim-3}`.
pub fn parse_trig_expr(text: &str) -> Result<TrigExpr, DslError> {
    let mut p = Parser::new(text)?;
    let dim = p.header()?;
    let e = p.expr()?;
    p.finish()?;
    eval_trig(&e, dim)
}

pub fn print_trig_expr(e: &TrigExpr, dim: usize) -> String {
    format!("dim {dim}; {e}")
}

pub fn parse_kr_word(text: &str) -> Result<KRWord, DslError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(KRWord::default());
    }
    let steps = text
        .split('.')
        .map(|s| {
            let s = s.trim();
            if s == "S" {
                Ok(KRStep::Singular)
            } else if let Some(r) = s.strip_prefix('R') {
                parse_rational(r)
                    .map(KRStep::Regular)
                    .ok_or_else(|| DslError::BadRational(r.to_string()))
            } else {
                Err(DslError::BadStep(s.to_string()))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KRWord::new(steps))
}

pub fn print_kr_word(w: &KRWord) -> String {
    w.steps
        .iter()
        .map(|s| match s {
            KRStep::Singular => "S".to_string(),
            KRStep::Regular(c) => format!("R{}", fmt_rational(c)),
        })
        .collect::<Vec<_>>()
        .join(".")
}

pub fn parse_st_word(text: &str) -> Result<STWord, DslError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(STWord::default());
    }
    let letters = text
        .split('.')
        .map(|s| {
            let s = s.trim();
            s.strip_prefix('a')
                .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) && (d.len() == 1 || !d.starts_with('0')))
                .and_then(|d| d.parse::<u32>().ok())
                .ok_or_else(|| DslError::BadLetter(s.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(STWord::new(letters))
}

pub fn print_st_word(w: &STWord) -> String {
    w.letters()
        .iter()
        .map(|k| format!("a{k}"))
        .collect::<Vec<_>>()
        .join(".")
}

/// Comma or whitespace separated rationals, optionally in parentheses.
pub fn parse_point(text: &str) -> Result<QPoint, DslError> {
    let t = text.trim();
    let t = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).ok_or_else(|| DslError::BadRational(s.to_string())))
        .collect()
}

pub fn print_point(p: &[Rational]) -> String {
    p.iter().map(fmt_rational).collect::<Vec<_>>().join(",")
}

fn coefficient_text(c: &RatFn) -> (bool, Option<String>) {
    let name = |i: usize| format!("x{}", i + 1);
    if let Some(p) = c.as_poly() {
        if let Some(v) = p.constant_value() {
            let neg = v.is_negative();
            let a = v.abs();
            return (neg, (!a.is_one()).then(|| fmt_rational(&a)));
        }
        if p.num_terms() == 1 {
            let neg = p.leading_coeff().is_negative();
            let t = if neg { -p } else { p.clone() };
            return (neg, Some(t.to_text_with(&name)));
        }
        return (false, Some(format!("({})", p.to_text_with(&name))));
    }
    (
        false,
        Some(format!("({})/({})", c.num().to_text_with(&name), c.den().to_text_with(&name))),
    )
}

/// Canonical text: components from `d/dxn` down to `d/dx1`.
pub fn print_vector_field<S: Scalar>(f: &VectorField<S>) -> String {
    let n = f.dim();
    let mut out = format!("dim {n}; ");
    let mut first = true;
    for i in (0..n).rev() {
        let c = f.component(i).to_ratfn();
        if c.is_zero() {
            continue;
        }
        let (neg, coeff) = coefficient_text(&c);
        if first {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        first = false;
        if let Some(cs) = coeff {
            out.push_str(&cs);
            out.push('*');
        }
        out.push_str(&format!("d/dx{}", i + 1));
    }
    if first {
        out.push('0');
    }
    out
}

pub fn print_scalar(f: &RatFn) -> String {
    format!("dim {}; {}", f.arity(), f.to_text())
}

/// Any parsed document.
#[derive(Debug, Clone, PartialEq)]
pub enum DslDocument {
    VectorField(ParsedField),
    KrWord(KRWord),
    Point(QPoint),
    TrigExpr { dim: usize, expr: TrigExpr },
    ContactMap(Vec<RatFn>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocKind {
    VectorField,
    KrWord,
    Point,
    TrigExpr,
    ContactMap,
}

pub fn parse_document(kind: DocKind, text: &str) -> Result<DslDocument, DslError> {
    Ok(match kind {
        DocKind::VectorField => DslDocument::VectorField(parse_vector_field(text)?),
        DocKind::KrWord => DslDocument::KrWord(parse_kr_word(text)?),
        DocKind::Point => DslDocument::Point(parse_point(text)?),
        DocKind::TrigExpr => {
            let mut p = Parser::new(text)?;
            let dim = p.header()?;
            let e = p.expr()?;
            p.finish()?;
            DslDocument::TrigExpr {
                dim,
                expr: eval_trig(&e, dim)?,
            }
        }
        DocKind::ContactMap => DslDocument::ContactMap(parse_contact_map(text)?),
    })
}

pub fn print_document(doc: &DslDocument) -> String {
    match doc {
        DslDocument::VectorField(ParsedField::Poly(f)) => print_vector_field(f),
        DslDocument::VectorField(ParsedField::Rat(f)) => print_vector_field(f),
        DslDocument::KrWord(w) => print_kr_word(w),
        DslDocument::Point(p) => print_point(p),
        DslDocument::TrigExpr { dim, expr } => print_trig_expr(expr, *dim),
        DslDocument::ContactMap(c) => {
            let n = c.first().map(RatFn::arity).unwrap_or(0);
            let parts: Vec<String> = c.iter().map(RatFn::to_text).collect();
            format!("dim {n}; {}", parts.join("; "))
        }
    }
}

impl fmt::Display for DslDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_document(self))
    }
}

/// Trailer-side variable name for index `i` (re-exported for printers).
pub fn trailer_name(i: usize) -> String {
    trailer_var_name(i)
}
