//! Text input for polynomials, matrices and Weyl-algebra elements.
//!
//! Grammar: sums and differences of products, `^` with a non-negative
//! integer exponent, parentheses, rational literals such as `3/2`, and
//! identifiers. Products are kept in the order written, which matters for
//! noncommutative targets.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{MultiPoly, PolyMatrix, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var { name: String, pos: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = p + d.len_utf8();
                it.next();
            }
            let n = BigInt::from_str(&s[pos..end]).map_err(|_| perr(pos, "bad integer"))?;
            out.push((pos, Tok::Int(n)));
        } else if c.is_alphabetic() || c == '_' || c == '∂' {
            let mut end = pos;
            while let Some(&(p, d)) = it.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '∂') {
                    break;
                }
                end = p + d.len_utf8();
                it.next();
            }
            out.push((pos, Tok::Ident(s[pos..end].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            it.next();
        } else if c == '−' {
            out.push((pos, Tok::Sym('-')));
            it.next();
        } else if c == '·' {
            out.push((pos, Tok::Sym('*')));
            it.next();
        } else {
            return Err(perr(pos, format!("unexpected character '{}'", c)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.len, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.i += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let pos = self.pos();
            match self.toks.get(self.i) {
                Some((_, Tok::Int(n))) => {
                    let e = u32::try_from(n.clone()).map_err(|_| perr(pos, "exponent too large"))?;
                    self.i += 1;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(perr(pos, "exponent must be a non-negative integer")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.toks.get(self.i).cloned() {
            Some((_, Tok::Int(n))) => {
                self.i += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some((_, Tok::Ident(name))) => {
                self.i += 1;
                Ok(Expr::Var { name, pos })
            }
            Some((_, Tok::Sym('('))) => {
                self.i += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(perr(self.pos(), "expected ')'"));
                }
                Ok(e)
            }
            Some(_) => Err(perr(pos, "unexpected token")),
            None => Err(perr(pos, "unexpected end of input")),
        }
    }
}

/// Parses an expression into a syntax tree.
pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(s)?,
        i: 0,
        len: s.len(),
    };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return Err(perr(p.pos(), "trailing input"));
    }
    Ok(e)
}

/// A ring that expressions can be evaluated into.
pub trait ExprTarget {
    type Value: Clone;
    fn constant(&self, c: Rational) -> Self::Value;
    fn variable(&self, name: &str, pos: usize) -> Result<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    /// The value as a rational constant, if it is one.
    fn as_constant(&self, a: &Self::Value) -> Option<Rational>;
}

pub fn evaluate<T: ExprTarget>(e: &Expr, target: &T) -> Result<T::Value> {
    Ok(match e {
        Expr::Num(c) => target.constant(c.clone()),
        Expr::Var { name, pos } => target.variable(name, *pos)?,
        Expr::Add(a, b) => target.add(evaluate(a, target)?, evaluate(b, target)?),
        Expr::Sub(a, b) => {
            let b = target.neg(evaluate(b, target)?);
            target.add(evaluate(a, target)?, b)
        }
        Expr::Mul(a, b) => target.mul(evaluate(a, target)?, evaluate(b, target)?),
        Expr::Div(a, b, pos) => {
            let d = evaluate(b, target)?;
            let c = target
                .as_constant(&d)
                .ok_or_else(|| perr(*pos, "can only divide by a rational constant"))?;
            if c.is_zero() {
                return Err(perr(*pos, "division by zero"));
            }
            target.mul(evaluate(a, target)?, target.constant(c.recip()))
        }
        Expr::Neg(a) => target.neg(evaluate(a, target)?),
        Expr::Pow(a, k) => {
            let base = evaluate(a, target)?;
            let mut acc = target.constant(Rational::from_integer(1.into()));
            for _ in 0..*k {
                acc = target.mul(acc, base.clone());
            }
            acc
        }
    })
}

/// Normalizes spelling variants of variable names (`λ` to `lambda`).
pub fn canonical_name(name: &str) -> &str {
    match name {
        "λ" => "lambda",
        other => other,
    }
}

struct PolyTarget;

impl ExprTarget for PolyTarget {
    type Value = MultiPoly;
    fn constant(&self, c: Rational) -> MultiPoly {
        MultiPoly::constant(c)
    }
    fn variable(&self, name: &str, _pos: usize) -> Result<MultiPoly> {
        Ok(MultiPoly::var(canonical_name(name)))
    }
    fn add(&self, a: MultiPoly, b: MultiPoly) -> MultiPoly {
        a + b
    }
    fn mul(&self, a: MultiPoly, b: MultiPoly) -> MultiPoly {
        a * b
    }
    fn neg(&self, a: MultiPoly) -> MultiPoly {
        -a
    }
    fn as_constant(&self, a: &MultiPoly) -> Option<Rational> {
        a.constant_value()
    }
}

/// Parses a commutative polynomial, e.g. `3/2*z^2*v - 1`.
pub fn parse_poly(s: &str) -> Result<MultiPoly> {
    evaluate(&parse_expr(s)?, &PolyTarget)
}

/// Parses a rational constant such as `-7/3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    parse_poly(s)?
        .constant_value()
        .ok_or_else(|| perr(0, format!("'{}' is not a rational constant", s)))
}

/// Parses a matrix given as rows of polynomial strings.
pub fn parse_matrix<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<PolyMatrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|e| parse_poly(e.as_ref())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::from_rows(parsed)
}

/// Canonical strings of a matrix, row by row.
pub fn matrix_strings(m: &PolyMatrix) -> Vec<Vec<String>> {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect())
        .collect()
}
