//! Scalar expressions over named coordinates.
//!
//! Grammar, loosest to tightest:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?          right-associative
//! atom    := number | ident | func '(' sum ')' | '(' sum ')'
//! ```
//!
//! so `-x^2` is `-(x^2)` and `2^-x` is accepted. Identifiers are ASCII,
//! start with a letter and continue with letters, digits or `_`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::jet::{Analytic, Jet, JetError, JetSpace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at offset {position}")]
    UnknownIdentifier { name: String, position: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("expected a point with {expected} coordinates, got {got}")]
    PointDimension { expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(#[from] JetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Atan,
}

impl Func {
    const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Atan,
    ];

    pub fn name(self) -> &'static str {
        self.analytic().name()
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn analytic(self) -> Analytic {
        match self {
            Func::Sin => Analytic::Sin,
            Func::Cos => Analytic::Cos,
            Func::Tan => Analytic::Tan,
            Func::Exp => Analytic::Exp,
            Func::Log => Analytic::Log,
            Func::Sqrt => Analytic::Sqrt,
            Func::Sinh => Analytic::Sinh,
            Func::Cosh => Analytic::Cosh,
            Func::Tanh => Analytic::Tanh,
            Func::Atan => Analytic::Atan,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Index into the coordinate list the expression was parsed against.
    Var(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

fn lex(source: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = source.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                out.push((Tok::Op(c as char), i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &source[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    position: start,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push((Tok::Num(value), start));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(source[start..i].to_string()), start));
            }
            _ => {
                let ch = source[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    out.push((Tok::End, source.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    cursor: usize,
    coords: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.cursor].0
    }

    fn position(&self) -> usize {
        self.tokens[self.cursor].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let tok = self.tokens[self.cursor].clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        tok
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let found = match self.peek() {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("operator `{c}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        };
        ParseError::Syntax {
            position: self.position(),
            message: format!("expected {what}, found {found}"),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == &Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == &Tok::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let position = self.position();
                self.bump();
                if self.peek() == &Tok::LParen {
                    let func = Func::from_name(&name)
                        .ok_or(ParseError::UnknownIdentifier { name, position })?;
                    self.bump();
                    let arg = self.sum()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                self.coords
                    .iter()
                    .position(|c| *c == name)
                    .map(Expr::Var)
                    .ok_or(ParseError::UnknownIdentifier { name, position })
            }
            _ => Err(self.unexpected("a number, identifier or `(`")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.peek() == &Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected("`)`"))
        }
    }
}

/// Parse `source` against the coordinate names `coords`.
pub fn parse(source: &str, coords: &[String]) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        tokens: lex(source)?,
        cursor: 0,
        coords,
    };
    let expr = parser.sum()?;
    if parser.peek() != &Tok::End {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(expr)
}

/// Binding strength used by the printer; mirrors the grammar levels.
fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Binary(BinOp::Pow, ..) => 4,
        Expr::Num(v) if v.is_sign_negative() => 3,
        _ => 5,
    }
}

impl Expr {
    /// Render as source text that parses back to the same tree.
    pub fn to_source(&self, coords: &[String]) -> String {
        let mut out = String::new();
        self.write_source(coords, &mut out);
        out
    }

    fn write_child(child: &Expr, coords: &[String], parens: bool, out: &mut String) {
        if parens {
            out.push('(');
        }
        child.write_source(coords, out);
        if parens {
            out.push(')');
        }
    }

    fn write_source(&self, coords: &[String], out: &mut String) {
        match self {
            Expr::Num(v) => {
                let _ = write!(out, "{v}");
            }
            Expr::Var(i) => out.push_str(coords.get(*i).map_or("?", String::as_str)),
            Expr::Neg(inner) => {
                out.push('-');
                Expr::write_child(inner, coords, precedence(inner) < 3, out);
            }
            Expr::Call(f, arg) => {
                out.push_str(f.name());
                Expr::write_child(arg, coords, true, out);
            }
            Expr::Binary(op, lhs, rhs) => {
                let p = precedence(self);
                let (left_parens, right_parens) = if *op == BinOp::Pow {
                    (precedence(lhs) <= 4, precedence(rhs) < 3)
                } else {
                    (precedence(lhs) < p, precedence(rhs) <= p)
                };
                Expr::write_child(lhs, coords, left_parens, out);
                let _ = write!(out, " {} ", op.symbol());
                Expr::write_child(rhs, coords, right_parens, out);
            }
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) | Expr::Call(_, a) => a.max_var(),
            Expr::Binary(_, a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Exponent usable for repeated squaring: an integer literal, possibly negated.
    fn integer_exponent(&self) -> Option<i64> {
        let as_int = |v: f64| (v.fract() == 0.0 && v.abs() <= 1e9).then_some(v as i64);
        match self {
            Expr::Num(v) => as_int(*v),
            Expr::Neg(inner) => match inner.as_ref() {
                Expr::Num(v) => as_int(*v).map(|k| -k),
                _ => None,
            },
            _ => None,
        }
    }

    /// Plain pointwise evaluation; agrees with the constant term of
    /// [`Expr::eval_jet`].
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        if let Some(i) = self.max_var() {
            if i >= point.len() {
                return Err(EvalError::PointDimension {
                    expected: i + 1,
                    got: point.len(),
                });
            }
        }
        self.eval_unchecked(point)
    }

    fn eval_unchecked(&self, point: &[f64]) -> Result<f64, EvalError> {
        let value = match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => point[*i],
            Expr::Neg(a) => -a.eval_unchecked(point)?,
            Expr::Call(f, a) => f.analytic().apply(a.eval_unchecked(point)?)?,
            Expr::Binary(op, a, b) => {
                let lhs = a.eval_unchecked(point)?;
                match op {
                    BinOp::Add => lhs + b.eval_unchecked(point)?,
                    BinOp::Sub => lhs - b.eval_unchecked(point)?,
                    BinOp::Mul => lhs * b.eval_unchecked(point)?,
                    BinOp::Div => lhs * Analytic::Recip.apply(b.eval_unchecked(point)?)?,
                    BinOp::Pow => match b.integer_exponent() {
                        Some(k) => powi_scalar(lhs, k)?,
                        None => {
                            let log = Analytic::Log.apply(lhs)?;
                            Analytic::Exp.apply(b.eval_unchecked(point)? * log)?
                        }
                    },
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::Domain(JetError::NonFinite("evaluation")))
        }
    }

    /// Degree-`order` Taylor jet of the expression at `base_point`.
    pub fn eval_jet(&self, base_point: &[f64], order: usize) -> Result<Jet, EvalError> {
        let space = JetSpace::new(base_point.len(), order);
        let vars = base_point
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(&space, i, v))
            .collect::<Result<Vec<_>, _>>()?;
        self.eval_jet_with(&space, &vars)
    }

    /// Like [`Expr::eval_jet`] with the coordinate jets supplied by the caller.
    pub fn eval_jet_with(&self, space: &JetSpace, vars: &[Jet]) -> Result<Jet, EvalError> {
        if let Some(i) = self.max_var() {
            if i >= vars.len() {
                return Err(EvalError::PointDimension {
                    expected: i + 1,
                    got: vars.len(),
                });
            }
        }
        self.jet_rec(space, vars)
    }

    fn jet_rec(&self, space: &JetSpace, vars: &[Jet]) -> Result<Jet, EvalError> {
        Ok(match self {
            Expr::Num(v) => Jet::constant(space, *v),
            Expr::Var(i) => vars[*i].clone(),
            Expr::Neg(a) => a.jet_rec(space, vars)?.scale(-1.0),
            Expr::Call(f, a) => a.jet_rec(space, vars)?.compose(f.analytic())?,
            Expr::Binary(op, a, b) => {
                let lhs = a.jet_rec(space, vars)?;
                match op {
                    BinOp::Add => lhs.checked_add(&b.jet_rec(space, vars)?)?,
                    BinOp::Sub => lhs.checked_sub(&b.jet_rec(space, vars)?)?,
                    BinOp::Mul => lhs.checked_mul(&b.jet_rec(space, vars)?)?,
                    BinOp::Div => lhs.checked_div(&b.jet_rec(space, vars)?)?,
                    BinOp::Pow => match b.integer_exponent() {
                        Some(k) => lhs.powi(k)?,
                        None => {
                            let log = lhs.compose(Analytic::Log)?;
                            b.jet_rec(space, vars)?
                                .checked_mul(&log)?
                                .compose(Analytic::Exp)?
                        }
                    },
                }
            }
        })
    }
}

fn powi_scalar(base: f64, exponent: i64) -> Result<f64, EvalError> {
    let base = if exponent < 0 {
        Analytic::Recip.apply(base)?
    } else {
        base
    };
    let mut result = 1.0;
    let mut b = base;
    let mut e = exponent.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= b;
        }
        e >>= 1;
        if e > 0 {
            b *= b;
        }
    }
    Ok(result)
}
