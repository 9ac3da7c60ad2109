//! A small arithmetic language for user-defined nonlinearity functions `f(n)`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right associative, exponent free of n
//! primary := number | 'n' | func '(' expr ')' | '(' expr ')'
//! func    := sqrt | ln | exp | gamma
//! ```
//!
//! Numbers are decimals with optional fraction and exponent (`2.5e-1`).

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;


use crate::nonlinearity::{Kind, NonlinearityFunction};
use crate::Error;

pub const DEFAULT_PROBE_MAX: usize = 512;
/// Number of trailing probes used by the convergence-radius estimate.
pub const RADIUS_WINDOW: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TokenKind {
    Number(f64),
    Ident,
    Operator(char),
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Byte offset of the first character.
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Ln,
    Exp,
    Gamma,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            "gamma" => Func::Gamma,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Gamma => "gamma",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    N,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprError {
    Lex { offset: usize, found: char },
    UnexpectedToken { offset: usize, found: String },
    UnexpectedEnd { offset: usize },
    UnbalancedParen { offset: usize },
    UnknownIdentifier { offset: usize, name: String },
    NonConstantExponent { offset: usize },
    Eval(&'static str),
    /// Probed indices where `f(n) <= 0`.
    Positivity { indices: Vec<usize> },
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Lex { offset, found } => write!(f, "lex error at offset {offset}: unexpected character {found:?}"),
            ExprError::UnexpectedToken { offset, found } => {
                write!(f, "parse error at offset {offset}: unexpected token {found:?}")
            }
            ExprError::UnexpectedEnd { offset } => write!(f, "parse error at offset {offset}: unexpected end of input"),
            ExprError::UnbalancedParen { offset } => write!(f, "parse error at offset {offset}: unbalanced parenthesis"),
            ExprError::UnknownIdentifier { offset, name } => {
                write!(f, "parse error at offset {offset}: unknown identifier {name:?}")
            }
            ExprError::NonConstantExponent { offset } => {
                write!(f, "parse error at offset {offset}: exponent of '^' must not depend on n")
            }
            ExprError::Eval(what) => write!(f, "evaluation error: {what}"),
            ExprError::Positivity { indices } => write!(f, "f(n) is not strictly positive at n = {indices:?}"),
        }
    }
}

impl core::error::Error for ExprError {}

/// Splits `src` into tokens, skipping whitespace.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let single = |kind| Token { kind, text: (b as char).to_string(), offset: start };
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                tokens.push(single(TokenKind::Operator(b as char)));
                i += 1;
            }
            b'(' => {
                tokens.push(single(TokenKind::LParen));
                i += 1;
            }
            b')' => {
                tokens.push(single(TokenKind::RParen));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let digits = |mut j: usize| {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    j
                };
                i = digits(i);
                if i < bytes.len() && bytes[i] == b'.' {
                    i = digits(i + 1);
                }
                if i - start == 1 && b == b'.' {
                    return Err(ExprError::Lex { offset: start, found: '.' });
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = digits(j);
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ExprError::Lex { offset: start, found: b as char })?;
                tokens.push(Token { kind: TokenKind::Number(value), text: text.into(), offset: start });
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token { kind: TokenKind::Ident, text: src[start..i].into(), offset: start });
            }
            _ => {
                let found = src[start..].chars().next().unwrap_or('\u{fffd}');
                return Err(ExprError::Lex { offset: start, found });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<&'a Token, ExprError> {
        let t = self.tokens.get(self.pos).ok_or(ExprError::UnexpectedEnd { offset: self.end })?;
        self.pos += 1;
        Ok(t)
    }

    fn peek_binop(&self) -> Option<BinOp> {
        match self.peek()?.kind {
            TokenKind::Operator('+') => Some(BinOp::Add),
            TokenKind::Operator('-') => Some(BinOp::Sub),
            TokenKind::Operator('*') => Some(BinOp::Mul),
            TokenKind::Operator('/') => Some(BinOp::Div),
            _ => None,
        }
    }

    // precedence climbing over the left-associative levels
    fn expr(&mut self, min_prec: u8) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek_binop() {
            if op.precedence() < min_prec {
                break;
            }
            self.pos += 1;
            let rhs = self.expr(op.precedence() + 1)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if let Some(Token { kind: TokenKind::Operator('-'), .. }) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if let Some(t @ Token { kind: TokenKind::Operator('^'), .. }) = self.peek() {
            self.pos += 1;
            let exponent = self.unary()?;
            if exponent.depends_on_n() {
                return Err(ExprError::NonConstantExponent { offset: t.offset });
            }
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let t = self.next()?;
        match t.kind {
            TokenKind::Number(v) => Ok(Expr::Const(v)),
            TokenKind::Ident if t.text == "n" => Ok(Expr::N),
            TokenKind::Ident => {
                let func = Func::from_name(&t.text)
                    .ok_or_else(|| ExprError::UnknownIdentifier { offset: t.offset, name: t.text.clone() })?;
                match self.next()? {
                    Token { kind: TokenKind::LParen, .. } => {}
                    other => return Err(unexpected(other)),
                }
                let arg = self.expr(0)?;
                self.close_paren(t.offset)?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            TokenKind::LParen => {
                let inner = self.expr(0)?;
                self.close_paren(t.offset)?;
                Ok(inner)
            }
            TokenKind::RParen => Err(ExprError::UnbalancedParen { offset: t.offset }),
            TokenKind::Operator(_) => Err(unexpected(t)),
        }
    }

    fn close_paren(&mut self, open: usize) -> Result<(), ExprError> {
        match self.peek() {
            Some(Token { kind: TokenKind::RParen, .. }) => {
                self.pos += 1;
                Ok(())
            }
            Some(other) => Err(unexpected(other)),
            None => Err(ExprError::UnbalancedParen { offset: open }),
        }
    }
}

fn unexpected(t: &Token) -> ExprError {
    ExprError::UnexpectedToken { offset: t.offset, found: t.text.clone() }
}

/// Builds an expression tree from a token stream.
pub fn parse(tokens: &[Token]) -> Result<Expr, ExprError> {
    let end = tokens.last().map_or(0, |t| t.offset + t.text.len());
    let mut p = Parser { tokens, pos: 0, end };
    let expr = p.expr(0)?;
    match p.peek() {
        None => Ok(expr),
        Some(t @ Token { kind: TokenKind::RParen, .. }) => Err(ExprError::UnbalancedParen { offset: t.offset }),
        Some(t) => Err(unexpected(t)),
    }
}

/// Tokenizes and parses.
pub fn parse_str(src: &str) -> Result<Expr, ExprError> {
    parse(&tokenize(src)?)
}

fn finite(v: f64) -> Result<f64, ExprError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ExprError::Eval("non-finite intermediate value"))
    }
}

impl Expr {
    pub fn depends_on_n(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::N => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_n(),
            Expr::Binary(_, a, b) => a.depends_on_n() || b.depends_on_n(),
        }
    }

    /// Evaluates at `n`, failing on any non-finite intermediate.
    pub fn eval(&self, n: f64) -> Result<f64, ExprError> {
        match self {
            Expr::Const(v) => finite(*v),
            Expr::N => finite(n),
            Expr::Neg(e) => Ok(-e.eval(n)?),
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(n)?, b.eval(n)?);
                match op {
                    BinOp::Add => finite(a + b),
                    BinOp::Sub => finite(a - b),
                    BinOp::Mul => finite(a * b),
                    BinOp::Div if b == 0.0 => Err(ExprError::Eval("division by zero")),
                    BinOp::Div => finite(a / b),
                    BinOp::Pow => finite(a.powf(b)),
                }
            }
            Expr::Call(func, e) => {
                let x = e.eval(n)?;
                match func {
                    Func::Sqrt if x < 0.0 => Err(ExprError::Eval("sqrt of negative")),
                    Func::Sqrt => finite(x.sqrt()),
                    Func::Ln if x <= 0.0 => Err(ExprError::Eval("ln of nonpositive")),
                    Func::Ln => finite(x.ln()),
                    Func::Exp => finite(x.exp()),
                    Func::Gamma if x <= 0.0 && x.fract() == 0.0 => Err(ExprError::Eval("gamma at nonpositive integer")),
                    Func::Gamma => finite(crate::special::gamma(x)),
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            _ => 5,
        }
    }
}

/// Prints with the minimum parentheses needed to re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool| {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::N => f.write_str("n"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, e.precedence() < 3)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                if *op == BinOp::Pow {
                    // base must be a primary; exponent may be any unary or power
                    wrap(f, a, a.precedence() <= p)?;
                    write!(f, "^")?;
                    wrap(f, b, b.precedence() < 3)
                } else {
                    wrap(f, a, a.precedence() < p)?;
                    write!(f, " {} ", op.symbol())?;
                    wrap(f, b, b.precedence() <= p)
                }
            }
        }
    }
}

/// Compiles `src` into a nonlinearity function, probing `n = 1..=probe_max`.
///
/// The safe range ends at the last index before the first non-finite value;
/// any nonpositive value inside that range is rejected. The convergence radius
/// is the limit of `sqrt(n) f(n)` (the ratio test on `alpha^n / (sqrt(n!) [f(n)]!)`),
/// extrapolated linearly in `1/n` over the last [`RADIUS_WINDOW`] probes and set to
/// infinity when it grows like a power of `n`.
pub fn compile_expr(src: &str, probe_max: usize) -> Result<NonlinearityFunction, Error> {
    if probe_max < 1 {
        return Err(Error::InvalidParameter("probe_max must be at least 1"));
    }
    let expr = parse_str(src)?;
    let mut values = Vec::with_capacity(probe_max);
    for n in 1..=probe_max {
        match expr.eval(n as f64) {
            Ok(v) => values.push(v),
            Err(e) if n == 1 => return Err(e.into()),
            Err(_) => break,
        }
    }
    let bad: Vec<usize> = values.iter().enumerate().filter(|(_, v)| **v <= 0.0).map(|(i, _)| i + 1).collect();
    if !bad.is_empty() {
        return Err(ExprError::Positivity { indices: bad }.into());
    }
    let n_cap = values.len();
    let radius = estimate_radius(&values);
    Ok(NonlinearityFunction::new(Kind::Expr(Arc::new(expr)), format!("expr({})", src.trim()), radius, Some(n_cap)))
}

fn estimate_radius(values: &[f64]) -> f64 {
    let start = values.len().saturating_sub(RADIUS_WINDOW);
    let pts: Vec<(f64, f64)> = values[start..]
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let n = (start + i + 1) as f64;
            (n, n.sqrt() * v)
        })
        .collect();
    let (n0, r0) = pts[0];
    let (n1, r1) = pts[pts.len() - 1];
    if pts.len() < 2 {
        return r1;
    }
    let slope = (r1 / r0).ln() / (n1 / n0).ln();
    if slope > 0.1 {
        return f64::INFINITY;
    }
    if slope < -0.1 {
        return 0.0;
    }
    // least squares r = R + b / n
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), &(n, r)| (sx + 1.0 / n, sy + r));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(sxy, sxx), &(n, r)| {
        let dx = 1.0 / n - mx;
        (sxy + dx * (r - my), sxx + dx * dx)
    });
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - b * mx).max(0.0)
}
