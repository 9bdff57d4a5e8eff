//! Recursive-descent parser for series expressions.
//!
//! ```text
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := nat ('/' nat)? | 'i' | var | '(' expr ')' | '[' expr ',' expr ']'
//! var    := 'x' nat | 'y' nat
//! ```
//!
//! `*` is noncommutative concatenation and `[a,b]` is `a*b - b*a`.
//! Variables `y<k>` are only available when the alphabet reserves them; they
//! are numbered after the `x` letters.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::coeff::{Rational, Scalar};
use crate::error::Result;
use crate::series::NCSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {}: {message}", .position + 1)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

/// Split of the letters into `x1..x{x}` followed by `y1..y{y}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    pub x: usize,
    pub y: usize,
}

impl Alphabet {
    pub fn plain(n: usize) -> Self {
        Alphabet { x: n, y: 0 }
    }

    pub fn n(&self) -> usize {
        self.x + self.y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Scalar(Scalar),
    Var(u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Commutator(Box<Expr>, Box<Expr>),
}

/// Result of evaluating an expression at a truncation degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub series: NCSeries,
    /// Some product produced words longer than the truncation degree.
    pub truncated: bool,
}

impl Expr {
    pub fn eval(&self, n: usize, degree: usize) -> Parsed {
        let mut truncated = false;
        let series = self.eval_inner(n, degree, &mut truncated);
        Parsed { series, truncated }
    }

    fn eval_inner(&self, n: usize, d: usize, truncated: &mut bool) -> NCSeries {
        let mul = |a: &NCSeries, b: &NCSeries, truncated: &mut bool| {
            if let (Some(x), Some(y)) = (a.max_word_len(), b.max_word_len()) {
                if x + y > d {
                    *truncated = true;
                }
            }
            a * b
        };
        match self {
            Expr::Scalar(c) => NCSeries::constant(n, d, c.clone()),
            Expr::Var(k) => {
                if d == 0 {
                    *truncated = true;
                }
                NCSeries::variable(n, d, *k).expect("letters validated while parsing")
            }
            Expr::Neg(a) => -&a.eval_inner(n, d, truncated),
            Expr::Add(a, b) => &a.eval_inner(n, d, truncated) + &b.eval_inner(n, d, truncated),
            Expr::Sub(a, b) => &a.eval_inner(n, d, truncated) - &b.eval_inner(n, d, truncated),
            Expr::Mul(a, b) => {
                let (a, b) = (a.eval_inner(n, d, truncated), b.eval_inner(n, d, truncated));
                mul(&a, &b, truncated)
            }
            Expr::Pow(a, e) => {
                let base = a.eval_inner(n, d, truncated);
                let mut acc = NCSeries::one(n, d);
                for _ in 0..*e {
                    acc = mul(&acc, &base, truncated);
                }
                acc
            }
            Expr::Commutator(a, b) => {
                let (a, b) = (a.eval_inner(n, d, truncated), b.eval_inner(n, d, truncated));
                let ab = mul(&a, &b, truncated);
                let ba = mul(&b, &a, truncated);
                &ab - &ba
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Nat(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(text: &str) -> std::result::Result<Self, ParseError> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Nat(text[start..i].parse().expect("digits")), start));
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            } else if "+-*/^()[],".contains(c) {
                toks.push((Tok::Sym(c), i));
                i += 1;
            } else {
                let ch = text[i..].chars().next().unwrap_or(c);
                return Err(ParseError { position: i, message: format!("unexpected character {ch:?}") });
            }
        }
        toks.push((Tok::End, text.len()));
        Ok(Lexer { toks })
    }
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    alphabet: Alphabet,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { position: self.offset(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}', found {}", describe(self.peek())))
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
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

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> PResult<Expr> {
        let base = self.base()?;
        if self.eat('^') {
            let at = self.offset();
            match self.bump() {
                Tok::Nat(k) => {
                    let e = u32::try_from(&k)
                        .map_err(|_| ParseError { position: at, message: "exponent too large".into() })?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                t => {
                    return Err(ParseError { position: at, message: format!("expected exponent, found {}", describe(&t)) });
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> PResult<Expr> {
        let at = self.offset();
        match self.bump() {
            Tok::Nat(num) => {
                if self.eat('/') {
                    let at_den = self.offset();
                    match self.bump() {
                        Tok::Nat(den) if !den.is_zero() => Ok(Expr::Scalar(Scalar::real(Rational::new(num, den)))),
                        Tok::Nat(_) => Err(ParseError { position: at_den, message: "zero denominator".into() }),
                        t => Err(ParseError { position: at_den, message: format!("expected denominator, found {}", describe(&t)) }),
                    }
                } else {
                    Ok(Expr::Scalar(Scalar::real(Rational::from_integer(num))))
                }
            }
            Tok::Ident(name) => self.variable(&name, at),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            t => Err(ParseError { position: at, message: format!("expected a scalar, variable or '(', found {}", describe(&t)) }),
        }
    }

    fn variable(&self, name: &str, at: usize) -> PResult<Expr> {
        if name == "i" {
            return Ok(Expr::Scalar(Scalar::i()));
        }
        let unknown = || ParseError { position: at, message: format!("unknown variable {name:?}") };
        let (kind, idx) = name.split_at(1);
        let k: usize = idx.parse().map_err(|_| unknown())?;
        let (count, offset) = match kind {
            "x" => (self.alphabet.x, 0),
            "y" => (self.alphabet.y, self.alphabet.x),
            _ => return Err(unknown()),
        };
        if k == 0 || k > count || idx.starts_with('0') {
            return Err(unknown());
        }
        Ok(Expr::Var((offset + k) as u32))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Nat(n) => format!("number {n}"),
        Tok::Ident(s) => format!("{s:?}"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".into(),
    }
}

pub fn parse_expr(text: &str, alphabet: Alphabet) -> std::result::Result<Expr, ParseError> {
    let lexer = Lexer::new(text)?;
    let mut p = Parser { toks: &lexer.toks, pos: 0, alphabet };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err(format!("unexpected {}", describe(p.peek())));
    }
    Ok(e)
}

/// Parses and expands `text` at truncation degree `degree`.
pub fn parse_expression(text: &str, alphabet: Alphabet, degree: usize) -> Result<Parsed> {
    Ok(parse_expr(text, alphabet)?.eval(alphabet.n(), degree))
}

/// Parses over the plain alphabet `x1..xn`, discarding the truncation notice.
pub fn parse_series(text: &str, n: usize, degree: usize) -> Result<NCSeries> {
    Ok(parse_expression(text, Alphabet::plain(n), degree)?.series)
}

/// A constant expression such as `3/4`, `-2*i` or `1/2+3/4*i`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let s = parse_series(text, 0, 0)?;
    Ok(s.constant_term())
}

/// Comma-separated constant expressions: `2,3` or `1/2,-1+i`.
pub fn parse_point(text: &str) -> Result<Vec<Scalar>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_scalar).collect()
}
