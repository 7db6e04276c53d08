//! Recursive-descent parser for chart expressions.
//!
//! Grammar: `+ - * /`, `^` with a nonnegative literal integer exponent,
//! parentheses, integer literals, variable names. Rationals are written as
//! quotients (`1/2`); negative powers are written with `/`. Whitespace is
//! insignificant. Anything else (floats, functions, implicit products) is a
//! syntax error with a byte position.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::vars::Vars;
use super::{ExprError, Expression};

const MAX_EXPONENT: u32 = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedEnd,
    UnexpectedChar(char),
    UnknownVariable(String),
    BadExponent,
    DivisionByZero,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable {v:?}"),
            ParseErrorKind::BadExponent => {
                write!(
                    f,
                    "exponent must be a literal integer in 0..={MAX_EXPONENT}"
                )
            }
            ParseErrorKind::DivisionByZero => {
                write!(f, "division by an expression that is identically zero")
            }
        }
    }
}

impl std::error::Error for ParseError {}

pub fn parse_expression(src: &str, vars: &Vars) -> Result<Expression, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        vars,
    };
    let e = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(e),
        Some(c) => Err(p.err_here(ParseErrorKind::UnexpectedChar(c))),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).map(|&b| b as char)
    }

    fn skip_ws(&mut self) {
        while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some('/') => {
                    let at = self.pos;
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|e| {
                        debug_assert_eq!(e, ExprError::DivisionByZero);
                        ParseError {
                            offset: at,
                            kind: ParseErrorKind::DivisionByZero,
                        }
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        self.skip_ws();
        if self.peek() == Some('-') {
            self.pos += 1;
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let mut base = self.primary()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('^') {
                return Ok(base);
            }
            self.pos += 1;
            self.skip_ws();
            let e = self.exponent()?;
            base = base.pow(e);
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError {
                offset: start,
                kind: ParseErrorKind::BadExponent,
            });
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match digits.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => Err(ParseError {
                offset: start,
                kind: ParseErrorKind::BadExponent,
            }),
        }
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err_here(ParseErrorKind::UnexpectedEnd)),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    Ok(e)
                } else if self.peek().is_none() {
                    Err(self.err_here(ParseErrorKind::UnexpectedEnd))
                } else {
                    Err(self.err_here(ParseErrorKind::UnexpectedChar(self.peek().unwrap())))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits = &self.src[start..self.pos];
                let n = BigInt::parse_bytes(digits, 10).unwrap();
                Ok(Expression::constant(
                    self.vars,
                    BigRational::from_integer(n),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.src.get(self.pos), Some(&b) if (b as char).is_ascii_alphanumeric() || b == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.index_of(name) {
                    Some(i) => Ok(Expression::variable(self.vars, i)),
                    None => Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UnknownVariable(name.to_string()),
                    }),
                }
            }
            Some(c) => Err(self.err_here(ParseErrorKind::UnexpectedChar(c))),
        }
    }
}
