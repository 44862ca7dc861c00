//! Canonical text form of polynomials and the infix expression parser
//! shared by spec files, `--g` arguments and F-files.

use super::poly::{MPoly, Poly, Vars, ZPoly};
use super::ratfunc::RatFunc;
use super::{AlgebraError, ParseError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

fn write_poly(f: &mut fmt::Formatter<'_>, p: &MPoly) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (m, c)) in p.terms_desc().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let a = c.abs();
        let mut factors: Vec<String> = Vec::new();
        if m.is_one() || !a.is_one() {
            factors.push(a.to_string());
        }
        for (v, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(p.vars().name(v).to_string()),
                _ => factors.push(format!("{}^{}", p.vars().name(v), e)),
            }
        }
        write!(f, "{}", factors.join("*"))?;
    }
    Ok(())
}

impl fmt::Display for Poly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self)
    }
}

impl fmt::Display for Poly<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.to_q())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                return Err(ParseError::new(
                    line,
                    col0 + i,
                    "decimal literals are not accepted; write a rational a/b",
                ));
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Num(s.parse().unwrap()), col });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else if "+-*/^()".contains(c) {
            out.push(Token { tok: Tok::Op(c), col });
            i += 1;
        } else {
            return Err(ParseError::new(line, col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: &'a Vars,
    line: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.end_col)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let col = self.col();
            let rhs = self.unary()?;
            acc = if op == '*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).ok_or_else(|| ParseError::new(self.line, col, "division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let col = self.col();
            let neg = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.peek().cloned() {
                Some(Tok::Num(n)) if !neg => {
                    self.pos += 1;
                    let e = n
                        .to_u32()
                        .filter(|&e| e <= 1000)
                        .ok_or_else(|| ParseError::new(self.line, col, "exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(ParseError::new(self.line, col, "exponent must be a non-negative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(self.vars, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.vars.index(&name) {
                    self.pos += 1;
                    Ok(RatFunc::from_poly(MPoly::var(self.vars, i)))
                } else if name == "i" {
                    Err(self.err(
                        "complex constant 'i' is not allowed in expressions; use the exp class and set 'mu: i' for trigonometric functions",
                    ))
                } else {
                    let allowed = self.vars.names().join(", ");
                    Err(self.err(format!("unknown symbol '{name}' (allowed: {allowed})")))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some(Tok::Op(c)) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parse an infix rational expression over `vars`. `line`/`col0` locate the
/// text inside an enclosing file for error messages (both 1-based).
pub fn parse_ratfunc_at(
    text: &str,
    vars: &Vars,
    line: usize,
    col0: usize,
) -> Result<RatFunc, ParseError> {
    let toks = tokenize(text, line, col0)?;
    let end_col = col0 + text.chars().count();
    let mut parser = Parser { toks, pos: 0, vars, line, end_col };
    if parser.peek().is_none() {
        return Err(parser.err("empty expression"));
    }
    let value = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(value.reduced())
}

pub fn parse_ratfunc(text: &str, vars: &Vars) -> Result<RatFunc, ParseError> {
    parse_ratfunc_at(text, vars, 1, 1)
}

/// Parse a polynomial; divisions are allowed only by nonzero constants.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<MPoly, AlgebraError> {
    let rf = parse_ratfunc(text, vars)?;
    match rf.den.constant_value() {
        Some(c) if !c.is_zero() => Ok(rf.num.scale(&(BigRational::one() / c))),
        _ => Err(AlgebraError::Parse(ParseError::new(1, 1, "expression is not a polynomial"))),
    }
}

impl ZPoly {
    pub fn parse(text: &str, vars: &Vars) -> Result<ZPoly, AlgebraError> {
        Ok(parse_poly(text, vars)?.to_primitive_z())
    }
}

impl serde::Serialize for Poly<BigRational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
