//! Polynomial expressions over a chart.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := ("+" | "-") factor | power
//! power  := atom ("^" integer)?
//! atom   := number | identifier | "(" expr ")"
//! ```
//!
//! Numbers are exact: `0.25` is 1/4 and `1.5e-3` is 3/2000. Identifiers are
//! chart labels, chart parameters, `hbar` and the imaginary unit `i`. Division
//! is only allowed by nonzero constants.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use pseudoquant_core::symcore::{ChartRef, Poly, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
    pub source: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} at column {}", self.message, self.column)?;
        writeln!(f, "  {}", self.source)?;
        write!(f, "  {}^", " ".repeat(self.column.saturating_sub(1)))
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Lexer, (usize, String)> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let start = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(k + 1).is_some_and(char::is_ascii_digit)) {
            let (value, next) = number(&chars, k).map_err(|m| (start, m))?;
            toks.push((Tok::Num(value), start));
            k = next;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = k;
            while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_') {
                end += 1;
            }
            toks.push((Tok::Ident(chars[k..end].iter().collect()), start));
            k = end;
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), start));
            k += 1;
        } else {
            return Err((start, format!("unexpected character `{c}`")));
        }
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(Lexer { toks })
}

fn digits(chars: &[char], mut k: usize) -> (String, usize) {
    let mut s = String::new();
    while k < chars.len() && chars[k].is_ascii_digit() {
        s.push(chars[k]);
        k += 1;
    }
    (s, k)
}

fn number(chars: &[char], k: usize) -> Result<(BigRational, usize), String> {
    let (int_part, mut k) = digits(chars, k);
    let mut frac = String::new();
    if chars.get(k) == Some(&'.') {
        let (f, next) = digits(chars, k + 1);
        frac = f;
        k = next;
    }
    let mut exp: i64 = 0;
    if matches!(chars.get(k), Some('e' | 'E')) {
        let mut j = k + 1;
        let negative = chars.get(j) == Some(&'-');
        if matches!(chars.get(j), Some('+' | '-')) {
            j += 1;
        }
        let (e, next) = digits(chars, j);
        if e.is_empty() {
            return Err("malformed exponent in number".into());
        }
        exp = e.parse::<i64>().map_err(|_| "exponent too large".to_string())?;
        if negative {
            exp = -exp;
        }
        k = next;
    }
    let mantissa: BigInt = format!("{int_part}{frac}").parse().map_err(|_| "malformed number".to_string())?;
    let shift = exp - frac.len() as i64;
    if shift.unsigned_abs() > 10_000 {
        return Err("exponent too large".into());
    }
    let ten = BigInt::from(10u32);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let value = if shift >= 0 {
        BigRational::from_integer(mantissa * scale)
    } else {
        BigRational::new(mantissa, scale)
    };
    Ok((value, k))
}

struct Parser<'a> {
    chart: &'a ChartRef,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

type PResult<T> = Result<T, (usize, String)>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> PResult<Poly> {
        let mut acc = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> PResult<Poly> {
        let mut acc = self.factor()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            let col = self.bump().1;
            let rhs = self.factor()?;
            if c == '*' {
                acc = &acc * &rhs;
            } else {
                let Some(d) = rhs.as_constant() else {
                    return Err((col, "division by a non-constant expression".into()));
                };
                let Some(inv) = d.recip() else {
                    return Err((col, "division by zero".into()));
                };
                acc = acc.scale(&inv);
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<Poly> {
        match *self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-self.factor()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Poly> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let col = self.column();
        match self.bump().0 {
            Tok::Num(n) if n.is_integer() && n >= BigRational::zero() => {
                let e: u32 = n.to_integer().try_into().map_err(|_| (col, "exponent too large".to_string()))?;
                Ok(base.pow(e))
            }
            _ => Err((col, "exponent must be a non-negative integer".into())),
        }
    }

    fn atom(&mut self) -> PResult<Poly> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Poly::constant(self.chart, Scalar::real(v))),
            Tok::Ident(name) => {
                if name == "i" {
                    return Ok(Poly::constant(self.chart, Scalar::i()));
                }
                match self.chart.lookup(&name) {
                    Some(v) => Ok(Poly::var(self.chart, v).expect("looked up on this chart")),
                    None => Err((col, format!("unknown symbol `{name}`"))),
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if *self.peek() != Tok::Op(')') {
                    return Err((self.column(), "expected `)`".into()));
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err((col, "unexpected end of input".into())),
            Tok::Op(c) => Err((col, format!("unexpected `{c}`"))),
        }
    }
}

/// Parses `src` as a polynomial on `chart`.
pub fn parse_poly(chart: &ChartRef, src: &str) -> Result<Poly, ParseError> {
    let fail = |(column, message): (usize, String)| ParseError { column, message, source: src.to_string() };
    let lexer = lex(src).map_err(fail)?;
    let mut p = Parser { chart, toks: lexer.toks, pos: 0 };
    let out = p.expr().map_err(fail)?;
    match p.peek() {
        Tok::End => Ok(out),
        _ => Err(fail((p.column(), "expected an operator".into()))),
    }
}

/// Parses a real number exactly (same number syntax as expressions, with an
/// optional sign and an optional `a/b` form).
pub fn parse_rational(src: &str) -> Result<BigRational, ParseError> {
    let chart = pseudoquant_core::symcore::ChartSpec::cotangent(1);
    let p = parse_poly(&chart, src)?;
    let err = |message: &str| ParseError { column: 1, message: message.into(), source: src.to_string() };
    let c = p.as_constant().ok_or_else(|| err("expected a number"))?;
    if !c.is_real() {
        return Err(err("expected a real number"));
    }
    Ok(c.re)
}
