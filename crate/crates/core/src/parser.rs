//! Text forms of integer polynomials.
//!
//! Two grammars are accepted:
//!
//! ```text
//! poly := sign? mono (sign mono)*
//! mono := int ('*'? 'x' ('^' nat)?)? | 'x' ('^' nat)?
//! ```
//!
//! with optional whitespace between tokens, or a bracketed ascending
//! coefficient list `[c0, c1, ..., cd]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;
use crate::polyz::PolyZ;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(c) if c.is_alphabetic() && c != 'x' => ParseError::UnknownVariable {
                offset: self.pos,
                found: c,
            },
            Some(c) => self.error(format!("expected {expected}, found '{c}'")),
            None => self.error(format!("expected {expected}, found end of input")),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn at_var(&self) -> bool {
        self.peek() == Some('x')
    }
}

/// Parses either grammar into an exact polynomial.
pub fn parse_poly(src: &str) -> Result<PolyZ, ParseError> {
    let mut cur = Cursor::new(src);
    cur.skip_ws();
    match cur.peek() {
        None => Err(ParseError::Empty),
        Some('[') => parse_list(&mut cur),
        Some(_) => parse_expr(&mut cur),
    }
}

fn parse_list(cur: &mut Cursor) -> Result<PolyZ, ParseError> {
    cur.pos += 1;
    let mut coeffs = Vec::new();
    if cur.eat(']') {
        return finish(cur, PolyZ::zero());
    }
    loop {
        cur.skip_ws();
        let negative = if cur.peek() == Some('-') {
            cur.pos += 1;
            true
        } else {
            if cur.peek() == Some('+') {
                cur.pos += 1;
            }
            false
        };
        let digits = cur.digits().ok_or_else(|| cur.unexpected("an integer"))?;
        let v: BigInt = digits.parse().unwrap();
        coeffs.push(if negative { -v } else { v });
        if cur.eat(',') {
            continue;
        }
        if cur.eat(']') {
            break;
        }
        cur.skip_ws();
        return Err(cur.unexpected("',' or ']'"));
    }
    finish(cur, PolyZ::new(coeffs))
}

fn finish(cur: &mut Cursor, f: PolyZ) -> Result<PolyZ, ParseError> {
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(f)
}

fn parse_expr(cur: &mut Cursor) -> Result<PolyZ, ParseError> {
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut first = true;
    loop {
        cur.skip_ws();
        let sign = match cur.peek() {
            Some('+') => {
                cur.pos += 1;
                Some(false)
            }
            Some('-') => {
                cur.pos += 1;
                Some(true)
            }
            _ => None,
        };
        if sign.is_none() && !first {
            if cur.peek().is_none() {
                break;
            }
            return Err(cur.unexpected("'+' or '-'"));
        }
        first = false;
        cur.skip_ws();
        let (c, k) = parse_mono(cur)?;
        let c = if sign == Some(true) { -c } else { c };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigInt::zero());
        }
        coeffs[k] += c;
        cur.skip_ws();
        if cur.peek().is_none() {
            break;
        }
    }
    Ok(PolyZ::new(coeffs))
}

fn parse_mono(cur: &mut Cursor) -> Result<(BigInt, usize), ParseError> {
    let coeff = match cur.digits() {
        Some(d) => {
            let c: BigInt = d.parse().unwrap();
            cur.skip_ws();
            if cur.peek() == Some('*') {
                cur.pos += 1;
                cur.skip_ws();
                if !cur.at_var() {
                    return Err(cur.unexpected("'x'"));
                }
            } else if !cur.at_var() {
                return Ok((c, 0));
            }
            c
        }
        None if cur.at_var() => BigInt::one(),
        None => return Err(cur.unexpected("a monomial")),
    };
    cur.pos += 1; // 'x'
    if cur.eat('^') {
        cur.skip_ws();
        let digits = cur.digits().ok_or_else(|| cur.unexpected("an exponent"))?;
        let k: usize = digits
            .parse()
            .map_err(|_| cur.error("exponent too large"))?;
        if k > 1 << 24 {
            return Err(cur.error("exponent too large"));
        }
        return Ok((coeff, k));
    }
    Ok((coeff, 1))
}

/// Canonical descending-degree rendering, e.g. `97x^4+76x^3+78x^2+4x+2`.
pub fn format_poly(f: &PolyZ) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let a = c.abs();
        if k == 0 || !a.is_one() {
            out.push_str(&a.to_string());
        }
        match k {
            0 => {}
            1 => out.push('x'),
            _ => {
                out.push_str("x^");
                out.push_str(&k.to_string());
            }
        }
    }
    out
}

/// Ascending coefficient list form `[c0,c1,...,cd]`.
pub fn format_list(f: &PolyZ) -> String {
    let parts: Vec<String> = f.coeffs().iter().map(BigInt::to_string).collect();
    format!("[{}]", parts.join(","))
}
