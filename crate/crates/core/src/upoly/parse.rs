//! Text forms: whitespace-separated ascending coefficients, or an expression
//! such as `x^4 - 2/3*x + 1`.

use num_traits::{One, Signed, Zero};

use super::RatPoly;
use crate::arith::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Accepts either text form. Input with two or more tokens that all parse as
/// rationals is a coefficient list; anything else is an expression.
pub fn parse_poly(s: &str) -> Result<RatPoly> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    if tokens.len() >= 2 {
        if let Ok(coeffs) = tokens.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>() {
            return Ok(RatPoly::new(coeffs));
        }
    }
    parse_expression(s)
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> Option<(usize, &str)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Some((start, text))
    }

    fn unexpected(&self) -> Error {
        match self.src.get(self.pos) {
            None => self.err(self.pos, "unexpected end of input"),
            Some(c) if c.is_ascii_alphabetic() => self.err(
                self.pos,
                format!("unexpected variable '{}'; only univariate polynomials in x are accepted", *c as char),
            ),
            Some(c) => self.err(self.pos, format!("unexpected character '{}'", *c as char)),
        }
    }

    /// `[coef] ['*'] ['x' ['^' n]]`, at least one of the two parts present.
    fn term(&mut self) -> Result<(Rational, usize)> {
        let mut coef = None;
        if let Some((_, num)) = self.digits() {
            let mut text = num.to_string();
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let Some((at, den)) = self.digits() else {
                    return Err(self.unexpected());
                };
                if den.bytes().all(|b| b == b'0') {
                    return Err(self.err(at, "zero denominator"));
                }
                text = format!("{text}/{den}");
            }
            coef = Some(parse_rational(&text)?);
            if self.peek() == Some(b'*') {
                self.pos += 1;
                if self.peek() != Some(b'x') {
                    return Err(self.unexpected());
                }
            }
        }
        let mut power = 0;
        if self.peek() == Some(b'x') {
            self.pos += 1;
            power = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let Some((at, e)) = self.digits() else {
                    return Err(self.unexpected());
                };
                power = e.parse().map_err(|_| self.err(at, "exponent too large"))?;
            }
        } else if coef.is_none() {
            return Err(self.unexpected());
        }
        Ok((coef.unwrap_or_else(Rational::one), power))
    }
}

pub fn parse_expression(s: &str) -> Result<RatPoly> {
    let mut lx = Lexer {
        src: s.as_bytes(),
        pos: 0,
    };
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut first = true;
    loop {
        let mut negative = false;
        match lx.peek() {
            None if first => return Err(lx.err(lx.pos, "empty polynomial")),
            None => break,
            Some(b'+') | Some(b'-') => {
                negative = lx.src[lx.pos] == b'-';
                lx.pos += 1;
            }
            Some(_) if first => {}
            Some(_) => return Err(lx.unexpected()),
        }
        first = false;
        let (c, k) = lx.term()?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        if negative {
            coeffs[k] -= c;
        } else {
            coeffs[k] += c;
        }
    }
    Ok(RatPoly::new(coeffs))
}

pub(crate) fn format_expression(a: &RatPoly) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in a.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let var = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        if k == 0 {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{}*{}", format_rational(&mag), var));
        }
    }
    out
}
