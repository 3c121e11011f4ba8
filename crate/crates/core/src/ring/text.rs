//! Text form of polynomials.
//!
//! Grammar (output): terms in ascending total degree (ties broken by
//! descending exponent vector), joined by `+`/`-`; a term is
//! `coeff*v1^e1*v2^e2`, with unit coefficients and exponents of 1 omitted.
//! Rational coefficients print as `n/d`. The zero polynomial prints as `0`.
//!
//! The parser accepts the same strings plus parentheses and repeated
//! products, e.g. `(x+1)^3 - 2*x*y`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Coeff, Poly, QPoly, Series, ZPoly};
use crate::error::{Error, Result};

fn monomial_text(vars: &[String], exp: &[u32]) -> String {
    vars.iter()
        .zip(exp)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn join_terms(terms: impl Iterator<Item = String>) -> String {
    let mut out = String::new();
    for t in terms {
        if !out.is_empty() && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl<C: Coeff + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Vec<u32>, &C)> = self.terms().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        let text = join_terms(terms.into_iter().map(|(e, c)| {
            let mono = monomial_text(self.vars(), e);
            let cs = c.to_string();
            if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{mono}")
            } else {
                format!("{cs}*{mono}")
            }
        }));
        f.write_str(&text)
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.var();
        let terms = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let cs = c.to_string();
                let compound = cs[1..].contains(['+', '-']);
                let cs = if compound { format!("({cs})") } else { cs };
                match k {
                    0 => cs,
                    _ => {
                        let mono = if k == 1 {
                            var.to_string()
                        } else {
                            format!("{var}^{k}")
                        };
                        match cs.as_str() {
                            "1" => mono,
                            "-1" => format!("-{mono}"),
                            _ => format!("{cs}*{mono}"),
                        }
                    }
                }
            });
        let body = join_terms(terms);
        write!(f, "{body}+O({var}^{})", self.order() + 1)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit string parses"))
    }

    fn expr(&mut self) -> Result<QPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            let e: u32 = match e.try_into() {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.number()?;
                    if d.is_zero() {
                        return self.err("zero denominator");
                    }
                    return Ok(QPoly::constant(BigRational::new(n, d)));
                }
                Ok(QPoly::constant(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
                if !self.vars.iter().any(|v| v == name) {
                    self.vars.push(name.to_string());
                }
                Ok(QPoly::var(name))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial with rational coefficients. Variables are ordered by
/// first appearance.
pub fn parse_poly(s: &str) -> Result<QPoly> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        vars: Vec::new(),
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    let vars = p.vars;
    Ok(out.with_vars(&vars).expect("parsed variables are registered"))
}

impl FromStr for QPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

impl FromStr for ZPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)?
            .to_integral()
            .ok_or_else(|| Error::NonIntegralCoefficient(s.to_string()))
    }
}

/// Small helper for tests and examples: parse or panic.
pub fn zpoly(s: &str) -> ZPoly {
    s.parse().unwrap_or_else(|e| panic!("bad polynomial {s:?}: {e}"))
}
