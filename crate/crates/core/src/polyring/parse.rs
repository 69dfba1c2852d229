//! Text form of polynomials.
//!
//! Grammar: integer (or `a/b` rational) literals, variable names, binary
//! `+ - *`, unary `-`, `^` with a nonnegative integer exponent, and
//! parentheses. An explicit `*` is required between factors; whitespace is
//! insignificant. Printing emits the canonical form (terms largest-first in
//! the ring order), and parsing the canonical form reproduces the
//! polynomial exactly.

use std::fmt;
use std::sync::Arc;

use crate::field::Field;

use super::{Expo, Poly, PolyError, RingSpec};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(bytes[start..i].iter().collect())));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
            }
            _ => {
                return Err(PolyError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a, K: Field> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ring: &'a Arc<RingSpec<K>>,
    end: usize,
}

impl<'a, K: Field> Parser<'a, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax {
            pos: self.here(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Poly<K>, PolyError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -&self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<K>, PolyError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly<K>, PolyError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let k: u32 = n.parse().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(k))
                }
                _ => Err(self.err("expected a nonnegative integer exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly<K>, PolyError> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                // optional `/ int` continuation makes a rational literal
                let lit = if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) => format!("{n}/{d}"),
                        _ => return Err(self.err("expected an integer denominator after `/`")),
                    }
                } else {
                    n
                };
                let c = self.ring.field().parse_elem(&lit)?;
                Ok(Poly::constant(self.ring.clone(), c))
            }
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(v) => Ok(Poly::var(self.ring.clone(), v)),
                None => Err(PolyError::UnknownVariable(name)),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse `text` as a polynomial in `ring`.
pub fn parse_polynomial<K: Field>(
    text: &str,
    ring: &Arc<RingSpec<K>>,
) -> Result<Poly<K>, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ring,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

fn write_monomial<K: Field>(
    f: &mut fmt::Formatter<'_>,
    ring: &RingSpec<K>,
    e: &Expo,
    coeff_mag: &str,
    coeff_is_one: bool,
) -> fmt::Result {
    let mut parts: Vec<String> = Vec::new();
    if !coeff_is_one || e.iter().all(|&k| k == 0) {
        parts.push(coeff_mag.to_string());
    }
    for (v, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(ring.var_names()[v].clone()),
            _ => parts.push(format!("{}^{}", ring.var_names()[v], k)),
        }
    }
    write!(f, "{}", parts.join("*"))
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = self.field();
        for (idx, (e, c)) in self.terms_sorted().into_iter().enumerate() {
            let neg = field.is_display_negative(c);
            let mag = if neg { field.neg(c) } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag_s = field.elem_to_string(&mag);
            let is_one = mag == field.one();
            write_monomial(f, self.ring(), e, &mag_s, is_one)?;
        }
        Ok(())
    }
}
