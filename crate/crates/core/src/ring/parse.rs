//! Expressions over a group ring.
//!
//! ```text
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := factor (['*'] factor)*
//! factor  := primary ['^' int]
//! primary := number | identifier | '(' expr ')'
//! number  := digits ['.' digits] ['/' digits]
//! ```
//!
//! Juxtaposition multiplies, so `3a`, `2 a b^-1` and `(1 + a)(1 - b)` are
//! valid. An identifier is a generator name or several run together
//! (`xyxy`); an exponent on it applies to its last generator. Negative
//! exponents are only allowed on monomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Coefficient, QElement, RingElement, ZElement};
use crate::error::{Error, Result};
use crate::group::GroupSpec;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((pos, Token::Plus));
                i += 1;
            }
            '-' | '−' => {
                out.push((pos, Token::Minus));
                i += 1;
            }
            '*' | '·' => {
                out.push((pos, Token::Star));
                i += 1;
            }
            '^' => {
                out.push((pos, Token::Caret));
                i += 1;
            }
            '(' | '{' => {
                out.push((pos, Token::Open));
                i += 1;
            }
            ')' | '}' => {
                out.push((pos, Token::Close));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                let digits = |i: &mut usize| {
                    let s = *i;
                    while *i < chars.len() && chars[*i].1.is_ascii_digit() {
                        *i += 1;
                    }
                    chars[s..*i].iter().map(|p| p.1).collect::<String>()
                };
                let int_part = digits(&mut i);
                let mut value = BigRational::from_integer(int_part.parse::<BigInt>().unwrap());
                if i + 1 < chars.len() && chars[i].1 == '.' && chars[i + 1].1.is_ascii_digit() {
                    i += 1;
                    let frac = digits(&mut i);
                    let den = BigInt::from(10).pow(frac.len() as u32);
                    value += BigRational::new(frac.parse::<BigInt>().unwrap(), den);
                }
                if i + 1 < chars.len() && chars[i].1 == '/' && chars[i + 1].1.is_ascii_digit() {
                    i += 1;
                    let den = digits(&mut i).parse::<BigInt>().unwrap();
                    if Zero::is_zero(&den) {
                        return Err(Error::parse(format!("division by zero at offset {}", chars[start].0)));
                    }
                    value /= BigRational::from_integer(den);
                }
                out.push((pos, Token::Number(value)));
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                out.push((pos, Token::Ident(chars[start..i].iter().map(|p| p.1).collect())));
            }
            other => return Err(Error::parse(format!("unexpected `{other}` at offset {pos}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    spec: GroupSpec,
    tokens: &'a [(usize, Token)],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.text.len(), |t| t.0)
    }

    fn error(&self, what: &str) -> Error {
        Error::parse(format!("{what} at offset {} in `{}`", self.offset(), self.text))
    }

    fn expr(&mut self) -> Result<QElement> {
        let mut acc = QElement::zero(self.spec);
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Token::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t)? } else { acc.add(&t)? };
            match self.peek() {
                Some(Token::Plus) => sign = 1,
                Some(Token::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<QElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                }
                Some(Token::Number(_)) | Some(Token::Ident(_)) | Some(Token::Open) => {}
                _ => return Ok(acc),
            }
            let rhs = self.factor()?;
            acc = acc.convolve_unchecked(&rhs);
        }
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        if self.peek() != Some(&Token::Caret) {
            return Ok(None);
        }
        self.pos += 1;
        let wrapped = self.peek() == Some(&Token::Open);
        if wrapped {
            self.pos += 1;
        }
        let negative = self.peek() == Some(&Token::Minus);
        if negative {
            self.pos += 1;
        }
        let e = match self.peek() {
            Some(Token::Number(q)) if q.is_integer() => {
                let e: i64 = q
                    .to_integer()
                    .try_into()
                    .map_err(|_| self.error("exponent too large"))?;
                self.pos += 1;
                e
            }
            _ => return Err(self.error("expected an integer exponent")),
        };
        if wrapped {
            if self.peek() != Some(&Token::Close) {
                return Err(self.error("expected `)` after exponent"));
            }
            self.pos += 1;
        }
        Ok(Some(if negative { -e } else { e }))
    }

    fn factor(&mut self) -> Result<QElement> {
        let spec = self.spec;
        match self.peek().cloned() {
            Some(Token::Number(q)) => {
                self.pos += 1;
                let base = QElement::scalar(spec, q);
                let e = self.exponent()?;
                self.power(base, e)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let parts = spec.split_identifier(&name).map_err(|e| match e {
                    Error::Parse(m) => Error::Parse(format!("{m} at offset {}", self.tokens[self.pos - 1].0)),
                    other => other,
                })?;
                let e = self.exponent()?.unwrap_or(1);
                let last = parts.len() - 1;
                let mut g = spec.identity();
                for (i, p) in parts.iter().enumerate() {
                    g = spec.mul(&g, &spec.pow(p, if i == last { e } else { 1 }));
                }
                Ok(QElement::delta(spec, g))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                let e = self.exponent()?;
                self.power(inner, e)
            }
            _ => Err(self.error("expected a number, generator or `(`")),
        }
    }

    fn power(&self, base: QElement, e: Option<i64>) -> Result<QElement> {
        let Some(e) = e else { return Ok(base) };
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        // only monomials c·g are invertible here
        let terms = base.sorted_terms();
        if terms.len() != 1 {
            return Err(self.error("negative exponent on a non-monomial"));
        }
        let (g, c) = terms[0];
        let inv = QElement::monomial(self.spec, self.spec.inverse(g), <BigRational as One>::one() / c);
        Ok(inv.pow(e.unsigned_abs() as u32))
    }
}

/// Parses an expression such as `3 - a - b` into ℚ(G).
pub fn parse_expression(spec: GroupSpec, text: &str) -> Result<QElement> {
    spec.validate()?;
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::parse("empty expression"));
    }
    let mut p = Parser { spec, tokens: &tokens, pos: 0, text };
    let value = p.expr()?;
    if p.pos != tokens.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

/// Parses an expression whose coefficients must be integers.
pub fn parse_integer_expression(spec: GroupSpec, text: &str) -> Result<ZElement> {
    let q = parse_expression(spec, text)?;
    q.to_integer()
        .ok_or_else(|| Error::parse(format!("`{text}` has non-integer coefficients")))
}

impl<C: Coefficient> RingElement<C> {
    /// Parses into any scalar type that rationals convert into.
    pub fn parse_with(spec: GroupSpec, text: &str, convert: impl Fn(&BigRational) -> Result<C>) -> Result<Self> {
        let q = parse_expression(spec, text)?;
        let mut out = Self::zero(spec);
        for (g, c) in q.iter() {
            out.add_term(g.clone(), &convert(c)?);
        }
        Ok(out)
    }
}
