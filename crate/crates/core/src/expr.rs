//! Recursive-descent parser for symbol expressions.
//!
//! ```text
//! element := sign? term (('+' | '-') term)*
//! term    := coeff ('*'? factors)? | factors
//! factors := factor+
//! factor  := 't' ('^' uint)? | 'tb' ('^' uint)?
//! coeff   := real | real 'i' | 'i' | '(' sign? real ('+' | '-') real? 'i' ')'
//! real    := uint ('/' uint)? | decimal
//! ```
//!
//! Factors are multiplied left to right and normal-ordered on the way, so
//! `tb t` becomes `q⁻¹ t tb`.

use crate::error::{Error, Result};
use crate::qalgebra::{mul_monomials, DeformationParameter, Element, Monomial};
use crate::scalar::Scalar;

pub fn parse_element<S: Scalar>(text: &str, q: &DeformationParameter<S>) -> Result<Element<S>> {
    Parser {
        src: text,
        pos: 0,
        q,
    }
    .element()
}

struct Parser<'a, S> {
    src: &'a str,
    pos: usize,
    q: &'a DeformationParameter<S>,
}

impl<S: Scalar> Parser<'_, S> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.src.as_bytes().get(self.pos + off).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn element(mut self) -> Result<Element<S>> {
        let mut out = Element::zero(self.q.clone());
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let mut sign = S::one();
        if self.eat(b'-') {
            sign = -S::one();
        } else {
            self.eat(b'+');
        }
        loop {
            self.skip_ws();
            let term = self.term()?;
            out = out.try_add(&term.scale(&sign))?;
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => {
                    self.pos += 1;
                    sign = S::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -S::one();
                }
                Some(c) => return self.err(format!("unexpected `{}`", c as char)),
            }
        }
    }

    fn term(&mut self) -> Result<Element<S>> {
        let coeff = if self.at_factor() {
            S::one()
        } else {
            let c = self.coeff()?;
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                if !self.at_factor() {
                    return self.err("expected `t` or `tb` after `*`");
                }
            }
            c
        };
        let mut acc_coeff = coeff;
        let mut acc = Monomial::ONE;
        while self.at_factor() {
            let f = self.factor()?;
            let (c, m) = mul_monomials(acc, f, self.q);
            acc_coeff = acc_coeff * c;
            acc = m;
            self.skip_ws();
        }
        Ok(Element::monomial(self.q.clone(), acc, acc_coeff))
    }

    fn at_factor(&self) -> bool {
        self.peek() == Some(b't')
    }

    fn factor(&mut self) -> Result<Monomial> {
        if !self.eat(b't') {
            return self.err("expected `t` or `tb`");
        }
        let bar = self.eat(b'b');
        let exp = if self.eat(b'^') {
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return self.err("expected exponent after `^`");
            }
            let e: u32 = digits.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("exponent `{digits}` out of range"),
            })?;
            if e == 0 {
                self.pos = start;
                return self.err("exponents must be positive");
            }
            e
        } else {
            1
        };
        Ok(if bar {
            Monomial::new(0, exp)
        } else {
            Monomial::new(exp, 0)
        })
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    /// `uint ('/' uint)?` or a decimal literal, returned as source text.
    fn real_text(&mut self) -> Result<&str> {
        let start = self.pos;
        if self.digits().is_empty() {
            return self.err("expected a number");
        }
        if self.peek() == Some(b'.') && matches!(self.peek_at(1), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
            self.digits();
        } else if self.peek() == Some(b'/') {
            self.pos += 1;
            if self.digits().is_empty() {
                return self.err("expected denominator after `/`");
            }
        }
        Ok(&self.src[start..self.pos])
    }

    fn real(&mut self) -> Result<S> {
        let start = self.pos;
        let text = self.real_text()?.to_string();
        S::parse_real(&text).map_err(|e| match e {
            Error::Syntax { msg, .. } => Error::Syntax { pos: start, msg },
            other => other,
        })
    }

    fn coeff(&mut self) -> Result<S> {
        match self.peek() {
            Some(b'i') => {
                self.pos += 1;
                Ok(S::i())
            }
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let neg = if self.eat(b'-') {
                    true
                } else {
                    self.eat(b'+');
                    false
                };
                let mut re = self.real()?;
                if neg {
                    re = -re;
                }
                self.skip_ws();
                let im_sign = match self.peek() {
                    Some(b'+') => S::one(),
                    Some(b'-') => -S::one(),
                    _ => return self.err("expected `+` or `-` inside complex coefficient"),
                };
                self.pos += 1;
                self.skip_ws();
                let im = if self.peek() == Some(b'i') {
                    S::one()
                } else {
                    self.real()?
                };
                if !self.eat(b'i') {
                    return self.err("expected `i`");
                }
                self.skip_ws();
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(re + im_sign * im * S::i())
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.real()?;
                if self.peek() == Some(b'i') {
                    self.pos += 1;
                    Ok(v * S::i())
                } else {
                    Ok(v)
                }
            }
            _ => self.err("expected a coefficient, `t`, or `tb`"),
        }
    }
}
