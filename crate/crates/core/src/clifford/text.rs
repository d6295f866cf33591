//! Text form `coef*e^{indices}` for multivectors, e.g. `0.5*e + 0.5*e^1`.
//!
//! Coefficients are real (`0.5`), imaginary (`0.25i`) or parenthesised
//! complex (`(0.5-0.25i)`). Indices are single digits when `n <= 9`
//! (`e^123`) or braced lists otherwise (`e^{1,2,10}`). Generator words out
//! of canonical order are reduced with the algebra's sign rules, so
//! `e^21` parses as `-e^12`. Rendering uses shortest round-trip decimals, so
//! `parse(render(U)) == U` exactly.

use super::{blade_product, Blade, Multivector, Signature, C64, ONE, ZERO};
use crate::error::{Error, Result};
use std::fmt;

fn fmt_real(x: f64) -> String {
    format!("{x}")
}

/// Coefficient text without a leading sign and whether it should be negated.
fn fmt_coeff(c: C64) -> (bool, String) {
    if c.im == 0.0 {
        (c.re < 0.0, fmt_real(c.re.abs()))
    } else if c.re == 0.0 {
        (c.im < 0.0, format!("{}i", fmt_real(c.im.abs())))
    } else {
        let op = if c.im < 0.0 { '-' } else { '+' };
        (
            false,
            format!("({}{op}{}i)", fmt_real(c.re), fmt_real(c.im.abs())),
        )
    }
}

fn fmt_blade(blade: Blade, n: usize) -> String {
    if blade == Blade::SCALAR {
        return "e".into();
    }
    let ix = blade.indices();
    if n <= 9 {
        let digits: String = ix.iter().map(|a| a.to_string()).collect();
        format!("e^{digits}")
    } else {
        let list: Vec<String> = ix.iter().map(|a| a.to_string()).collect();
        format!("e^{{{}}}", list.join(","))
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.sig.dim();
        let mut first = true;
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|(b, _)| (b.grade(), b.indices()));
        for (blade, c) in terms {
            let (neg, text) = fmt_coeff(c);
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            write!(f, "{text}*{}", fmt_blade(blade, n))?;
            first = false;
        }
        if first {
            write!(f, "0*e")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    sig: Signature,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl fmt::Display) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut p = self.pos;
        while p < bytes.len() && (bytes[p].is_ascii_digit() || bytes[p] == b'.') {
            p += 1;
        }
        if p == start {
            return Err(self.err("expected number"));
        }
        // exponent only when followed by digits, so `2e^1` stays a blade
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut q = p + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            if q < bytes.len() && bytes[q].is_ascii_digit() {
                while q < bytes.len() && bytes[q].is_ascii_digit() {
                    q += 1;
                }
                p = q;
            }
        }
        self.pos = p;
        self.src[start..p]
            .parse::<f64>()
            .map_err(|e| self.err(format!("bad number {:?}: {e}", &self.src[start..p])))
    }

    fn starts_number(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.')
    }

    /// A real or imaginary literal: `1.5`, `1.5i`, `i`.
    fn literal(&mut self) -> Result<C64> {
        self.skip_ws();
        if self.peek() == Some('i') {
            self.pos += 1;
            return Ok(C64::new(0.0, 1.0));
        }
        let x = self.number()?;
        if self.eat('i') {
            Ok(C64::new(0.0, x))
        } else {
            Ok(C64::new(x, 0.0))
        }
    }

    fn paren_coeff(&mut self) -> Result<C64> {
        let mut sign = 1.0;
        if self.eat('-') {
            sign = -1.0;
        } else {
            self.eat('+');
        }
        let mut value = self.literal()? * sign;
        loop {
            if self.eat(')') {
                return Ok(value);
            }
            let s = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else {
                return Err(self.err("expected '+', '-' or ')'"));
            };
            value += self.literal()? * s;
        }
    }

    fn index_word(&mut self) -> Result<Vec<usize>> {
        let n = self.sig.dim();
        if self.eat('{') {
            let mut ix = Vec::new();
            loop {
                self.skip_ws();
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let a: usize = self.src[start..self.pos]
                    .parse()
                    .map_err(|_| self.err("expected index"))?;
                ix.push(a);
                if self.eat('}') {
                    break;
                }
                if !self.eat(',') {
                    return Err(self.err("expected ',' or '}'"));
                }
            }
            Ok(ix)
        } else {
            if n > 9 {
                return Err(self.err("use braced indices e^{..} when n > 9"));
            }
            self.skip_ws();
            let mut ix = Vec::new();
            while let Some(c) = self.peek() {
                match c.to_digit(10) {
                    Some(d) => {
                        ix.push(d as usize);
                        self.pos += 1;
                    }
                    None => break,
                }
            }
            if ix.is_empty() {
                return Err(self.err("expected indices after '^'"));
            }
            Ok(ix)
        }
    }

    /// `e` or `e^word`; returns the reduced sign and blade.
    fn basis(&mut self) -> Result<(f64, Blade)> {
        if !self.eat('e') {
            return Err(self.err("expected 'e'"));
        }
        if !self.eat('^') {
            return Ok((1.0, Blade::SCALAR));
        }
        let n = self.sig.dim();
        let mut sign = 1.0;
        let mut blade = Blade::SCALAR;
        for a in self.index_word()? {
            if a == 0 || a > n {
                return Err(self.err(format!("index {a} outside 1..={n}")));
            }
            let (s, b) = blade_product(blade, Blade::generator(a), self.sig);
            sign *= s as f64;
            blade = b;
        }
        Ok((sign, blade))
    }

    fn term(&mut self) -> Result<(C64, Blade)> {
        self.skip_ws();
        let coeff = if self.eat('(') {
            Some(self.paren_coeff()?)
        } else if self.starts_number() || self.peek() == Some('i') {
            Some(self.literal()?)
        } else {
            None
        };
        let has_star = self.eat('*');
        self.skip_ws();
        if self.peek() == Some('e') {
            let (s, blade) = self.basis()?;
            Ok((coeff.unwrap_or(ONE) * s, blade))
        } else if has_star {
            Err(self.err("expected basis blade after '*'"))
        } else {
            coeff
                .map(|c| (c, Blade::SCALAR))
                .ok_or_else(|| self.err("expected term"))
        }
    }

    fn expr(&mut self) -> Result<Multivector> {
        let mut out = Multivector::zero(self.sig);
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        loop {
            let (c, blade) = self.term()?;
            out.coeffs[blade.mask()] += c * sign;
            self.skip_ws();
            if self.pos == self.src.len() {
                break;
            }
            sign = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else {
                return Err(self.err("expected '+' or '-'"));
            };
        }
        Ok(out)
    }
}

impl Multivector {
    /// Parse the text form for the given signature.
    pub fn parse(sig: Signature, text: &str) -> Result<Self> {
        let mut p = Parser { src: text, pos: 0, sig };
        p.skip_ws();
        if p.pos == text.len() {
            return Err(Error::Parse("empty multivector literal".into()));
        }
        let mv = p.expr()?;
        // canonicalise -0.0 so that rendering is stable
        let mut mv = mv;
        for c in mv.coeffs.iter_mut() {
            if *c == ZERO {
                *c = ZERO;
            }
        }
        Ok(mv)
    }
}
