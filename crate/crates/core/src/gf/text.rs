//! Text syntax for field elements: polynomials in `t` with integer
//! coefficients (`2*t^2+t+1`); prime-field elements print as bare integers.

use super::{FieldDescriptor, FieldElement};
use crate::error::{Error, Result};

impl FieldDescriptor {
    /// Canonical text of an element; parses back to the same element.
    pub fn format(&self, a: FieldElement) -> String {
        self.format_digits(&self.unpack(a))
    }

    pub(crate) fn format_digits(&self, digits: &[u64]) -> String {
        let mut terms = Vec::new();
        for (i, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Parses an element written as a polynomial in `t`.
    pub fn parse(&self, text: &str) -> Result<FieldElement> {
        let digits = parse_t_poly(text, self.p()).map_err(|(column, message)| Error::Parse {
            line: 1,
            column: column + 1,
            message,
        })?;
        self.element_from_t_poly(&digits, text)
    }

    pub(crate) fn element_from_t_poly(&self, digits: &[u64], text: &str) -> Result<FieldElement> {
        let m = self.degree() as usize;
        if digits.len() > m && digits[m..].iter().any(|&c| c != 0) {
            return Err(Error::CoefficientOutsideField(text.trim().to_string()));
        }
        self.from_coeffs(digits)
    }
}

/// Parses `expr := term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
/// `factor := int | 't' ('^' int)? | '(' expr ')'`, returning coefficients mod
/// `p` (low degree first). Errors carry a 0-based byte column.
pub(crate) fn parse_t_poly(text: &str, p: u64) -> std::result::Result<Vec<u64>, (usize, String)> {
    let mut parser = Parser { bytes: text.as_bytes(), pos: 0, p };
    let out = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err((parser.pos, format!("unexpected `{}`", parser.bytes[parser.pos] as char)));
    }
    Ok(out)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    p: u64,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> std::result::Result<Vec<u64>, (usize, String)> {
        let mut acc = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = add(&acc, &t, sign, self.p);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Vec<u64>, (usize, String)> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = mul(&acc, &f, self.p);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> std::result::Result<Vec<u64>, (usize, String)> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err((self.pos, "expected `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b't') => {
                self.pos += 1;
                let e = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.integer()? as usize
                } else {
                    1
                };
                let mut v = vec![0; e + 1];
                v[e] = 1 % self.p;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(vec![(v % self.p as u128) as u64])
            }
            Some(c) => Err((self.pos, format!("unexpected `{}`", c as char))),
            None => Err((self.pos, "unexpected end of input".into())),
        }
    }

    fn integer(&mut self) -> std::result::Result<u128, (usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err((start, "expected integer".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u128>()
            .map_err(|_| (start, "integer too large".into()))
    }
}

fn add(a: &[u64], b: &[u64], sign: i32, p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            if sign > 0 {
                (x + y) % p
            } else {
                (x + p - y) % p
            }
        })
        .collect()
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    out
}
