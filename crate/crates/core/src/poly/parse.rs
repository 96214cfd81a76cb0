//! Text grammar for forms: `x0^3 + 2*x1^2*x2 - (t+1)*x2^3`.
//!
//! A term is a `*`-separated product of factors; a factor is an integer, a
//! parenthesised polynomial in `t`, `t` itself, or a variable `x<i>`, each
//! optionally raised to `^<e>`. Terms are joined by `+` or `-`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{fp_poly, FieldDescriptor};
use crate::poly::Form;

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = self.field();
        let mut first = true;
        let terms: Vec<_> = self.terms().collect();
        for (e, c) in terms.into_iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            let coeff = field.format(c);
            let coeff = if coeff.chars().all(|ch| ch.is_ascii_digit()) { coeff } else { format!("({coeff})") };
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if c == field.one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses a form in `nvars` variables; errors report line 1.
pub fn parse_form(text: &str, field: &FieldDescriptor, nvars: usize) -> Result<Form> {
    parse_form_at(text, field, nvars, 1)
}

/// Parses a form, reporting errors at the given 1-based line number.
pub fn parse_form_at(text: &str, field: &FieldDescriptor, nvars: usize, line: usize) -> Result<Form> {
    let mut p = FormParser { bytes: text.as_bytes(), text, pos: 0, field, nvars, line };
    let terms = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err(p.pos, format!("unexpected `{}`", p.bytes[p.pos] as char)));
    }
    let mut degree = None;
    let mut out = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        let d: u32 = e.iter().sum();
        match degree {
            None => degree = Some(d),
            Some(d0) if d0 != d => return Err(Error::Inhomogeneous { first: d0, other: d }),
            _ => {}
        }
        out.push((e, c));
    }
    Form::from_terms_with_degree(field, nvars, degree.unwrap_or(0), out)
}

struct FormParser<'a> {
    bytes: &'a [u8],
    text: &'a str,
    pos: usize,
    field: &'a FieldDescriptor,
    nvars: usize,
    line: usize,
}

type Term = (Vec<u32>, crate::gf::FieldElement);

impl FormParser<'_> {
    fn err(&self, pos: usize, message: String) -> Error {
        Error::Parse { line: self.line, column: pos + 1, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (e, mut c) = self.term()?;
            if negate {
                c = self.field.neg(c);
            }
            out.push((e, c));
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => return Ok(out),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        let start = self.pos;
        let f = self.field;
        let mut coeff = vec![1u64];
        let mut exps = vec![0u32; self.nvars];
        loop {
            self.factor(&mut coeff, &mut exps)?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = &self.text[start..self.pos];
        let c = f.element_from_t_poly(&coeff, text)?;
        Ok((exps, c))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let v = self.integer()?;
        u32::try_from(v).map_err(|_| self.err(self.pos, "exponent too large".into()))
    }

    fn integer(&mut self) -> Result<u128> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(start, "expected integer".into()));
        }
        self.text[start..self.pos].parse::<u128>().map_err(|_| self.err(start, "integer too large".into()))
    }

    fn factor(&mut self, coeff: &mut Vec<u64>, exps: &mut [u32]) -> Result<()> {
        let p = self.field.p();
        let c = self.peek();
        let start = self.pos;
        let base: Vec<u64> = match c {
            Some(b'x') => {
                self.pos += 1;
                let i = self.integer()?;
                if i >= self.nvars as u128 {
                    return Err(self.err(start, format!("variable x{i} outside x0..x{}", self.nvars - 1)));
                }
                let e = self.exponent()?;
                exps[i as usize] += e;
                return Ok(());
            }
            Some(b'(') => {
                let close = self.matching_paren(start)?;
                let inner = &self.text[start + 1..close];
                let poly = crate::gf::parse_t_poly(inner, p)
                    .map_err(|(col, msg)| self.err(start + 1 + col, msg))?;
                self.pos = close + 1;
                poly
            }
            Some(b't') => {
                self.pos += 1;
                vec![0, 1]
            }
            Some(d) if d.is_ascii_digit() => {
                let v = self.integer()?;
                vec![(v % p as u128) as u64]
            }
            Some(other) => return Err(self.err(start, format!("unexpected `{}`", other as char))),
            None => return Err(self.err(start, "unexpected end of input".into())),
        };
        let e = self.exponent()?;
        let mut pw = vec![1u64];
        for _ in 0..e {
            pw = poly_mul(&pw, &base, p);
        }
        *coeff = poly_mul(coeff, &pw, p);
        Ok(())
    }

    fn matching_paren(&self, open: usize) -> Result<usize> {
        let mut depth = 0usize;
        for (i, &b) in self.bytes.iter().enumerate().skip(open) {
            match b {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(i);
                    }
                }
                _ => {}
            }
        }
        Err(self.err(open, "unbalanced `(`".into()))
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    fp_poly::trim(&mut out);
    if out.is_empty() {
        out.push(0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_example() {
        let f9 = FieldDescriptor::new(3, 2, None).unwrap();
        let form = parse_form("x0^3 + 2*x1^2*x2 - (t+1)*x2^3", &f9, 3).unwrap();
        assert_eq!(form.degree(), 3);
        assert_eq!(form.num_terms(), 3);
        assert_eq!(form.coefficient(&[0, 0, 3]), f9.neg(f9.parse("t+1").unwrap()));
        assert_eq!(parse_form(&form.to_string(), &f9, 3).unwrap(), form);
    }

    #[test]
    fn errors() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        assert!(matches!(parse_form("x0^2 + x1", &f5, 3), Err(Error::Inhomogeneous { first: 2, other: 1 })));
        assert!(matches!(parse_form("x0 + x3", &f5, 3), Err(Error::Parse { column: 6, .. })));
        assert!(matches!(parse_form("x0 + t*x1", &f5, 3), Err(Error::CoefficientOutsideField(_))));
        assert!(matches!(parse_form("x0 + ", &f5, 3), Err(Error::Parse { .. })));
    }

    #[test]
    fn integer_coefficients_reduce() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        let a = parse_form("7*x0*x1 - x2^2", &f5, 3).unwrap();
        let b = parse_form("2*x0*x1 + 4*x2^2", &f5, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_string(), "2*x0*x1 + 4*x2^2");
    }
}
