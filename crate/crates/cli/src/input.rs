//! Hypersurface input files.
//!
//! ```text
//! # comment
//! p=3 m=2 n=2
//! x0^2 + (t)*x1*x2
//! ```
//!
//! The header fixes `F_{p^m}` and the ambient `P^n`. The next line is the
//! defining form. Any further lines are its declared irreducible factors;
//! without them the form itself is declared irreducible.

use transverse_core::audit::Fixture;
use transverse_core::poly::parse_form_at;
use transverse_core::{Error, FieldDescriptor, Form, Hypersurface, Limits, Result};

#[derive(Clone, Debug)]
pub struct Input {
    pub field: FieldDescriptor,
    pub n: usize,
    pub form: Form,
    pub factors: Vec<Form>,
}

impl Input {
    pub fn hypersurface(&self) -> Result<Hypersurface> {
        Hypersurface::new(self.form.clone())
    }

    pub fn fixture(&self) -> Result<Fixture> {
        if self.factors.is_empty() {
            Fixture::from_factors("input", vec![self.form.clone()])
        } else {
            Fixture::new("input", self.form.clone(), self.factors.clone())
        }
    }

    /// Inverse of [`parse_input`].
    pub fn print(&self) -> String {
        let mut out = format!("p={} m={} n={}\n{}\n", self.field.p(), self.field.degree(), self.n, self.form);
        for f in &self.factors {
            out.push_str(&format!("{f}\n"));
        }
        out
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain([(line.len(), ' ')]) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn header_value(line: &str, lineno: usize, key: &str) -> Result<u64> {
    let mut found = None;
    for (column, tok) in tokens(line) {
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse {
            line: lineno,
            column,
            message: format!("expected key=value, found `{tok}`"),
        })?;
        if !["p", "m", "n"].contains(&k) {
            return Err(Error::Parse { line: lineno, column, message: format!("unknown header key `{k}`") });
        }
        if k == key {
            let val = v.parse().map_err(|_| Error::Parse {
                line: lineno,
                column: column + k.len() + 1,
                message: format!("`{v}` is not a nonnegative integer"),
            })?;
            found = Some(val);
        }
    }
    found.ok_or_else(|| Error::Parse { line: lineno, column: 1, message: format!("missing header key `{key}`") })
}

/// Parses an input file. Homogeneity, nonzero forms and field membership of
/// coefficients are validated; errors carry 1-based line and column.
pub fn parse_input(text: &str, limits: &Limits) -> Result<Input> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, column: 1, message: "empty input".into() })?;
    let p = header_value(header, hl, "p")?;
    let m = header_value(header, hl, "m")?;
    let n = header_value(header, hl, "n")? as usize;
    if m == 0 || m > u32::MAX as u64 || n == 0 {
        return Err(Error::Parse { line: hl, column: 1, message: "need m >= 1 and n >= 1".into() });
    }
    let field = FieldDescriptor::with_limits(p, m as u32, None, limits)?;
    let mut forms = Vec::new();
    for (lineno, line) in lines {
        let f = parse_form_at(line, &field, n + 1, lineno)?;
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        forms.push(f);
    }
    if forms.is_empty() {
        return Err(Error::Parse { line: hl + 1, column: 1, message: "missing polynomial".into() });
    }
    let form = forms.remove(0);
    if form.degree() == 0 {
        return Err(Error::InvalidParameter("the form must have positive degree".into()));
    }
    Ok(Input { field, n, form, factors: forms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Input> {
        parse_input(s, &Limits::default())
    }

    #[test]
    fn examples() {
        let conic = parse("p=5 m=1 n=2 \n x0*x2 - x1^2").unwrap();
        assert_eq!((conic.field.order(), conic.n, conic.form.degree()), (5, 2, 2));
        let f9 = parse("p=3 m=2 n=2 \n x0^2 + (t)*x1*x2").unwrap();
        assert_eq!(f9.field.order(), 9);
        assert!(matches!(parse("p=5 m=1 n=2 \n x0^2 + x1"), Err(Error::Inhomogeneous { .. })));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("p=5 m=1 n=2\n\nx0*x2 - x1^^2") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse("p=5 q=1 n=2\nx0") {
            Err(Error::Parse { line: 1, column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("p=5 m=1 n=2\nx3"), Err(Error::Parse { .. })));
        assert!(matches!(parse("p=5 m=1 n=2\n(t)*x0"), Err(Error::CoefficientOutsideField(_))));
        assert!(matches!(parse("p=4 m=1 n=2\nx0"), Err(Error::NotPrime(4))));
        assert!(parse("p=5 m=1 n=2\n").is_err());
    }

    #[test]
    fn factors_and_round_trip() {
        let inp = parse("# two lines\np=7 m=1 n=2\nx0*x1\nx0\nx1\n").unwrap();
        assert_eq!(inp.fixture().unwrap().t(), Some(2));
        let again = parse(&inp.print()).unwrap();
        assert_eq!(again.form, inp.form);
        assert_eq!(again.factors, inp.factors);
        assert!(parse("p=7 m=1 n=2\nx0*x1\nx0\n").unwrap().fixture().is_err());
    }
}
