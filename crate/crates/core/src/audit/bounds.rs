//! Bound formulas as parsed expression trees over `n, d, q, r, t`,
//! evaluated in exact rational arithmetic.

use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub};

use crate::error::{Error, Result};

type Q = Ratio<i128>;

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Int(i128),
    Var(char),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
}

/// Values for the formula variables; unset variables are an error on use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Vars {
    pub n: Option<i128>,
    pub d: Option<i128>,
    pub q: Option<i128>,
    pub r: Option<i128>,
    pub t: Option<i128>,
}

/// A closed-form bound with the statement it transcribes.
#[derive(Clone, Debug)]
pub struct Bound {
    formula: &'static str,
    citation: &'static str,
    expr: Expr,
}

impl Bound {
    pub fn new(formula: &'static str, citation: &'static str) -> Result<Self> {
        let mut p = Parser { s: formula.as_bytes(), i: 0 };
        let expr = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(Bound { formula, citation, expr })
    }

    pub fn formula(&self) -> &'static str {
        self.formula
    }

    pub fn citation(&self) -> &'static str {
        self.citation
    }

    /// Exact value of the formula.
    pub fn eval(&self, vars: &Vars) -> Result<Q> {
        eval(&self.expr, vars)
    }

    /// Largest integer not exceeding the bound: `k <= bound` iff `k <= floor`.
    pub fn floor(&self, vars: &Vars) -> Result<i128> {
        Ok(self.eval(vars)?.floor().to_integer())
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.formula, self.citation)
    }
}

fn overflow() -> Error {
    Error::InvalidParameter("bound arithmetic overflows".into())
}

fn eval(e: &Expr, v: &Vars) -> Result<Q> {
    Ok(match e {
        Expr::Int(k) => Q::from_integer(*k),
        Expr::Var(c) => {
            let val = match c {
                'n' => v.n,
                'd' => v.d,
                'q' => v.q,
                'r' => v.r,
                _ => v.t,
            };
            Q::from_integer(val.ok_or_else(|| Error::InvalidParameter(format!("bound variable {c} unset")))?)
        }
        Expr::Neg(a) => -eval(a, v)?,
        Expr::Bin(op, a, b) => {
            let (x, y) = (eval(a, v)?, eval(b, v)?);
            match op {
                '+' => x.checked_add(&y).ok_or_else(overflow)?,
                '-' => x.checked_sub(&y).ok_or_else(overflow)?,
                '*' => x.checked_mul(&y).ok_or_else(overflow)?,
                '/' => {
                    if y == Q::from_integer(0) {
                        return Err(Error::InvalidParameter("division by zero in bound".into()));
                    }
                    x.checked_div(&y).ok_or_else(overflow)?
                }
                _ => {
                    if !y.is_integer() || y < Q::from_integer(0) {
                        return Err(Error::InvalidParameter("exponent must be a natural number".into()));
                    }
                    let mut acc = Q::from_integer(1);
                    for _ in 0..y.to_integer() {
                        acc = acc.checked_mul(&x).ok_or_else(overflow)?;
                    }
                    acc
                }
            }
        }
    })
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 1, column: self.i + 1, message: msg.into() }
    }

    fn ws(&mut self) {
        while self.s.get(self.i).is_some_and(u8::is_ascii_whitespace) {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            lhs = Expr::Bin(c as char, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.i += 1;
            lhs = Expr::Bin(c as char, Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    /// Right-associative `^`, binding tighter than unary minus.
    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.i += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            return Ok(Expr::Bin('^', Box::new(base), Box::new(self.factor()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.s.get(self.i).is_some_and(u8::is_ascii_digit) {
                    self.i += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.i]).unwrap();
                text.parse().map(Expr::Int).map_err(|_| self.err("integer too large"))
            }
            Some(c @ (b'n' | b'd' | b'q' | b'r' | b't')) => {
                self.i += 1;
                Ok(Expr::Var(c as char))
            }
            _ => Err(self.err("expected number, variable or '('")),
        }
    }
}

macro_rules! bound_fn {
    ($name:ident, $formula:expr, $citation:expr) => {
        pub fn $name() -> Bound {
            Bound::new($formula, $citation).expect("built-in formula parses")
        }
    };
}

bound_fn!(
    nontransverse_lines_reduced,
    "3/2*d*(d-1)*(q+1)",
    "non-transverse F_q-lines to a reduced plane curve of degree d"
);
bound_fn!(
    nontransverse_lines_irreducible,
    "1/2*(d-1)*(3*d-2)*(q+1)",
    "non-transverse F_q-lines to a geometrically irreducible plane curve of degree d"
);
bound_fn!(conic_tangent_lines, "q+1", "tangent F_q-lines to a smooth conic (exact)");
bound_fn!(
    bad_hyperplanes,
    "(d-t)*(d-1)*(q+1)^2 + 1/2*t*(t-1)*(q+1) + 1",
    "F_q-hyperplanes with non-proper or non-reduced section, X reduced with t hyperplane components"
);
bound_fn!(phi, "(d-t)*(d-1) + 1/2*t*(t-1)", "phi(t), the per-slice count of bad hyperplanes");
bound_fn!(phi_max, "d*(d-1)", "maximum of phi(t) over 0 <= t <= d");
bound_fn!(two_plane_bad_hyperplanes, "q+1", "bad hyperplanes for the union of two planes in P^3 (exact)");
bound_fn!(
    tangent_superspaces,
    "d*(d-1)^r*(q+1)^(n-r-1)",
    "non-transverse F_q-r-planes through a very transverse (r-1)-plane"
);
bound_fn!(
    dual_contained_superspaces,
    "d*(d-1)^(n-1)",
    "transverse but not very transverse F_q-r-planes through a very transverse (r-1)-plane"
);
bound_fn!(
    bad_superspaces,
    "d*(d-1)^r*(q+1)^(n-r-1) + d*(d-1)^(n-1)",
    "F_q-r-planes through a very transverse (r-1)-plane that are not very transverse"
);
bound_fn!(
    superspace_pool,
    "(q^(n-r+1) - 1)/(q - 1)",
    "F_q-r-planes through a fixed (r-1)-plane in P^n"
);
bound_fn!(hyperplane_pool, "(q^(n+1) - 1)/(q - 1)", "F_q-hyperplanes of P^n");
bound_fn!(one, "1", "a good candidate exists once q meets the threshold");
bound_fn!(zero, "0", "no counterexample");
bound_fn!(space_filling_degree, "q+1", "minimal degree of a space-filling hypersurface over F_q");
