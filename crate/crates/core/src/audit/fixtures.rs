//! Hypersurfaces built as explicit products of known factors, and seeded
//! random generators for the experiment families.

use rand::Rng;

use crate::certify::{is_smooth, monomials, reduced_form};
use crate::error::{Error, Result};
use crate::gf::FieldDescriptor;
use crate::limits::Limits;
use crate::locus::Hypersurface;
use crate::poly::Form;
use crate::seed::rng;

/// A hypersurface stored with a factorization. When `declared_irreducible`
/// holds, every factor is geometrically irreducible by construction; nothing
/// is ever factored.
///
/// Invariants: the product of the factors is the stored form, and no two
/// factors are proportional.
#[derive(Clone, Debug)]
pub struct Fixture {
    name: String,
    form: Form,
    factors: Vec<Form>,
    declared_irreducible: bool,
}

/// Plane-curve fixtures are fixtures with three variables.
pub type CurveFixture = Fixture;

fn proportional(a: &Form, b: &Form) -> bool {
    if a.degree() != b.degree() || a.num_terms() != b.num_terms() {
        return false;
    }
    let Some((e, ca)) = a.terms().next() else { return b.is_zero() };
    let cb = b.coefficient(e);
    if cb.is_zero() {
        return false;
    }
    a.scale(cb) == b.scale(ca)
}

impl Fixture {
    pub fn from_factors(name: impl Into<String>, factors: Vec<Form>) -> Result<Self> {
        let first = factors.first().ok_or_else(|| Error::InvalidParameter("fixture needs a factor".into()))?;
        let mut form = Form::constant(first.field(), first.nvars(), first.field().one());
        for f in &factors {
            if f.field() != first.field() {
                return Err(Error::FieldMismatch);
            }
            if f.nvars() != first.nvars() {
                return Err(Error::DimensionMismatch { expected: first.nvars(), found: f.nvars() });
            }
            if f.is_zero() || f.degree() == 0 {
                return Err(Error::InvalidParameter("fixture factors must be nonconstant".into()));
            }
            form = form.mul(f);
        }
        Self::new(name, form, factors)
    }

    /// Checks that `factors` multiply to `form` and are pairwise non-proportional.
    pub fn new(name: impl Into<String>, form: Form, factors: Vec<Form>) -> Result<Self> {
        let mut product = Form::constant(form.field(), form.nvars(), form.field().one());
        for f in &factors {
            product = product.mul(f);
        }
        if product != form {
            return Err(Error::InvalidParameter("fixture factors do not multiply to the form".into()));
        }
        for (i, a) in factors.iter().enumerate() {
            if factors[..i].iter().any(|b| proportional(a, b)) {
                return Err(Error::NotReduced);
            }
        }
        Ok(Fixture { name: name.into(), form, factors, declared_irreducible: true })
    }

    /// Drops the irreducibility claim on the factors.
    pub fn undeclared(mut self) -> Self {
        self.declared_irreducible = false;
        self
    }

    pub fn declared_irreducible(&self) -> bool {
        self.declared_irreducible
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn factors(&self) -> &[Form] {
        &self.factors
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.factors.iter().map(Form::degree).collect()
    }

    /// Number of irreducible components, when declared.
    pub fn ell(&self) -> Option<usize> {
        self.declared_irreducible.then_some(self.factors.len())
    }

    /// Number of hyperplane components, when declared.
    pub fn t(&self) -> Option<u32> {
        self.declared_irreducible.then(|| self.factors.iter().filter(|f| f.degree() == 1).count() as u32)
    }

    pub fn hypersurface(&self) -> Result<Hypersurface> {
        Hypersurface::new(self.form.clone())
    }

    pub fn conic(q: u64) -> Result<Self> {
        let f = FieldDescriptor::prime(q)?;
        let x = |i| Form::variable(&f, 3, i);
        Self::from_factors("smooth-conic", vec![x(0).mul(&x(2)).sub(&x(1).mul(&x(1)))])
    }

    /// `x1^2 x2 - x0^3`.
    pub fn cuspidal_cubic(q: u64) -> Result<Self> {
        let f = FieldDescriptor::prime(q)?;
        let x = |i| Form::variable(&f, 3, i);
        Self::from_factors("cuspidal-cubic", vec![x(1).mul(&x(1)).mul(&x(2)).sub(&x(0).mul(&x(0)).mul(&x(0)))])
    }

    /// `x0`, `x1`, `x0 + x1` through `[0:0:1]`.
    pub fn concurrent_lines(field: &FieldDescriptor) -> Result<Self> {
        let x = |i| Form::variable(field, 3, i);
        Self::from_factors("three-concurrent-lines", vec![x(0), x(1), x(0).add(&x(1))])
    }

    /// `x0 x1` in `P^3`.
    pub fn two_planes(q: u64) -> Result<Self> {
        let f = FieldDescriptor::prime(q)?;
        Self::from_factors("two-planes", vec![Form::variable(&f, 4, 0), Form::variable(&f, 4, 1)])
    }
}

/// Uniformly random form of degree `d` (possibly zero).
pub fn random_form(field: &FieldDescriptor, nvars: usize, d: u32, rng: &mut impl Rng) -> Form {
    let q = field.order();
    let terms = monomials(nvars, d).into_iter().map(|e| (e, field.element(rng.random_range(0..q))));
    Form::from_terms_with_degree(field, nvars, d, terms).expect("monomials are homogeneous")
}

fn random_nonzero_form(field: &FieldDescriptor, nvars: usize, d: u32, rng: &mut impl Rng) -> Form {
    loop {
        let f = random_form(field, nvars, d, rng);
        if !f.is_zero() {
            return f;
        }
    }
}

const MAX_TRIES: u32 = 10_000;

/// Random smooth hypersurface of degree `d` in `P^n`, by rejection.
pub fn random_smooth(field: &FieldDescriptor, n: usize, d: u32, seed: u64) -> Result<Hypersurface> {
    let mut g = rng(seed, &[0x5300, n as u64, d as u64]);
    for _ in 0..MAX_TRIES {
        let x = Hypersurface::new(random_nonzero_form(field, n + 1, d, &mut g))?;
        if x.degree() == d && is_smooth(&x) {
            return Ok(x);
        }
    }
    Err(Error::InvalidParameter(format!("no smooth degree-{d} form found in P^{n}")))
}

/// Random reduced degree-`d` fixture in `P^n` whose factor shape cycles with
/// `seed`: one random form, a hyperplane times a form of degree `d - 1`, or
/// `d` hyperplanes, accepted once the product is reduced. Only the
/// all-hyperplane shape keeps its irreducibility declaration.
pub fn random_reduced(field: &FieldDescriptor, n: usize, d: u32, seed: u64, limits: &Limits) -> Result<Fixture> {
    let mut g = rng(seed, &[0x7200, n as u64, d as u64]);
    let shape = seed % 3;
    for _ in 0..MAX_TRIES {
        let factors = match (shape, d) {
            (_, 1) | (2, _) => (0..d).map(|_| random_nonzero_form(field, n + 1, 1, &mut g)).collect(),
            (1, _) => vec![random_nonzero_form(field, n + 1, 1, &mut g), random_nonzero_form(field, n + 1, d - 1, &mut g)],
            _ => vec![random_nonzero_form(field, n + 1, d, &mut g)],
        };
        let Ok(fx) = Fixture::from_factors(format!("random-reduced-{shape}"), factors) else { continue };
        if reduced_form(fx.form(), seed, limits)? {
            return Ok(if fx.factors.iter().all(|f| f.degree() == 1) { fx } else { fx.undeclared() });
        }
    }
    Err(Error::InvalidParameter(format!("no reduced degree-{d} form found in P^{n}")))
}
