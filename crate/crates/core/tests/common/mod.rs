//! Property checks shared by the property suite and the acceptance runner.
//! Each check takes a case seed and derives its inputs deterministically.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transverse_core::audit::random_form;
use transverse_core::{FieldDescriptor, FieldElement, Form, LinearSubspace};

pub const CASES: u32 = 1000;
pub const SEED: [u8; 32] = *b"transverse-property-suite-seed!!";

pub const FIELDS: &[(u64, u32)] = &[(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (2, 4), (11, 1)];

pub fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

pub fn field(i: usize) -> FieldDescriptor {
    let (p, m) = FIELDS[i % FIELDS.len()];
    FieldDescriptor::new(p, m, None).unwrap()
}

fn elem(f: &FieldDescriptor, g: &mut ChaCha8Rng) -> FieldElement {
    f.element(g.random_range(0..f.order()))
}

fn vector(f: &FieldDescriptor, len: usize, g: &mut ChaCha8Rng) -> Vec<FieldElement> {
    (0..len).map(|_| elem(f, g)).collect()
}

fn subspace(f: &FieldDescriptor, n: usize, g: &mut ChaCha8Rng) -> LinearSubspace {
    loop {
        let k = g.random_range(1..=n + 1);
        if let Ok(h) = LinearSubspace::from_rows(f, (0..k).map(|_| vector(f, n + 1, g)).collect()) {
            return h;
        }
    }
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.into()))
    }
}

/// `sum_i x_i dF/dx_i = d F`.
pub fn euler(seed: u64) -> Result<(), TestCaseError> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let f = field(g.random_range(0..FIELDS.len()));
    let nvars = g.random_range(1..=4);
    let d = g.random_range(0..=4);
    let form = random_form(&f, nvars, d, &mut g);
    let mut lhs = Form::zero(&f, nvars, d);
    for (i, p) in form.partials().iter().enumerate() {
        lhs = lhs.add(&Form::variable(&f, nvars, i).mul(p));
    }
    let rhs = form.scale(f.from_int(d as i64));
    ensure(lhs.sub(&rhs).is_zero(), format!("Euler relation fails for {form}"))
}

/// Frobenius is a field automorphism of order `m`, and its fixed fields are the subfields.
pub fn frobenius(seed: u64) -> Result<(), TestCaseError> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let f = field(g.random_range(0..FIELDS.len()));
    let (p, m) = (f.p(), f.degree());
    let (a, b) = (elem(&f, &mut g), elem(&f, &mut g));
    let fr = |x| f.frobenius_q(x, p).unwrap();
    ensure(fr(f.add(a, b)) == f.add(fr(a), fr(b)), "additive")?;
    ensure(fr(f.mul(a, b)) == f.mul(fr(a), fr(b)), "multiplicative")?;
    ensure(fr(a) == f.pow(a, p as u128), "p-th power")?;
    ensure(f.frobenius_iter(a, p, m).unwrap() == a, "order divides m")?;
    let deg = f.residue_degree(a, p).unwrap();
    ensure(m % deg == 0, "residue degree divides m")?;
    for j in 1..=m {
        let fixed = f.pow(a, (p as u128).pow(j)) == a;
        ensure(fixed == (j % deg == 0), "fixed field matches residue degree")?;
        match f.in_subfield(a, p, j) {
            Ok(inside) => ensure(m % j == 0 && inside == fixed, "subfield membership")?,
            Err(_) => ensure(m % j != 0, "only non-divisors are rejected")?,
        }
    }
    Ok(())
}

/// `dual(dual(H)) = H` for proper subspaces.
pub fn duality(seed: u64) -> Result<(), TestCaseError> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let f = field(g.random_range(0..FIELDS.len()));
    let n = g.random_range(1..=4);
    let h = subspace(&f, n, &mut g);
    match h.dual() {
        None => ensure(h.dim() == n, "only the whole space has an empty dual"),
        Some(d) => {
            ensure(d.dim() + h.dim() == n - 1, "dimensions add up")?;
            for (u, v) in h.rows().iter().zip(d.rows()) {
                let dot = f.sum(u.iter().zip(v).map(|(&x, &y)| f.mul(x, y)));
                ensure(dot.is_zero(), "dual annihilates")?;
            }
            ensure(d.dual().as_ref() == Some(&h), "involution")
        }
    }
}

/// Any basis of the same span gives the same canonical subspace.
pub fn rref_canonical(seed: u64) -> Result<(), TestCaseError> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let f = field(g.random_range(0..FIELDS.len()));
    let n = g.random_range(1..=4);
    let h = subspace(&f, n, &mut g);
    let k = h.rows().len();
    // Random combinations plus redundant rows; the span is unchanged when the
    // first k combinations are independent, which from_rows detects by rank.
    let extra = g.random_range(0..=2);
    let mixed: Vec<Vec<FieldElement>> = (0..k + extra)
        .map(|_| {
            let c = vector(&f, k, &mut g);
            (0..=n).map(|j| f.sum(h.rows().iter().zip(&c).map(|(row, &cc)| f.mul(cc, row[j])))).collect()
        })
        .collect();
    match LinearSubspace::from_rows(&f, mixed) {
        Ok(m) if m.dim() == h.dim() => ensure(m == h, "same span, same canonical form"),
        Ok(m) => ensure(h.contains_subspace(&m), "combinations stay inside the span"),
        Err(_) => Ok(()),
    }
}

/// `F|_H(u) = F(u B)`.
pub fn restriction(seed: u64) -> Result<(), TestCaseError> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let f = field(g.random_range(0..FIELDS.len()));
    let n = g.random_range(1..=3);
    let d = g.random_range(1..=3);
    let form = random_form(&f, n + 1, d, &mut g);
    let h = subspace(&f, n, &mut g);
    let restricted = form.substitute_linear(h.rows()).unwrap();
    let u = vector(&f, h.rows().len(), &mut g);
    let x: Vec<FieldElement> =
        (0..=n).map(|j| f.sum(h.rows().iter().zip(&u).map(|(row, &c)| f.mul(c, row[j])))).collect();
    ensure(restricted.eval(&u).unwrap() == form.eval(&x).unwrap(), "restriction commutes with evaluation")
}

pub const SUITES: &[(&str, fn(u64) -> Result<(), TestCaseError>)] = &[
    ("euler relation", euler),
    ("frobenius and subfields", frobenius),
    ("duality involution", duality),
    ("rref canonicalization", rref_canonical),
    ("restriction-evaluation compatibility", restriction),
];

/// Runs one suite with the fixed seed; returns the number of cases on success.
pub fn run_suite(check: fn(u64) -> Result<(), TestCaseError>) -> Result<u32, String> {
    runner().run(&any::<u64>(), check).map(|_| CASES).map_err(|e| e.to_string())
}
