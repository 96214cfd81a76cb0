//! Projective emptiness through the Macaulay matrix. Generators with no
//! common zero in `P^r` generate every form of degree
//! `N* = (d_1 + ... + d_{r+1}) - r` (the `r+1` largest degrees), so one rank
//! computation in degree `N*` decides emptiness.

use std::collections::HashMap;

use crate::gf::{FieldDescriptor, FieldElement};
use crate::locus::SchemeSpec;

/// Outcome of the rank test. `degree` is the degree at which it was run
/// (0 when a nonzero constant decided it, `None` when too few generators).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MacaulayOutcome {
    pub empty: bool,
    pub degree: Option<u32>,
}

/// All exponent vectors of total degree `d` in `m` variables, lexicographically descending.
pub(crate) fn monomials(m: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let m = cur.len();
        if i == m - 1 {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    if m == 0 {
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

pub fn macaulay_test(spec: &SchemeSpec) -> MacaulayOutcome {
    let gens: Vec<_> = spec.forms().iter().filter(|f| !f.is_zero()).collect();
    if gens.iter().any(|g| g.degree() == 0) {
        return MacaulayOutcome { empty: true, degree: Some(0) };
    }
    let r = spec.ambient();
    if gens.len() < r + 1 {
        return MacaulayOutcome { empty: false, degree: None };
    }
    let mut degs: Vec<u32> = gens.iter().map(|g| g.degree()).collect();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    let n_star = degs[..=r].iter().sum::<u32>() - r as u32;
    let cols = monomials(r + 1, n_star);
    let index: HashMap<&[u32], usize> = cols.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let mut elim = Eliminator::new(spec.field(), cols.len());
    'outer: for g in &gens {
        for mult in monomials(r + 1, n_star - g.degree()) {
            let mut row = vec![FieldElement::ZERO; cols.len()];
            for (e, c) in g.terms() {
                let key: Vec<u32> = e.iter().zip(&mult).map(|(a, b)| a + b).collect();
                row[index[key.as_slice()]] = c;
            }
            elim.insert(row);
            if elim.full() {
                break 'outer;
            }
        }
    }
    MacaulayOutcome { empty: elim.full(), degree: Some(n_star) }
}

/// True iff the generators have no common zero over the algebraic closure.
pub fn macaulay_empty(spec: &SchemeSpec) -> bool {
    macaulay_test(spec).empty
}

/// Incremental row echelon form with normalized pivots.
struct Eliminator<'a> {
    field: &'a FieldDescriptor,
    ncols: usize,
    pivot_rows: Vec<Option<Vec<FieldElement>>>,
    rank: usize,
}

impl<'a> Eliminator<'a> {
    fn new(field: &'a FieldDescriptor, ncols: usize) -> Self {
        Eliminator { field, ncols, pivot_rows: vec![None; ncols], rank: 0 }
    }

    fn full(&self) -> bool {
        self.rank == self.ncols
    }

    fn insert(&mut self, mut row: Vec<FieldElement>) {
        let f = self.field;
        for c in 0..self.ncols {
            let v = row[c];
            if v.is_zero() {
                continue;
            }
            match &self.pivot_rows[c] {
                Some(p) => {
                    for j in c..self.ncols {
                        if !p[j].is_zero() {
                            row[j] = f.sub(row[j], f.mul(v, p[j]));
                        }
                    }
                }
                None => {
                    let inv = f.inv(v).unwrap();
                    for x in row[c..].iter_mut() {
                        *x = f.mul(*x, inv);
                    }
                    self.pivot_rows[c] = Some(row);
                    self.rank += 1;
                    return;
                }
            }
        }
    }
}
