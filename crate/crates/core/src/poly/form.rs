use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf::{FieldDescriptor, FieldElement};
use crate::limits::Limits;
use crate::poly::UniPoly;

/// Sparse homogeneous polynomial. Every stored exponent vector has length
/// `nvars` and sums to `degree`; no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    field: FieldDescriptor,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl Form {
    pub fn zero(field: &FieldDescriptor, nvars: usize, degree: u32) -> Self {
        Form { field: field.clone(), nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(field: &FieldDescriptor, nvars: usize, c: FieldElement) -> Self {
        let mut f = Form::zero(field, nvars, 0);
        if !c.is_zero() {
            f.terms.insert(vec![0; nvars], c);
        }
        f
    }

    pub fn variable(field: &FieldDescriptor, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut f = Form::zero(field, nvars, 1);
        f.terms.insert(e, field.one());
        f
    }

    /// `sum_i c_i x_i`.
    pub fn linear(field: &FieldDescriptor, coeffs: &[FieldElement]) -> Self {
        let n = coeffs.len();
        let mut f = Form::zero(field, n, 1);
        for (i, &c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                f.terms.insert(e, c);
            }
        }
        f
    }

    /// Collects terms, summing duplicates. The degree is taken from the first
    /// term; an empty list yields the zero form of degree 0.
    pub fn from_terms(
        field: &FieldDescriptor,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self> {
        let mut degree = None;
        let mut out = Form::zero(field, nvars, 0);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
            }
            let d: u32 = e.iter().sum();
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => return Err(Error::Inhomogeneous { first: d0, other: d }),
                _ => {}
            }
            out.add_term(e, c);
        }
        out.degree = degree.unwrap_or(0);
        Ok(out)
    }

    /// Like [`Form::from_terms`] with an explicit degree (kept when all terms cancel).
    pub fn from_terms_with_degree(
        field: &FieldDescriptor,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self> {
        let mut out = Form::zero(field, nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
            }
            let d: u32 = e.iter().sum();
            if d != degree {
                return Err(Error::Inhomogeneous { first: degree, other: d });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: Vec<u32>, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], FieldElement)> + '_ {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> FieldElement {
        self.terms.get(e).copied().unwrap_or_default()
    }

    /// Sum; a zero summand adopts the other's degree.
    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.nvars, other.nvars, "form arity mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "form degree mismatch");
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Form {
        self.scale(self.field.neg(self.field.one()))
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Form {
        let f = &self.field;
        let mut out = Form::zero(f, self.nvars, self.degree);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, &a)| (e.clone(), f.mul(a, c))).collect();
        out
    }

    pub fn mul(&self, other: &Form) -> Form {
        assert_eq!(self.nvars, other.nvars, "form arity mismatch");
        let f = &self.field;
        let mut out = Form::zero(f, self.nvars, self.degree + other.degree);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(c1, c2));
            }
        }
        out
    }

    /// `self^e`. Powers of the characteristic use the Frobenius identity
    /// `(sum c m)^{p^s} = sum c^{p^s} m^{p^s}`.
    pub fn pow(&self, e: u32, limits: &Limits) -> Result<Form> {
        let total = self.degree as u64 * e as u64;
        if total > limits.max_degree {
            return Err(Error::DegreeTooLarge { degree: total, cap: limits.max_degree });
        }
        let f = &self.field;
        if e == 0 {
            return Ok(Form::constant(f, self.nvars, f.one()));
        }
        if is_power_of(e as u64, f.p()) {
            let mut out = Form::zero(f, self.nvars, total as u32);
            out.terms = self
                .terms
                .iter()
                .map(|(m, &c)| (m.iter().map(|x| x * e).collect(), f.pow(c, e as u128)))
                .collect();
            return Ok(out);
        }
        let mut result = Form::constant(f, self.nvars, f.one());
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result.degree = total as u32;
        Ok(result)
    }

    /// Formal partial derivative in `x_i`; degree `d - 1` (a zero form when `d = 0`).
    pub fn partial(&self, i: usize) -> Form {
        let f = &self.field;
        let mut out = Form::zero(f, self.nvars, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let mult = f.from_int((k as u64 % f.p()) as i64);
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, f.mul(c, mult));
        }
        out
    }

    pub fn partials(&self) -> Vec<Form> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Evaluation at a coordinate vector over the form's own field.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let d = self.degree as usize;
        let powers: Vec<Vec<FieldElement>> = point
            .iter()
            .map(|&x| {
                let mut v = Vec::with_capacity(d + 1);
                let mut cur = f.one();
                for _ in 0..=d {
                    v.push(cur);
                    cur = f.mul(cur, x);
                }
                v
            })
            .collect();
        let mut acc = f.zero();
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = f.mul(t, powers[i][k as usize]);
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Evaluation at coordinates over an extension, embedding coefficients.
    pub fn eval_in(&self, field: &FieldDescriptor, point: &[FieldElement]) -> Result<FieldElement> {
        if field == &self.field {
            return self.eval(point);
        }
        self.embed(field)?.eval(point)
    }

    /// Coefficient-wise image in an extension field.
    pub fn embed(&self, target: &FieldDescriptor) -> Result<Form> {
        if target == &self.field {
            return Ok(self.clone());
        }
        let e = self.field.embedding_into(target)?;
        let mut out = Form::zero(target, self.nvars, self.degree);
        out.terms = self.terms.iter().map(|(m, &c)| (m.clone(), e.apply(c))).collect();
        Ok(out)
    }

    /// Substitutes `x = u B` where the rows of `B` are `basis`; the result is a
    /// form of the same degree in `basis.len()` variables.
    pub fn substitute_linear(&self, basis: &[Vec<FieldElement>]) -> Result<Form> {
        for row in basis {
            if row.len() != self.nvars {
                return Err(Error::DimensionMismatch { expected: self.nvars, found: row.len() });
            }
        }
        let f = &self.field;
        let m = basis.len();
        let d = self.degree as usize;
        // pw[i][k] = (sum_j B[j][i] u_j)^k
        let mut pw: Vec<Vec<Form>> = Vec::with_capacity(self.nvars);
        let mut needed = vec![0u32; self.nvars];
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                needed[i] = needed[i].max(k);
            }
        }
        for (i, &need) in needed.iter().enumerate() {
            let col: Vec<FieldElement> = basis.iter().map(|row| row[i]).collect();
            let lin = Form::linear(f, &col);
            let mut v = Vec::with_capacity(need as usize + 1);
            v.push(Form::constant(f, m, f.one()));
            for k in 1..=need as usize {
                let next = v[k - 1].mul(&lin);
                v.push(next);
            }
            pw.push(v);
        }
        let mut out = Form::zero(f, m, self.degree);
        for (e, &c) in &self.terms {
            let mut t = Form::constant(f, m, c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&pw[i][k as usize]);
                }
            }
            for (e2, &c2) in &t.terms {
                out.add_term(e2.clone(), c2);
            }
        }
        debug_assert!(out.terms.keys().all(|e| e.iter().sum::<u32>() as usize == d));
        Ok(out)
    }

    /// Univariate polynomial in the last variable after fixing the others.
    pub fn specialize_last(&self, prefix: &[FieldElement]) -> UniPoly {
        let f = &self.field;
        debug_assert_eq!(prefix.len() + 1, self.nvars);
        let mut coeffs = vec![f.zero(); self.degree as usize + 1];
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &k) in e[..prefix.len()].iter().enumerate() {
                if k > 0 {
                    t = f.mul(t, f.pow(prefix[i], k as u128));
                }
            }
            let j = e[prefix.len()] as usize;
            coeffs[j] = f.add(coeffs[j], t);
        }
        UniPoly::new(f.clone(), coeffs)
    }

    /// For a binary form `G(u0, u1)`, the polynomial `G(1, x)`.
    pub fn dehomogenize_binary(&self) -> UniPoly {
        assert_eq!(self.nvars, 2, "binary form expected");
        let f = &self.field;
        let mut coeffs = vec![f.zero(); self.degree as usize + 1];
        for (e, &c) in &self.terms {
            coeffs[e[1] as usize] = c;
        }
        UniPoly::new(f.clone(), coeffs)
    }

    /// Appends unused variables so the form lives in `nvars` variables.
    pub fn with_nvars(&self, nvars: usize) -> Form {
        let mut out = Form::zero(&self.field, nvars, self.degree);
        for (e, &c) in &self.terms {
            let mut e2 = e.clone();
            e2.resize(nvars, 0);
            out.terms.insert(e2, c);
        }
        out
    }
}

fn is_power_of(e: u64, p: u64) -> bool {
    let mut v = e;
    if v < p {
        return false;
    }
    while v % p == 0 {
        v /= p;
    }
    v == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fermat(f: &FieldDescriptor) -> Form {
        Form::from_terms(f, 3, [(vec![3, 0, 0], f.one()), (vec![0, 3, 0], f.one()), (vec![0, 0, 3], f.one())])
            .unwrap()
    }

    #[test]
    fn inhomogeneous_rejected() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        let r = Form::from_terms(&f5, 2, [(vec![2, 0], f5.one()), (vec![0, 1], f5.one())]);
        assert!(matches!(r, Err(Error::Inhomogeneous { first: 2, other: 1 })));
    }

    #[test]
    fn evaluation_examples() {
        let f7 = FieldDescriptor::prime(7).unwrap();
        let x = fermat(&f7);
        assert!(x.eval(&[f7.one(), f7.from_int(-1), f7.zero()]).unwrap().is_zero());
        assert!(x.eval(&[f7.zero(); 3]).unwrap().is_zero());
        assert!(matches!(x.eval(&[f7.one()]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn partials_of_fermat() {
        let f7 = FieldDescriptor::prime(7).unwrap();
        let p = fermat(&f7).partials();
        for (i, pi) in p.iter().enumerate() {
            let mut e = vec![0; 3];
            e[i] = 2;
            assert_eq!(pi, &Form::from_terms(&f7, 3, [(e, f7.from_int(3))]).unwrap());
        }
        let f3 = FieldDescriptor::prime(3).unwrap();
        assert!(fermat(&f3).partials().iter().all(Form::is_zero));
    }

    #[test]
    fn restriction_examples() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        let (o, z) = (f5.one(), f5.zero());
        let conic = Form::from_terms(&f5, 3, [(vec![1, 0, 1], o), (vec![0, 2, 0], f5.from_int(-1))]).unwrap();
        let on_x2 = conic.substitute_linear(&[vec![o, z, z], vec![z, o, z]]).unwrap();
        assert_eq!(on_x2, Form::from_terms(&f5, 2, [(vec![0, 2], f5.from_int(-1))]).unwrap());
        let on_x1 = conic.substitute_linear(&[vec![o, z, z], vec![z, z, o]]).unwrap();
        assert_eq!(on_x1, Form::from_terms(&f5, 2, [(vec![1, 1], o)]).unwrap());
        assert!(on_x1.dehomogenize_binary().is_squarefree().unwrap());
    }

    #[test]
    fn powers() {
        let f2 = FieldDescriptor::prime(2).unwrap();
        let lim = Limits::default();
        let s = Form::linear(&f2, &[f2.one(), f2.one()]);
        assert_eq!(s.pow(2, &lim).unwrap(), Form::from_terms(&f2, 2, [(vec![2, 0], f2.one()), (vec![0, 2], f2.one())]).unwrap());
        assert_eq!(s.pow(1, &lim).unwrap(), s);
        let f5 = FieldDescriptor::prime(5).unwrap();
        let l = Form::linear(&f5, &[f5.one(), f5.from_int(2)]);
        let fast = l.pow(5, &lim).unwrap();
        let mut slow = Form::constant(&f5, 2, f5.one());
        for _ in 0..5 {
            slow = slow.mul(&l);
        }
        assert_eq!(fast, slow);
        assert_eq!(fast, Form::from_terms(&f5, 2, [(vec![5, 0], f5.one()), (vec![0, 5], f5.from_int(2))]).unwrap());
        assert!(matches!(l.pow(10_000, &lim), Err(Error::DegreeTooLarge { .. })));
    }
}
