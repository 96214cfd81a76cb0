use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldDescriptor, FieldElement};
use crate::limits::Limits;

/// Dense univariate polynomial, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldDescriptor,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: FieldDescriptor, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: &FieldDescriptor) -> Self {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &FieldDescriptor, c: FieldElement) -> Self {
        Self::new(field.clone(), vec![c])
    }

    /// The monic linear polynomial `x`.
    pub fn x(field: &FieldDescriptor) -> Self {
        Self::new(field.clone(), vec![field.zero(), field.one()])
    }

    /// `x - a`.
    pub fn linear_root(field: &FieldDescriptor, a: FieldElement) -> Self {
        Self::new(field.clone(), vec![field.neg(a), field.one()])
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_default()
    }

    fn check(&self, other: &UniPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).unwrap();
        self.scale(inv)
    }

    pub fn scale(&self, c: FieldElement) -> UniPoly {
        let f = &self.field;
        UniPoly::new(f.clone(), self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or_default();
                let b = other.coeffs.get(i).copied().unwrap_or_default();
                f.add(a, b)
            })
            .collect();
        UniPoly::new(f.clone(), c)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(self.field.neg(self.field.one())))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(f.clone(), out)
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn divrem(&self, d: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let f = &self.field;
        let dd = d.degree()?;
        let inv = f.inv(d.lead()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((UniPoly::zero(f), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c.is_zero() {
                continue;
            }
            q[i - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = f.sub(r[k], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        Some((UniPoly::new(f.clone(), q), UniPoly::new(f.clone(), r)))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).expect("division by zero polynomial").1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly> {
        self.check(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_int((i as u64 % f.p()) as i64)))
            .collect();
        UniPoly::new(f.clone(), c)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &UniPoly) -> UniPoly {
        let f = &self.field;
        let mut result = UniPoly::constant(f, f.one()).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        result
    }

    /// True iff no repeated root over the algebraic closure. When the
    /// derivative vanishes identically, `f = g(x^p) = h^p` over a perfect field.
    pub fn is_squarefree(&self) -> Result<bool> {
        match self.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Ok(true),
            Some(_) => {
                let d = self.derivative();
                if d.is_zero() {
                    return Ok(false);
                }
                Ok(self.gcd(&d)?.degree() == Some(0))
            }
        }
    }

    /// Roots in the polynomial's own field, with multiplicities, sorted by index.
    pub fn roots(&self) -> Result<Vec<(FieldElement, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = &self.field;
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let monic = self.monic();
        let x = UniPoly::x(f);
        let xq = x.powmod(f.order() as u128, &monic);
        let split = monic.gcd(&xq.sub(&x))?;
        let mut simple = Vec::new();
        let mut rng = crate::seed::rng(0x5eed_0f_5017, &[f.order(), split.degree().unwrap_or(0) as u64]);
        equal_degree_split(&split, &mut rng, &mut simple);
        simple.sort();
        let mut out = Vec::with_capacity(simple.len());
        for r in simple {
            let lin = UniPoly::linear_root(f, r);
            let mut mult = 0;
            let mut cur = monic.clone();
            loop {
                let (q, rem) = cur.divrem(&lin).unwrap();
                if !rem.is_zero() {
                    break;
                }
                mult += 1;
                cur = q;
            }
            out.push((r, mult));
        }
        Ok(out)
    }

    /// Roots lying in the degree-`k` extension of the coefficient field.
    pub fn roots_in_extension(&self, k: u32, limits: &Limits) -> Result<Vec<(FieldElement, u32)>> {
        let ext = self.field.extension_with_limits(k, limits)?;
        self.embed(&ext)?.roots()
    }

    /// Coefficient-wise image in an extension field.
    pub fn embed(&self, target: &FieldDescriptor) -> Result<UniPoly> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let e = self.field.embedding_into(target)?;
        Ok(UniPoly::new(target.clone(), self.coeffs.iter().map(|&c| e.apply(c)).collect()))
    }
}

/// Splits a monic product of distinct linear factors into its roots.
fn equal_degree_split(g: &UniPoly, rng: &mut impl Rng, out: &mut Vec<FieldElement>) {
    let f = g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(f.neg(g.coeffs()[0])),
        Some(deg) => loop {
            let a = f.element(rng.random_range(0..f.order()));
            let probe = if f.p() == 2 {
                // Absolute trace of a*x: sum of (a x)^{2^i}, i < M.
                let base = UniPoly::new(f.clone(), vec![f.zero(), a]).rem(g);
                let mut acc = base.clone();
                let mut cur = base;
                for _ in 1..f.degree() {
                    cur = cur.mul(&cur).rem(g);
                    acc = acc.add(&cur);
                }
                acc
            } else {
                let lin = UniPoly::new(f.clone(), vec![a, f.one()]);
                let e = (f.order() as u128 - 1) / 2;
                lin.powmod(e, g).sub(&UniPoly::constant(f, f.one()))
            };
            let h = g.gcd(&probe).unwrap();
            let hd = h.degree().unwrap_or(deg);
            if hd > 0 && hd < deg {
                let other = g.divrem(&h).unwrap().0;
                equal_degree_split(&h, rng, out);
                equal_degree_split(&other, rng, out);
                return;
            }
        },
    }
}

/// Monic gcd of two polynomials over the same field.
pub fn upoly_gcd(f: &UniPoly, g: &UniPoly) -> Result<UniPoly> {
    f.gcd(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &FieldDescriptor, c: &[i64]) -> UniPoly {
        UniPoly::new(f.clone(), c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn gcd_examples() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        let g = poly(&f5, &[-1, 0, 1]).gcd(&poly(&f5, &[-1, 1])).unwrap();
        assert_eq!(g, poly(&f5, &[-1, 1]));
        let h = poly(&f5, &[2, 3, 2]);
        assert_eq!(h.gcd(&UniPoly::zero(&f5)).unwrap(), h.monic());
        let f7 = FieldDescriptor::prime(7).unwrap();
        assert!(matches!(h.gcd(&poly(&f7, &[1])), Err(Error::FieldMismatch)));
    }

    #[test]
    fn squarefree_examples() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        assert!(poly(&f3, &[0, 1, 1]).is_squarefree().unwrap());
        assert!(!poly(&f3, &[0, 0, 1, 1]).is_squarefree().unwrap());
        assert!(!poly(&f3, &[-2, 0, 0, 1]).is_squarefree().unwrap());
        assert!(matches!(UniPoly::zero(&f3).is_squarefree(), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn roots_of_x2_plus_1_over_f3() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        let f = poly(&f3, &[1, 0, 1]);
        let lim = Limits::default();
        assert!(f.roots_in_extension(1, &lim).unwrap().is_empty());
        let r = f.roots_in_extension(2, &lim).unwrap();
        assert_eq!(r.len(), 2);
        let f9 = f3.extension(2).unwrap();
        assert_eq!(f9.add(r[0].0, r[1].0), f9.zero());
        assert!(r.iter().all(|&(_, m)| m == 1));
    }

    #[test]
    fn multiplicities() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        // (x-1)^3 (x-2)
        let f = poly(&f5, &[-1, 1]).mul(&poly(&f5, &[-1, 1])).mul(&poly(&f5, &[-1, 1])).mul(&poly(&f5, &[-2, 1]));
        assert_eq!(f.roots().unwrap(), vec![(f5.from_int(1), 3), (f5.from_int(2), 1)]);
    }

    #[test]
    fn roots_in_characteristic_two() {
        let f2 = FieldDescriptor::prime(2).unwrap();
        // x^4 + x + 1 splits in F_16.
        let f = poly(&f2, &[1, 1, 0, 0, 1]);
        let r = f.roots_in_extension(4, &Limits::default()).unwrap();
        assert_eq!(r.len(), 4);
        let f16 = f2.extension(4).unwrap();
        let g = f.embed(&f16).unwrap();
        assert!(r.iter().all(|&(x, _)| g.eval(x).is_zero()));
    }
}
