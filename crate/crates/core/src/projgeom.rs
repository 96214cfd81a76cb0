//! Projective points, canonical linear subspaces over the base field, duality
//! and anchored enumeration of subspaces.
//!
//! A [`LinearSubspace`] is stored by its reduced row echelon basis, so two
//! subspaces are equal exactly when their matrices are. All enumerations run
//! in a fixed lexicographic order and can be addressed by index.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldDescriptor, FieldElement};
use crate::limits::Limits;

/// A point of `P^n(K)` whose first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    field: FieldDescriptor,
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    /// Normalizes a nonzero vector.
    pub fn new(field: &FieldDescriptor, coords: Vec<FieldElement>) -> Result<Self> {
        let lead = coords.iter().find(|c| !c.is_zero()).copied().ok_or(Error::ZeroSpan)?;
        let inv = field.inv(lead).unwrap();
        let coords = coords.into_iter().map(|c| field.mul(c, inv)).collect();
        Ok(ProjectivePoint { field: field.clone(), coords })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Ambient dimension `n`.
    pub fn ambient(&self) -> usize {
        self.coords.len() - 1
    }

    /// The same point with coordinates embedded in an extension.
    pub fn embed(&self, target: &FieldDescriptor) -> Result<ProjectivePoint> {
        if target == &self.field {
            return Ok(self.clone());
        }
        let e = self.field.embedding_into(target)?;
        Ok(ProjectivePoint { field: target.clone(), coords: self.coords.iter().map(|&c| e.apply(c)).collect() })
    }

    /// Coordinatewise `q`-power Frobenius image (still normalized).
    pub fn frobenius(&self, q: u64) -> Result<ProjectivePoint> {
        let coords = self.coords.iter().map(|&c| self.field.frobenius_q(c, q)).collect::<Result<Vec<_>>>()?;
        Ok(ProjectivePoint { field: self.field.clone(), coords })
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|&c| self.field.format(c)).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

/// `P^n(K)` with points addressed by index in lexicographic order of
/// normalized coordinates.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: FieldDescriptor,
    n: usize,
    /// `offsets[i]` is the index of the first point whose leading 1 sits at position `n - i`.
    offsets: Vec<u128>,
}

impl ProjectiveSpace {
    pub fn new(field: &FieldDescriptor, n: usize) -> Self {
        let q = field.order() as u128;
        let mut offsets = Vec::with_capacity(n + 2);
        let mut acc = 0u128;
        let mut block = 1u128;
        for _ in 0..=n {
            offsets.push(acc);
            acc = acc.saturating_add(block);
            block = block.saturating_mul(q);
        }
        offsets.push(acc);
        ProjectiveSpace { field: field.clone(), n, offsets }
    }

    /// `(Q^{n+1} - 1) / (Q - 1)`, saturating.
    pub fn len(&self) -> u128 {
        self.offsets[self.n + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, index: u128) -> ProjectivePoint {
        let n = self.n;
        let i = (0..=n).rev().find(|&i| self.offsets[i] <= index).unwrap();
        let lead = n - i;
        let mut rest = index - self.offsets[i];
        let q = self.field.order() as u128;
        let mut coords = vec![self.field.zero(); n + 1];
        coords[lead] = self.field.one();
        for k in (lead + 1..=n).rev() {
            coords[k] = self.field.element((rest % q) as u64);
            rest /= q;
        }
        ProjectivePoint { field: self.field.clone(), coords }
    }

    pub fn iter(&self) -> impl Iterator<Item = ProjectivePoint> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}

/// Every point of `P^n(K)` exactly once, in lexicographic order.
pub fn enumerate_points(
    n: usize,
    field: &FieldDescriptor,
    limits: &Limits,
) -> Result<impl Iterator<Item = ProjectivePoint>> {
    let space = ProjectiveSpace::new(field, n);
    limits.check_enumeration(space.len())?;
    Ok((0..space.len()).map(move |i| space.point(i)))
}

/// An `r`-plane of `P^n` defined over the base field, stored as an
/// `(r+1) x (n+1)` matrix in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSubspace {
    field: FieldDescriptor,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl PartialOrd for LinearSubspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearSubspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rows.len(), &self.pivots, &self.rows).cmp(&(other.rows.len(), &other.pivots, &other.rows))
    }
}

/// In-place reduced row echelon form; returns pivot columns. Zero rows are dropped.
pub(crate) fn rref(field: &FieldDescriptor, rows: &mut Vec<Vec<FieldElement>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c];
                for j in 0..ncols {
                    let v = field.mul(factor, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right kernel `{v : M v = 0}` of a matrix with `ncols` columns.
pub(crate) fn kernel(field: &FieldDescriptor, rows: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); ncols];
            v[fc] = field.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = field.neg(row[fc]);
            }
            v
        })
        .collect()
}

impl LinearSubspace {
    /// Canonical form of the row span.
    pub fn from_rows(field: &FieldDescriptor, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let width = rows.first().map(Vec::len).ok_or(Error::ZeroSpan)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != width) {
            return Err(Error::DimensionMismatch { expected: width, found: bad.len() });
        }
        let mut rows = rows;
        let pivots = rref(field, &mut rows);
        if rows.is_empty() {
            return Err(Error::ZeroSpan);
        }
        Ok(LinearSubspace { field: field.clone(), rows, pivots })
    }

    /// The whole of `P^n`.
    pub fn ambient_space(field: &FieldDescriptor, n: usize) -> Self {
        let rows = (0..=n)
            .map(|i| (0..=n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        LinearSubspace { field: field.clone(), rows, pivots: (0..=n).collect() }
    }

    pub fn from_point(point: &ProjectivePoint) -> Self {
        Self::from_rows(point.field(), vec![point.coords().to_vec()]).unwrap()
    }

    /// The hyperplane `sum a_i x_i = 0`.
    pub fn hyperplane(field: &FieldDescriptor, coeffs: &[FieldElement]) -> Result<Self> {
        let normal = Self::from_rows(field, vec![coeffs.to_vec()])?;
        normal.dual().ok_or(Error::ZeroSpan)
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Projective dimension `r`.
    pub fn dim(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.rows[0].len() - 1
    }

    /// Annihilator in the dual space; `None` for the whole space.
    pub fn dual(&self) -> Option<LinearSubspace> {
        let k = kernel(&self.field, &self.rows, self.ambient() + 1);
        if k.is_empty() {
            None
        } else {
            Some(Self::from_rows(&self.field, k).unwrap())
        }
    }

    /// Membership of a vector over the base field or any extension.
    pub fn contains_vector(&self, field: &FieldDescriptor, v: &[FieldElement]) -> Result<bool> {
        if v.len() != self.ambient() + 1 {
            return Err(Error::DimensionMismatch { expected: self.ambient() + 1, found: v.len() });
        }
        let emb = self.field.embedding_into(field)?;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            for (x, &h) in v.iter_mut().zip(row) {
                if !h.is_zero() {
                    *x = field.sub(*x, field.mul(c, emb.apply(h)));
                }
            }
        }
        Ok(v.iter().all(|x| x.is_zero()))
    }

    pub fn contains_point(&self, p: &ProjectivePoint) -> Result<bool> {
        self.contains_vector(p.field(), p.coords())
    }

    pub fn contains_subspace(&self, other: &LinearSubspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(&self.field, r).unwrap_or(false))
    }

    /// The span of `self` and one more vector.
    pub fn join_vector(&self, v: &[FieldElement]) -> Result<LinearSubspace> {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        Self::from_rows(&self.field, rows)
    }

    /// Columns that carry no pivot.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..=self.ambient()).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Parses `1,0,0,2; 0,1,0,1`.
    pub fn parse(field: &FieldDescriptor, text: &str) -> Result<LinearSubspace> {
        let rows = text
            .split(';')
            .map(|row| row.split(',').map(|e| field.parse(e.trim())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(field, rows)
    }
}

impl fmt::Display for LinearSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&c| self.field.format(c)).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

/// The `r`-planes through `h` (of dimension `r - 1`), in deterministic order.
#[derive(Clone, Debug)]
pub struct Superspaces {
    base: LinearSubspace,
    free: Vec<usize>,
    directions: ProjectiveSpace,
}

impl Superspaces {
    /// `sum_{i=0}^{n-r} q^i`.
    pub fn len(&self) -> u128 {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: u128) -> LinearSubspace {
        let dir = self.directions.point(index);
        let f = self.base.field();
        let mut v = vec![f.zero(); self.base.ambient() + 1];
        for (&c, &x) in self.free.iter().zip(dir.coords()) {
            v[c] = x;
        }
        self.base.join_vector(&v).unwrap()
    }

    pub fn iter(&self) -> impl Iterator<Item = LinearSubspace> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

/// Every `F_q` `r`-plane containing `h`, where `r = dim(h) + 1`. Added
/// directions are points of `P^{n-r}` supported on the non-pivot columns of `h`.
pub fn enumerate_superspaces(h: &LinearSubspace, r: usize) -> Result<Superspaces> {
    if r != h.dim() + 1 || r > h.ambient() {
        return Err(Error::InvalidParameter(format!(
            "superspaces of a {}-plane in P^{} must have dimension {}",
            h.dim(),
            h.ambient(),
            h.dim() + 1
        )));
    }
    let free = h.free_columns();
    let directions = ProjectiveSpace::new(h.field(), free.len() - 1);
    Ok(Superspaces { base: h.clone(), free, directions })
}

/// All `r`-planes of `P^n(F_q)`, ordered by pivot pattern and then by the
/// free entries of the echelon matrix.
pub fn enumerate_subspaces(
    field: &FieldDescriptor,
    n: usize,
    r: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = LinearSubspace>> {
    if r > n {
        return Err(Error::InvalidParameter(format!("no {r}-planes in P^{n}")));
    }
    limits.check_enumeration(grassmannian_size(field.order(), n, r))?;
    let field = field.clone();
    let patterns = combinations(n + 1, r + 1);
    Ok(patterns.into_iter().flat_map(move |pivots| {
        // Free cells: row i, column c > pivots[i], c not a pivot.
        let cells: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| (pc + 1..=n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let q = field.order();
        let total = (q as u128).pow(cells.len() as u32);
        let field = field.clone();
        (0..total).map(move |mut idx| {
            let mut rows = vec![vec![field.zero(); n + 1]; r + 1];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i][pc] = field.one();
            }
            for &(i, c) in cells.iter().rev() {
                rows[i][c] = field.element((idx % q as u128) as u64);
                idx /= q as u128;
            }
            LinearSubspace { field: field.clone(), rows, pivots: pivots.clone() }
        })
    }))
}

/// Number of `r`-planes in `P^n(F_q)` (Gaussian binomial), saturating.
pub fn grassmannian_size(q: u64, n: usize, r: usize) -> u128 {
    let q = q as u128;
    let (k, m) = (r + 1, n + 1);
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num = num.saturating_mul(q.saturating_pow((m - i) as u32).saturating_sub(1));
        den = den.saturating_mul(q.saturating_pow((i + 1) as u32) - 1);
    }
    if num == u128::MAX {
        u128::MAX
    } else {
        num / den
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f(p: u64) -> FieldDescriptor {
        FieldDescriptor::prime(p).unwrap()
    }

    fn v(field: &FieldDescriptor, xs: &[i64]) -> Vec<FieldElement> {
        xs.iter().map(|&x| field.from_int(x)).collect()
    }

    #[test]
    fn point_counts() {
        let lim = Limits::default();
        assert_eq!(enumerate_points(2, &f(2), &lim).unwrap().count(), 7);
        let f4 = FieldDescriptor::new(2, 2, None).unwrap();
        assert_eq!(enumerate_points(1, &f4, &lim).unwrap().count(), 5);
        let pts: Vec<_> = enumerate_points(3, &f(3), &lim).unwrap().collect();
        assert_eq!(pts.len(), 40);
        let set: HashSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), 40);
        // Order is lexicographic on coordinate indices.
        let keys: Vec<Vec<u64>> = pts.iter().map(|p| p.coords().iter().map(|c| c.index()).collect()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let tiny = Limits { max_enumeration: 10, ..Limits::default() };
        assert!(enumerate_points(3, &f(3), &tiny).is_err());
    }

    #[test]
    fn rref_examples() {
        let f5 = f(5);
        let h = LinearSubspace::from_rows(&f5, vec![v(&f5, &[0, 1, 0]), v(&f5, &[1, 0, 0])]).unwrap();
        assert_eq!(h.rows(), &[v(&f5, &[1, 0, 0]), v(&f5, &[0, 1, 0])]);
        let d = LinearSubspace::from_rows(&f5, vec![v(&f5, &[1, 1, 0]), v(&f5, &[2, 2, 0])]).unwrap();
        assert_eq!(d.dim(), 0);
        assert_eq!(d.rows(), &[v(&f5, &[1, 1, 0])]);
        assert!(matches!(LinearSubspace::from_rows(&f5, vec![v(&f5, &[0, 0])]), Err(Error::ZeroSpan)));
    }

    #[test]
    fn superspace_examples() {
        let f2 = f(2);
        let pt = LinearSubspace::from_rows(&f2, vec![v(&f2, &[1, 0, 0, 0])]).unwrap();
        assert_eq!(enumerate_superspaces(&pt, 1).unwrap().iter().count(), 7);
        let f5 = f(5);
        let pt = LinearSubspace::from_rows(&f5, vec![v(&f5, &[0, 1, 2])]).unwrap();
        assert_eq!(enumerate_superspaces(&pt, 1).unwrap().len(), 6);
        let f3 = f(3);
        let line = LinearSubspace::from_rows(&f3, vec![v(&f3, &[1, 0, 1, 0]), v(&f3, &[0, 1, 0, 2])]).unwrap();
        let planes: Vec<_> = enumerate_superspaces(&line, 2).unwrap().iter().collect();
        assert_eq!(planes.len(), 4);
        assert!(planes.iter().all(|p| p.contains_subspace(&line) && p.dim() == 2));
        assert_eq!(planes.iter().collect::<HashSet<_>>().len(), 4);
        assert!(enumerate_superspaces(&line, 3).is_err());
    }

    #[test]
    fn dual_examples() {
        let f3 = f(3);
        let h = LinearSubspace::hyperplane(&f3, &v(&f3, &[1, 0, 0, 0])).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.dual().unwrap().rows(), &[v(&f3, &[1, 0, 0, 0])]);
        assert!(LinearSubspace::ambient_space(&f3, 2).dual().is_none());
    }

    #[test]
    fn line_counts_in_p3() {
        let lim = Limits::default();
        for q in [2u64, 3, 5] {
            let lines: Vec<_> = enumerate_subspaces(&f(q), 3, 1, &lim).unwrap().collect();
            let expected = ((q * q + 1) * (q * q + q + 1)) as usize;
            assert_eq!(lines.len(), expected);
            assert_eq!(lines.iter().collect::<HashSet<_>>().len(), expected);
            assert_eq!(grassmannian_size(q, 3, 1), expected as u128);
            // Anchored count: every line through [1:0:0:0] appears.
            let pt = LinearSubspace::from_rows(&f(q), vec![v(&f(q), &[1, 0, 0, 0])]).unwrap();
            let through = lines.iter().filter(|l| l.contains_subspace(&pt)).count();
            assert_eq!(through as u128, enumerate_superspaces(&pt, 1).unwrap().len());
        }
    }

    #[test]
    fn membership_over_extension() {
        let f3 = f(3);
        let f9 = f3.extension(2).unwrap();
        let h = LinearSubspace::from_rows(&f3, vec![v(&f3, &[1, 0, 1]), v(&f3, &[0, 1, 1])]).unwrap();
        let t = f9.generator();
        // t*(1,0,1) + (0,1,1)
        let p = ProjectivePoint::new(&f9, vec![t, f9.one(), f9.add(t, f9.one())]).unwrap();
        assert!(h.contains_point(&p).unwrap());
        let q = ProjectivePoint::new(&f9, vec![t, f9.one(), f9.one()]).unwrap();
        assert!(!h.contains_point(&q).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let f5 = f(5);
        let h = LinearSubspace::parse(&f5, "1,0,0,2; 0,1,0,1").unwrap();
        assert_eq!(h.to_string(), "1,0,0,2; 0,1,0,1");
        assert_eq!(LinearSubspace::parse(&f5, &h.to_string()).unwrap(), h);
    }
}
