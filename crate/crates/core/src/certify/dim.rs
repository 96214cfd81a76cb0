//! Upper bounds on the dimension of a projective scheme.
//!
//! `dim S <= t` holds iff `S` meets some `t+1` hyperplanes emptily. The
//! Las Vegas test draws the hyperplanes at random over a field of order at
//! least 64 and is sound whenever it answers. The exact test walks hyperplanes
//! `H_a : sum a^i x_i = 0` on the moment curve: a `t`-dimensional component
//! lies in at most `r` of them, so among `r D + 1` values of `a` (with `D`
//! bounding the number of components) one cuts every top component properly.

use serde::Serialize;

use super::macaulay::macaulay_empty;
use crate::error::Result;
use crate::gf::{FieldDescriptor, FieldElement};
use crate::limits::Limits;
use crate::locus::SchemeSpec;
use crate::projgeom::kernel;
use rand::Rng;

/// Smallest slicing-field order for the randomized test.
pub const MIN_SLICE_FIELD: u64 = 64;
/// Default number of random slicing attempts.
pub const DEFAULT_RETRIES: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimVerdict {
    AtMost,
    Undetermined,
}

/// Result of [`dim_upper_bound`]. `AtMost` is backed by `slices`: `t + 1`
/// linear forms over `slice_field` whose addition makes the scheme empty.
#[derive(Clone, Debug)]
pub struct DimensionCertificate {
    pub t: i64,
    pub verdict: DimVerdict,
    pub attempts: u32,
    pub seed: u64,
    pub slice_field: FieldDescriptor,
    pub slices: Vec<Vec<FieldElement>>,
}

/// Smallest extension of `field` with at least `min_order` elements.
pub(crate) fn slicing_field(field: &FieldDescriptor, min_order: u64, limits: &Limits) -> Result<FieldDescriptor> {
    let mut k = 1u32;
    let q = field.order() as u128;
    while q.pow(k) < min_order as u128 {
        k += 1;
    }
    field.extension_with_limits(k, limits)
}

/// True iff adding the linear forms `slices` (over `field`, an extension of
/// the scheme's field) makes the scheme empty.
pub fn slices_empty(spec: &SchemeSpec, field: &FieldDescriptor, slices: &[Vec<FieldElement>]) -> Result<bool> {
    let nv = spec.nvars();
    if slices.is_empty() {
        return Ok(macaulay_empty(spec));
    }
    let basis = kernel(field, slices, nv);
    if basis.is_empty() {
        return Ok(true);
    }
    let cut = spec.embed(field)?.substitute(&basis)?;
    Ok(macaulay_empty(&cut))
}

/// Las Vegas certificate for `dim S <= t` (`t = -1` asks for emptiness).
pub fn dim_upper_bound(
    spec: &SchemeSpec,
    t: i64,
    retries: u32,
    seed: u64,
    limits: &Limits,
) -> Result<DimensionCertificate> {
    let r = spec.ambient() as i64;
    let mut cert = DimensionCertificate {
        t,
        verdict: DimVerdict::Undetermined,
        attempts: 0,
        seed,
        slice_field: spec.field().clone(),
        slices: Vec::new(),
    };
    if t >= r {
        cert.verdict = DimVerdict::AtMost;
        return Ok(cert);
    }
    if t < 0 {
        cert.attempts = 1;
        if macaulay_empty(spec) {
            cert.verdict = DimVerdict::AtMost;
        }
        return Ok(cert);
    }
    let field = slicing_field(spec.field(), MIN_SLICE_FIELD, limits)?;
    let embedded = spec.embed(&field)?;
    let nv = spec.nvars();
    for attempt in 0..retries {
        cert.attempts = attempt + 1;
        let mut rng = crate::seed::rng(seed, &[attempt as u64]);
        let slices: Vec<Vec<FieldElement>> = (0..=t)
            .map(|_| (0..nv).map(|_| field.element(rng.random_range(0..field.order()))).collect())
            .collect();
        let basis = kernel(&field, &slices, nv);
        if basis.len() != nv - (t as usize + 1) {
            continue;
        }
        if macaulay_empty(&embedded.substitute(&basis)?) {
            cert.verdict = DimVerdict::AtMost;
            cert.slice_field = field;
            cert.slices = slices;
            return Ok(cert);
        }
    }
    Ok(cert)
}

/// Bound on the number of irreducible components: the product of the
/// `min(s, r+1)` largest generator degrees.
pub(crate) fn component_bound(spec: &SchemeSpec) -> u128 {
    let mut degs: Vec<u128> = spec.forms().iter().filter(|f| !f.is_zero()).map(|f| f.degree() as u128).collect();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    degs.iter().take(spec.nvars()).fold(1u128, |acc, &d| acc.saturating_mul(d.max(1)))
}

/// Deterministic decision of `dim S <= t`.
pub fn dim_at_most_exact(spec: &SchemeSpec, t: i64, limits: &Limits) -> Result<bool> {
    let r = spec.ambient() as i64;
    if t >= r {
        return Ok(true);
    }
    if t < 0 {
        return Ok(macaulay_empty(spec));
    }
    if spec.forms().iter().all(|f| f.is_zero()) {
        return Ok(false);
    }
    let needed = (r as u128).saturating_mul(component_bound(spec)).saturating_add(1);
    limits.check_enumeration(needed)?;
    let field = slicing_field(spec.field(), needed as u64, limits)?;
    let embedded = spec.embed(&field)?;
    let nv = spec.nvars();
    for idx in 0..needed as u64 {
        let a = field.element(idx);
        let mut normal = Vec::with_capacity(nv);
        let mut cur = field.one();
        for _ in 0..nv {
            normal.push(cur);
            cur = field.mul(cur, a);
        }
        let basis = kernel(&field, &[normal], nv);
        let cut = embedded.substitute(&basis)?;
        if dim_at_most_exact(&cut, t - 1, limits)? {
            return Ok(true);
        }
    }
    Ok(false)
}
