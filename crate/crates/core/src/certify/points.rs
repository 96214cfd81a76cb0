//! Enumeration oracle for the points of a scheme over `F_{q^k}`.
//!
//! Points are found fiber by fiber: each normalized prefix
//! `[x_0 : ... : x_{r-1}]` turns the generators into univariate polynomials in
//! `x_r`, whose common roots in `F_{q^k}` complete the point. The point
//! `[0 : ... : 0 : 1]` is checked on its own.

use std::ops::ControlFlow;

use crate::error::Result;
use crate::gf::fp_poly;
use crate::limits::Limits;
use crate::locus::SchemeSpec;
use crate::poly::UniPoly;
use crate::projgeom::{ProjectivePoint, ProjectiveSpace};

/// Number of fibers visited at level `k`: `|P^{r-1}(F_{q^k})| + 1`.
pub(crate) fn fiber_count(spec: &SchemeSpec, k: u32) -> u128 {
    let r = spec.ambient();
    if r == 0 {
        return 1;
    }
    let qk = (spec.field().order() as u128).saturating_pow(k);
    ProjectiveSpace::new_len(qk, r - 1).saturating_add(1)
}

/// True iff the point's coordinates lie in no proper subfield `F_{q^j}`.
fn has_residue_degree(point: &ProjectivePoint, q: u64, k: u32) -> bool {
    if k == 1 {
        return true;
    }
    let field = point.field();
    for l in fp_poly::prime_factors(k as u64) {
        let j = k / l as u32;
        let inside = point.coords().iter().all(|&c| field.in_subfield(c, q, j).unwrap());
        if inside {
            return false;
        }
    }
    true
}

/// Visits the points of residue degree exactly `k`, in deterministic order.
pub(crate) fn visit_level<B>(
    spec: &SchemeSpec,
    k: u32,
    limits: &Limits,
    mut visit: impl FnMut(ProjectivePoint) -> ControlFlow<B>,
) -> Result<Option<B>> {
    limits.check_enumeration(fiber_count(spec, k))?;
    let base = spec.field();
    let q = base.order();
    let field = base.extension_with_limits(k, limits)?;
    let spec = spec.embed(&field)?;
    let r = spec.ambient();
    let forms: Vec<_> = spec.forms().iter().filter(|f| !f.is_zero()).collect();
    let mut emit = |p: ProjectivePoint| -> ControlFlow<B> {
        if has_residue_degree(&p, q, k) {
            visit(p)
        } else {
            ControlFlow::Continue(())
        }
    };
    if r == 0 {
        if k == 1 && forms.is_empty() {
            let p = ProjectivePoint::new(&field, vec![field.one()])?;
            if let ControlFlow::Break(b) = emit(p) {
                return Ok(Some(b));
            }
        }
        return Ok(None);
    }
    let prefixes = ProjectiveSpace::new(&field, r - 1);
    for idx in 0..prefixes.len() {
        let prefix = prefixes.point(idx);
        let mut g = UniPoly::zero(&field);
        for f in &forms {
            g = g.gcd(&f.specialize_last(prefix.coords()))?;
            if g.degree() == Some(0) {
                break;
            }
        }
        let lasts: Vec<_> = if g.is_zero() {
            field.elements().collect()
        } else {
            g.roots()?.into_iter().map(|(x, _)| x).collect()
        };
        for x in lasts {
            let mut coords = prefix.coords().to_vec();
            coords.push(x);
            if let ControlFlow::Break(b) = emit(ProjectivePoint::new(&field, coords)?) {
                return Ok(Some(b));
            }
        }
    }
    let mut apex = vec![field.zero(); r + 1];
    apex[r] = field.one();
    let on_all = forms.iter().all(|f| f.eval_unchecked(&apex).is_zero());
    if on_all {
        if let ControlFlow::Break(b) = emit(ProjectivePoint::new(&field, apex)?) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Every closed point of residue degree at most `kmax`, each reported once
/// over `F_{q^k}` for its residue degree `k`, ordered by `k`.
pub fn scheme_points_upto(spec: &SchemeSpec, kmax: u32, limits: &Limits) -> Result<Vec<ProjectivePoint>> {
    let mut out = Vec::new();
    for k in 1..=kmax {
        visit_level::<()>(spec, k, limits, |p| {
            out.push(p);
            ControlFlow::Continue(())
        })?;
    }
    Ok(out)
}

/// First point of residue degree exactly `k`, if any.
pub(crate) fn first_point(spec: &SchemeSpec, k: u32, limits: &Limits) -> Result<Option<ProjectivePoint>> {
    visit_level(spec, k, limits, ControlFlow::Break)
}

impl ProjectiveSpace {
    pub(crate) fn new_len(qk: u128, n: usize) -> u128 {
        let mut acc = 0u128;
        let mut block = 1u128;
        for _ in 0..=n {
            acc = acc.saturating_add(block);
            block = block.saturating_mul(qk);
        }
        acc
    }
}
