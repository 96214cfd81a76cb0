//! Counting experiments: exhaustive tallies over `F_q`-rational lines,
//! hyperplanes and superspaces, compared with closed-form bounds that are
//! recomputed from their formulas on every run.
//!
//! Every experiment returns [`AuditReport`]s. A report passes when the
//! observed count satisfies its comparison against the bound. Counts are merged
//! associatively across workers, so totals never depend on the partition.

pub mod bounds;
pub mod fixtures;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{
    is_empty_projective, is_smooth, is_transverse, is_very_transverse_exact, reduced_form, restrict,
    EmptinessVerdict,
};
use crate::error::{Error, Result};
use crate::gf::FieldDescriptor;
use crate::limits::Limits;
use crate::locus::Hypersurface;
use crate::poly::Form;
use crate::projgeom::{enumerate_subspaces, enumerate_superspaces, LinearSubspace, ProjectiveSpace};
use crate::search::{self, check_inequality_lemmas, required_q, Mode};
use crate::seed::mix;

use bounds::{Bound, Vars};
pub use fixtures::{random_form, random_reduced, random_smooth, CurveFixture, Fixture};

/// Shared settings for a batch of experiments.
#[derive(Clone, Debug)]
pub struct AuditContext {
    pub seed: u64,
    pub limits: Limits,
    /// Record wall-clock time; off by default so reports are reproducible byte for byte.
    pub timings: bool,
}

impl Default for AuditContext {
    fn default() -> Self {
        AuditContext { seed: 0, limits: Limits::default(), timings: false }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    pub n: Option<u64>,
    pub d: Option<u64>,
    pub q: Option<u64>,
    pub r: Option<u64>,
    pub t: Option<u64>,
}

impl Params {
    fn vars(&self) -> Vars {
        let c = |x: Option<u64>| x.map(i128::from);
        Vars { n: c(self.n), d: c(self.d), q: c(self.q), r: c(self.r), t: c(self.t) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    AtMost,
    AtLeast,
    Exact,
    /// No expected value; the count is recorded only.
    Observed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Observed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub experiment: String,
    pub params: Params,
    pub observed: i64,
    pub bound: Option<i64>,
    pub bound_formula: String,
    pub comparison: Comparison,
    pub citation: String,
    pub verdict: Verdict,
    pub runtime_ms: Option<u64>,
    pub seed: u64,
}

impl AuditReport {
    pub const CSV_HEADER: [&'static str; 14] = [
        "experiment",
        "n",
        "d",
        "q",
        "r",
        "t",
        "observed",
        "bound",
        "bound_formula",
        "comparison",
        "citation",
        "verdict",
        "runtime_ms",
        "seed",
    ];

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn csv_record(&self) -> Vec<String> {
        let o = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        let p = &self.params;
        vec![
            self.experiment.clone(),
            o(p.n),
            o(p.d),
            o(p.q),
            o(p.r),
            o(p.t),
            self.observed.to_string(),
            self.bound.map(|b| b.to_string()).unwrap_or_default(),
            self.bound_formula.clone(),
            serde_json::to_value(self.comparison).unwrap().as_str().unwrap().to_string(),
            self.citation.clone(),
            serde_json::to_value(self.verdict).unwrap().as_str().unwrap().to_string(),
            self.runtime_ms.map(|b| b.to_string()).unwrap_or_default(),
            self.seed.to_string(),
        ]
    }
}

struct Timer<'a> {
    ctx: &'a AuditContext,
    start: Instant,
}

impl<'a> Timer<'a> {
    fn new(ctx: &'a AuditContext) -> Self {
        Timer { ctx, start: Instant::now() }
    }

    fn report(&self, experiment: impl Into<String>, params: Params, observed: u128, bound: &Bound, cmp: Comparison) -> Result<AuditReport> {
        let observed = i64::try_from(observed).map_err(|_| Error::InvalidParameter("count overflows".into()))?;
        let value = match cmp {
            Comparison::Observed => None,
            _ => Some(bound.floor(&params.vars())?),
        };
        let bound_i64 = value.map(|v| i64::try_from(v).map_err(|_| Error::InvalidParameter("bound overflows".into()))).transpose()?;
        let ok = match (cmp, value) {
            (Comparison::AtMost, Some(b)) => (observed as i128) <= b,
            (Comparison::AtLeast, Some(b)) => (observed as i128) >= b,
            // Exact comparisons need an integral bound.
            (Comparison::Exact, Some(_)) => bound.eval(&params.vars())? == (observed as i128).into(),
            _ => true,
        };
        Ok(AuditReport {
            experiment: experiment.into(),
            params,
            observed,
            bound: bound_i64,
            bound_formula: bound.formula().into(),
            comparison: cmp,
            citation: bound.citation().into(),
            verdict: match (cmp, ok) {
                (Comparison::Observed, _) => Verdict::Observed,
                (_, true) => Verdict::Pass,
                (_, false) => Verdict::Fail,
            },
            runtime_ms: self.ctx.timings.then(|| self.start.elapsed().as_millis() as u64),
            seed: self.ctx.seed,
        })
    }
}

/// Counts indices in `0..total` satisfying a fallible predicate, in parallel.
fn par_count(total: u128, pred: impl Fn(u128) -> Result<bool> + Sync) -> Result<u128> {
    (0..total).into_par_iter().map(|i| pred(i).map(u128::from)).try_reduce(|| 0, |a, b| Ok(a + b))
}

fn hyperplane_at(normals: &ProjectiveSpace, i: u128) -> LinearSubspace {
    let p = normals.point(i);
    LinearSubspace::hyperplane(p.field(), p.coords()).expect("nonzero normal")
}

/// Exhaustive count of non-transverse `F_q`-lines to a plane curve, against
/// the reduced-curve bound, the irreducible-curve bound when the fixture has
/// one declared component, and the exact conic count for irreducible conics.
pub fn count_nontransverse_lines(fx: &CurveFixture, ctx: &AuditContext) -> Result<Vec<AuditReport>> {
    let timer = Timer::new(ctx);
    let x = fx.hypersurface()?;
    if x.n() != 2 {
        return Err(Error::InvalidParameter("line count needs a plane curve".into()));
    }
    let normals = ProjectiveSpace::new(x.field(), 2);
    ctx.limits.check_enumeration(normals.len())?;
    let bad = par_count(normals.len(), |i| Ok(!is_transverse(&x, &hyperplane_at(&normals, i))?))?;
    let params = Params {
        n: Some(2),
        d: Some(x.degree().into()),
        q: Some(x.q()),
        r: Some(1),
        t: fx.t().map(u64::from),
    };
    let mut out = vec![timer.report("nontransverse-lines", params, bad, &bounds::nontransverse_lines_reduced(), Comparison::AtMost)?];
    if fx.ell() == Some(1) {
        out.push(timer.report(
            "nontransverse-lines-irreducible",
            params,
            bad,
            &bounds::nontransverse_lines_irreducible(),
            Comparison::AtMost,
        )?);
        if x.degree() == 2 {
            out.push(timer.report("conic-tangent-lines", params, bad, &bounds::conic_tangent_lines(), Comparison::Exact)?);
        }
    }
    Ok(out)
}

/// Bad-hyperplane bound for degree `d` with `t` hyperplane components.
pub fn bound_bad_hyperplanes(d: u32, t: u32, q: u64) -> Result<i128> {
    let v = Vars { d: Some(d.into()), t: Some(t.into()), q: Some(q.into()), ..Vars::default() };
    bounds::bad_hyperplanes().floor(&v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneCounts {
    pub pool: u128,
    pub non_proper: u128,
    pub non_reduced: u128,
}

impl HyperplaneCounts {
    pub fn bad(&self) -> u128 {
        self.non_proper + self.non_reduced
    }
}

/// Exhaustive count of hyperplanes whose section is non-proper or non-reduced.
pub fn count_bad_hyperplanes(fx: &Fixture, ctx: &AuditContext) -> Result<(HyperplaneCounts, Vec<AuditReport>)> {
    let timer = Timer::new(ctx);
    let t = fx.t().ok_or_else(|| Error::InvalidParameter("hyperplane component count is not declared".into()))?;
    let x = fx.hypersurface()?;
    let (n, d, q) = (x.n(), x.degree(), x.q());
    let normals = ProjectiveSpace::new(x.field(), n);
    ctx.limits.check_enumeration(normals.len())?;
    let kinds: Vec<u8> = (0..normals.len())
        .into_par_iter()
        .map(|i| {
            let g = restrict(&x, &hyperplane_at(&normals, i))?;
            if g.is_zero() {
                return Ok(1);
            }
            Ok(if reduced_form(&g, mix(ctx.seed, &[i as u64]), &ctx.limits)? { 0 } else { 2 })
        })
        .collect::<Result<_>>()?;
    let counts = HyperplaneCounts {
        pool: normals.len(),
        non_proper: kinds.iter().filter(|&&k| k == 1).count() as u128,
        non_reduced: kinds.iter().filter(|&&k| k == 2).count() as u128,
    };
    let params = Params { n: Some(n as u64), d: Some(d.into()), q: Some(q), r: Some(n as u64 - 1), t: Some(t.into()) };
    let mut out = vec![timer.report("bad-hyperplanes", params, counts.bad(), &bounds::bad_hyperplanes(), Comparison::AtMost)?];
    let phi = bounds::phi();
    let mut phi_max = 0;
    for s in 0..=d {
        let v = Vars { d: Some(d.into()), t: Some(s.into()), ..Vars::default() };
        phi_max = phi_max.max(phi.floor(&v)?);
    }
    out.push(timer.report("phi-maximum", params, phi_max as u128, &bounds::phi_max(), Comparison::AtMost)?);
    let gate = required_q(n, d, n - 1, Mode::ReducedHyperplane)?;
    if d >= 2 && !gate.outside_hypothesis && q >= gate.q {
        out.push(timer.report("good-hyperplanes", params, counts.pool - counts.bad(), &bounds::one(), Comparison::AtLeast)?);
    }
    Ok((counts, out))
}

/// Two planes `x0 x1 = 0` in `P^3(F_q)`: bounded count plus the exact value `q + 1`.
pub fn audit_two_planes(q: u64, ctx: &AuditContext) -> Result<Vec<AuditReport>> {
    let timer = Timer::new(ctx);
    let fx = Fixture::two_planes(q)?;
    let (counts, mut out) = count_bad_hyperplanes(&fx, ctx)?;
    let params = out[0].params;
    out.push(timer.report("two-plane-bad-hyperplanes", params, counts.bad(), &bounds::two_plane_bad_hyperplanes(), Comparison::Exact)?);
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuperspaceCounts {
    pub pool: u128,
    pub tangent: u128,
    pub dual_contained: u128,
    pub very_transverse: u128,
    /// Candidates where the tangency-locus route disagrees with transversality.
    pub characterization_mismatches: u128,
    /// Tangency loci nonempty by the rank test but without a small witness point.
    pub unwitnessed: u128,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    tangent: u128,
    dual: u128,
    good: u128,
    mismatch: u128,
    unwitnessed: u128,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            tangent: self.tangent + o.tangent,
            dual: self.dual + o.dual,
            good: self.good + o.good,
            mismatch: self.mismatch + o.mismatch,
            unwitnessed: self.unwitnessed + o.unwitnessed,
        }
    }
}

/// Linear forms cutting out `h`.
fn equations(h: &LinearSubspace) -> Vec<Form> {
    h.dual().map(|d| d.rows().iter().map(|r| Form::linear(h.field(), r)).collect()).unwrap_or_default()
}

fn classify(x: &Hypersurface, h: &LinearSubspace, seed: u64, limits: &Limits) -> Result<Tally> {
    let mut t = Tally::default();
    let transverse = is_transverse(x, h)?;
    if !transverse {
        t.tangent = 1;
    } else if h.dim() + 1 < x.n() && !is_very_transverse_exact(x, h, seed, limits)? {
        t.dual = 1;
    } else {
        t.good = 1;
    }
    // Independent route: H is tangent iff some P in H has T_P X ⊇ H.
    let locus = x.tangency_locus(h)?.with_forms(equations(h))?;
    match is_empty_projective(&locus, limits)?.verdict {
        EmptinessVerdict::Empty => t.mismatch = u128::from(!transverse),
        EmptinessVerdict::Nonempty(p) => {
            let on = x.contains(&p)? && h.contains_point(&p)?;
            t.mismatch = u128::from(transverse || !on);
        }
        EmptinessVerdict::Inconclusive => {
            t.mismatch = u128::from(transverse);
            t.unwitnessed = 1;
        }
    }
    Ok(t)
}

/// Classifies every `F_q`-`r`-plane through `h_prev` as tangent,
/// dual-contained (transverse but not very transverse) or very transverse.
pub fn count_bad_superspaces(
    x: &Hypersurface,
    h_prev: &LinearSubspace,
    r: usize,
    ctx: &AuditContext,
) -> Result<(SuperspaceCounts, Vec<AuditReport>)> {
    let timer = Timer::new(ctx);
    let n = x.n();
    if r == 0 || r >= n || h_prev.dim() + 1 != r {
        return Err(Error::InvalidParameter(format!("need a ({})-plane and 1 <= r <= n-1", r as i64 - 1)));
    }
    if !is_smooth(x) {
        return Err(Error::NotSmooth);
    }
    let supers = enumerate_superspaces(h_prev, r)?;
    ctx.limits.check_enumeration(supers.len())?;
    let tally = (0..supers.len())
        .into_par_iter()
        .map(|i| classify(x, &supers.get(i), mix(ctx.seed, &[r as u64, i as u64]), &ctx.limits))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    let counts = SuperspaceCounts {
        pool: supers.len(),
        tangent: tally.tangent,
        dual_contained: tally.dual,
        very_transverse: tally.good,
        characterization_mismatches: tally.mismatch,
        unwitnessed: tally.unwitnessed,
    };
    let d = x.degree();
    let params = Params { n: Some(n as u64), d: Some(d.into()), q: Some(x.q()), r: Some(r as u64), t: None };
    let mut out = vec![
        timer.report("tangent-superspaces", params, counts.tangent, &bounds::tangent_superspaces(), Comparison::AtMost)?,
        timer.report(
            "dual-contained-superspaces",
            params,
            counts.dual_contained,
            &bounds::dual_contained_superspaces(),
            Comparison::AtMost,
        )?,
        timer.report(
            "bad-superspaces",
            params,
            counts.tangent + counts.dual_contained,
            &bounds::bad_superspaces(),
            Comparison::AtMost,
        )?,
        timer.report("superspace-pool", params, counts.pool, &bounds::superspace_pool(), Comparison::Exact)?,
        timer.report(
            "tangent-characterization-mismatches",
            params,
            counts.characterization_mismatches,
            &bounds::zero(),
            Comparison::Exact,
        )?,
    ];
    let gate = required_q(n, d, r, Mode::VeryTransverse)?;
    if !gate.outside_hypothesis && x.q() >= gate.q {
        out.push(timer.report("very-transverse-superspaces", params, counts.very_transverse, &bounds::one(), Comparison::AtLeast)?);
    }
    Ok((counts, out))
}

/// Number of forms of degree `d` in `n + 1` variables up to scalars, and how
/// many of them vanish at every `F_q`-point.
pub fn space_filling_forms(field: &FieldDescriptor, n: usize, d: u32, limits: &Limits) -> Result<(u128, u128)> {
    let monos = crate::certify::monomials(n + 1, d);
    let qq = field.order() as u128;
    let nm = monos.len() as u32;
    let total = qq
        .checked_pow(nm)
        .map(|v| (v - 1) / (qq - 1))
        .ok_or(Error::EnumerationTooLarge { count: u128::MAX, cap: limits.max_enumeration })?;
    limits.check_enumeration(total)?;
    let points: Vec<_> = ProjectiveSpace::new(field, n).iter().collect();
    // values[p][m] = monomial m at point p.
    let values: Vec<Vec<_>> = points
        .iter()
        .map(|p| {
            monos
                .iter()
                .map(|e| {
                    e.iter().zip(p.coords()).fold(field.one(), |acc, (&k, &c)| field.mul(acc, field.pow(c, k as u128)))
                })
                .collect()
        })
        .collect();
    // Normalized coefficient vectors: leading entry 1 at position j, free entries after it.
    let mut offsets = Vec::new();
    let mut acc = 0u128;
    for j in 0..nm {
        offsets.push(acc);
        acc += qq.pow(nm - j - 1);
    }
    let filling = par_count(total, |idx| {
        let j = offsets.partition_point(|&o| o <= idx) - 1;
        let mut rest = idx - offsets[j];
        let mut coeffs = vec![field.zero(); nm as usize];
        coeffs[j] = field.one();
        for c in coeffs[j + 1..].iter_mut().rev() {
            *c = field.element((rest % qq) as u64);
            rest /= qq;
        }
        Ok(values.iter().all(|row| field.sum(row.iter().zip(&coeffs).map(|(&v, &c)| field.mul(v, c))).is_zero()))
    })?;
    Ok((total, filling))
}

/// `x0^q x1 - x0 x1^q` in `n + 1` variables.
pub fn space_filling_witness(field: &FieldDescriptor, n: usize) -> Result<Form> {
    if n == 0 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    let q = field.order() as u32;
    let mut a = vec![0; n + 1];
    a[0] = q;
    a[1] = 1;
    let mut b = vec![0; n + 1];
    b[0] = 1;
    b[1] = q;
    Form::from_terms(field, n + 1, [(a, field.one()), (b, field.neg(field.one()))])
}

/// No form of degree `1..=min(dmax, q)` vanishes on all of `P^n(F_q)`, and the
/// witness of degree `q + 1` does.
pub fn audit_space_filling(n: usize, field: &FieldDescriptor, dmax: u32, ctx: &AuditContext) -> Result<Vec<AuditReport>> {
    let timer = Timer::new(ctx);
    let q = field.order();
    let mut out = Vec::new();
    for d in 1..=dmax.min(q.min(u32::MAX as u64) as u32) {
        let (_, filling) = space_filling_forms(field, n, d, &ctx.limits)?;
        let params = Params { n: Some(n as u64), d: Some(d.into()), q: Some(q), r: None, t: None };
        out.push(timer.report(format!("space-filling-degree-{d}"), params, filling, &bounds::zero(), Comparison::Exact)?);
    }
    let w = space_filling_witness(field, n)?;
    let missed = ProjectiveSpace::new(field, n)
        .iter()
        .map(|p| w.eval(p.coords()).map(|v| u128::from(!v.is_zero())))
        .sum::<Result<u128>>()?;
    let params = Params { n: Some(n as u64), d: Some(w.degree().into()), q: Some(q), r: None, t: None };
    out.push(timer.report("space-filling-witness-misses", params, missed, &bounds::zero(), Comparison::Exact)?);
    out.push(timer.report(
        "space-filling-witness-degree",
        params,
        w.degree().into(),
        &bounds::space_filling_degree(),
        Comparison::Exact,
    )?);
    Ok(out)
}

/// A transverse subspace that failed the exact very transversality test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Separation {
    pub sample: u64,
    pub form: String,
    pub subspace: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationLog {
    pub samples: u64,
    pub transverse_tested: u64,
    pub separations: Vec<Separation>,
}

/// Samples smooth hypersurfaces and checks every transverse `F_q`-`r`-plane
/// for very transversality. The output is observational.
pub fn separation_search(
    samples: u64,
    field: &FieldDescriptor,
    n: usize,
    d: u32,
    r: usize,
    ctx: &AuditContext,
) -> Result<(SeparationLog, AuditReport)> {
    let timer = Timer::new(ctx);
    if r >= n {
        return Err(Error::InvalidParameter(format!("need r < n, got r = {r}, n = {n}")));
    }
    let planes: Vec<LinearSubspace> = enumerate_subspaces(field, n, r, &ctx.limits)?.collect();
    let mut log = SeparationLog { samples, transverse_tested: 0, separations: vec![] };
    for s in 0..samples {
        let x = random_smooth(field, n, d, mix(ctx.seed, &[s]))?;
        let results: Vec<Option<bool>> = planes
            .par_iter()
            .enumerate()
            .map(|(i, h)| {
                if !is_transverse(&x, h)? {
                    return Ok(None);
                }
                Ok(Some(is_very_transverse_exact(&x, h, mix(ctx.seed, &[s, i as u64]), &ctx.limits)?))
            })
            .collect::<Result<_>>()?;
        for (h, res) in planes.iter().zip(results) {
            if let Some(vt) = res {
                log.transverse_tested += 1;
                if !vt {
                    log.separations.push(Separation { sample: s, form: x.form().to_string(), subspace: h.to_string() });
                }
            }
        }
    }
    let params = Params { n: Some(n as u64), d: Some(d.into()), q: Some(field.order()), r: Some(r as u64), t: None };
    let bound = Bound::new("0", "transverse but not very transverse subspaces; no expected value")?;
    let report = timer.report("separation-search", params, log.separations.len() as u128, &bound, Comparison::Observed)?;
    Ok((log, report))
}

/// One report per inequality lemma, each expecting zero counterexamples.
pub fn audit_inequalities(nmax: u32, dmax: u32, ctx: &AuditContext) -> Result<Vec<AuditReport>> {
    let timer = Timer::new(ctx);
    let report = check_inequality_lemmas(nmax, dmax);
    let params = Params { n: Some(nmax.into()), d: Some(dmax.into()), ..Params::default() };
    report
        .lemmas
        .iter()
        .map(|l| {
            let b = Bound::new("0", l.statement)?;
            timer.report(format!("inequality-{}", l.name), params, l.counterexamples.len() as u128, &b, Comparison::Exact)
        })
        .collect()
}

/// The standard fixture suite run by `audit all`.
pub fn standard_suite(ctx: &AuditContext) -> Result<Vec<AuditReport>> {
    let mut out = Vec::new();
    out.extend(count_nontransverse_lines(&Fixture::conic(5)?, ctx)?);
    out.extend(count_nontransverse_lines(&Fixture::cuspidal_cubic(7)?, ctx)?);
    out.extend(count_nontransverse_lines(&Fixture::concurrent_lines(&FieldDescriptor::prime(7)?)?, ctx)?);
    for q in [3, 5, 7] {
        out.extend(audit_two_planes(q, ctx)?);
    }
    let f5 = FieldDescriptor::prime(5)?;
    let x = |i| Form::variable(&f5, 4, i);
    let quadric = Fixture::from_factors(
        "smooth-quadric",
        vec![x(0).mul(&x(1)).add(&x(2).mul(&x(2))).add(&x(3).mul(&x(3)).scale(f5.from_int(2)))],
    )?;
    out.extend(count_bad_hyperplanes(&quadric, ctx)?.1);
    let qx = quadric.hypersurface()?;
    out.extend(superspace_audit(&qx, 1, ctx)?);
    let f13 = FieldDescriptor::prime(13)?;
    let cubic = random_smooth(&f13, 3, 3, ctx.seed)?;
    for r in [1, 2] {
        out.extend(superspace_audit(&cubic, r, ctx)?);
    }
    let f2 = FieldDescriptor::prime(2)?;
    out.extend(audit_space_filling(1, &f2, 2, ctx)?);
    out.extend(audit_space_filling(2, &f2, 2, ctx)?);
    out.extend(audit_inequalities(6, 5, ctx)?);
    Ok(out)
}

/// Builds a very transverse flag up to level `r - 1` and counts the `r`-planes through its top.
pub fn superspace_audit(x: &Hypersurface, r: usize, ctx: &AuditContext) -> Result<Vec<AuditReport>> {
    let outcome = search::find_very_transverse_flag(x, r - 1, ctx.seed, &ctx.limits)?;
    let flag = outcome
        .flag()
        .ok_or_else(|| Error::InvalidParameter(format!("no very transverse {}-plane found", r - 1)))?;
    let top = &flag.levels.last().expect("flag has levels").subspace;
    Ok(count_bad_superspaces(x, top, r, ctx)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> AuditContext {
        AuditContext::default()
    }

    #[test]
    fn conic_over_f5() {
        let reports = count_nontransverse_lines(&Fixture::conic(5).unwrap(), &ctx()).unwrap();
        assert_eq!(reports.len(), 3);
        for r in &reports {
            assert_eq!(r.observed, 6);
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
        assert_eq!(reports[0].bound, Some(18));
    }

    #[test]
    fn curve_fixtures() {
        let cusp = count_nontransverse_lines(&Fixture::cuspidal_cubic(7).unwrap(), &ctx()).unwrap();
        assert!(cusp.iter().all(AuditReport::passed));
        assert_eq!(cusp[1].bound, Some(56));
        let lines = count_nontransverse_lines(&Fixture::concurrent_lines(&FieldDescriptor::prime(7).unwrap()).unwrap(), &ctx())
            .unwrap();
        assert_eq!(lines.len(), 1);
        // Lines through the common point.
        assert_eq!(lines[0].observed, 8);
        assert_eq!(lines[0].bound, Some(72));
    }

    #[test]
    fn two_planes() {
        for q in [3, 5, 7] {
            let reports = audit_two_planes(q, &ctx()).unwrap();
            assert!(reports.iter().all(AuditReport::passed), "{reports:?}");
            assert_eq!(reports[0].observed, q as i64 + 1);
            assert_eq!(reports[0].bound, Some(q as i64 + 2));
        }
        assert_eq!(bound_bad_hyperplanes(2, 2, 5).unwrap(), 7);
    }

    #[test]
    fn space_filling_small() {
        let f2 = FieldDescriptor::prime(2).unwrap();
        assert_eq!(space_filling_forms(&f2, 2, 2, &Limits::default()).unwrap(), (63, 0));
        assert_eq!(space_filling_forms(&f2, 2, 3, &Limits::default()).unwrap().0, 1023);
        // x0^2 x1 - x0 x1^2 and its companions vanish everywhere in degree 3.
        assert!(space_filling_forms(&f2, 2, 3, &Limits::default()).unwrap().1 > 0);
        let reports = audit_space_filling(1, &f2, 2, &ctx()).unwrap();
        assert!(reports.iter().all(AuditReport::passed));
        assert_eq!(reports.len(), 4);
    }

    #[test]
    fn quadric_superspaces_and_csv() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        let x = Hypersurface::new(crate::poly::parse_form("x0*x1 + x2^2 + 2*x3^2", &f5, 4).unwrap()).unwrap();
        let reports = superspace_audit(&x, 1, &ctx()).unwrap();
        assert!(reports.iter().all(AuditReport::passed), "{reports:?}");
        assert_eq!(reports[0].bound, Some(12));
        assert_eq!(reports[1].observed, 0);
        assert_eq!(reports[0].csv_record().len(), AuditReport::CSV_HEADER.len());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&audit_inequalities(4, 4, &ctx()).unwrap()).unwrap();
        let b = serde_json::to_string(&audit_inequalities(4, 4, &ctx()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("runtime_ms\":0"));
    }
}
