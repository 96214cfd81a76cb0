//! Constructive searches: a rational point off `X`, reduced hyperplane
//! sections and chains of them, transverse lines to reduced hypersurfaces and
//! very transverse flags.
//!
//! Every scan is a deterministic first-hit over a fixed candidate order.
//! Candidates are evaluated in parallel chunks, and the reported hit and
//! rejection tallies depend only on the order, never on the worker count.
//! When the field meets the relevant threshold, exhausting a scan that used
//! exact predicates is reported as a theorem violation.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::certify::{
    self, dim_at_most_exact, is_transverse, reduced_form, restrict, very_transverse_status, VtStatus,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::locus::Hypersurface;
use crate::poly::Form;
use crate::projgeom::{enumerate_superspaces, LinearSubspace, ProjectivePoint, ProjectiveSpace};
use crate::seed::mix;

mod inequalities;

pub use inequalities::{check_inequality_lemmas, vt_gate, GridPoint, InequalityReport, LemmaTally};

const CHUNK: u128 = 64;
/// Extra seeded sweeps over undetermined candidates before the exact fallback.
const RETRY_SWEEPS: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    VeryTransverse,
    ReducedLine,
    ReducedHyperplane,
}

/// A sufficient field size for a search to succeed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Threshold {
    pub q: u64,
    /// The parameters lie outside the hypotheses under which `q` is guaranteed.
    pub outside_hypothesis: bool,
}

/// Threshold on `q` for the given search mode.
pub fn required_q(n: usize, d: u32, r: usize, mode: Mode) -> Result<Threshold> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    let d = d as u64;
    match mode {
        Mode::VeryTransverse => {
            if r >= n {
                return Err(Error::InvalidParameter(format!("need r < n, got r = {r}, n = {n}")));
            }
            if d <= 2 {
                return Ok(Threshold { q: 2, outside_hypothesis: true });
            }
            let q = ((n - r) as u64)
                .checked_mul(d)
                .and_then(|x| x.checked_mul((d - 1).checked_pow(r as u32)?))
                .ok_or_else(|| Error::InvalidParameter("threshold overflows".into()))?;
            Ok(Threshold { q, outside_hypothesis: false })
        }
        Mode::ReducedLine => Ok(Threshold { q: (3 * d * (d - 1)).div_ceil(2), outside_hypothesis: d < 2 }),
        Mode::ReducedHyperplane => match n {
            3 => Ok(Threshold { q: d * (d - 1) + 1, outside_hypothesis: d < 2 }),
            n if n >= 4 => Ok(Threshold { q: d, outside_hypothesis: d < 2 }),
            _ => Ok(Threshold { q: d * (d - 1) + 1, outside_hypothesis: true }),
        },
    }
}

/// Whether the actual field meets a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateStatus {
    pub q: u64,
    pub threshold: u64,
    pub outside_hypothesis: bool,
}

impl GateStatus {
    fn new(q: u64, t: Threshold) -> Self {
        GateStatus { q, threshold: t.q, outside_hypothesis: t.outside_hypothesis }
    }

    pub fn satisfied(&self) -> bool {
        !self.outside_hypothesis && self.q >= self.threshold
    }

    fn to_json(self) -> Value {
        json!({
            "q": self.q,
            "threshold": self.threshold,
            "satisfied": self.satisfied(),
            "outside_hypothesis": self.outside_hypothesis,
        })
    }
}

/// One level of a flag with its scan statistics.
#[derive(Clone, Debug)]
pub struct FlagLevel {
    pub subspace: LinearSubspace,
    pub status: VtStatus,
    pub tested: u64,
    pub rejections: BTreeMap<&'static str, u64>,
    pub gate: GateStatus,
}

/// `H_0 ⊂ H_1 ⊂ ... ⊂ H_r`, each level very transverse.
#[derive(Clone, Debug)]
pub struct Flag {
    pub levels: Vec<FlagLevel>,
}

#[derive(Clone, Debug)]
pub enum Found {
    Point(ProjectivePoint),
    Subspace(LinearSubspace),
    /// Nested subspaces from the first hyperplane down to the target.
    Chain(Vec<LinearSubspace>),
    Flag(Flag),
}

/// Result of a search: the object found or the exhaustion record.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub search: &'static str,
    pub found: Option<Found>,
    pub tested: u64,
    pub rejections: BTreeMap<&'static str, u64>,
    pub gate: GateStatus,
    pub theorem_violation: bool,
    pub seed: u64,
}

impl SearchOutcome {
    pub fn subspace(&self) -> Option<&LinearSubspace> {
        match &self.found {
            Some(Found::Subspace(s)) => Some(s),
            Some(Found::Chain(c)) => c.last(),
            _ => None,
        }
    }

    pub fn flag(&self) -> Option<&Flag> {
        match &self.found {
            Some(Found::Flag(f)) => Some(f),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&ProjectivePoint> {
        match &self.found {
            Some(Found::Point(p)) => Some(p),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let found = match &self.found {
            None => Value::Null,
            Some(Found::Point(p)) => json!({ "point": p.to_string() }),
            Some(Found::Subspace(s)) => json!({ "subspace": s.to_string(), "dim": s.dim() }),
            Some(Found::Chain(c)) => json!({
                "subspace": c.last().map(|s| s.to_string()),
                "chain": c.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            }),
            Some(Found::Flag(f)) => json!({
                "flag": f.levels.iter().map(|l| json!({
                    "dim": l.subspace.dim(),
                    "subspace": l.subspace.to_string(),
                    "certificate": l.status,
                    "tested": l.tested,
                    "rejections": l.rejections,
                    "gate": l.gate.to_json(),
                })).collect::<Vec<_>>(),
            }),
        };
        json!({
            "search": self.search,
            "found": found,
            "tested": self.tested,
            "rejections": self.rejections,
            "gate": self.gate.to_json(),
            "theorem_violation": self.theorem_violation,
            "seed": self.seed,
        })
    }
}

enum Check<T> {
    Hit(T),
    Reject(&'static str),
}

struct Scan<T> {
    hit: Option<(u128, T)>,
    tested: u64,
    rejections: BTreeMap<&'static str, u64>,
}

/// Evaluates candidates `0..total` in order-preserving parallel chunks and
/// stops at the first hit. Tallies cover exactly the candidates before it.
fn first_hit<T: Send>(total: u128, eval: impl Fn(u128) -> Result<Check<T>> + Sync) -> Result<Scan<T>> {
    let mut scan = Scan { hit: None, tested: 0, rejections: BTreeMap::new() };
    let width = CHUNK * rayon::current_num_threads().max(1) as u128;
    let mut start = 0u128;
    while start < total {
        let end = (start + width).min(total);
        let results: Vec<Result<Check<T>>> = (start..end).into_par_iter().map(&eval).collect();
        for (offset, res) in results.into_iter().enumerate() {
            scan.tested += 1;
            match res? {
                Check::Hit(t) => {
                    scan.hit = Some((start + offset as u128, t));
                    return Ok(scan);
                }
                Check::Reject(reason) => *scan.rejections.entry(reason).or_default() += 1,
            }
        }
        start = end;
    }
    Ok(scan)
}

/// First `F_q`-point with `F(P) != 0`. Exhaustion means `X` is space-filling,
/// which is impossible for `d <= q`.
pub fn find_point_off_x(x: &Hypersurface, limits: &Limits) -> Result<SearchOutcome> {
    let space = ProjectiveSpace::new(x.field(), x.n());
    limits.check_enumeration(space.len())?;
    let scan = first_hit(space.len(), |i| {
        let p = space.point(i);
        Ok(if x.contains(&p)? { Check::Reject("on-x") } else { Check::Hit(p) })
    })?;
    let q = x.q();
    let gate = GateStatus::new(q, Threshold { q: x.degree() as u64, outside_hypothesis: false });
    Ok(SearchOutcome {
        search: "point-off-x",
        theorem_violation: scan.hit.is_none() && gate.satisfied(),
        found: scan.hit.map(|(_, p)| Found::Point(p)),
        tested: scan.tested,
        rejections: scan.rejections,
        gate,
        seed: 0,
    })
}

/// Lifts a subspace given in the coordinates of `ambient`'s echelon basis.
fn lift(ambient: &LinearSubspace, inner: &LinearSubspace) -> LinearSubspace {
    let f = ambient.field();
    let rows = inner
        .rows()
        .iter()
        .map(|u| {
            let mut v = vec![f.zero(); ambient.ambient() + 1];
            for (&c, row) in u.iter().zip(ambient.rows()) {
                if c.is_zero() {
                    continue;
                }
                for (x, &b) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(c, b));
                }
            }
            v
        })
        .collect();
    LinearSubspace::from_rows(f, rows).unwrap()
}

/// Hyperplanes of `P^m` in the order of their normal vectors.
fn hyperplane(field: &crate::gf::FieldDescriptor, normals: &ProjectiveSpace, i: u128) -> LinearSubspace {
    LinearSubspace::hyperplane(field, normals.point(i).coords()).unwrap()
}

/// First hyperplane of `P^m` (coordinates of `g`) with `g|_H` proper and reduced.
fn scan_reduced_hyperplanes(g: &Form, seed: u64, limits: &Limits) -> Result<Scan<LinearSubspace>> {
    let field = g.field().clone();
    let m = g.nvars() - 1;
    let normals = ProjectiveSpace::new(&field, m);
    limits.check_enumeration(normals.len())?;
    first_hit(normals.len(), |i| {
        let h = hyperplane(&field, &normals, i);
        let s = g.substitute_linear(h.rows())?;
        if s.is_zero() {
            return Ok(Check::Reject("not-proper"));
        }
        Ok(if reduced_form(&s, mix(seed, &[m as u64, i as u64]), limits)? {
            Check::Hit(h)
        } else {
            Check::Reject("not-reduced")
        })
    })
}

fn require_reduced(x: &Hypersurface, seed: u64, limits: &Limits) -> Result<()> {
    if !reduced_form(x.form(), seed, limits)? {
        return Err(Error::NotReduced);
    }
    Ok(())
}

/// First `F_q`-hyperplane with a proper, reduced section.
pub fn find_reduced_hyperplane(x: &Hypersurface, seed: u64, limits: &Limits) -> Result<SearchOutcome> {
    require_reduced(x, seed, limits)?;
    let scan = scan_reduced_hyperplanes(x.form(), seed, limits)?;
    let gate = GateStatus::new(x.q(), required_q(x.n(), x.degree(), x.n() - 1, Mode::ReducedHyperplane)?);
    Ok(SearchOutcome {
        search: "reduced-hyperplane",
        theorem_violation: scan.hit.is_none() && gate.satisfied() && x.degree() >= 2,
        found: scan.hit.map(|(_, h)| Found::Subspace(h)),
        tested: scan.tested,
        rejections: scan.rejections,
        gate,
        seed,
    })
}

/// Successive reduced hyperplane sections down to an `r`-plane `T` with
/// `X ∩ T` proper and reduced; the chain lists every intermediate subspace.
pub fn find_reduced_plane_section_chain(
    x: &Hypersurface,
    r: usize,
    seed: u64,
    limits: &Limits,
) -> Result<SearchOutcome> {
    let n = x.n();
    if r < 1 || r >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= n-1, got r = {r}, n = {n}")));
    }
    require_reduced(x, seed, limits)?;
    let gate = GateStatus::new(x.q(), required_q(n, x.degree(), r, Mode::ReducedLine)?);
    let mut current = LinearSubspace::ambient_space(x.field(), n);
    let mut chain = Vec::new();
    let mut tested = 0;
    let mut rejections = BTreeMap::new();
    while current.dim() > r {
        let g = restrict(x, &current)?;
        let scan = scan_reduced_hyperplanes(&g, mix(seed, &[current.dim() as u64]), limits)?;
        tested += scan.tested;
        for (k, v) in scan.rejections {
            *rejections.entry(k).or_default() += v;
        }
        match scan.hit {
            Some((_, h)) => {
                current = lift(&current, &h);
                chain.push(current.clone());
            }
            None => {
                return Ok(SearchOutcome {
                    search: "reduced-section-chain",
                    found: None,
                    tested,
                    rejections,
                    theorem_violation: gate.satisfied() && x.degree() >= 2,
                    gate,
                    seed,
                })
            }
        }
    }
    if !chain.is_empty() && !certify::is_reduced_section(x, &current, seed, limits)? {
        return Err(Error::InvalidParameter("chain endpoint failed independent reducedness check".into()));
    }
    Ok(SearchOutcome {
        search: "reduced-section-chain",
        found: Some(Found::Chain(chain)),
        tested,
        rejections,
        theorem_violation: false,
        gate,
        seed,
    })
}

/// An `F_q`-line transverse to a reduced `X`: reduce to a plane section, then
/// take the first line of the plane on which `F` is squarefree and which
/// misses `Sing(X)`. The result is re-verified against `X` directly.
pub fn find_transverse_line_reduced(x: &Hypersurface, seed: u64, limits: &Limits) -> Result<SearchOutcome> {
    let n = x.n();
    let d = x.degree();
    let gate = GateStatus::new(x.q(), required_q(n, d, 1, Mode::ReducedLine)?);
    if d == 1 {
        // Any line through a point off a hyperplane meets it once, transversally.
        let off = find_point_off_x(x, limits)?;
        let p = off.point().ok_or(Error::NotProper)?;
        let line = enumerate_superspaces(&LinearSubspace::from_point(p), 1)?.get(0);
        return Ok(SearchOutcome {
            search: "transverse-line",
            found: Some(Found::Subspace(line)),
            tested: off.tested,
            rejections: off.rejections,
            theorem_violation: false,
            gate,
            seed,
        });
    }
    let (plane, mut tested, mut rejections) = if n == 2 {
        require_reduced(x, seed, limits)?;
        (LinearSubspace::ambient_space(x.field(), 2), 0, BTreeMap::new())
    } else {
        let chain = find_reduced_plane_section_chain(x, 2, seed, limits)?;
        match chain.subspace() {
            Some(p) => (p.clone(), chain.tested, chain.rejections.clone()),
            None => return Ok(SearchOutcome { search: "transverse-line", ..chain }),
        }
    };
    let g = restrict(x, &plane)?;
    let field = x.field().clone();
    let normals = ProjectiveSpace::new(&field, 2);
    let scan = first_hit(normals.len(), |i| {
        let inner = hyperplane(&field, &normals, i);
        let gl = g.substitute_linear(inner.rows())?;
        if gl.is_zero() {
            return Ok(Check::Reject("not-proper"));
        }
        if !certify::binary_form_squarefree(&gl)? {
            return Ok(Check::Reject("not-squarefree"));
        }
        let line = lift(&plane, &inner);
        if certify::meets_singular_locus(x, &line)? {
            return Ok(Check::Reject("meets-singular-locus"));
        }
        Ok(Check::Hit(line))
    })?;
    tested += scan.tested;
    for (k, v) in scan.rejections {
        *rejections.entry(k).or_default() += v;
    }
    let found = match scan.hit {
        Some((_, line)) => {
            if !is_transverse(x, &line)? {
                return Err(Error::InvalidParameter("line failed independent transversality check".into()));
            }
            Some(Found::Subspace(line))
        }
        None => None,
    };
    Ok(SearchOutcome {
        search: "transverse-line",
        theorem_violation: found.is_none() && gate.satisfied(),
        found,
        tested,
        rejections,
        gate,
        seed,
    })
}

/// Scans candidates for the first very transverse one. Undetermined
/// rejections get fresh seeds and finally the exact dimension test, so an
/// exhausted scan has been decided exactly.
fn vt_scan(
    x: &Hypersurface,
    total: u128,
    candidate: impl Fn(u128) -> LinearSubspace + Sync,
    level: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Scan<(LinearSubspace, VtStatus)>> {
    let first = first_hit(total, |i| {
        let h = candidate(i);
        let status = very_transverse_status(x, &h, mix(seed, &[level as u64, i as u64, 0]), limits)?;
        Ok(match status {
            VtStatus::VeryTransverse => Check::Hit((h, status)),
            VtStatus::NotTransverse => Check::Reject("not-transverse"),
            VtStatus::Undetermined => Check::Reject("undetermined"),
        })
    })?;
    if first.hit.is_some() || !first.rejections.contains_key("undetermined") {
        return Ok(first);
    }
    // Revisit undetermined candidates in order: fresh seeds, then exact.
    let mut scan = first;
    let undetermined: Vec<u128> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let h = candidate(i);
            let s = very_transverse_status(x, &h, mix(seed, &[level as u64, i as u64, 0]), limits).ok()?;
            (s == VtStatus::Undetermined).then_some(i)
        })
        .collect();
    let t = x.n() as i64 - level as i64 - 2;
    let retry = first_hit(undetermined.len() as u128, |j| {
        let i = undetermined[j as usize];
        let h = candidate(i);
        for sweep in 1..=RETRY_SWEEPS {
            let s = very_transverse_status(x, &h, mix(seed, &[level as u64, i as u64, sweep]), limits)?;
            if s == VtStatus::VeryTransverse {
                return Ok(Check::Hit((h, s)));
            }
        }
        if dim_at_most_exact(&x.tangency_locus(&h)?, t, limits)? {
            Ok(Check::Hit((h, VtStatus::VeryTransverse)))
        } else {
            Ok(Check::Reject("dual-contained"))
        }
    })?;
    if let Some((_, hit)) = retry.hit {
        scan.hit = Some((0, hit));
    }
    if let Some(dc) = retry.rejections.get("dual-contained") {
        scan.rejections.insert("dual-contained", *dc);
    }
    Ok(scan)
}

/// Inductive very transverse flag `H_0 ⊂ ... ⊂ H_r` for smooth `X`.
pub fn find_very_transverse_flag(x: &Hypersurface, r: usize, seed: u64, limits: &Limits) -> Result<SearchOutcome> {
    let n = x.n();
    if r >= n {
        return Err(Error::InvalidParameter(format!("need r < n, got r = {r}, n = {n}")));
    }
    if !certify::is_smooth(x) {
        return Err(Error::NotSmooth);
    }
    let d = x.degree();
    let q = x.q();
    let target_gate = GateStatus::new(q, required_q(n, d, r, Mode::VeryTransverse)?);
    let mut levels: Vec<FlagLevel> = Vec::new();
    let mut tested = 0;
    let mut rejections: BTreeMap<&'static str, u64> = BTreeMap::new();
    for s in 0..=r {
        let gate = GateStatus::new(q, required_q(n, d, s, Mode::VeryTransverse)?);
        let scan = if s == 0 {
            let space = ProjectiveSpace::new(x.field(), n);
            limits.check_enumeration(space.len())?;
            vt_scan(x, space.len(), |i| LinearSubspace::from_point(&space.point(i)), 0, seed, limits)?
        } else {
            let prev = &levels[s - 1].subspace;
            let supers = enumerate_superspaces(prev, s)?;
            vt_scan(x, supers.len(), |i| supers.get(i), s, seed, limits)?
        };
        tested += scan.tested;
        for (k, v) in &scan.rejections {
            *rejections.entry(k).or_default() += v;
        }
        match scan.hit {
            Some((_, (h, status))) => levels.push(FlagLevel {
                subspace: h,
                status,
                tested: scan.tested,
                rejections: scan.rejections,
                gate,
            }),
            None => {
                return Ok(SearchOutcome {
                    search: "very-transverse-flag",
                    found: None,
                    tested,
                    rejections,
                    theorem_violation: gate.satisfied(),
                    gate: target_gate,
                    seed,
                })
            }
        }
    }
    Ok(SearchOutcome {
        search: "very-transverse-flag",
        found: Some(Found::Flag(Flag { levels })),
        tested,
        rejections,
        theorem_violation: false,
        gate: target_gate,
        seed,
    })
}
