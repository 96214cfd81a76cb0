//! Certified predicates: projective emptiness, dimension bounds, smoothness
//! and reducedness of sections, transversality and very transversality.
//!
//! Emptiness is decided exactly by [`macaulay_empty`]. Dimension bounds come
//! in a randomized one-sided flavour ([`dim_upper_bound`]) and an exact one
//! ([`dim_at_most_exact`]). Predicates taking a seed use the randomized test
//! first and only reject conservatively where documented.

mod dim;
mod macaulay;
mod points;

use serde::Serialize;

pub use dim::{
    dim_at_most_exact, dim_upper_bound, slices_empty, DimVerdict, DimensionCertificate, DEFAULT_RETRIES,
    MIN_SLICE_FIELD,
};
pub use macaulay::{macaulay_empty, macaulay_test, MacaulayOutcome};
pub(crate) use macaulay::monomials;
pub use points::scheme_points_upto;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::locus::{Hypersurface, SchemeSpec};
use crate::poly::Form;
use crate::projgeom::{LinearSubspace, ProjectivePoint};

/// Cumulative number of fibers a witness search may visit.
pub const WITNESS_FIBER_BUDGET: u128 = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmptinessVerdict {
    Empty,
    Nonempty(ProjectivePoint),
    /// Nonempty by the rank test, but no witness within the search budget.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct EmptinessCertificate {
    pub scheme: SchemeSpec,
    /// Degree of the rank test; `None` when fewer generators than `r + 1`.
    pub degree_n: Option<u32>,
    pub verdict: EmptinessVerdict,
}

/// Decides emptiness over the algebraic closure, with a witness point for
/// nonempty schemes when one of small residue degree exists.
pub fn is_empty_projective(spec: &SchemeSpec, limits: &Limits) -> Result<EmptinessCertificate> {
    let outcome = macaulay_test(spec);
    let mut cert = EmptinessCertificate { scheme: spec.clone(), degree_n: outcome.degree, verdict: EmptinessVerdict::Empty };
    if outcome.empty {
        return Ok(cert);
    }
    cert.verdict = EmptinessVerdict::Inconclusive;
    let mut spent = 0u128;
    for k in 1.. {
        let fibers = points::fiber_count(spec, k);
        spent = spent.saturating_add(fibers);
        if spent > WITNESS_FIBER_BUDGET {
            break;
        }
        match points::first_point(spec, k, limits) {
            Ok(Some(p)) => {
                cert.verdict = EmptinessVerdict::Nonempty(p);
                break;
            }
            Ok(None) => {}
            Err(Error::FieldTooLarge { .. } | Error::EnumerationTooLarge { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(cert)
}

/// Smoothness of `X` itself, computed once and cached.
pub fn is_smooth(x: &Hypersurface) -> bool {
    *x.smooth.get_or_init(|| macaulay_empty(&x.singular_scheme()))
}

fn subspace_rows(x: &Hypersurface, h: &LinearSubspace) -> Result<Vec<Vec<crate::gf::FieldElement>>> {
    if h.ambient() != x.n() {
        return Err(Error::DimensionMismatch { expected: x.n() + 1, found: h.ambient() + 1 });
    }
    if h.field() == x.field() {
        return Ok(h.rows().to_vec());
    }
    let e = h.field().embedding_into(x.field())?;
    Ok(h.rows().iter().map(|r| r.iter().map(|&c| e.apply(c)).collect()).collect())
}

/// `F|_H` in the coordinates of `H`'s echelon basis.
pub fn restrict(x: &Hypersurface, h: &LinearSubspace) -> Result<Form> {
    x.form().substitute_linear(&subspace_rows(x, h)?)
}

/// Squarefreeness of a nonzero binary form, roots at infinity included.
pub fn binary_form_squarefree(g: &Form) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let u = g.dehomogenize_binary();
    let at_infinity = g.degree() as usize - u.degree().unwrap_or(0);
    if at_infinity >= 2 {
        return Ok(false);
    }
    u.is_squarefree()
}

/// Jacobian scheme `{G, dG/du_0, ..., dG/du_r}` of a form.
pub fn jacobian_scheme(g: &Form) -> SchemeSpec {
    let mut forms = vec![g.clone()];
    forms.extend(g.partials());
    SchemeSpec::new(forms).unwrap()
}

/// Smoothness of `X ∩ H` over the algebraic closure. Errors with
/// [`Error::NotProper`] when `H ⊆ X`.
pub fn is_smooth_section(x: &Hypersurface, h: &LinearSubspace) -> Result<bool> {
    let g = restrict(x, h)?;
    if g.is_zero() {
        return Err(Error::NotProper);
    }
    Ok(match h.dim() {
        0 => true,
        1 => binary_form_squarefree(&g)?,
        _ => macaulay_empty(&jacobian_scheme(&g)),
    })
}

/// True iff `H` meets the singular scheme of `X`.
pub fn meets_singular_locus(x: &Hypersurface, h: &LinearSubspace) -> Result<bool> {
    let s = x.singular_scheme().substitute(&subspace_rows(x, h)?)?;
    Ok(!macaulay_empty(&s))
}

/// `H` avoids `Sing(X)` and `X ∩ H` is a smooth proper section.
pub fn is_transverse(x: &Hypersurface, h: &LinearSubspace) -> Result<bool> {
    if meets_singular_locus(x, h)? {
        return Ok(false);
    }
    match is_smooth_section(x, h) {
        Err(Error::NotProper) => Ok(false),
        other => other,
    }
}

/// `X ∩ H` is reduced. A `p`-th power restriction (all partials zero) is
/// non-reduced; otherwise the Jacobian scheme of `F|_H` must have dimension
/// at most `r - 2`, tried by random slicing and then decided exactly.
pub fn is_reduced_section(x: &Hypersurface, h: &LinearSubspace, seed: u64, limits: &Limits) -> Result<bool> {
    let g = restrict(x, h)?;
    reduced_form(&g, seed, limits)
}

/// Reducedness of a nonzero form in its own variables.
pub fn reduced_form(g: &Form, seed: u64, limits: &Limits) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::NotProper);
    }
    let r = g.nvars() - 1;
    if r == 0 || g.degree() == 0 {
        return Ok(true);
    }
    let partials = g.partials();
    if partials.iter().all(Form::is_zero) {
        return Ok(false);
    }
    if r == 1 {
        return binary_form_squarefree(g);
    }
    let j = jacobian_scheme(g);
    let t = r as i64 - 2;
    if dim_upper_bound(&j, t, DEFAULT_RETRIES, seed, limits)?.verdict == DimVerdict::AtMost {
        return Ok(true);
    }
    dim_at_most_exact(&j, t, limits)
}

/// Outcome of the randomized very-transversality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VtStatus {
    VeryTransverse,
    NotTransverse,
    /// Transverse, but the tangency-locus bound was not certified.
    Undetermined,
}

fn vt_precheck(x: &Hypersurface, h: &LinearSubspace) -> Result<()> {
    if !is_smooth(x) {
        return Err(Error::NotSmooth);
    }
    if h.dim() >= x.n() {
        return Err(Error::InvalidParameter(format!("need r < n, got r = {} in P^{}", h.dim(), x.n())));
    }
    Ok(())
}

/// Randomized very-transversality: acceptance is sound, and a transverse
/// `H` whose tangency-locus bound fails to certify is reported as undetermined.
pub fn very_transverse_status(x: &Hypersurface, h: &LinearSubspace, seed: u64, limits: &Limits) -> Result<VtStatus> {
    vt_precheck(x, h)?;
    if !is_transverse(x, h)? {
        return Ok(VtStatus::NotTransverse);
    }
    if h.dim() + 1 == x.n() {
        return Ok(VtStatus::VeryTransverse);
    }
    let t = x.n() as i64 - h.dim() as i64 - 2;
    let cert = dim_upper_bound(&x.tangency_locus(h)?, t, DEFAULT_RETRIES, seed, limits)?;
    Ok(match cert.verdict {
        DimVerdict::AtMost => VtStatus::VeryTransverse,
        DimVerdict::Undetermined => VtStatus::Undetermined,
    })
}

/// Conservative very-transversality: undetermined counts as `false`.
pub fn is_very_transverse(x: &Hypersurface, h: &LinearSubspace, seed: u64, limits: &Limits) -> Result<bool> {
    Ok(very_transverse_status(x, h, seed, limits)? == VtStatus::VeryTransverse)
}

/// Exact very-transversality: transverse, and the tangency locus has
/// dimension at most `n - r - 2` (decided deterministically).
pub fn is_very_transverse_exact(x: &Hypersurface, h: &LinearSubspace, seed: u64, limits: &Limits) -> Result<bool> {
    match very_transverse_status(x, h, seed, limits)? {
        VtStatus::VeryTransverse => Ok(true),
        VtStatus::NotTransverse => Ok(false),
        VtStatus::Undetermined => {
            let t = x.n() as i64 - h.dim() as i64 - 2;
            dim_at_most_exact(&x.tangency_locus(h)?, t, limits)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldDescriptor;
    use crate::poly::parse_form;
    use crate::projgeom::enumerate_subspaces;

    fn hyp(text: &str, p: u64, nvars: usize) -> Hypersurface {
        let f = FieldDescriptor::prime(p).unwrap();
        Hypersurface::new(parse_form(text, &f, nvars).unwrap()).unwrap()
    }

    fn sub(x: &Hypersurface, text: &str) -> LinearSubspace {
        LinearSubspace::parse(x.field(), text).unwrap()
    }

    #[test]
    fn emptiness_examples() {
        let f = FieldDescriptor::prime(5).unwrap();
        let s = |t: &[&str]| SchemeSpec::new(t.iter().map(|x| parse_form(x, &f, 3).unwrap()).collect()).unwrap();
        let lim = Limits::default();
        let c = is_empty_projective(&s(&["x0", "x1", "x2"]), &lim).unwrap();
        assert_eq!((c.verdict, c.degree_n), (EmptinessVerdict::Empty, Some(1)));
        let c = is_empty_projective(&s(&["x0*x1", "x0*x2", "x1*x2"]), &lim).unwrap();
        match c.verdict {
            EmptinessVerdict::Nonempty(p) => assert!(c.scheme.vanishes_at(&p).unwrap()),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn conic_sections() {
        let x = hyp("x0*x2 - x1^2", 5, 3);
        assert!(is_smooth_section(&x, &sub(&x, "1,0,0; 0,0,1")).unwrap());
        assert!(!is_smooth_section(&x, &sub(&x, "1,0,0; 0,1,0")).unwrap());
        assert!(is_transverse(&x, &sub(&x, "1,0,0; 0,0,1")).unwrap());
    }

    #[test]
    fn fermat_smoothness_depends_on_characteristic() {
        assert!(is_smooth(&hyp("x0^3 + x1^3 + x2^3", 5, 3)));
        assert!(!is_smooth(&hyp("x0^3 + x1^3 + x2^3", 3, 3)));
        let x = hyp("x0^3 + x1^3 + x2^3", 5, 3);
        assert!(is_smooth_section(&x, &LinearSubspace::ambient_space(x.field(), 2)).unwrap());
    }

    #[test]
    fn non_proper_section_errors() {
        let x = hyp("x0*x1", 5, 4);
        assert!(matches!(is_smooth_section(&x, &sub(&x, "1,0,0,0; 0,0,1,0")), Err(Error::NotProper)));
        assert!(matches!(is_reduced_section(&x, &sub(&x, "0,1,0,0"), 0, &Limits::default()), Err(Error::NotProper)));
    }

    #[test]
    fn reducedness_examples() {
        let f = FieldDescriptor::prime(5).unwrap();
        let lim = Limits::default();
        assert!(reduced_form(&parse_form("x0*x1", &f, 3).unwrap(), 0, &lim).unwrap());
        assert!(!reduced_form(&parse_form("x0^2*x1", &f, 3).unwrap(), 0, &lim).unwrap());
        let x = hyp("x0*x1", 5, 4);
        // The plane x0 = x1 contains the line {x0 = x1 = 0}; the section is a double line.
        let h = sub(&x, "1,1,0,0; 0,0,1,0; 0,0,0,1");
        assert!(!is_reduced_section(&x, &h, 0, &lim).unwrap());
        assert!(is_reduced_section(&x, &sub(&x, "1,0,0,0; 0,1,0,0; 0,0,1,0"), 0, &lim).unwrap());
    }

    #[test]
    fn p_th_power_section_is_not_reduced() {
        let f = FieldDescriptor::prime(3).unwrap();
        let g = parse_form("x0^3 + x1^3 + 2*x2^3", &f, 3).unwrap();
        assert!(!reduced_form(&g, 0, &Limits::default()).unwrap());
    }

    #[test]
    fn cusp_lines_through_singular_point() {
        let x = hyp("x1^2*x2 - x0^3", 5, 3);
        assert!(!is_transverse(&x, &sub(&x, "0,0,1; 1,2,0")).unwrap());
        assert!(!is_transverse(&x, &sub(&x, "0,0,1; 0,1,0")).unwrap());
    }

    #[test]
    fn hyperplane_lines_transverse() {
        let x = hyp("x0 + 2*x1 + x2", 5, 3);
        let lim = Limits::default();
        for l in enumerate_subspaces(x.field(), 2, 1, &lim).unwrap() {
            let inside = restrict(&x, &l).unwrap().is_zero();
            assert_eq!(is_transverse(&x, &l).unwrap(), !inside);
        }
    }

    #[test]
    fn quadric_surface_lines() {
        let x = hyp("x0*x1 + x2^2 + 2*x3^2", 5, 4);
        assert!(is_smooth(&x));
        let lim = Limits::default();
        let mut count = 0;
        for l in enumerate_subspaces(x.field(), 3, 1, &lim).unwrap() {
            count += 1;
            let g = restrict(&x, &l).unwrap();
            let expected = !g.is_zero() && binary_form_squarefree(&g).unwrap();
            assert_eq!(is_transverse(&x, &l).unwrap(), expected);
            assert_eq!(is_very_transverse_exact(&x, &l, 1, &lim).unwrap(), expected);
        }
        assert_eq!(count, 806);
    }

    #[test]
    fn points_off_cubic_are_very_transverse() {
        let x = hyp("x0^3 + x1^3 + x2^3 + x3^3", 7, 4);
        let lim = Limits::default();
        let p = sub(&x, "1,1,1,0");
        assert!(!x.contains(&ProjectivePoint::new(x.field(), p.rows()[0].clone()).unwrap()).unwrap());
        assert!(is_very_transverse(&x, &p, 5, &lim).unwrap());
    }
}
