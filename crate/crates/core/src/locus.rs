//! Hypersurfaces and the loci built from them: the singular scheme, the
//! minors `D_ij = F_i F_j^q - F_i^q F_j` cutting out `Z_X`, membership in the
//! union `Z_r` of rational `r`-planes through a fixed `(r-1)`-plane, and the
//! tangency locus `{P in X : T_P X contains H}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gf::{FieldDescriptor, FieldElement};
use crate::limits::Limits;
use crate::poly::Form;
use crate::projgeom::{rref, LinearSubspace, ProjectivePoint};

/// A finite list of forms in the same variables over the same field; its
/// zero set in `P^{nvars-1}` over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    field: FieldDescriptor,
    nvars: usize,
    forms: Vec<Form>,
}

impl SchemeSpec {
    pub fn new(forms: Vec<Form>) -> Result<Self> {
        let first = forms.first().ok_or_else(|| Error::InvalidParameter("scheme needs a generator".into()))?;
        let (field, nvars) = (first.field().clone(), first.nvars());
        for f in &forms {
            if f.field() != &field {
                return Err(Error::FieldMismatch);
            }
            if f.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: f.nvars() });
            }
        }
        Ok(SchemeSpec { field, nvars, forms })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    /// Ambient projective dimension.
    pub fn ambient(&self) -> usize {
        self.nvars - 1
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    /// Adds generators.
    pub fn with_forms(&self, extra: impl IntoIterator<Item = Form>) -> Result<SchemeSpec> {
        let mut forms = self.forms.clone();
        forms.extend(extra);
        SchemeSpec::new(forms)
    }

    pub fn embed(&self, target: &FieldDescriptor) -> Result<SchemeSpec> {
        let forms = self.forms.iter().map(|f| f.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(SchemeSpec { field: target.clone(), nvars: self.nvars, forms })
    }

    /// Pulls back along `x = u B`; the result lives in `P^{basis.len()-1}`.
    pub fn substitute(&self, basis: &[Vec<FieldElement>]) -> Result<SchemeSpec> {
        let forms = self.forms.iter().map(|f| f.substitute_linear(basis)).collect::<Result<Vec<_>>>()?;
        Ok(SchemeSpec { field: self.field.clone(), nvars: basis.len(), forms })
    }

    /// Intersection with a rational subspace, in the subspace's coordinates.
    pub fn restrict(&self, h: &LinearSubspace) -> Result<SchemeSpec> {
        if h.field() == &self.field {
            return self.substitute(h.rows());
        }
        let e = h.field().embedding_into(&self.field)?;
        let rows: Vec<Vec<FieldElement>> = h.rows().iter().map(|r| r.iter().map(|&c| e.apply(c)).collect()).collect();
        self.substitute(&rows)
    }

    /// True iff every generator vanishes at the point (coordinates over any extension).
    pub fn vanishes_at(&self, p: &ProjectivePoint) -> Result<bool> {
        for f in &self.forms {
            if !f.eval_in(p.field(), p.coords())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct Embedded {
    form: Form,
    partials: Vec<Form>,
}

/// `X = {F = 0}` in `P^n` with `F` nonzero of degree at least 1.
pub struct Hypersurface {
    form: Form,
    partials: Vec<Form>,
    embedded: Mutex<HashMap<FieldDescriptor, Arc<Embedded>>>,
    minors: OnceLock<Vec<(usize, usize, Form)>>,
    pub(crate) smooth: OnceLock<bool>,
}

impl Clone for Hypersurface {
    fn clone(&self) -> Self {
        Hypersurface::new(self.form.clone()).unwrap()
    }
}

impl fmt::Debug for Hypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypersurface({} over {:?})", self.form, self.form.field())
    }
}

impl PartialEq for Hypersurface {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form
    }
}

impl Hypersurface {
    pub fn new(form: Form) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if form.degree() == 0 {
            return Err(Error::InvalidParameter("hypersurface of degree 0".into()));
        }
        if form.nvars() < 2 {
            return Err(Error::InvalidParameter("hypersurface needs at least two variables".into()));
        }
        let partials = form.partials();
        Ok(Hypersurface {
            form,
            partials,
            embedded: Mutex::new(HashMap::new()),
            minors: OnceLock::new(),
            smooth: OnceLock::new(),
        })
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn partials(&self) -> &[Form] {
        &self.partials
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.form.field()
    }

    /// Order `q` of the base field.
    pub fn q(&self) -> u64 {
        self.field().order()
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.form.nvars() - 1
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    fn embedded(&self, field: &FieldDescriptor) -> Result<Arc<Embedded>> {
        let mut cache = self.embedded.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(e) = cache.get(field) {
            return Ok(e.clone());
        }
        let e = Arc::new(Embedded {
            form: self.form.embed(field)?,
            partials: self.partials.iter().map(|p| p.embed(field)).collect::<Result<Vec<_>>>()?,
        });
        cache.insert(field.clone(), e.clone());
        Ok(e)
    }

    fn check_point(&self, p: &ProjectivePoint) -> Result<()> {
        if p.ambient() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n() + 1, found: p.coords().len() });
        }
        Ok(())
    }

    pub fn eval(&self, p: &ProjectivePoint) -> Result<FieldElement> {
        self.check_point(p)?;
        Ok(self.embedded(p.field())?.form.eval_unchecked(p.coords()))
    }

    pub fn contains(&self, p: &ProjectivePoint) -> Result<bool> {
        Ok(self.eval(p)?.is_zero())
    }

    /// `(F_0(P), ..., F_n(P))` over the point's field.
    pub fn gradient(&self, p: &ProjectivePoint) -> Result<Vec<FieldElement>> {
        self.check_point(p)?;
        let e = self.embedded(p.field())?;
        Ok(e.partials.iter().map(|f| f.eval_unchecked(p.coords())).collect())
    }

    /// The tangent hyperplane at `P` as a normalized dual point, or `None`
    /// when every partial vanishes at `P`.
    pub fn gauss_image(&self, p: &ProjectivePoint) -> Result<Option<ProjectivePoint>> {
        let g = self.gradient(p)?;
        if g.iter().all(|c| c.is_zero()) {
            return Ok(None);
        }
        Ok(Some(ProjectivePoint::new(p.field(), g)?))
    }

    /// Generators `F, F_0, ..., F_n`. `F` is kept because Euler's relation
    /// fails when `p | d`.
    pub fn singular_scheme(&self) -> SchemeSpec {
        let mut forms = vec![self.form.clone()];
        forms.extend(self.partials.iter().cloned());
        SchemeSpec::new(forms).unwrap()
    }

    /// `D_ij = F_i F_j^q - F_i^q F_j`.
    pub fn build_d_ij(&self, i: usize, j: usize) -> Result<Form> {
        if i >= j || j > self.n() {
            return Err(Error::InvalidParameter(format!("need 0 <= i < j <= {}, got ({i}, {j})", self.n())));
        }
        let q = self.q() as u32;
        let lim = Limits { max_degree: u64::MAX, ..Limits::default() };
        let (fi, fj) = (&self.partials[i], &self.partials[j]);
        let fiq = fi.pow(q, &lim)?;
        let fjq = fj.pow(q, &lim)?;
        let degree = (self.degree() - 1) * (q + 1);
        let a = fi.mul(&fjq);
        let b = fiq.mul(fj);
        let mut d = a.sub(&b);
        if d.is_zero() {
            d = Form::zero(self.field(), self.n() + 1, degree);
        }
        Ok(d)
    }

    fn minors(&self) -> &[(usize, usize, Form)] {
        self.minors.get_or_init(|| {
            let n = self.n();
            let mut out = Vec::new();
            for i in 0..=n {
                for j in i + 1..=n {
                    out.push((i, j, self.build_d_ij(i, j).unwrap()));
                }
            }
            out
        })
    }

    /// Generators of `Z_X`: all `D_ij`.
    pub fn z_x_scheme(&self) -> SchemeSpec {
        SchemeSpec::new(self.minors().iter().map(|(_, _, f)| f.clone()).collect()).unwrap()
    }

    /// True iff every `D_ij` vanishes at `P`.
    pub fn in_z_x(&self, p: &ProjectivePoint) -> Result<bool> {
        self.check_point(p)?;
        for (_, _, d) in self.minors() {
            if !d.eval_in(p.field(), p.coords())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generators `F` and `sum_j v_j F_j` for each basis row `v` of `H`.
    pub fn tangency_locus(&self, h: &LinearSubspace) -> Result<SchemeSpec> {
        if h.ambient() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n() + 1, found: h.ambient() + 1 });
        }
        let f = self.field();
        let emb = h.field().embedding_into(f)?;
        let mut forms = vec![self.form.clone()];
        for row in h.rows() {
            let mut acc = Form::zero(f, self.n() + 1, self.degree() - 1);
            for (j, &v) in row.iter().enumerate() {
                if !v.is_zero() {
                    acc = acc.add(&self.partials[j].scale(emb.apply(v)));
                }
            }
            forms.push(acc);
        }
        SchemeSpec::new(forms)
    }
}

/// True iff `P` lies on some rational `r`-plane through `h_prev`
/// (`r = dim h_prev + 1`): the rows of `h_prev`, `P` and `P^(q)` are dependent.
pub fn in_z_r(h_prev: &LinearSubspace, p: &ProjectivePoint) -> Result<bool> {
    if h_prev.ambient() != p.ambient() {
        return Err(Error::DimensionMismatch { expected: h_prev.ambient() + 1, found: p.coords().len() });
    }
    let k = p.field();
    let q = h_prev.field().order();
    let emb = h_prev.field().embedding_into(k)?;
    let mut rows: Vec<Vec<FieldElement>> =
        h_prev.rows().iter().map(|r| r.iter().map(|&c| emb.apply(c)).collect()).collect();
    rows.push(p.coords().to_vec());
    rows.push(p.frobenius(q)?.coords().to_vec());
    let total = rows.len();
    Ok(rref(k, &mut rows).len() < total)
}
