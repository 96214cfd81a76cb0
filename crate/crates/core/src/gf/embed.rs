//! Compatible embeddings between fields of the same characteristic.
//!
//! The image of a source generator is a root of the source modulus in the
//! target. Among the candidate roots (sorted by index) the first one is taken
//! that agrees with every embedding already chosen into the same target on
//! the common subfield. This keeps every triangle `i | j | k` commutative.

use std::sync::{Arc, Mutex, OnceLock};

use super::{FieldDescriptor, FieldElement};
use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// A ring homomorphism `F_{p^a} -> F_{p^b}` with `a | b`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldDescriptor,
    target: FieldDescriptor,
    /// Images of `1, t, ..., t^{a-1}`.
    powers: Arc<[FieldElement]>,
}

impl Embedding {
    pub fn source(&self) -> &FieldDescriptor {
        &self.source
    }

    pub fn target(&self) -> &FieldDescriptor {
        &self.target
    }

    pub fn apply(&self, a: FieldElement) -> FieldElement {
        if a.0 < self.source.p() {
            // Prime-subfield elements share their packed index in every field.
            return a;
        }
        if self.source == self.target {
            return a;
        }
        let tgt = &self.target;
        let mut acc = tgt.zero();
        for (c, &pw) in self.source.unpack(a).into_iter().zip(self.powers.iter()) {
            if c != 0 {
                acc = tgt.add(acc, tgt.mul(FieldElement(c), pw));
            }
        }
        acc
    }

    /// Image of the source generator.
    pub fn generator_image(&self) -> FieldElement {
        if self.source.degree() == 1 {
            self.source.generator()
        } else {
            self.powers[1]
        }
    }
}

fn construction_lock() -> &'static Mutex<()> {
    static LOCK: OnceLock<Mutex<()>> = OnceLock::new();
    LOCK.get_or_init(|| Mutex::new(()))
}

pub(super) fn embedding(source: &FieldDescriptor, target: &FieldDescriptor) -> Result<Embedding> {
    if source.p() != target.p() {
        return Err(Error::FieldMismatch);
    }
    if target.degree() % source.degree() != 0 {
        return Err(Error::DegreeNotDivisible { sub: source.degree(), sup: target.degree() });
    }
    if let Some(e) = cached(source, target) {
        return Ok(e);
    }
    let _guard = construction_lock().lock().unwrap_or_else(|e| e.into_inner());
    build(source, target)
}

fn make(source: &FieldDescriptor, target: &FieldDescriptor, image: FieldElement) -> Embedding {
    let mut powers = Vec::with_capacity(source.degree() as usize);
    let mut cur = target.one();
    for _ in 0..source.degree() {
        powers.push(cur);
        cur = target.mul(cur, image);
    }
    Embedding { source: source.clone(), target: target.clone(), powers: powers.into() }
}

fn cached(source: &FieldDescriptor, target: &FieldDescriptor) -> Option<Embedding> {
    if source.degree() == 1 || source == target {
        return Some(make(source, target, target.generator_if_trivial(source)));
    }
    let cache = target.0.embeddings.read().unwrap_or_else(|e| e.into_inner());
    cache
        .iter()
        .find(|(s, _)| s == source)
        .map(|(_, img)| make(source, target, *img))
}

/// Must be called with the construction lock held.
fn build(source: &FieldDescriptor, target: &FieldDescriptor) -> Result<Embedding> {
    if let Some(e) = cached(source, target) {
        return Ok(e);
    }
    let coeffs: Vec<FieldElement> = source.modulus().iter().map(|&c| FieldElement(c)).collect();
    let modulus = UniPoly::new(target.clone(), coeffs);
    let mut candidates: Vec<FieldElement> = modulus.roots()?.into_iter().map(|(r, _)| r).collect();
    candidates.sort();
    if candidates.is_empty() {
        return Err(Error::Embedding(format!("{source:?} has no image in {target:?}")));
    }
    let existing: Vec<(FieldDescriptor, FieldElement)> =
        target.0.embeddings.read().unwrap_or_else(|e| e.into_inner()).clone();
    let mut chosen = None;
    'cand: for &cand in &candidates {
        let trial = make(source, target, cand);
        for (other, other_img) in &existing {
            let g = gcd(source.degree(), other.degree());
            if g == 1 {
                continue;
            }
            let common = FieldDescriptor::new(source.p(), g, None)?;
            let via_source = trial.apply(build(&common, source)?.generator_image());
            let other_emb = make(other, target, *other_img);
            let via_other = other_emb.apply(build(&common, other)?.generator_image());
            if via_source != via_other {
                continue 'cand;
            }
        }
        chosen = Some(cand);
        break;
    }
    let image = chosen.ok_or_else(|| {
        Error::Embedding(format!("no image of {source:?} in {target:?} compatible with cached embeddings"))
    })?;
    target.0.embeddings.write().unwrap_or_else(|e| e.into_inner()).push((source.clone(), image));
    Ok(make(source, target, image))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FieldDescriptor {
    /// For a prime or identical source the embedding is determined; its
    /// generator image is the generator itself (prime fields embed digitwise).
    fn generator_if_trivial(&self, source: &FieldDescriptor) -> FieldElement {
        if source.degree() == 1 {
            source.generator()
        } else {
            self.generator()
        }
    }
}
