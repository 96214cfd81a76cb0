//! Exact transversality machinery for hypersurfaces over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf`]: prime fields and extensions `F_{p^m}` with Frobenius and compatible embeddings.
//! - [`poly`]: dense univariate polynomials and sparse homogeneous forms.
//! - [`projgeom`]: projective points, canonical linear subspaces, duality.
//! - [`locus`]: hypersurfaces, Gauss map, determinantal and tangency loci.
//! - [`certify`]: emptiness (Macaulay rank test), dimension bounds, transversality predicates.
//! - [`search`]: constructive searches for reduced sections, transverse lines and flags.
//! - [`audit`]: exhaustive counts compared against closed-form bounds.

pub mod audit;
pub mod certify;
pub mod error;
pub mod gf;
pub mod limits;
pub mod locus;
pub mod poly;
pub mod projgeom;
pub mod search;
mod seed;

pub use error::{Error, Result};
pub use gf::{FieldDescriptor, FieldElement};
pub use limits::Limits;
pub use locus::{Hypersurface, SchemeSpec};
pub use poly::{Form, UniPoly};
pub use projgeom::{LinearSubspace, ProjectivePoint};
