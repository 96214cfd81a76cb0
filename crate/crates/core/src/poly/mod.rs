//! Dense univariate polynomials and sparse homogeneous forms.

mod form;
mod parse;
mod uni;

pub use form::Form;
pub use parse::{parse_form, parse_form_at};
pub use uni::{upoly_gcd, UniPoly};
