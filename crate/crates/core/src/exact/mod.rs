//! Exact arithmetic over the rationals.

pub mod field;
pub mod poly;
pub mod resultant;
pub mod roots;
pub mod text;

pub use poly::RatPoly;
pub use resultant::{norm_polynomial, resultant};
pub use roots::rational_roots;
pub use text::{format_poly, format_rational, parse_poly, parse_rational};

/// Monic squarefree part; rejects the zero polynomial.
pub fn squarefree_part(p: &RatPoly) -> crate::error::Result<RatPoly> {
    if p.is_zero() {
        return Err(crate::error::Error::InvalidInput(
            "squarefree part of the zero polynomial".into(),
        ));
    }
    Ok(p.squarefree())
}
