//! Construction and certification of postcritically finite maps: exact
//! Belyi-based polynomials over the rationals, passport and dessin
//! combinatorics, and a numerical Thurston pullback solver.

pub mod algsets;
pub mod certificate;
pub mod construct;
pub mod critval;
pub mod error;
pub mod exact;
pub mod numeric;
pub mod passports;
pub mod thurston;

pub use error::{Error, Result};
