//! Multiprecision complex numerics on the Riemann sphere.

pub mod cpoly;
pub mod linalg;
pub mod mobius;
pub mod roots;
pub mod sphere;

pub use cpoly::CPoly;
pub use mobius::Mobius;
pub use roots::{roots, RootBox};
pub use sphere::{sph_dist, sph_dist_mp, SpherePoint};

/// Complex value at an explicit MPFR precision.
pub type ComplexMP = rug::Complex;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// `|z|` as `f64`.
pub fn abs_f64(z: &ComplexMP) -> f64 {
    let r = z.real().to_f64();
    let i = z.imag().to_f64();
    if r.is_finite() && i.is_finite() {
        r.hypot(i)
    } else {
        rug::Float::with_val(64, z.abs_ref()).to_f64()
    }
}

/// `|z|` as a multiprecision float at the precision of `z`.
pub fn abs_mp(z: &ComplexMP) -> rug::Float {
    rug::Float::with_val(z.prec().0, z.abs_ref())
}

pub fn from_rational(prec: u32, q: &rug::Rational) -> ComplexMP {
    ComplexMP::with_val(prec, (rug::Float::with_val(prec, q), 0))
}

/// `|x - y|` as `f64`.
pub fn dist_f64(x: &ComplexMP, y: &ComplexMP) -> f64 {
    abs_f64(&ComplexMP::with_val(x.prec().0.max(y.prec().0), x - y))
}
