use std::fmt;

use rug::{Complex, Float};

use super::{abs_f64, ComplexMP};

/// A point of the Riemann sphere: a finite complex coordinate or `∞`.
///
/// Large finite values stay finite; MPFR's exponent range makes overflow to
/// infinity a non-issue at the magnitudes reached here.
#[derive(Clone, PartialEq)]
pub enum SpherePoint {
    Finite(ComplexMP),
    Infinity,
}

impl SpherePoint {
    pub fn finite(z: ComplexMP) -> Self {
        SpherePoint::Finite(z)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex::with_val(prec, (re, im)))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<&ComplexMP> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// `1/z` with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self, prec: u32) -> SpherePoint {
        match self {
            SpherePoint::Infinity => SpherePoint::Finite(Complex::new(prec)),
            SpherePoint::Finite(z) if z.is_zero() => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::Finite(Complex::with_val(prec, z.recip_ref())),
        }
    }

    /// Coordinate in the chart `|w| ≤ 1`: `(w, false)` for the standard
    /// chart, `(1/z, true)` for the chart at infinity.
    pub fn chart(&self, prec: u32) -> (ComplexMP, bool) {
        match self {
            SpherePoint::Infinity => (Complex::new(prec), true),
            SpherePoint::Finite(z) => {
                if abs_f64(z) <= 1.0 {
                    (z.clone(), false)
                } else {
                    (Complex::with_val(prec, z.recip_ref()), true)
                }
            }
        }
    }

    pub fn to_f64_pair(&self) -> Option<(f64, f64)> {
        self.as_finite()
            .map(|z| (z.real().to_f64(), z.imag().to_f64()))
    }
}

impl fmt::Debug for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "∞"),
            SpherePoint::Finite(z) => {
                write!(f, "{:.12e}{:+.12e}i", z.real().to_f64(), z.imag().to_f64())
            }
        }
    }
}

/// Chordal distance `2|x-y| / √((1+|x|²)(1+|y|²))`, with
/// `d(x, ∞) = 2 / √(1+|x|²)`. Range `[0, 2]`.
pub fn sph_dist(x: &SpherePoint, y: &SpherePoint) -> f64 {
    sph_dist_mp(x, y).to_f64()
}

/// Chordal distance at the working precision of the inputs.
pub fn sph_dist_mp(x: &SpherePoint, y: &SpherePoint) -> Float {
    match (x, y) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => Float::new(64),
        (SpherePoint::Finite(z), SpherePoint::Infinity)
        | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
            let prec = z.prec().0;
            let n = Float::with_val(prec, z.abs_ref()).square() + 1u32;
            Float::with_val(prec, 2u32) / n.sqrt()
        }
        (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
            let prec = a.prec().0.max(b.prec().0);
            // Evaluate in the chart where both are small when possible; the
            // metric is invariant under z ↦ 1/z.
            let (a, b) = if abs_f64(a) > 1.0 && abs_f64(b) > 1.0 {
                (
                    Complex::with_val(prec, a.recip_ref()),
                    Complex::with_val(prec, b.recip_ref()),
                )
            } else {
                (a.clone(), b.clone())
            };
            let diff = Float::with_val(prec, Complex::with_val(prec, &a - &b).abs_ref());
            let na = Float::with_val(prec, a.abs_ref()).square() + 1u32;
            let nb = Float::with_val(prec, b.abs_ref()).square() + 1u32;
            diff * 2u32 / (na * nb).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    #[test]
    fn distance_examples() {
        let zero = SpherePoint::from_f64(P, 0.0, 0.0);
        let one = SpherePoint::from_f64(P, 1.0, 0.0);
        assert!((sph_dist(&zero, &SpherePoint::Infinity) - 2.0).abs() < 1e-15);
        assert_eq!(sph_dist(&zero, &zero), 0.0);
        assert!((sph_dist(&zero, &one) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn distance_is_symmetric_and_inversion_invariant() {
        let a = SpherePoint::from_f64(P, 3.0, -2.0);
        let b = SpherePoint::from_f64(P, -0.25, 0.5);
        let d = sph_dist(&a, &b);
        assert!((d - sph_dist(&b, &a)).abs() < 1e-15);
        assert!((d - sph_dist(&a.recip(P), &b.recip(P))).abs() < 1e-14);
    }

    #[test]
    fn large_values_stay_finite() {
        let big = SpherePoint::from_f64(P, 1e300, 0.0);
        assert!(!big.is_infinity());
        let d = sph_dist(&big, &SpherePoint::Infinity);
        assert!(d > 0.0 && d < 1e-299);
    }
}
