use rug::Complex;

use super::sphere::{sph_dist, SpherePoint};
use super::{abs_f64, ComplexMP};
use crate::error::{Error, Result};

/// `z ↦ (a z + b) / (c z + d)` with `ad - bc ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius {
    pub a: ComplexMP,
    pub b: ComplexMP,
    pub c: ComplexMP,
    pub d: ComplexMP,
}

impl Mobius {
    pub fn new(a: ComplexMP, b: ComplexMP, c: ComplexMP, d: ComplexMP) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        let det = m.det();
        let scale = [&m.a, &m.b, &m.c, &m.d]
            .iter()
            .map(|z| abs_f64(z))
            .fold(0.0, f64::max);
        if scale == 0.0 || abs_f64(&det) <= scale * scale * 1e-60 {
            return Err(Error::Degenerate("Möbius determinant vanishes".into()));
        }
        Ok(m)
    }

    pub fn identity(prec: u32) -> Self {
        let one = Complex::with_val(prec, 1);
        let zero = Complex::new(prec);
        Mobius {
            a: one.clone(),
            b: zero.clone(),
            c: zero,
            d: one,
        }
    }

    fn prec(&self) -> u32 {
        self.a.prec().0
    }

    pub fn det(&self) -> ComplexMP {
        let p = self.prec();
        Complex::with_val(p, &self.a * &self.d) - Complex::with_val(p, &self.b * &self.c)
    }

    pub fn apply(&self, z: &SpherePoint) -> SpherePoint {
        let p = self.prec();
        let (num, den) = match z {
            SpherePoint::Infinity => (self.a.clone(), self.c.clone()),
            SpherePoint::Finite(w) => (
                Complex::with_val(p, &self.a * w) + &self.b,
                Complex::with_val(p, &self.c * w) + &self.d,
            ),
        };
        if den.is_zero() {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(Complex::with_val(p, &num / &den))
        }
    }

    pub fn inverse(&self) -> Mobius {
        let neg = |z: &ComplexMP| Complex::with_val(self.prec(), -z);
        Mobius {
            a: self.d.clone(),
            b: neg(&self.b),
            c: neg(&self.c),
            d: self.a.clone(),
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let p = self.prec();
        let mul = |x: &ComplexMP, y: &ComplexMP| Complex::with_val(p, x * y);
        Mobius {
            a: mul(&self.a, &other.a) + mul(&self.b, &other.c),
            b: mul(&self.a, &other.b) + mul(&self.b, &other.d),
            c: mul(&self.c, &other.a) + mul(&self.d, &other.c),
            d: mul(&self.c, &other.b) + mul(&self.d, &other.d),
        }
    }

    /// The unique Möbius map sending `(p0, p1, p2)` to `(0, 1, ∞)`.
    pub fn through(
        p0: &SpherePoint,
        p1: &SpherePoint,
        p2: &SpherePoint,
        prec: u32,
        tol: f64,
    ) -> Result<Mobius> {
        for (x, y) in [(p0, p1), (p0, p2), (p1, p2)] {
            if sph_dist(x, y) <= tol {
                return Err(Error::Degenerate(format!(
                    "normalizing points nearly coincide: {x:?}, {y:?}"
                )));
            }
        }
        let one = Complex::with_val(prec, 1);
        let zero = Complex::new(prec);
        let neg = |z: &ComplexMP| Complex::with_val(prec, -z);
        let sub = |x: &ComplexMP, y: &ComplexMP| Complex::with_val(prec, x - y);
        let mul = |x: &ComplexMP, y: &ComplexMP| Complex::with_val(prec, x * y);
        use SpherePoint::*;
        let m = match (p0, p1, p2) {
            (Infinity, Finite(b), Finite(c)) => Mobius {
                a: zero,
                b: sub(b, c),
                c: one,
                d: neg(c),
            },
            (Finite(a), Infinity, Finite(c)) => Mobius {
                a: one.clone(),
                b: neg(a),
                c: one,
                d: neg(c),
            },
            (Finite(a), Finite(b), Infinity) => Mobius {
                a: one,
                b: neg(a),
                c: zero,
                d: sub(b, a),
            },
            (Finite(a), Finite(b), Finite(c)) => {
                let bc = sub(b, c);
                let ba = sub(b, a);
                Mobius {
                    b: neg(&mul(a, &bc)),
                    a: bc,
                    d: neg(&mul(c, &ba)),
                    c: ba,
                }
            }
            _ => unreachable!("distinct points cannot share ∞"),
        };
        Mobius::new(m.a, m.b, m.c, m.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn pt(re: f64, im: f64) -> SpherePoint {
        SpherePoint::from_f64(P, re, im)
    }

    #[test]
    fn standard_triple_is_identity() {
        let m = Mobius::through(&pt(0.0, 0.0), &pt(1.0, 0.0), &SpherePoint::Infinity, P, 1e-30)
            .unwrap();
        let z = pt(0.3, -1.7);
        assert!(sph_dist(&m.apply(&z), &z) < 1e-70);
    }

    #[test]
    fn swapped_pair_gives_reflection() {
        let m = Mobius::through(&pt(1.0, 0.0), &pt(0.0, 0.0), &SpherePoint::Infinity, P, 1e-30)
            .unwrap();
        let z = pt(0.25, 2.0);
        assert!(sph_dist(&m.apply(&z), &pt(0.75, -2.0)) < 1e-70);
    }

    #[test]
    fn halving() {
        let m = Mobius::through(&pt(0.0, 0.0), &pt(2.0, 0.0), &SpherePoint::Infinity, P, 1e-30)
            .unwrap();
        assert!(sph_dist(&m.apply(&pt(3.0, 1.0)), &pt(1.5, 0.5)) < 1e-70);
    }

    #[test]
    fn generic_triple_and_inverse() {
        let (a, b, c) = (pt(0.2, 0.9), SpherePoint::Infinity, pt(-3.0, 0.1));
        let m = Mobius::through(&a, &b, &c, P, 1e-30).unwrap();
        assert!(sph_dist(&m.apply(&a), &pt(0.0, 0.0)) < 1e-60);
        assert!(sph_dist(&m.apply(&b), &pt(1.0, 0.0)) < 1e-60);
        assert!(m.apply(&c).is_infinity());
        let z = pt(1.1, -0.4);
        let back = m.inverse().apply(&m.apply(&z));
        assert!(sph_dist(&back, &z) < 1e-60);
        let id = m.compose(&m.inverse());
        assert!(sph_dist(&id.apply(&z), &z) < 1e-60);
    }

    #[test]
    fn coincident_points_rejected() {
        let r = Mobius::through(&pt(0.5, 0.0), &pt(0.5, 0.0), &SpherePoint::Infinity, P, 1e-30);
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }
}
