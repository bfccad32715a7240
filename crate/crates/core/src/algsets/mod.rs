//! Finite Galois-stable sets of algebraic numbers, kept as squarefree
//! defining polynomials over the rationals.

mod belyi;

pub use belyi::{belyi, belyi_with, certify_steps, fold_polynomial, BelyiCertificate, BelyiOptions, BelyiStep};

use rug::Rational;

use crate::error::{Error, Result};
use crate::exact::{norm_polynomial, rational_roots, RatPoly};
use crate::numeric::{from_rational, roots, CPoly, ComplexMP};

/// Degree above which rational points are not searched for eagerly.
const RATIONAL_SCAN_LIMIT: usize = 48;

#[derive(Clone, Debug)]
pub struct FiniteAlgebraicSet {
    defining: RatPoly,
    rational_points: Option<Vec<Rational>>,
    contains_infinity: bool,
}

impl PartialEq for FiniteAlgebraicSet {
    fn eq(&self, other: &Self) -> bool {
        self.defining == other.defining && self.contains_infinity == other.contains_infinity
    }
}

impl FiniteAlgebraicSet {
    pub fn from_points(points: &[Rational], infinity: bool) -> Result<Self> {
        if points.is_empty() && !infinity {
            return Err(Error::InvalidInput("empty set".into()));
        }
        Ok(Self::points_unchecked(points.to_vec(), infinity))
    }

    pub fn from_defining(p: &RatPoly, infinity: bool) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::InvalidInput("zero defining polynomial".into()));
        }
        if p.is_constant() && !infinity {
            return Err(Error::InvalidInput("empty set".into()));
        }
        Ok(Self::defining_unchecked(p, infinity))
    }

    /// Only `∞`.
    pub fn infinity() -> Self {
        Self::points_unchecked(vec![], true)
    }

    pub(crate) fn points_unchecked(mut points: Vec<Rational>, infinity: bool) -> Self {
        points.sort();
        points.dedup();
        FiniteAlgebraicSet {
            defining: RatPoly::from_roots(points.iter()),
            rational_points: Some(points),
            contains_infinity: infinity,
        }
    }

    pub(crate) fn defining_unchecked(p: &RatPoly, infinity: bool) -> Self {
        let defining = p.squarefree();
        let rational_points = if defining.deg() <= RATIONAL_SCAN_LIMIT {
            let (roots, cof) = rational_roots(&defining);
            cof.is_constant().then_some(roots)
        } else {
            None
        };
        FiniteAlgebraicSet {
            defining,
            rational_points,
            contains_infinity: infinity,
        }
    }

    pub fn defining(&self) -> &RatPoly {
        &self.defining
    }

    pub fn rational_points(&self) -> Option<&[Rational]> {
        self.rational_points.as_deref()
    }

    pub fn contains_infinity(&self) -> bool {
        self.contains_infinity
    }

    /// Number of finite points.
    pub fn finite_size(&self) -> usize {
        self.defining.deg()
    }

    pub fn size(&self) -> usize {
        self.finite_size() + usize::from(self.contains_infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn with_infinity(&self, infinity: bool) -> Self {
        FiniteAlgebraicSet {
            contains_infinity: infinity,
            ..self.clone()
        }
    }

    pub fn finite_part(&self) -> Self {
        self.with_infinity(false)
    }

    /// The finite points as multiprecision complex numbers: exact rationals
    /// converted, otherwise roots of the defining polynomial.
    pub fn numeric_points(&self, prec: u32) -> Result<Vec<ComplexMP>> {
        if let Some(points) = &self.rational_points {
            return Ok(points.iter().map(|q| from_rational(prec, q)).collect());
        }
        if self.defining.is_constant() {
            return Ok(vec![]);
        }
        let boxes = roots(&CPoly::from_rat(prec, &self.defining), prec)?;
        Ok(boxes.into_iter().map(|b| ComplexMP::with_val(prec, b.center)).collect())
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        self.defining.eval(r) == 0
    }

    pub fn union(&self, other: &Self) -> Self {
        let inf = self.contains_infinity || other.contains_infinity;
        match (&self.rational_points, &other.rational_points) {
            (Some(a), Some(b)) => {
                Self::points_unchecked(a.iter().chain(b.iter()).cloned().collect(), inf)
            }
            _ => Self::defining_unchecked(&(&self.defining * &other.defining), inf),
        }
    }
}

/// `f(S)`. Polynomials fix `∞`, so the infinity flag carries over.
pub fn image_set(s: &FiniteAlgebraicSet, f: &RatPoly) -> Result<FiniteAlgebraicSet> {
    if f.is_constant() {
        return Err(Error::InvalidInput("image under a constant map".into()));
    }
    if let Some(points) = s.rational_points() {
        let imgs = points.iter().map(|x| f.eval(x)).collect();
        return Ok(FiniteAlgebraicSet::points_unchecked(imgs, s.contains_infinity));
    }
    let norm = norm_polynomial(&s.defining, f);
    Ok(FiniteAlgebraicSet::defining_unchecked(&norm, s.contains_infinity))
}

/// `V₀(f)`, the finite critical values.
pub fn critical_values_set(f: &RatPoly) -> Result<FiniteAlgebraicSet> {
    if f.deg() < 2 {
        return Err(Error::InvalidInput("critical values need degree at least 2".into()));
    }
    let crit = FiniteAlgebraicSet::defining_unchecked(&f.derivative(), false);
    image_set(&crit, f)
}

/// `S ⊆ T`, exactly: the finite parts by divisibility of defining
/// polynomials.
pub fn subset_of(s: &FiniteAlgebraicSet, t: &FiniteAlgebraicSet) -> bool {
    (!s.contains_infinity || t.contains_infinity) && t.defining.divisible_by(&s.defining)
}

/// `f(S) ⊆ S`, via `S.defining ∘ f ≡ 0 mod S.defining`.
pub fn forward_invariant(s: &FiniteAlgebraicSet, f: &RatPoly) -> bool {
    if s.defining.is_constant() {
        return true;
    }
    s.defining.compose_mod(f, &s.defining).is_zero()
}

/// `f(S) ⊆ T`, via `T.defining ∘ f ≡ 0 mod S.defining`.
pub fn maps_into(s: &FiniteAlgebraicSet, f: &RatPoly, t: &FiniteAlgebraicSet) -> bool {
    if s.defining.is_constant() {
        return true;
    }
    t.defining.compose_mod(f, &s.defining).is_zero()
}

/// `V₀(f) ⊆ T` without computing `V₀(f)`: a critical point of order `e`
/// is a root of order `e + 1` of `T.defining ∘ f`, so the condition is
/// `f' | T.defining ∘ f`.
pub fn critical_values_within(f: &RatPoly, t: &FiniteAlgebraicSet) -> bool {
    if f.deg() < 2 {
        return true;
    }
    let d = f.derivative();
    t.defining.compose_mod(f, &d).is_zero()
}

/// `S ⊆ C₀(f)`: `f'` vanishes on `S`.
pub fn critical_points_contain(f: &RatPoly, s: &FiniteAlgebraicSet) -> bool {
    f.derivative().rem(&s.defining).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn pts(v: &[(i64, i64)]) -> FiniteAlgebraicSet {
        let p: Vec<_> = v.iter().map(|&(n, d)| q(n, d)).collect();
        FiniteAlgebraicSet::from_points(&p, false).unwrap()
    }

    fn sqrt2() -> FiniteAlgebraicSet {
        FiniteAlgebraicSet::from_defining(&RatPoly::from_ints(&[-2, 0, 1]), false).unwrap()
    }

    #[test]
    fn image_examples() {
        let img = image_set(&sqrt2(), &RatPoly::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(img.defining(), &RatPoly::from_ints(&[-2, 1]));
        assert_eq!(img.rational_points(), Some(&[q(2, 1)][..]));

        let s = pts(&[(0, 1), (1, 1)]);
        assert_eq!(image_set(&s, &RatPoly::x()).unwrap(), s);

        let a = pts(&[(3, 2)]);
        let f = RatPoly::from_ints(&[-5, 0, 1]);
        assert_eq!(image_set(&a, &f).unwrap(), pts(&[(-11, 4)]));
    }

    #[test]
    fn critical_value_examples() {
        let a = q(-7, 3);
        let f = &RatPoly::monomial(q(1, 1), 2) + &RatPoly::constant(a.clone());
        assert_eq!(critical_values_set(&f).unwrap().rational_points(), Some(&[a][..]));
        let z2 = RatPoly::monomial(q(1, 1), 2);
        assert_eq!(critical_values_set(&z2).unwrap(), pts(&[(0, 1)]));
        let cheb = RatPoly::from_ints(&[0, -3, 0, 1]);
        assert_eq!(
            critical_values_set(&cheb).unwrap().defining(),
            &RatPoly::from_ints(&[-4, 0, 1])
        );
    }

    #[test]
    fn irrational_critical_values() {
        // critical points ±1/√3 give values ∓2/(3√3), conjugate irrationals
        let f = RatPoly::from_ints(&[0, -1, 0, 1]);
        let v = critical_values_set(&f).unwrap();
        assert_eq!(v.defining(), &RatPoly::new(vec![q(-4, 27), q(0, 1), q(1, 1)]));
        assert!(v.rational_points().is_none());
    }

    #[test]
    fn subset_examples() {
        assert!(subset_of(&pts(&[(0, 1)]), &pts(&[(0, 1), (1, 1)])));
        assert!(!subset_of(&pts(&[(0, 1), (1, 1)]), &pts(&[(0, 1)])));
        let big = FiniteAlgebraicSet::from_defining(&RatPoly::from_ints(&[2, 0, -3, 0, 1]), false)
            .unwrap();
        assert!(subset_of(&sqrt2(), &big));
        assert!(!subset_of(&sqrt2().with_infinity(true), &big));
    }

    #[test]
    fn forward_invariance_examples() {
        assert!(forward_invariant(&pts(&[(0, 1)]), &RatPoly::from_ints(&[0, 0, 1])));
        let s = pts(&[(-2, 1), (2, 1)]);
        assert!(forward_invariant(&s, &RatPoly::from_ints(&[-2, 0, 1])));
        assert!(!forward_invariant(&s, &RatPoly::from_ints(&[1, 0, 1])));
    }

    #[test]
    fn critical_value_shortcuts_agree() {
        let f = RatPoly::from_ints(&[0, -3, 0, 1]);
        assert!(critical_values_within(&f, &pts(&[(-2, 1), (2, 1)])));
        assert!(!critical_values_within(&f, &pts(&[(-2, 1), (3, 1)])));
        // triple critical point at 1/3
        let cube = RatPoly::from_roots([q(1, 3), q(1, 3), q(1, 3)].iter());
        let g = &cube.scale(&q(3, 1)) + &RatPoly::constant(q(1, 9));
        assert!(critical_values_within(&g, &pts(&[(1, 9)])));
        assert!(critical_points_contain(&g, &pts(&[(1, 3)])));
        assert!(!critical_points_contain(&g, &pts(&[(1, 3), (0, 1)])));
    }
}
