//! Realizing a prescribed self-map of a finite set as a rational map acting
//! on its postcritical set, by iterating the pullback on marked points.
//!
//! Maps take the form `f = g ∘ hⁿ ∘ N⁻¹` with `h(z) = (2/z - 1)²`, `g` a
//! polynomial fixing 0 and 1 whose other critical values are the moving
//! marked points, and `N` the Möbius map normalizing three marked points to
//! `0, 1, ∞`.

mod hpoly;
mod plan;
mod solver;
mod table;

pub use hpoly::{h_poly_for_set, HPoly, HPolyPoint};
pub use plan::{multiplicity_plan, MultiplicityPlan, PlanVerdict};
pub use solver::{
    pullback_step, solve_thurston, Branch, RealizedMap, ThurstonOptions, ThurstonResult,
};
pub use table::{
    graph_shape, match_fixture, postcritical_report, verify_table_case, Fixture,
    PostcriticalReport, TableCase, TableVerification,
};

use rug::{Complex, Rational};

use crate::error::{Error, Result};
use crate::exact::field::{KPoly, RationalMap};
use crate::numeric::{sph_dist, Mobius, SpherePoint};

/// Smallest `k` with `2^k > size + 3`.
pub fn choose_k(size: usize) -> u32 {
    let mut k = 0;
    while (1usize << k) <= size + 3 {
        k += 1;
    }
    k
}

/// `h(z) = (2/z - 1)²` over Q.
pub fn h_exact() -> RationalMap<Rational> {
    let q = |n: i64| Rational::from(n);
    RationalMap::new(
        KPoly::new(vec![q(4), q(-4), q(1)]),
        KPoly::new(vec![q(0), q(0), q(1)]),
    )
}

/// `hⁿ` over Q.
pub fn h_iterate_exact(n: u32) -> RationalMap<Rational> {
    let h = h_exact();
    (1..n.max(1)).fold(h.clone(), |acc, _| h.compose(&acc))
}

pub fn h_eval(z: &SpherePoint, prec: u32) -> SpherePoint {
    match z {
        SpherePoint::Infinity => SpherePoint::Finite(Complex::with_val(prec, 1)),
        SpherePoint::Finite(z) if z.is_zero() => SpherePoint::Infinity,
        SpherePoint::Finite(z) => {
            let t = Complex::with_val(prec, 2 / z) - 1u32;
            SpherePoint::Finite(t.square())
        }
    }
}

pub fn h_iterate(z: &SpherePoint, n: u32, prec: u32) -> SpherePoint {
    (0..n).fold(z.clone(), |w, _| h_eval(&w, prec))
}

/// Both solutions of `h(z) = w`: `z = 2/(1 ± √w)`, with `h⁻¹(∞) = {0, 0}`.
pub fn h_preimages(w: &SpherePoint, prec: u32) -> [SpherePoint; 2] {
    match w {
        SpherePoint::Infinity => {
            let zero = SpherePoint::Finite(Complex::new(prec));
            [zero.clone(), zero]
        }
        SpherePoint::Finite(w) => {
            let s = Complex::with_val(prec, w.sqrt_ref());
            let branch = |d: Complex| {
                if d.is_zero() {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(Complex::with_val(prec, 2 / d))
                }
            };
            [
                branch(Complex::with_val(prec, 1 + &s)),
                branch(Complex::with_val(prec, 1 - &s)),
            ]
        }
    }
}

/// A self-map of labels `0..n` with optional multiplicity requests.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedSelfMap {
    pub map: Vec<usize>,
    pub mults: Vec<u32>,
}

impl MarkedSelfMap {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        Self::with_mults(map, vec![1; n])
    }

    pub fn with_mults(map: Vec<usize>, mults: Vec<u32>) -> Result<Self> {
        let n = map.len();
        if n < 3 {
            return Err(Error::InvalidInput(format!("need at least 3 labels, got {n}")));
        }
        if let Some(&y) = map.iter().find(|&&y| y >= n) {
            return Err(Error::InvalidInput(format!("image label {y} out of range 0..{n}")));
        }
        if mults.len() != n || mults.contains(&0) {
            return Err(Error::InvalidInput("multiplicities must be positive, one per label".into()));
        }
        Ok(MarkedSelfMap { map, mults })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new((0..n).map(|x| (x + 1) % n).collect())
    }

    pub fn constant(n: usize, y: usize) -> Result<Self> {
        Self::new(vec![y; n])
    }
}

/// Positions of labels with three of them exactly at `0, 1, ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub points: Vec<SpherePoint>,
    /// Labels at `0`, `1`, `∞`.
    pub distinguished: [usize; 3],
}

impl Configuration {
    /// Accepts points already normalized: some label at each of `0, 1, ∞`.
    pub fn new(points: Vec<SpherePoint>, tol: f64) -> Result<Self> {
        let find = |target: &SpherePoint| {
            points
                .iter()
                .position(|p| match (p, target) {
                    (SpherePoint::Infinity, SpherePoint::Infinity) => true,
                    (SpherePoint::Finite(a), SpherePoint::Finite(b)) => a == b,
                    _ => false,
                })
                .ok_or_else(|| Error::InvalidInput(format!("no marked point exactly at {target:?}")))
        };
        let prec = points
            .iter()
            .find_map(|p| p.as_finite().map(|z| z.prec().0))
            .unwrap_or(crate::numeric::DEFAULT_PRECISION);
        let d = [
            find(&SpherePoint::Finite(Complex::new(prec)))?,
            find(&SpherePoint::Finite(Complex::with_val(prec, 1)))?,
            find(&SpherePoint::Infinity)?,
        ];
        let c = Configuration { points, distinguished: d };
        c.check_injective(tol)?;
        Ok(c)
    }

    /// Normalizes arbitrary distinct points by the Möbius map sending the
    /// listed labels to `0, 1, ∞`; returns the map used.
    pub fn normalize(
        points: &[SpherePoint],
        distinguished: [usize; 3],
        prec: u32,
        tol: f64,
    ) -> Result<(Self, Mobius)> {
        if distinguished.iter().any(|&d| d >= points.len()) {
            return Err(Error::InvalidInput("distinguished label out of range".into()));
        }
        let [a, b, c] = distinguished.map(|d| &points[d]);
        let m = Mobius::through(a, b, c, prec, tol)?;
        let mut out: Vec<SpherePoint> = points.iter().map(|p| m.apply(p)).collect();
        out[distinguished[0]] = SpherePoint::Finite(Complex::new(prec));
        out[distinguished[1]] = SpherePoint::Finite(Complex::with_val(prec, 1));
        out[distinguished[2]] = SpherePoint::Infinity;
        let cfg = Configuration { points: out, distinguished };
        cfg.check_injective(tol)?;
        Ok((cfg, m))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_distinguished(&self, x: usize) -> bool {
        self.distinguished.contains(&x)
    }

    /// Smallest pairwise chordal distance.
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in 0..i {
                best = best.min(sph_dist(&self.points[i], &self.points[j]));
            }
        }
        best
    }

    fn check_injective(&self, tol: f64) -> Result<()> {
        if self.separation() <= tol {
            return Err(Error::Degenerate("marked points collide".into()));
        }
        Ok(())
    }

    /// Max chordal distance between corresponding labels.
    pub fn distance(&self, other: &Configuration) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| sph_dist(a, b))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::KPoint;

    const P: u32 = 128;

    fn fin(x: f64) -> SpherePoint {
        SpherePoint::from_f64(P, x, 0.0)
    }

    #[test]
    fn choose_k_values() {
        assert_eq!(choose_k(3), 3);
        assert_eq!(choose_k(4), 3);
        assert_eq!(choose_k(5), 4);
        assert_eq!(choose_k(13), 5);
    }

    #[test]
    fn h_orbit_is_exact() {
        let h = h_exact();
        let q = |n: i64| KPoint::Finite(Rational::from(n));
        assert_eq!(h.eval(&q(2)), q(0));
        assert_eq!(h.eval(&q(0)), KPoint::Infinity);
        assert_eq!(h.eval(&KPoint::Infinity), q(1));
        assert_eq!(h.eval(&q(1)), q(1));
        let p = [q(0), q(1), KPoint::Infinity];
        let r = postcritical_report(&h, &p);
        assert!(r.certificate.verdict());
        assert_eq!(r.critical_values, vec!["0", "∞"]);
        for n in 2..=4 {
            let hn = h_iterate_exact(n);
            assert_eq!(hn.degree(), 1 << n);
            assert!(hn.critical_values_within(&p));
            assert!(p.iter().all(|v| hn.is_critical_value(v)), "n = {n}");
        }
        assert!(!h.is_critical_value(&q(1)));
    }

    #[test]
    fn h_numeric() {
        assert!(sph_dist(&h_eval(&fin(2.0), P), &fin(0.0)) < 1e-30);
        assert!(h_eval(&fin(0.0), P).is_infinity());
        let pre = h_preimages(&fin(1.0), P);
        assert!(pre.iter().any(|p| p.is_infinity()));
        assert!(pre.iter().any(|p| sph_dist(p, &fin(1.0)) < 1e-30));
        let w = SpherePoint::from_f64(P, 0.3, -1.7);
        for z in h_preimages(&w, P) {
            assert!(sph_dist(&h_eval(&z, P), &w) < 1e-30);
        }
    }

    #[test]
    fn configuration_normalization() {
        let pts = vec![fin(2.0), fin(3.0), fin(5.0), fin(7.0)];
        let (c, m) = Configuration::normalize(&pts, [0, 1, 2], P, 1e-20).unwrap();
        assert!(c.points[2].is_infinity());
        assert!(sph_dist(&m.apply(&pts[3]), &c.points[3]) < 1e-30);
        assert!(Configuration::new(c.points.clone(), 1e-20).is_ok());
        assert!(Configuration::new(vec![fin(0.0), fin(1.0), fin(2.0)], 1e-20).is_err());
    }
}
