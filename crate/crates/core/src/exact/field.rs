//! Rational maps over exact fields: Q and Q(α) with α² - α + 1 = 0.
//!
//! Critical values are certified without root finding: for coprime `N/D`
//! with Wronskian `W = N'D - ND'`, a critical point of local degree `m` is a
//! root of order `m - 1` of `W` and of order `m` of `N - pD` (or `D` for
//! `p = ∞`), so `V(f) ⊆ P` reduces to divisibility.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Complex embedding.
    fn to_complex(&self, prec: u32) -> rug::Complex;
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn from_int(n: i64) -> Self {
        Rational::from(n)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn inv(&self) -> Option<Self> {
        (*self != 0).then(|| Rational::from(self.recip_ref()))
    }
    fn to_complex(&self, prec: u32) -> rug::Complex {
        crate::numeric::from_rational(prec, self)
    }
}

/// `a + bα` with `α² = α - 1`, a primitive sixth root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QAlpha {
    pub a: Rational,
    pub b: Rational,
}

impl QAlpha {
    pub fn new(a: Rational, b: Rational) -> Self {
        QAlpha { a, b }
    }

    pub fn alpha() -> Self {
        QAlpha::new(Rational::new(), Rational::from(1))
    }

    pub fn rational(a: Rational) -> Self {
        QAlpha::new(a, Rational::new())
    }

    /// `N(a + bα) = a² + ab + b²`.
    pub fn norm(&self) -> Rational {
        Rational::from(&self.a * &self.a) + Rational::from(&self.a * &self.b) + Rational::from(&self.b * &self.b)
    }

    fn embed(&self, prec: u32) -> rug::Complex {
        let half = rug::Float::with_val(prec, 0.5);
        let s3 = rug::Float::with_val(prec, 3).sqrt() / 2u32;
        let alpha = rug::Complex::with_val(prec, (half, s3));
        rug::Complex::with_val(prec, (rug::Float::with_val(prec, &self.a), 0))
            + alpha * rug::Float::with_val(prec, &self.b)
    }
}

impl fmt::Display for QAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a == 0, self.b == 0) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}α", self.b),
            (false, false) => write!(f, "{} + {}α", self.a, self.b),
        }
    }
}

impl Add for QAlpha {
    type Output = QAlpha;
    fn add(self, o: QAlpha) -> QAlpha {
        QAlpha::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QAlpha {
    type Output = QAlpha;
    fn sub(self, o: QAlpha) -> QAlpha {
        QAlpha::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for QAlpha {
    type Output = QAlpha;
    fn neg(self) -> QAlpha {
        QAlpha::new(-self.a, -self.b)
    }
}

impl Mul for QAlpha {
    type Output = QAlpha;
    fn mul(self, o: QAlpha) -> QAlpha {
        // (a + bα)(c + dα) = ac + (ad + bc)α + bd(α - 1)
        let bd = Rational::from(&self.b * &o.b);
        let a = Rational::from(&self.a * &o.a) - &bd;
        let b = Rational::from(&self.a * &o.b) + Rational::from(&self.b * &o.a) + bd;
        QAlpha::new(a, b)
    }
}

impl Field for QAlpha {
    fn zero() -> Self {
        QAlpha::rational(Rational::new())
    }
    fn one() -> Self {
        QAlpha::rational(Rational::from(1))
    }
    fn from_int(n: i64) -> Self {
        QAlpha::rational(Rational::from(n))
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
    fn inv(&self) -> Option<Self> {
        // conjugate of α is 1 - α
        let n = self.norm();
        if n == 0 {
            return None;
        }
        let conj = QAlpha::new(Rational::from(&self.a + &self.b), Rational::from(-&self.b));
        Some(QAlpha::new(conj.a / &n, conj.b / &n))
    }
    /// Embedding with `α = e^{iπ/3}`.
    fn to_complex(&self, prec: u32) -> rug::Complex {
        self.embed(prec)
    }
}

/// Polynomial over `K`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct KPoly<K: Field>(Vec<K>);

impl<K: Field> KPoly<K> {
    pub fn new(mut c: Vec<K>) -> Self {
        while c.last().is_some_and(Field::is_zero) {
            c.pop();
        }
        KPoly(c)
    }

    pub fn zero() -> Self {
        KPoly(vec![])
    }

    pub fn constant(c: K) -> Self {
        KPoly::new(vec![c])
    }

    pub fn x() -> Self {
        KPoly::new(vec![K::zero(), K::one()])
    }

    pub fn coeffs(&self) -> &[K] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `-1` standing for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&K> {
        self.0.last()
    }

    pub fn coeff(&self, i: usize) -> K {
        self.0.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn eval(&self, z: &K) -> K {
        self.0
            .iter()
            .rev()
            .fold(K::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        KPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        KPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &K) -> Self {
        KPoly::new(self.0.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return KPoly::zero();
        }
        let mut out = vec![K::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        KPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(KPoly::constant(K::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        KPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * K::from_int(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let lead_inv = d.leading().and_then(Field::inv).expect("division by zero polynomial");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (KPoly::zero(), self.clone());
        }
        let mut q = vec![K::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone() * lead_inv.clone();
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] = r[i + j].clone() - c.clone() * dc.clone();
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (KPoly::new(q), KPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(Field::inv) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// A point of `P¹(K)`.
#[derive(Clone, Debug, PartialEq)]
pub enum KPoint<K: Field> {
    Finite(K),
    Infinity,
}

impl<K: Field> KPoint<K> {
    pub fn to_sphere(&self, prec: u32) -> crate::numeric::SpherePoint {
        match self {
            KPoint::Finite(z) => crate::numeric::SpherePoint::Finite(z.to_complex(prec)),
            KPoint::Infinity => crate::numeric::SpherePoint::Infinity,
        }
    }
}

impl<K: Field> fmt::Display for KPoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KPoint::Finite(z) => write!(f, "{z}"),
            KPoint::Infinity => write!(f, "∞"),
        }
    }
}

/// `N/D` with `N`, `D` coprime.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap<K: Field> {
    pub num: KPoly<K>,
    pub den: KPoly<K>,
}

impl<K: Field> RationalMap<K> {
    pub fn new(num: KPoly<K>, den: KPoly<K>) -> Self {
        let g = num.gcd(&den);
        if g.degree() > 0 {
            RationalMap {
                num: num.div_rem(&g).0,
                den: den.div_rem(&g).0,
            }
        } else {
            RationalMap { num, den }
        }
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree()).max(0) as usize
    }

    pub fn eval(&self, z: &KPoint<K>) -> KPoint<K> {
        match z {
            KPoint::Finite(z) => {
                let d = self.den.eval(z);
                match d.inv() {
                    Some(inv) => KPoint::Finite(self.num.eval(z) * inv),
                    None => KPoint::Infinity,
                }
            }
            KPoint::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.degree());
                if dn > dd {
                    KPoint::Infinity
                } else if dn < dd {
                    KPoint::Finite(K::zero())
                } else {
                    let inv = self.den.leading().and_then(Field::inv).expect("nonzero leading");
                    KPoint::Finite(self.num.leading().unwrap().clone() * inv)
                }
            }
        }
    }

    /// Evaluation through the complex embedding.
    pub fn eval_sphere(&self, z: &crate::numeric::SpherePoint, prec: u32) -> crate::numeric::SpherePoint {
        use crate::numeric::SpherePoint;
        let horner = |p: &KPoly<K>, z: &rug::Complex| {
            p.coeffs()
                .iter()
                .rev()
                .fold(rug::Complex::new(prec), |acc, c| acc * z + c.to_complex(prec))
        };
        match z {
            SpherePoint::Finite(z) => {
                let d = horner(&self.den, z);
                if d.is_zero() {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(horner(&self.num, z) / d)
                }
            }
            SpherePoint::Infinity => self.eval(&KPoint::Infinity).to_sphere(prec),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let d = self.degree() as u32;
        let hom = |p: &KPoly<K>| {
            let mut acc = KPoly::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                let term = other
                    .num
                    .pow(i as u32)
                    .mul(&other.den.pow(d - i as u32))
                    .scale(c);
                acc = acc.add(&term);
            }
            acc
        };
        RationalMap::new(hom(&self.num), hom(&self.den))
    }

    /// `W = N'D - ND'`.
    pub fn wronskian(&self) -> KPoly<K> {
        self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()))
    }

    /// Order of `∞` as a critical point: `2d - 2 - deg W`.
    pub fn infinity_critical_order(&self) -> usize {
        let w = self.wronskian().degree().max(0) as usize;
        (2 * self.degree()).saturating_sub(2) - w
    }

    fn fiber_poly(&self, p: &KPoint<K>) -> KPoly<K> {
        match p {
            KPoint::Finite(v) => self.num.sub(&self.den.scale(v)),
            KPoint::Infinity => self.den.clone(),
        }
    }

    /// `V(f) ⊆ set`, with multiplicity, by `W | ∏ (N - pD)`.
    pub fn critical_values_within(&self, set: &[KPoint<K>]) -> bool {
        let w = self.wronskian();
        let prod = set
            .iter()
            .fold(KPoly::constant(K::one()), |acc, p| acc.mul(&self.fiber_poly(p)));
        let finite_ok = w.is_zero() || prod.rem(&w).is_zero();
        let inf_ok = self.infinity_critical_order() == 0 || set.contains(&self.eval(&KPoint::Infinity));
        finite_ok && inf_ok
    }

    /// `p ∈ V(f)`.
    pub fn is_critical_value(&self, p: &KPoint<K>) -> bool {
        let g = self.fiber_poly(p).gcd(&self.wronskian());
        g.degree() >= 1 || (self.infinity_critical_order() > 0 && self.eval(&KPoint::Infinity) == *p)
    }

    /// Finite critical points as the squarefree part of `W`.
    pub fn critical_point_poly(&self) -> KPoly<K> {
        let w = self.wronskian();
        let g = w.gcd(&w.derivative());
        if g.degree() <= 0 {
            w.monic()
        } else {
            w.div_rem(&g).0.monic()
        }
    }
}
