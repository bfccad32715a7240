//! Dense univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored lowest degree first. The representation is
//! canonical: the zero polynomial is the empty vector and otherwise the
//! leading coefficient is nonzero, so equality is coefficient-list equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Integer, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    /// The indeterminate `z`.
    pub fn x() -> Self {
        RatPoly {
            coeffs: vec![Rational::new(), Rational::from(1)],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `a + b z`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    /// Monic linear factor `z - r`.
    pub fn root_factor(r: &Rational) -> Self {
        Self::linear(Rational::from(-r), Rational::from(1))
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        if c == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::new(); deg + 1];
        coeffs[deg] = c;
        RatPoly { coeffs }
    }

    /// Build from coefficients, lowest degree first. Trailing zeros are dropped.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = RatPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// `∏ (z - r)` over the given roots.
    pub fn from_roots<'a, I: IntoIterator<Item = &'a Rational>>(roots: I) -> Self {
        roots
            .into_iter()
            .fold(Self::one(), |acc, r| &acc * &Self::root_factor(r))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
        }
    }

    /// Divide through by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) if *lc == 1 => self.clone(),
            Some(lc) => self.scale(&Rational::from(lc.recip_ref())),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|lc| *lc == 1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * Integer::from(i)))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::new());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(Rational::from(c / Integer::from(i + 1)));
        }
        Self::new(coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        if nd - dd >= 24 && dd >= 8 {
            return self.div_rem_newton(d);
        }
        let inv_lc = Rational::from(d.coeffs[dd].recip_ref());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::new(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = Rational::from(&rem[k + dd] * &inv_lc);
            if c != 0 {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= Rational::from(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Division through a power-series inverse of the reversed divisor, so
    /// the work is a handful of multiplications.
    fn div_rem_newton(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let (n, m) = (self.deg(), d.deg());
        let k = n - m + 1;
        let rev = |p: &RatPoly, len: usize| -> RatPoly {
            RatPoly::new(p.coeffs.iter().rev().take(len).cloned().collect())
        };
        let inv = rev(d, k).series_inverse(k);
        let rq = (&rev(self, k) * &inv).truncate(k);
        let mut qc = rq.coeffs;
        qc.resize(k, Rational::new());
        qc.reverse();
        let q = RatPoly::new(qc);
        let r = self - &(d * &q);
        (q, r)
    }

    /// First `len` coefficients.
    pub fn truncate(mut self, len: usize) -> RatPoly {
        self.coeffs.truncate(len);
        self.normalize();
        self
    }

    /// `1/self mod z^len`; the constant term must be nonzero.
    pub fn series_inverse(&self, len: usize) -> RatPoly {
        let c0 = self.coeff(0);
        assert!(c0 != 0, "series inverse needs a nonzero constant term");
        let mut g = Self::constant(Rational::from(c0.recip_ref()));
        let two = Self::constant(Rational::from(2));
        let mut prec = 1;
        while prec < len {
            prec = (2 * prec).min(len);
            let f = self.clone().truncate(prec);
            let e = (&two - &(&f * &g).truncate(prec)).truncate(prec);
            g = (&g * &e).truncate(prec);
        }
        g
    }

    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        self.div_rem(d).1
    }

    /// True when `d` divides `self` exactly.
    pub fn divisible_by(&self, d: &RatPoly) -> bool {
        self.rem(d).is_zero()
    }

    /// `self ∘ q`, evaluated by Horner's scheme in integer arithmetic.
    pub fn compose(&self, q: &RatPoly) -> RatPoly {
        let Some(n) = self.degree() else {
            return Self::zero();
        };
        if q.is_constant() {
            return Self::constant(self.eval(&q.coeff(0)));
        }
        // self = P/dp, q = Q/dq, so self(q) = Σ P_i Q^i dq^(n-i) / (dq^n dp)
        let (p, dp) = self.common_denominator();
        let (qq, dq) = q.common_denominator();
        let mut dq_pow = Integer::from(1);
        let mut acc = vec![p[n].clone()];
        for i in (0..n).rev() {
            dq_pow *= &dq;
            acc = int_convolve(&acc, &qq);
            acc[0] += Integer::from(&p[i] * &dq_pow);
        }
        RatPoly::from_scaled(acc, &(dq_pow * dp))
    }

    /// Integer numerators over the least common denominator.
    pub(crate) fn common_denominator(&self) -> (Vec<Integer>, Integer) {
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            l.lcm_mut(c.denom());
        }
        let nums = self
            .coeffs
            .iter()
            .map(|c| Integer::from(c.numer() * Integer::from(&l / c.denom())))
            .collect();
        (nums, l)
    }

    pub(crate) fn from_scaled(nums: Vec<Integer>, den: &Integer) -> Self {
        Self::new(
            nums.into_iter()
                .map(|n| Rational::from((n, den.clone())))
                .collect(),
        )
    }

    /// `self ∘ q mod m`, never forming the full composition.
    pub fn compose_mod(&self, q: &RatPoly, m: &RatPoly) -> RatPoly {
        let qm = q.rem(m);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = (&(&acc * &qm) + &Self::constant(c.clone())).rem(m);
        }
        acc
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        // Primitive remainder sequence over Z keeps coefficient growth in check.
        let mut a = IntPoly::primitive_part_of(self);
        let mut b = IntPoly::primitive_part_of(other);
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.to_rat().monic()
    }

    /// Monic `p / gcd(p, p')`: same roots, all simple.
    pub fn squarefree(&self) -> RatPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Substitute `z ↦ a z + b`.
    pub fn affine_substitute(&self, a: &Rational, b: &Rational) -> RatPoly {
        self.compose(&Self::linear(b.clone(), a.clone()))
    }

    /// Clear denominators: `self = scale · P` with `P` primitive in Z[z],
    /// positive leading coefficient.
    pub fn to_primitive_integer(&self) -> (Rational, Vec<Integer>) {
        let ip = IntPoly::primitive_part_of(self);
        if ip.is_zero() {
            return (Rational::new(), Vec::new());
        }
        let scale = Rational::from(self.leading().unwrap() / ip.0.last().unwrap());
        (scale, ip.0)
    }

    /// Largest coefficient bit length (numerator or denominator).
    pub fn max_bits(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|c| c.numer().significant_bits().max(c.denom().significant_bits()))
            .max()
            .unwrap_or(0)
    }
}

/// Integer-coefficient polynomial used internally for fraction-free sequences.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct IntPoly(pub(crate) Vec<Integer>);

impl IntPoly {
    pub(crate) fn new(mut v: Vec<Integer>) -> Self {
        while v.last().is_some_and(|c| *c == 0) {
            v.pop();
        }
        IntPoly(v)
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub(crate) fn lc(&self) -> &Integer {
        self.0.last().expect("zero polynomial has no leading coefficient")
    }

    pub(crate) fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.0 {
            g.gcd_mut(c);
            if g == 1 {
                break;
            }
        }
        g
    }

    /// Divide by content and make the leading coefficient positive.
    pub(crate) fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if *self.lc() < 0 {
            g = -g;
        }
        IntPoly(self.0.iter().map(|c| Integer::from(c.div_exact_ref(&g))).collect())
    }

    pub(crate) fn primitive_part_of(p: &RatPoly) -> IntPoly {
        let mut den = Integer::from(1);
        for c in p.coeffs() {
            den.lcm_mut(c.denom());
        }
        let v = p
            .coeffs()
            .iter()
            .map(|c| Integer::from(c.numer() * Integer::from(&den / c.denom())))
            .collect();
        IntPoly::new(v).primitive()
    }

    pub(crate) fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.0.iter().map(|c| Rational::from(c.clone())).collect())
    }

    /// Pseudo-remainder: `lc(d)^(deg a - deg d + 1) · a mod d`.
    pub(crate) fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo-division by zero");
        let Some(mut ad) = self.degree() else {
            return self.clone();
        };
        if ad < dd {
            return self.clone();
        }
        let lc = d.lc().clone();
        let mut r = self.0.clone();
        let mut e = ad - dd + 1;
        loop {
            let top = r[ad].clone();
            for c in r.iter_mut().take(ad + 1) {
                *c *= &lc;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[ad - dd + j] -= Integer::from(&top * dc);
            }
            e -= 1;
            r.truncate(ad);
            while r.last().is_some_and(|c| *c == 0) {
                r.pop();
            }
            match r.len().checked_sub(1) {
                Some(nd) if nd >= dd => ad = nd,
                _ => break,
            }
        }
        if e > 0 {
            let f = Integer::from((&lc).pow(e as u32));
            for c in r.iter_mut() {
                *c *= &f;
            }
        }
        IntPoly::new(r)
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => Rational::from(a + b),
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        // integer convolution over common denominators: one gcd per output
        // coefficient instead of one per term
        let (a, da) = self.common_denominator();
        let (b, db) = rhs.common_denominator();
        let out = int_convolve(&a, &b);
        RatPoly::from_scaled(out, &(da * db))
    }
}

pub(crate) fn int_convolve(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for RatPoly {
    /// Human-readable form, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs == 1;
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !unit {
                        write!(f, "{abs}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn long_division_paths_agree() {
        let a = RatPoly::new((0..60).map(|i| Rational::from(((i * 7 % 11) as i64 - 5, (i % 4 + 1) as i64))).collect());
        let d = RatPoly::new((0..10).map(|i| Rational::from((3 - i as i64, (i % 3 + 2) as i64))).collect());
        let (q, r) = a.div_rem(&d);
        assert!(r.deg() < d.deg() || r.is_zero());
        assert_eq!(&(&q * &d) + &r, a);
        let prod = &a * &d;
        assert!(prod.rem(&d).is_zero());
        assert_eq!(prod.div_rem(&d).0, a);
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn compose_examples() {
        let z2 = RatPoly::from_ints(&[0, 0, 1]);
        let zp1 = RatPoly::from_ints(&[1, 1]);
        assert_eq!(z2.compose(&zp1), RatPoly::from_ints(&[1, 2, 1]));

        let c = RatPoly::from_ints(&[-2, 0, 1]);
        assert_eq!(c.compose(&c), RatPoly::from_ints(&[2, 0, -4, 0, 1]));

        let arb = RatPoly::new(vec![q(3, 7), q(-1, 2), q(5, 1)]);
        assert_eq!(RatPoly::x().compose(&arb), arb);
    }

    #[test]
    fn compose_degree_is_multiplicative() {
        let p = RatPoly::from_ints(&[1, 0, 2, 1]);
        let r = RatPoly::from_ints(&[0, 3, 1]);
        assert_eq!(p.compose(&r).degree(), Some(6));
    }

    #[test]
    fn division_and_gcd() {
        // (z-1)^2 (z+2) and (z-1)(z+3)
        let a = RatPoly::from_ints(&[2, -3, 0, 1]);
        let b = RatPoly::from_ints(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), RatPoly::from_ints(&[-1, 1]));
        let (qq, r) = a.div_rem(&b);
        assert_eq!(&(&qq * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn squarefree_examples() {
        let p = RatPoly::from_ints(&[1, -2, 1]);
        assert_eq!(p.squarefree(), RatPoly::from_ints(&[-1, 1]));

        let p = RatPoly::from_ints(&[0, -1, 0, 1]);
        assert_eq!(p.squarefree(), p);

        // (3z-1)^2 (3z-4)
        let p = RatPoly::from_ints(&[-4, 27, -54, 27]);
        let expect = &RatPoly::root_factor(&q(1, 3)) * &RatPoly::root_factor(&q(4, 3));
        assert_eq!(p.squarefree(), expect);
    }

    #[test]
    fn compose_mod_matches_full_composition() {
        let p = RatPoly::from_ints(&[1, -1, 0, 2, 1]);
        let f = RatPoly::new(vec![q(1, 2), q(0, 1), q(-3, 4)]);
        let m = RatPoly::from_ints(&[-2, 0, 0, 1]);
        assert_eq!(p.compose_mod(&f, &m), p.compose(&f).rem(&m));
    }

    #[test]
    fn display_is_readable() {
        let p = RatPoly::new(vec![q(-1, 2), q(0, 1), q(1, 1)]);
        assert_eq!(p.to_string(), "z^2 - 1/2");
    }
}
