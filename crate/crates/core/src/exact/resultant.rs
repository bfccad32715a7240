//! Resultants by fraction-free subresultant elimination, plus the norm
//! polynomial `∏ (y - f(α))` over the roots `α` of a modulus.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::poly::{IntPoly, RatPoly};
use crate::error::{Error, Result};

/// `Res(p, q) = lc(p)^deg(q) · ∏ q(α)` over the roots `α` of `p`.
///
/// Zero exactly when `p` and `q` share a root. Both-zero input is rejected.
pub fn resultant(p: &RatPoly, q: &RatPoly) -> Result<Rational> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::InvalidInput("resultant of two zero polynomials".into()));
    }
    if p.is_zero() || q.is_zero() {
        return Ok(Rational::new());
    }
    let (dp, dq) = (p.deg() as u32, q.deg() as u32);
    if dp == 0 {
        return Ok(Rational::from(p.coeff(0).pow(dq)));
    }
    if dq == 0 {
        return Ok(Rational::from(q.coeff(0).pow(dp)));
    }
    let (sp, ip) = p.to_primitive_integer();
    let (sq, iq) = q.to_primitive_integer();
    let r = int_resultant(IntPoly::new(ip), IntPoly::new(iq));
    Ok(Rational::from(sp.pow(dq)) * Rational::from(sq.pow(dp)) * r)
}

/// Subresultant PRS over Z for nonconstant inputs.
fn int_resultant(mut a: IntPoly, mut b: IntPoly) -> Integer {
    let ca = a.content();
    let cb = b.content();
    let da0 = a.degree().unwrap() as u32;
    let db0 = b.degree().unwrap() as u32;
    let t = Integer::from((&ca).pow(db0)) * Integer::from((&cb).pow(da0));
    a = IntPoly(a.0.iter().map(|c| Integer::from(c.div_exact_ref(&ca))).collect());
    b = IntPoly(b.0.iter().map(|c| Integer::from(c.div_exact_ref(&cb))).collect());

    let mut s = 1i32;
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if da0 % 2 == 1 && db0 % 2 == 1 {
            s = -1;
        }
    }
    let mut g = Integer::from(1);
    let mut h = Integer::from(1);
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Integer::new();
        }
        a = b;
        let div = Integer::from(&g * Integer::from((&h).pow(delta)));
        b = IntPoly(r.0.iter().map(|c| Integer::from(c.div_exact_ref(&div))).collect());
        g = a.lc().clone();
        // h <- h^(1-δ) g^δ, an exact quotient when δ ≥ 1
        h = if delta == 0 {
            h
        } else {
            let num = Integer::from((&g).pow(delta));
            let den = Integer::from((&h).pow(delta - 1));
            num.div_exact(&den)
        };
        if b.degree() == Some(0) {
            let da = a.degree().unwrap() as u32;
            let lb = b.lc().clone();
            let hh = if da == 0 {
                h
            } else {
                let num = Integer::from((&lb).pow(da));
                let den = Integer::from((&h).pow(da - 1));
                num.div_exact(&den)
            };
            return Integer::from(s) * t * hh;
        }
    }
}

/// Power sums `Σ αᵢ^k` for `k = 0..count` over the roots of a monic `m`.
fn root_power_sums(m: &RatPoly, count: usize) -> Vec<Rational> {
    let n = m.deg();
    // m = z^n + c_{n-1} z^{n-1} + ... + c_0, so e_j = (-1)^j c_{n-j}
    let e: Vec<Rational> = (0..=n)
        .map(|j| {
            let c = m.coeff(n - j);
            if j % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let mut p = vec![Rational::new(); count.max(1)];
    p[0] = Rational::from(n);
    for k in 1..count {
        let mut acc = Rational::new();
        for i in 1..=(k - 1).min(n) {
            let term = Rational::from(&e[i] * &p[k - i]);
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= n {
            let term = Rational::from(&e[k] * Integer::from(k));
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p[k] = acc;
    }
    p
}

/// `∏ (y - f(α))` over the roots `α` of `m` with multiplicity, monic in `y`.
///
/// Equal to `Res_x(m(x), y - f(x))` up to a nonzero constant. Computed from
/// traces of powers of multiplication-by-`f` in `Q[x]/(m)`.
pub fn norm_polynomial(m: &RatPoly, f: &RatPoly) -> RatPoly {
    let m = m.monic();
    let n = m.deg();
    if n == 0 {
        return RatPoly::one();
    }
    let psums = root_power_sums(&m, n);
    let trace = |a: &RatPoly| -> Rational {
        let mut acc = Rational::new();
        for (k, c) in a.coeffs().iter().enumerate() {
            acc += Rational::from(c * &psums[k]);
        }
        acc
    };
    let fm = f.rem(&m);
    let mut s = Vec::with_capacity(n + 1);
    s.push(Rational::from(n));
    let mut pw = RatPoly::one();
    for _ in 1..=n {
        pw = (&pw * &fm).rem(&m);
        s.push(trace(&pw));
    }
    // Newton: j e_j = Σ_{i=1..j} (-1)^{i-1} e_{j-i} s_i
    let mut e = vec![Rational::from(1)];
    for j in 1..=n {
        let mut acc = Rational::new();
        for i in 1..=j {
            let term = Rational::from(&e[j - i] * &s[i]);
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / Integer::from(j));
    }
    let mut coeffs = vec![Rational::new(); n + 1];
    for (j, ej) in e.into_iter().enumerate() {
        coeffs[n - j] = if j % 2 == 1 { -ej } else { ej };
    }
    RatPoly::new(coeffs)
}
