use rug::{Integer, Rational};

use super::poly::RatPoly;
use crate::numeric::{roots, CPoly};

/// Rational roots of `p` with multiplicity, plus the monic cofactor free of
/// rational roots. `∏ (z - r) · cofactor = monic(p)`.
///
/// Candidates come from numeric roots of the squarefree part: a rational root
/// `u/v` of a primitive integer polynomial has `v | a_n`, so `a_n · re` rounds
/// to an integer numerator. Every candidate is confirmed exactly.
pub fn rational_roots(p: &RatPoly) -> (Vec<Rational>, RatPoly) {
    assert!(!p.is_zero(), "rational_roots of the zero polynomial");
    let monic = p.monic();
    let mut found: Vec<Rational> = Vec::new();
    let mut rest = monic.clone();

    // roots at zero first, they are common and cheap
    while !rest.is_constant() && rest.coeff(0) == 0 {
        found.push(Rational::new());
        rest = rest.div_rem(&RatPoly::x()).0;
    }

    let sq = rest.squarefree();
    for r in candidates(&sq) {
        let factor = RatPoly::root_factor(&r);
        while !rest.is_constant() && rest.eval(&r) == 0 {
            rest = rest.div_rem(&factor).0;
            found.push(r.clone());
        }
    }
    found.sort();
    (found, rest)
}

fn candidates(sq: &RatPoly) -> Vec<Rational> {
    let n = sq.deg();
    match n {
        0 => return vec![],
        1 => return vec![Rational::from(-sq.coeff(0) / sq.coeff(1))],
        _ => {}
    }
    let (_, ints) = sq.to_primitive_integer();
    let an = ints.last().unwrap().clone();
    let bits = sq.max_bits().max(ints.iter().map(|c| c.significant_bits()).max().unwrap_or(1));
    let logn = 32 - (n as u32 + 1).leading_zeros();
    let prec = 64 + 2 * (n as u32 + 1) * (bits + logn);
    let cp = CPoly::new(
        prec,
        ints.iter().map(|c| rug::Complex::with_val(prec, (c, 0))).collect(),
    );
    let Ok(boxes) = roots(&cp, prec) else {
        return vec![];
    };
    let mut out: Vec<Rational> = Vec::new();
    for b in boxes {
        let im = b.center.imag().to_f64().abs();
        if im > 0.5 {
            continue;
        }
        let scaled = rug::Float::with_val(prec, b.center.real() * &an);
        let Some(num) = scaled.round().to_integer() else {
            continue;
        };
        let r = Rational::from((num, Integer::from(&an)));
        if !out.contains(&r) && sq.eval(&r) == 0 {
            out.push(r);
        }
    }
    out
}
