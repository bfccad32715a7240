//! A polynomial with two finite postcritical points whose Julia set
//! contains a given finite set: `h = α ∘ β` for a Belyi polynomial `β` and
//! an affine `α` sending 0, 1 to non-critical points of `β⁻¹({0,1})`.

use rug::{Complex, Rational};

use crate::algsets::{
    belyi_with, certify_steps, critical_values_set, forward_invariant, maps_into, subset_of, BelyiCertificate, BelyiOptions, BelyiStep,
    FiniteAlgebraicSet,
};
use crate::certificate::{Certificate, Claim};
use crate::construct::{postcritical_orbit, MapCoeffs, DEFAULT_ORBIT_BUDGET, NUMERIC_BOUND};
use crate::error::{Error, Result};
use crate::exact::{rational_roots, RatPoly};
use crate::numeric::{abs_f64, dist_f64, from_rational, roots, CPoly, ComplexMP, DEFAULT_PRECISION};

/// Points tried, in order, when the set must be enlarged.
const EXTRA_POINTS: [(i64, i64); 12] = [
    (0, 1),
    (1, 1),
    (1, 2),
    (-1, 1),
    (2, 1),
    (1, 3),
    (3, 1),
    (-2, 1),
    (2, 3),
    (3, 2),
    (1, 4),
    (4, 1),
];

#[derive(Clone, Debug, PartialEq)]
pub enum HPolyPoint {
    Rational(Rational),
    Numeric(ComplexMP),
}

impl HPolyPoint {
    fn complex(&self, prec: u32) -> ComplexMP {
        match self {
            HPolyPoint::Rational(q) => from_rational(prec, q),
            HPolyPoint::Numeric(z) => Complex::with_val(prec, z),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HPoly {
    pub set: FiniteAlgebraicSet,
    /// The set the Belyi polynomial was built for.
    pub enlarged: FiniteAlgebraicSet,
    pub belyi: BelyiCertificate,
    /// `α(0)`.
    pub a: HPolyPoint,
    /// `α(1)`.
    pub b: HPolyPoint,
    pub h: MapCoeffs,
    /// `h(a) = a` and `h(b) = b`.
    pub fixed_pointwise: bool,
    pub certificate: Certificate,
}

impl HPoly {
    pub fn is_exact(&self) -> bool {
        matches!(self.h, MapCoeffs::Exact(_))
    }
}

fn usable(beta: &BelyiCertificate) -> bool {
    if beta.degree < 2 || !beta.verdict() {
        return false;
    }
    let zero_one = FiniteAlgebraicSet::points_unchecked(vec![Rational::new(), Rational::from(1)], false);
    critical_values_set(&beta.beta)
        .is_ok_and(|v| subset_of(&v, &zero_one) && subset_of(&zero_one, &v))
}

pub fn h_poly_for_set(x: &FiniteAlgebraicSet) -> Result<HPoly> {
    if x.contains_infinity() {
        return Err(Error::InvalidInput("∞ never lies in the Julia set of a polynomial".into()));
    }
    // try X, then X with 0 and 1, then one more point at a time; keep
    // the first usable polynomial in case no rational pair turns up
    if let Some(beta) = cubic_fold(x) {
        if let Some((a, b)) = rational_pair(&beta, x) {
            return Ok(exact_hpoly(x, x.clone(), beta, a, b));
        }
    }
    let mut fallback = None;
    for (i, enlarged) in candidate_sets(x).into_iter().enumerate() {
        // enlarged sets are speculative: give each a short search
        let opts = BelyiOptions {
            search_nodes: if i < 3 { BelyiOptions::default().search_nodes } else { ENLARGED_SEARCH_NODES },
            ..Default::default()
        };
        let Some(beta) = belyi_with(&enlarged, &opts).ok().filter(usable) else {
            continue;
        };
        match rational_pair(&beta, &enlarged) {
            Some((a, b)) => return Ok(exact_hpoly(x, enlarged, beta, a, b)),
            None if fallback.is_none() => fallback = Some((enlarged, beta)),
            None => {}
        }
    }
    match fallback {
        Some((enlarged, beta)) => numeric_hpoly(x, enlarged, beta, DEFAULT_PRECISION),
        None => Err(Error::SearchExhausted("no Belyi polynomial with V₀ = {0, 1} found".into())),
    }
}

/// One or two rational points: an affine map sends them to 1/3 and 4/3
/// (or the single point to 1/3), then `27/4 u(1-u)²` folds both onto 1.
/// The fold keeps 0 and 4/3 as simple rational points over 0 and 1.
fn cubic_fold(x: &FiniteAlgebraicSet) -> Option<BelyiCertificate> {
    let pts = x.rational_points()?;
    let (p, width) = match pts {
        [u] => (Rational::from(u - Rational::from((1, 3))), Rational::from(1)),
        [u, v] => {
            let w = Rational::from(v - u);
            (Rational::from(u - Rational::from(&w / 3u32)), w)
        }
        _ => return None,
    };
    let r = Rational::from(&p + &width);
    let beta = certify_steps(x, vec![BelyiStep::Fold { p, r, m: 1, n: 2 }]);
    usable(&beta).then_some(beta)
}

fn candidate_sets(x: &FiniteAlgebraicSet) -> Vec<FiniteAlgebraicSet> {
    let point = |(n, d): (i64, i64)| FiniteAlgebraicSet::points_unchecked(vec![Rational::from((n, d))], false);
    let with01 = x.union(&point((0, 1))).union(&point((1, 1)));
    let mut out = vec![x.clone(), x.union(&point((0, 1))), with01.clone()];
    out.extend(EXTRA_POINTS[2..].iter().map(|&p| with01.union(&point(p))));
    let mut acc = with01;
    for &p in &EXTRA_POINTS[2..] {
        acc = acc.union(&point(p));
        if acc.size() > x.size() + MAX_EXTRA {
            break;
        }
        out.push(acc.clone());
    }
    out.dedup();
    out
}

/// Belyi search nodes for each speculative enlargement of `X`.
const ENLARGED_SEARCH_NODES: usize = 2_000;

/// Most points adjoined to `X` by the cumulative enlargements.
const MAX_EXTRA: usize = 4;

/// Steps up to this degree get a full rational root search when pulling
/// points back; larger folds contribute only their known preimages.
const STEP_ROOT_DEGREE: usize = 24;

/// Rational points of `step⁻¹(t)`, possibly incomplete for large steps.
fn step_preimages(step: &BelyiStep, t: &Rational) -> Vec<Rational> {
    let direct = |p: RatPoly| rational_roots(&(&p - &RatPoly::constant(t.clone()))).0;
    match step {
        BelyiStep::Affine { a, b } => vec![Rational::from(t - b) / a],
        BelyiStep::Fold { p, r, m, n } if step.degree() > STEP_ROOT_DEGREE => {
            // in the chart u = (z - p)/(r - p): 0 over {0, 1}, 1 over m/(m+n)
            let at = |u: Rational| Rational::from(&u * Rational::from(r - p)) + p;
            if *t == 0 {
                vec![p.clone(), r.clone()]
            } else if *t == 1 {
                vec![at(Rational::from((*m, m + n)))]
            } else {
                vec![]
            }
        }
        _ if step.degree() <= STEP_ROOT_DEGREE => direct(step.polynomial()),
        _ => vec![],
    }
}

/// Rational points of `β⁻¹(t)` reached by pulling `t` back one step at a
/// time, each confirmed by evaluating `β`.
fn pulled_back(beta: &BelyiCertificate, t: &Rational, extra: &[Rational]) -> Vec<Rational> {
    let mut level = vec![t.clone()];
    for step in beta.steps.iter().rev() {
        let mut next: Vec<Rational> = level.iter().flat_map(|y| step_preimages(step, y)).collect();
        next.sort();
        next.dedup();
        level = next;
    }
    level.extend(extra.iter().cloned());
    level.retain(|x| beta.beta.eval(x) == *t);
    level.sort();
    level.dedup();
    level
}

/// Two non-critical rational points of `β⁻¹({0,1})`, one over each value
/// when possible. The points of `S` are candidates since `β(S) ⊆ {0, 1}`.
fn rational_pair(beta: &BelyiCertificate, s: &FiniteAlgebraicSet) -> Option<(Rational, Rational)> {
    let known = s.rational_points().unwrap_or(&[]);
    let d = beta.beta.derivative();
    let simple = |t: i32| {
        let mut r = pulled_back(beta, &Rational::from(t), known);
        r.retain(|x| d.eval(x) != 0);
        r
    };
    let (zeros, ones) = (simple(0), simple(1));
    match (zeros.first(), ones.first()) {
        (Some(a), Some(b)) => Some((a.clone(), b.clone())),
        _ if zeros.len() >= 2 => Some((zeros[0].clone(), zeros[1].clone())),
        _ if ones.len() >= 2 => Some((ones[0].clone(), ones[1].clone())),
        _ => None,
    }
}

fn exact_hpoly(
    x: &FiniteAlgebraicSet,
    enlarged: FiniteAlgebraicSet,
    beta: BelyiCertificate,
    a: Rational,
    b: Rational,
) -> HPoly {
    let slope = Rational::from(&b - &a);
    let h = &beta.beta.scale(&slope) + &RatPoly::constant(a.clone());
    let ab = FiniteAlgebraicSet::points_unchecked(vec![a.clone(), b.clone()], false);
    let dh = h.derivative();
    let mut cert = Certificate::new(format!("h = {a} + ({slope})·β"));

    let v0 = critical_values_set(&h).is_ok_and(|v| subset_of(&v, &ab) && subset_of(&ab, &v));
    cert.push(Claim::exact("V₀(h) = {a, b}", v0));
    cert.push(Claim::exact("h({a, b}) ⊆ {a, b}", forward_invariant(&ab, &h)));
    cert.push(Claim::exact("h(X) ⊆ {a, b}", maps_into(x, &h, &ab)));
    cert.push(Claim::exact(
        "P₀(h) ∩ C₀(h) = ∅",
        dh.eval(&a) != 0 && dh.eval(&b) != 0,
    ));
    let orbit = postcritical_orbit(&h, DEFAULT_ORBIT_BUDGET)
        .ok()
        .and_then(|r| r.exact_set().cloned())
        .is_some_and(|p| p == ab);
    cert.push(Claim::exact("P₀(h) = {a, b} by orbit", orbit));

    // the periodic part of {a, b} is repelling, so X lies in the Julia set
    let (ha, hb) = (h.eval(&a), h.eval(&b));
    let mult = if ha == a || hb == b {
        [(&a, &ha), (&b, &hb)]
            .iter()
            .filter(|(p, hp)| p == hp)
            .map(|(p, _)| dh.eval(p).square())
            .min()
            .unwrap_or_else(Rational::new)
    } else if ha == b && hb == a {
        Rational::from(dh.eval(&a) * dh.eval(&b)).square()
    } else {
        // both land on one fixed point
        let fixed = if ha == hb && h.eval(&ha) == ha { ha.clone() } else { a.clone() };
        dh.eval(&fixed).square()
    };
    cert.push(Claim::exact("periodic points of {a, b} are repelling", mult > 1));
    cert.notes.push(format!("α(z) = {a} + ({slope})z"));

    HPoly {
        set: x.clone(),
        enlarged,
        belyi: beta,
        fixed_pointwise: ha == a && hb == b,
        a: HPolyPoint::Rational(a),
        b: HPolyPoint::Rational(b),
        h: MapCoeffs::Exact(h),
        certificate: cert,
    }
}

/// Simple roots of `p` located numerically.
fn simple_numeric_roots(p: &RatPoly, prec: u32) -> Result<Vec<ComplexMP>> {
    let cp = CPoly::from_rat(prec, p);
    let dp = cp.derivative();
    Ok(roots(&cp, prec)?
        .into_iter()
        .map(|r| r.center)
        .filter(|z| abs_f64(&dp.eval(z)) > 1e-20)
        .collect())
}

fn numeric_hpoly(
    x: &FiniteAlgebraicSet,
    enlarged: FiniteAlgebraicSet,
    beta: BelyiCertificate,
    prec: u32,
) -> Result<HPoly> {
    let zeros = simple_numeric_roots(&beta.beta, prec)?;
    let ones = simple_numeric_roots(&(&beta.beta - &RatPoly::one()), prec)?;
    let (a, b) = match (zeros.first(), ones.first()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ if zeros.len() >= 2 => (zeros[0].clone(), zeros[1].clone()),
        _ if ones.len() >= 2 => (ones[0].clone(), ones[1].clone()),
        _ => return Err(Error::Degenerate("β⁻¹({0,1}) has too few simple points".into())),
    };
    let slope = Complex::with_val(prec, &b - &a);
    let h = CPoly::from_rat(prec, &beta.beta).scale(&slope);
    let mut coeffs = h.coeffs.clone();
    coeffs[0] += &a;
    let h = CPoly::new(prec, coeffs);
    let dh = h.derivative();
    let near_ab = |z: &ComplexMP| dist_f64(z, &a).min(dist_f64(z, &b));
    let mut cert = Certificate::new("h = α ∘ β with irrational α");

    let crit = roots(&CPoly::from_rat(prec, &beta.beta.derivative()), prec)?;
    let vals: Vec<ComplexMP> = crit.iter().map(|c| h.eval(&c.center)).collect();
    let within = vals.iter().map(near_ab).fold(0.0, f64::max);
    let hit_a = vals.iter().map(|v| dist_f64(v, &a)).fold(f64::INFINITY, f64::min);
    let hit_b = vals.iter().map(|v| dist_f64(v, &b)).fold(f64::INFINITY, f64::min);
    cert.push(Claim::numeric("V₀(h) = {a, b}", within.max(hit_a).max(hit_b), NUMERIC_BOUND));
    let inv = near_ab(&h.eval(&a)).max(near_ab(&h.eval(&b)));
    cert.push(Claim::numeric("h({a, b}) ⊆ {a, b}", inv, NUMERIC_BOUND));
    let img = x
        .numeric_points(prec)?
        .iter()
        .map(|z| near_ab(&h.eval(z)))
        .fold(0.0, f64::max);
    cert.push(Claim::numeric("h(X) ⊆ {a, b}", img, NUMERIC_BOUND));
    let smallest = abs_f64(&dh.eval(&a)).min(abs_f64(&dh.eval(&b)));
    cert.push(Claim::exact("P₀(h) ∩ C₀(h) = ∅ (|h'| ≫ residual)", smallest > 1e-10));
    let fixed = dist_f64(&h.eval(&a), &a) < NUMERIC_BOUND && dist_f64(&h.eval(&b), &b) < NUMERIC_BOUND;
    Ok(HPoly {
        set: x.clone(),
        enlarged,
        belyi: beta,
        fixed_pointwise: fixed,
        a: HPolyPoint::Numeric(a),
        b: HPolyPoint::Numeric(b),
        h: MapCoeffs::Numeric(h),
        certificate: cert,
    })
}

impl HPoly {
    /// `h` evaluated numerically.
    pub fn eval(&self, z: &ComplexMP) -> ComplexMP {
        match &self.h {
            MapCoeffs::Exact(p) => CPoly::from_rat(z.prec().0, p).eval(z),
            MapCoeffs::Numeric(p) => p.eval(z),
        }
    }

    pub fn points(&self, prec: u32) -> [ComplexMP; 2] {
        [self.a.complex(prec), self.b.complex(prec)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn one_third() {
        let x = FiniteAlgebraicSet::from_points(&[q(1, 3)], false).unwrap();
        let r = h_poly_for_set(&x).unwrap();
        assert_eq!(r.a, HPolyPoint::Rational(q(0, 1)));
        assert_eq!(r.b, HPolyPoint::Rational(q(4, 3)));
        let MapCoeffs::Exact(h) = &r.h else { panic!("numeric") };
        // 9z(1 - z)² = 9z - 18z² + 9z³
        assert_eq!(*h, RatPoly::from_ints(&[0, 9, -18, 9]));
        assert_eq!(h.eval(&q(1, 3)), q(4, 3));
        assert!(r.fixed_pointwise);
        assert!(r.certificate.verdict(), "{:?}", r.certificate);
    }

    #[test]
    fn enlarges_when_needed() {
        let x = FiniteAlgebraicSet::from_points(&[q(0, 1), q(1, 1)], false).unwrap();
        let r = h_poly_for_set(&x).unwrap();
        assert!(r.belyi.degree > 1);
        assert!(r.certificate.verdict(), "{:?}", r.certificate);
        assert!(x.rational_points().unwrap().iter().all(|p| r.enlarged.contains_rational(p)));
    }

    #[test]
    fn pairs_are_exact() {
        // oracle: A(z) = 1/3 + (z + 1)·(4/5) sends -1, 1/4 to 1/3, 4/3
        let x = FiniteAlgebraicSet::from_points(&[q(-1, 1), q(1, 4)], false).unwrap();
        let r = h_poly_for_set(&x).unwrap();
        assert_eq!(r.a, HPolyPoint::Rational(q(-17, 12)));
        assert_eq!(r.b, HPolyPoint::Rational(q(1, 4)));
        assert!(r.fixed_pointwise);
        assert!(r.certificate.claims.iter().all(|c| c.is_exact() && c.verdict));
        let x = FiniteAlgebraicSet::from_points(&[q(-7, 8)], false).unwrap();
        let r = h_poly_for_set(&x).unwrap();
        assert!(r.is_exact() && r.certificate.verdict());
    }

    #[test]
    fn rejects_infinity() {
        assert!(h_poly_for_set(&FiniteAlgebraicSet::infinity()).is_err());
    }
}
