//! Belyi reduction: a polynomial over Q sending a finite algebraic set into
//! {0, 1} with all finite critical values in {0, 1}.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::{critical_values_set, FiniteAlgebraicSet};
use crate::certificate::Claim;
use crate::error::{Error, Result};
use crate::exact::{rational_roots, RatPoly};

#[derive(Clone, Debug)]
pub struct BelyiOptions {
    /// Upper limit on `deg β`.
    pub degree_budget: usize,
    /// Cap on search nodes in the rational stage.
    pub search_nodes: usize,
}

impl Default for BelyiOptions {
    fn default() -> Self {
        BelyiOptions {
            degree_budget: 1024,
            search_nodes: 20_000,
        }
    }
}

/// One factor of `β`, innermost first.
#[derive(Clone, Debug, PartialEq)]
pub enum BelyiStep {
    /// The irrational cofactor itself, applied as a map.
    Cofactor(RatPoly),
    /// `z ↦ a z + b`.
    Affine { a: Rational, b: Rational },
    /// `z ↦ (z - p)/(r - p)` followed by `β_{m,n}`.
    Fold { p: Rational, r: Rational, m: u32, n: u32 },
    /// `z ↦ (z - c)²`.
    Square { c: Rational },
}

impl BelyiStep {
    pub fn degree(&self) -> usize {
        match self {
            BelyiStep::Cofactor(q) => q.deg(),
            BelyiStep::Affine { .. } => 1,
            BelyiStep::Fold { m, n, .. } => (m + n) as usize,
            BelyiStep::Square { .. } => 2,
        }
    }

    pub fn polynomial(&self) -> RatPoly {
        match self {
            BelyiStep::Cofactor(q) => q.clone(),
            BelyiStep::Affine { a, b } => RatPoly::linear(b.clone(), a.clone()),
            BelyiStep::Fold { p, r, m, n } => {
                let w = Rational::from(r - p);
                let a = Rational::from(w.recip_ref());
                let b = Rational::from(-Rational::from(p * &a));
                fold_polynomial(*m, *n).compose(&RatPoly::linear(b, a))
            }
            BelyiStep::Square { c } => RatPoly::root_factor(c).pow(2),
        }
    }

    fn apply(&self, x: &Rational) -> Rational {
        match self {
            BelyiStep::Cofactor(q) => q.eval(x),
            BelyiStep::Affine { a, b } => Rational::from(a * x) + b,
            BelyiStep::Fold { p, r, m, n } => {
                let t = Rational::from(x - p) / Rational::from(r - p);
                fold_eval(*m, *n, &t)
            }
            BelyiStep::Square { c } => Rational::from(x - c).square(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BelyiCertificate {
    pub beta: RatPoly,
    /// `β(S) ⊆ {0,1}`: `β(β-1) ≡ 0 mod S.defining`.
    pub image_check: Claim,
    /// `V₀(β) ⊆ {0,1}`: `β' | β(β-1)`.
    pub critval_check: Claim,
    pub degree: usize,
    pub steps: Vec<BelyiStep>,
}

impl BelyiCertificate {
    pub fn verdict(&self) -> bool {
        self.image_check.verdict && self.critval_check.verdict
    }
}

/// `((m+n)^(m+n) / (m^m n^n)) z^m (1-z)^n`: fixes {0,1} as a set, sends
/// `m/(m+n)` to 1, critical values {0,1}.
pub fn fold_polynomial(m: u32, n: u32) -> RatPoly {
    let k = fold_constant(m, n);
    let one_minus = RatPoly::from_ints(&[1, -1]);
    &RatPoly::monomial(k, m as usize) * &one_minus.pow(n)
}

fn fold_constant(m: u32, n: u32) -> Rational {
    let s = Integer::from(m + n);
    let num = Integer::from((&s).pow(m + n));
    let den = Integer::from(Integer::from(m).pow(m)) * Integer::from(Integer::from(n).pow(n));
    Rational::from((num, den))
}

fn fold_eval(m: u32, n: u32, t: &Rational) -> Rational {
    let one_minus = Rational::from(1 - t);
    fold_constant(m, n) * Rational::from(t.pow(m)) * one_minus.pow(n)
}

pub fn belyi(s: &FiniteAlgebraicSet) -> Result<BelyiCertificate> {
    belyi_with(s, &BelyiOptions::default())
}

pub fn belyi_with(s: &FiniteAlgebraicSet, opts: &BelyiOptions) -> Result<BelyiCertificate> {
    let mut steps = Vec::new();
    let mut degree = 1usize;

    // irrational stage: fold the whole cofactor until every tracked point is
    // rational
    let (mut points, mut cof) = rational_roots(s.defining());
    points.dedup();
    while cof.deg() >= 2 {
        degree = degree.saturating_mul(cof.deg());
        if degree > opts.degree_budget {
            return Err(Error::DegreeBudgetExceeded {
                degree,
                budget: opts.degree_budget,
            });
        }
        let mut tracked = FiniteAlgebraicSet::points_unchecked(
            points.iter().map(|x| cof.eval(x)).chain([Rational::new()]).collect(),
            false,
        );
        tracked = tracked.union(&critical_values_set(&cof)?);
        steps.push(BelyiStep::Cofactor(cof.clone()));
        let (p, c) = rational_roots(tracked.defining());
        points = p;
        cof = c;
    }

    steps.extend(rational_plan(&points, opts.degree_budget / degree, opts.search_nodes)?);

    Ok(certify_steps(s, steps))
}

/// Compose `steps` (innermost first) and check exactly that the result is a
/// Belyi polynomial for `s`.
pub fn certify_steps(s: &FiniteAlgebraicSet, steps: Vec<BelyiStep>) -> BelyiCertificate {
    let mut beta = RatPoly::x();
    for step in &steps {
        beta = step.polynomial().compose(&beta);
    }

    let zero_one = RatPoly::from_ints(&[0, -1, 1]);
    let image_ok = s.defining().is_constant() || zero_one.compose_mod(&beta, s.defining()).is_zero();
    let critval_ok = critvals_in_zero_one(&beta);
    BelyiCertificate {
        degree: beta.deg(),
        image_check: Claim::exact("β(S) ⊆ {0,1}: β(β-1) ≡ 0 mod S.defining", image_ok),
        critval_check: Claim::exact("V₀(β) ⊆ {0,1}: β' divides β(β-1)", critval_ok),
        beta,
        steps,
    }
}

/// `β' | β(β-1)`, reducing `β` modulo `β'` before squaring.
fn critvals_in_zero_one(beta: &RatPoly) -> bool {
    if beta.deg() < 2 {
        return true;
    }
    let d = beta.derivative();
    let r = beta.rem(&d);
    let r1 = &r - &RatPoly::one();
    (&r * &r1).rem(&d).is_zero()
}

fn normalize(mut t: Vec<Rational>) -> Vec<Rational> {
    t.sort();
    t.dedup();
    t
}

fn is_done(t: &[Rational]) -> bool {
    t.iter().all(|x| *x == 0 || *x == 1)
}

/// Closing move for at most two points.
fn closing_move(t: &[Rational]) -> Option<BelyiStep> {
    match t {
        [x] => Some(BelyiStep::Affine {
            a: Rational::from(1),
            b: Rational::from(-x),
        }),
        [x, y] => {
            let a = Rational::from(Rational::from(y - x).recip_ref());
            let b = Rational::from(-Rational::from(x * &a));
            Some(BelyiStep::Affine { a, b })
        }
        _ => None,
    }
}

/// Candidate moves for at least three points within a degree cap, cheapest
/// first. Each move must shrink the tracked set.
fn candidate_moves(t: &[Rational], cap: usize) -> Vec<(BelyiStep, Vec<Rational>)> {
    let n = t.len();
    let mut out: Vec<(usize, usize, BelyiStep, Vec<Rational>)> = Vec::new();
    let mut order = 0usize;
    let mut push = |step: BelyiStep, out: &mut Vec<(usize, usize, BelyiStep, Vec<Rational>)>| {
        let mut img: Vec<Rational> = t.iter().map(|x| step.apply(x)).collect();
        if matches!(step, BelyiStep::Square { .. }) {
            img.push(Rational::new());
        } else {
            img.push(Rational::new());
            img.push(Rational::from(1));
        }
        let img = normalize(img);
        if img.len() < n {
            out.push((step.degree(), order, step, img));
            order += 1;
        }
    };
    // canonical triple (min, ·, max) first
    let mut triples = Vec::new();
    for i in 0..n {
        for k in (i + 2..n).rev() {
            for j in i + 1..k {
                triples.push((i, j, k));
            }
        }
    }
    for (i, j, k) in triples {
        let ratio = Rational::from(&t[j] - &t[i]) / Rational::from(&t[k] - &t[i]);
        let (num, den) = ratio.into_numer_denom();
        if den > cap {
            continue;
        }
        let m = num.to_u32().unwrap();
        let total = den.to_u32().unwrap();
        push(
            BelyiStep::Fold {
                p: t[i].clone(),
                r: t[k].clone(),
                m,
                n: total - m,
            },
            &mut out,
        );
    }
    if cap >= 2 {
        let mut centers: Vec<Rational> = t.to_vec();
        for i in 0..n {
            for j in i + 1..n {
                centers.push(Rational::from(&t[i] + &t[j]) / 2u32);
            }
        }
        for c in normalize(centers) {
            push(BelyiStep::Square { c }, &mut out);
        }
    }
    out.sort_by(|a, b| {
        // cost per removed point, compared as deg_a^(1/ra) vs deg_b^(1/rb)
        let ra = (n - a.3.len()) as f64;
        let rb = (n - b.3.len()) as f64;
        let ka = (a.0 as f64).ln() / ra;
        let kb = (b.0 as f64).ln() / rb;
        ka.partial_cmp(&kb).unwrap().then(a.1.cmp(&b.1))
    });
    out.into_iter().map(|(_, _, s, img)| (s, img)).collect()
}

struct Search {
    nodes: usize,
    node_cap: usize,
    best: Option<(usize, Vec<BelyiStep>)>,
}

impl Search {
    fn run(&mut self, t: &[Rational], degree: usize, cap: usize, path: &mut Vec<BelyiStep>) {
        if is_done(t) {
            if self.best.as_ref().map_or(true, |(d, _)| degree < *d) {
                self.best = Some((degree, path.clone()));
            }
            return;
        }
        if let Some(step) = closing_move(t) {
            path.push(step);
            self.run(&[], degree, cap, path);
            path.pop();
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return;
        }
        let limit = match &self.best {
            // only strictly better completions are worth exploring
            Some((d, _)) => (d - 1) / degree,
            None => cap / degree,
        };
        if limit < 2 {
            return;
        }
        let moves = candidate_moves(t, limit);
        for (step, img) in moves {
            let d = degree * step.degree();
            if self.best.as_ref().is_some_and(|(b, _)| d >= *b) {
                continue;
            }
            path.push(step);
            self.run(&img, d, cap, path);
            path.pop();
            if self.nodes > self.node_cap {
                return;
            }
        }
    }
}

/// Minimal-degree sequence of affine maps, folds and squarings sending the
/// rational set into {0,1}, searched depth first within `cap`.
fn rational_plan(points: &[Rational], cap: usize, node_cap: usize) -> Result<Vec<BelyiStep>> {
    let t = normalize(points.to_vec());
    let mut search = Search {
        nodes: 0,
        node_cap,
        best: None,
    };
    search.run(&t, 1, cap, &mut Vec::new());
    match search.best {
        Some((_, steps)) => Ok(steps),
        None => Err(Error::DegreeBudgetExceeded {
            degree: cheapest_fold(&t).to_usize().unwrap_or(usize::MAX),
            budget: cap,
        }),
    }
}

/// Smallest single-fold degree available from `t`, ignoring any cap.
fn cheapest_fold(t: &[Rational]) -> Integer {
    let n = t.len();
    let mut best: Option<Integer> = None;
    for i in 0..n {
        for k in i + 2..n {
            for j in i + 1..k {
                let ratio = Rational::from(&t[j] - &t[i]) / Rational::from(&t[k] - &t[i]);
                let den = ratio.denom().clone();
                if best.as_ref().map_or(true, |b| den < *b) {
                    best = Some(den);
                }
            }
        }
    }
    best.unwrap_or_else(|| Integer::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn already_folded() {
        let s = FiniteAlgebraicSet::from_points(&[q(0, 1), q(1, 1)], false).unwrap();
        let c = belyi(&s).unwrap();
        assert_eq!(c.beta, RatPoly::x());
        assert_eq!(c.degree, 1);
        assert!(c.verdict());
    }

    #[test]
    fn one_third_fold() {
        let s = FiniteAlgebraicSet::from_points(&[q(0, 1), q(1, 1), q(1, 3)], false).unwrap();
        let c = belyi(&s).unwrap();
        let expect = RatPoly::new(vec![q(0, 1), q(27, 4), q(-27, 2), q(27, 4)]);
        assert_eq!(c.beta, expect);
        assert_eq!(c.beta.eval(&q(1, 3)), 1);
        assert!(c.verdict());
    }

    #[test]
    fn sqrt_two() {
        let s = FiniteAlgebraicSet::from_defining(&RatPoly::from_ints(&[-2, 0, 1]), false).unwrap();
        let c = belyi(&s).unwrap();
        assert_eq!(c.beta, RatPoly::monomial(q(1, 2), 2));
        assert!(c.verdict());
    }

    #[test]
    fn fold_values() {
        let f = fold_polynomial(2, 3);
        assert_eq!(f.eval(&q(2, 5)), 1);
        assert_eq!(f.eval(&q(0, 1)), 0);
        assert_eq!(f.eval(&q(1, 1)), 0);
        assert_eq!(fold_eval(2, 3, &q(1, 7)), f.eval(&q(1, 7)));
    }

    #[test]
    fn budget_is_enforced() {
        let s = FiniteAlgebraicSet::from_points(&[q(0, 1), q(1, 1), q(1, 997)], false).unwrap();
        let opts = BelyiOptions {
            degree_budget: 64,
            ..Default::default()
        };
        assert!(matches!(
            belyi_with(&s, &opts),
            Err(Error::DegreeBudgetExceeded { .. })
        ));
    }
}
