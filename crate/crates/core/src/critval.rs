//! Polynomials with prescribed finite critical values: exact quadratic
//! chains over Q and Newton solves on critical-point parametrized templates.

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::algsets::{critical_values_set, FiniteAlgebraicSet};
use crate::error::{Error, Result};
use crate::exact::{rational_roots, RatPoly};
use crate::numeric::linalg::solve;
use crate::numeric::{abs_f64, from_rational, CPoly, ComplexMP};

/// Composition of low-degree factors, innermost first.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadChain {
    pub factors: Vec<RatPoly>,
}

impl QuadChain {
    pub fn composite(&self) -> RatPoly {
        self.factors
            .iter()
            .fold(RatPoly::x(), |acc, f| f.compose(&acc))
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(RatPoly::deg).product()
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if *q < 0 {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    if n.is_perfect_square() && d.is_perfect_square() {
        Some(Rational::from((Integer::from(n.sqrt_ref()), Integer::from(d.sqrt_ref()))))
    } else {
        None
    }
}

/// `g` with `V₀(g)` equal to the targets, built as `(z²+t₁) ∘ chain(s)`
/// where `s_j = -√(t_j - t₁)`, recursively. Fails with the first
/// discriminant that is not a rational square.
pub fn chain_with_critvals(targets: &[Rational]) -> Result<QuadChain> {
    if targets.is_empty() {
        return Err(Error::InvalidInput("no target critical values".into()));
    }
    for (i, a) in targets.iter().enumerate() {
        if targets[..i].contains(a) {
            return Err(Error::InvalidInput(format!("repeated target {a}")));
        }
    }
    let mut outer_first = Vec::new();
    let mut current = targets.to_vec();
    while let Some((t1, rest)) = current.split_first() {
        let mut next = Vec::with_capacity(rest.len());
        for t in rest {
            let disc = Rational::from(t - t1);
            let Some(s) = rational_sqrt(&disc) else {
                return Err(Error::NotRationalChain {
                    discriminant: disc.to_string(),
                });
            };
            next.push(-s);
        }
        outer_first.push(RatPoly::new(vec![t1.clone(), Rational::new(), Rational::from(1)]));
        current = next;
    }
    outer_first.reverse();
    Ok(QuadChain {
        factors: outer_first,
    })
}

/// Exact `g` over Q with `V₀(g) = targets` and `{0,1} ⊆ C₀(g)`, for two or
/// three rational targets, when one exists in the pinned family
/// `g' = L z(z-1)(z-c)`.
pub fn pinned_exact(targets: &[Rational]) -> Option<RatPoly> {
    if (0..targets.len()).any(|i| targets[..i].contains(&targets[i])) {
        return None;
    }
    match targets {
        [x1, x2] => {
            // g = x1 + c(z³/3 - z²/2), c = 6(x1 - x2)
            let c = Rational::from(x1 - x2) * 6u32;
            let base = RatPoly::new(vec![
                Rational::new(),
                Rational::new(),
                Rational::from((-1, 2)),
                Rational::from((1, 3)),
            ]);
            Some(&base.scale(&c) + &RatPoly::constant(x1.clone()))
        }
        [_, _, _] => {
            for k in 0..3 {
                let x3 = &targets[k];
                let others: Vec<&Rational> = (0..3).filter(|&i| i != k).map(|i| &targets[i]).collect();
                let (x1, x2) = (others[0], others[1]);
                let rho = Rational::from(x3 - x1) / Rational::from(x2 - x1);
                // c⁴ - 2c³ + 2ρc - ρ = 0
                let quartic = RatPoly::new(vec![
                    Rational::from(-&rho),
                    Rational::from(&rho * 2u32),
                    Rational::new(),
                    Rational::from(-2),
                    Rational::from(1),
                ]);
                let (roots, _) = rational_roots(&quartic);
                for c in roots {
                    if c == 0 || c == 1 || c == Rational::from((1, 2)) {
                        continue;
                    }
                    let lead = Rational::from(x2 - x1) * 12u32 / (Rational::from(&c * 2u32) - 1u32);
                    let dg = RatPoly::from_roots([Rational::new(), Rational::from(1), c.clone()].iter());
                    let g = &dg.integral().scale(&lead) + &RatPoly::constant(x1.clone());
                    return Some(g);
                }
            }
            None
        }
        _ => None,
    }
}

/// Shape of a template polynomial.
#[derive(Clone, Debug, PartialEq)]
pub enum TemplateKind {
    /// `z² + a`.
    Quadratic,
    /// `A(z - t)³ + a` with `g(0) = 0`, `g(1) = 1`: one triple critical point.
    CubicTriple,
    /// Degree `d`, `d - 1` simple critical points, `g(0) = 0`, `g(1) = 1`.
    Simple { degree: usize },
    /// Critical points pinned at 0 and 1 plus `k - 2` free simple ones;
    /// `k` prescribed critical values.
    Pinned01 { values: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyTemplate {
    pub kind: TemplateKind,
    pub degree: usize,
    /// Multiplicities of the finite critical points.
    pub branch: Vec<u32>,
    /// Normalization constraints in words.
    pub constraints: Vec<String>,
}

impl PolyTemplate {
    pub fn quadratic() -> Self {
        PolyTemplate {
            kind: TemplateKind::Quadratic,
            degree: 2,
            branch: vec![1],
            constraints: vec!["monic, centered".into()],
        }
    }

    pub fn cubic_triple() -> Self {
        PolyTemplate {
            kind: TemplateKind::CubicTriple,
            degree: 3,
            branch: vec![2],
            constraints: vec!["g(0) = 0".into(), "g(1) = 1".into()],
        }
    }

    /// The template for a marked set of the given size: cubic when it is 4,
    /// simple of degree `size - 2` from 5 on.
    pub fn for_marked_set(size: usize) -> Result<Self> {
        match size {
            4 => Ok(Self::cubic_triple()),
            n if n >= 5 => Ok(Self::simple(n - 2)),
            _ => Err(Error::InvalidInput(format!("no template for {size} marked points"))),
        }
    }

    pub fn simple(degree: usize) -> Self {
        PolyTemplate {
            kind: TemplateKind::Simple { degree },
            degree,
            branch: vec![1; degree - 1],
            constraints: vec!["g(0) = 0".into(), "g(1) = 1".into()],
        }
    }

    pub fn pinned01(values: usize) -> Self {
        PolyTemplate {
            kind: TemplateKind::Pinned01 { values },
            degree: values + 1,
            branch: vec![1; values],
            constraints: vec!["g'(0) = 0".into(), "g'(1) = 0".into()],
        }
    }

    /// Number of prescribed critical values.
    pub fn target_count(&self) -> usize {
        match self.kind {
            TemplateKind::Quadratic | TemplateKind::CubicTriple => 1,
            TemplateKind::Simple { degree } => degree - 1,
            TemplateKind::Pinned01 { values } => values,
        }
    }

    /// Riemann-Hurwitz bookkeeping for polynomials: finite critical
    /// multiplicity `d - 1`.
    pub fn is_consistent(&self) -> bool {
        self.branch.iter().map(|&m| m as usize).sum::<usize>() + 1 == self.degree
    }
}

/// A solved template: `g' = L ∏ (z - f)^{m_f} ∏ (z - c_j)^{m_j}` over the
/// fixed and free critical points, `g = e + ∫₀ g'`.
#[derive(Clone, Debug)]
pub struct TemplateSolution {
    pub template: PolyTemplate,
    pub lead: ComplexMP,
    pub constant: ComplexMP,
    /// Free critical points; `critical_points[j]` carries `targets[j]`.
    pub critical_points: Vec<ComplexMP>,
    pub targets: Vec<ComplexMP>,
    pub poly: CPoly,
    pub residual: f64,
    pub newton_steps: usize,
    pub prec: u32,
}

impl TemplateSolution {
    pub fn eval(&self, z: &ComplexMP) -> ComplexMP {
        self.poly.eval(z)
    }

    /// All finite critical points with multiplicity.
    pub fn all_critical_points(&self) -> Vec<(ComplexMP, u32)> {
        let mut out: Vec<(ComplexMP, u32)> = self
            .fixed_points()
            .into_iter()
            .map(|(p, m)| (Complex::with_val(self.prec, (p, 0)), m))
            .collect();
        let mult = free_multiplicity(&self.template);
        out.extend(self.critical_points.iter().map(|c| (c.clone(), mult)));
        out
    }

    fn fixed_points(&self) -> Vec<(i32, u32)> {
        fixed_critical(&self.template)
    }
}

fn fixed_critical(t: &PolyTemplate) -> Vec<(i32, u32)> {
    match t.kind {
        TemplateKind::Pinned01 { .. } => vec![(0, 1), (1, 1)],
        _ => vec![],
    }
}

fn free_multiplicity(t: &PolyTemplate) -> u32 {
    match t.kind {
        TemplateKind::CubicTriple => 2,
        _ => 1,
    }
}

/// Unknowns and equations of the critical-point parametrization.
struct System<'a> {
    template: &'a PolyTemplate,
    prec: u32,
    /// `(point, value)` pins.
    pins: Vec<(ComplexMP, ComplexMP)>,
    constant_free: bool,
}

struct Unknowns {
    lead: ComplexMP,
    constant: ComplexMP,
    crit: Vec<ComplexMP>,
}

impl<'a> System<'a> {
    fn new(template: &'a PolyTemplate, prec: u32, targets_pinned: &[ComplexMP]) -> Self {
        let c = |x: i32| Complex::with_val(prec, (x, 0));
        let (pins, constant_free) = match template.kind {
            TemplateKind::Pinned01 { .. } => (
                vec![
                    (c(0), targets_pinned[0].clone()),
                    (c(1), targets_pinned[1].clone()),
                ],
                true,
            ),
            _ => (vec![(c(1), c(1))], false),
        };
        System {
            template,
            prec,
            pins,
            constant_free,
        }
    }

    fn derivative_poly(&self, u: &Unknowns, skip: Option<usize>) -> CPoly {
        let p = self.prec;
        let mut roots = Vec::new();
        for (f, m) in fixed_critical(self.template) {
            for _ in 0..m {
                roots.push(Complex::with_val(p, (f, 0)));
            }
        }
        let mult = free_multiplicity(self.template);
        for (i, c) in u.crit.iter().enumerate() {
            let m = if skip == Some(i) { mult - 1 } else { mult };
            for _ in 0..m {
                roots.push(c.clone());
            }
        }
        let mut lead = u.lead.clone();
        if skip.is_some() {
            lead = -lead * mult;
        }
        CPoly::from_roots(p, &roots).scale(&lead)
    }

    fn poly(&self, u: &Unknowns) -> CPoly {
        let g = self.derivative_poly(u, None).integral();
        g.shift(&Complex::with_val(self.prec, -&u.constant))
    }

    fn pack(&self, u: &Unknowns) -> Vec<ComplexMP> {
        let mut v = vec![u.lead.clone()];
        if self.constant_free {
            v.push(u.constant.clone());
        }
        v.extend(u.crit.iter().cloned());
        v
    }

    fn unpack(&self, v: &[ComplexMP]) -> Unknowns {
        let mut it = v.iter().cloned();
        let lead = it.next().unwrap();
        let constant = if self.constant_free {
            it.next().unwrap()
        } else {
            Complex::new(self.prec)
        };
        Unknowns {
            lead,
            constant,
            crit: it.collect(),
        }
    }

    fn residual(&self, u: &Unknowns, targets: &[ComplexMP]) -> Vec<ComplexMP> {
        let g = self.poly(u);
        let mut r: Vec<ComplexMP> = self
            .pins
            .iter()
            .map(|(x, v)| g.eval(x) - v)
            .collect();
        for (c, a) in u.crit.iter().zip(targets) {
            r.push(g.eval(c) - a);
        }
        r
    }

    fn jacobian(&self, u: &Unknowns) -> Vec<Vec<ComplexMP>> {
        let p = self.prec;
        let g = self.poly(u);
        let dg = self.derivative_poly(u, None);
        let points: Vec<ComplexMP> = self
            .pins
            .iter()
            .map(|(x, _)| x.clone())
            .chain(u.crit.iter().cloned())
            .collect();
        let partials: Vec<CPoly> = (0..u.crit.len())
            .map(|i| self.derivative_poly(u, Some(i)).integral())
            .collect();
        let npins = self.pins.len();
        points
            .iter()
            .enumerate()
            .map(|(row, y)| {
                let gy = g.eval(y);
                // ∂g(y)/∂L = (g(y) - e)/L
                let mut r = vec![Complex::with_val(p, &gy - &u.constant) / &u.lead];
                if self.constant_free {
                    r.push(Complex::with_val(p, 1));
                }
                for (i, q) in partials.iter().enumerate() {
                    let mut v = q.eval(y);
                    if row >= npins && row - npins == i {
                        v += dg.eval(y);
                    }
                    r.push(v);
                }
                r
            })
            .collect()
    }
}

fn max_abs(v: &[ComplexMP]) -> f64 {
    v.iter().map(abs_f64).fold(0.0, f64::max)
}

/// Newton on the template unknowns with step halving. Returns the final
/// unknowns and step count.
fn newton(
    sys: &System,
    mut u: Vec<ComplexMP>,
    targets: &[ComplexMP],
    tol: f64,
    max_steps: usize,
) -> Result<(Vec<ComplexMP>, f64, usize)> {
    let mut res = max_abs(&sys.residual(&sys.unpack(&u), targets));
    let mut steps = 0;
    let floor = Float::with_val(64, Float::i_exp(1, -(sys.prec as i32) + 24)).to_f64();
    while res > tol.min(floor.max(tol * 1e-30)) && steps < max_steps {
        let cur = sys.unpack(&u);
        let jac = sys.jacobian(&cur);
        let rhs = sys.residual(&cur, targets);
        let delta = solve(jac, rhs, 1e-40)?;
        let mut lambda = Float::with_val(sys.prec, 1);
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<ComplexMP> = u
                .iter()
                .zip(&delta)
                .map(|(x, d)| Complex::with_val(sys.prec, x - Complex::with_val(sys.prec, d * &lambda)))
                .collect();
            let r = max_abs(&sys.residual(&sys.unpack(&trial), targets));
            if r.is_finite() && r < res {
                u = trial;
                res = r;
                accepted = true;
                break;
            }
            lambda /= 2u32;
        }
        steps += 1;
        if !accepted {
            break;
        }
    }
    Ok((u, res, steps))
}

/// Newton-solve `template` so its free critical values land on `targets`,
/// starting from `seed` or, without one, by homotopy from a symmetric base
/// polynomial. For `Pinned01`, the first two targets are the values at 0
/// and 1.
pub fn solve_template(
    template: &PolyTemplate,
    targets: &[ComplexMP],
    seed: Option<&TemplateSolution>,
    prec: u32,
) -> Result<TemplateSolution> {
    if targets.len() != template.target_count() {
        return Err(Error::InvalidInput(format!(
            "template expects {} targets, got {}",
            template.target_count(),
            targets.len()
        )));
    }
    for i in 0..targets.len() {
        for j in 0..i {
            if abs_f64(&Complex::with_val(prec, &targets[i] - &targets[j])) < 1e-20 {
                return Err(Error::Degenerate("target critical values collide".into()));
            }
        }
    }
    let c = |re: f64| Complex::with_val(prec, (re, 0));
    let targets: Vec<ComplexMP> = targets.iter().map(|t| Complex::with_val(prec, t)).collect();

    if template.kind == TemplateKind::Quadratic {
        let poly = CPoly::new(prec, vec![targets[0].clone(), c(0.0), c(1.0)]);
        return Ok(TemplateSolution {
            template: template.clone(),
            lead: c(2.0),
            constant: targets[0].clone(),
            critical_points: vec![c(0.0)],
            targets,
            poly,
            residual: 0.0,
            newton_steps: 0,
            prec,
        });
    }

    let (pinned, free_targets): (Vec<ComplexMP>, Vec<ComplexMP>) = match template.kind {
        TemplateKind::Pinned01 { .. } => (targets[..2].to_vec(), targets[2..].to_vec()),
        _ => (vec![], targets.clone()),
    };
    let sys = System::new(template, prec, &pinned);
    let tol = Float::with_val(64, Float::i_exp(1, -((prec / 2) as i32))).to_f64();

    let start: Vec<ComplexMP> = match seed {
        Some(s) => {
            let mut v = vec![Complex::with_val(prec, &s.lead)];
            if sys.constant_free {
                v.push(Complex::with_val(prec, &s.constant));
            }
            v.extend(s.critical_points.iter().map(|z| Complex::with_val(prec, z)));
            v
        }
        None => homotopy_start(&sys, template, &free_targets, prec)?,
    };
    let (u, residual, steps) = newton(&sys, start, &free_targets, tol, 80)?;
    if !(residual < tol) {
        return Err(Error::NonConvergence(format!(
            "template Newton stalled with residual {residual:e} (tolerance {tol:e})"
        )));
    }
    let un = sys.unpack(&u);
    for i in 0..un.crit.len() {
        for j in 0..i {
            if abs_f64(&Complex::with_val(prec, &un.crit[i] - &un.crit[j])) < 1e-25 {
                return Err(Error::Degenerate("critical points collided".into()));
            }
        }
    }
    let poly = sys.poly(&un);
    Ok(TemplateSolution {
        template: template.clone(),
        lead: un.lead,
        constant: un.constant,
        critical_points: un.crit,
        targets,
        poly,
        residual,
        newton_steps: steps,
        prec,
    })
}

/// Closed-form base, then a complex-gamma path from the base's critical
/// values to the targets.
fn homotopy_start(
    sys: &System,
    template: &PolyTemplate,
    targets: &[ComplexMP],
    prec: u32,
) -> Result<Vec<ComplexMP>> {
    let c = |re: f64, im: f64| Complex::with_val(prec, (re, im));
    let nfree = targets.len();
    let mut base_crit: Vec<ComplexMP> = (0..nfree)
        .map(|j| {
            let theta = std::f64::consts::TAU * (j as f64 + 0.25) / nfree.max(1) as f64;
            c(0.5 + 0.6 * theta.cos(), 0.6 * theta.sin())
        })
        .collect();
    if template.kind == TemplateKind::CubicTriple {
        base_crit = vec![c(0.5, 0.0)];
    }
    let mut u0 = Unknowns {
        lead: c(1.0, 0.0),
        constant: c(0.0, 0.0),
        crit: base_crit,
    };
    // fit the lead (and constant) to the pins exactly
    let g = sys.poly(&u0);
    if sys.constant_free {
        let (x0, v0) = (&sys.pins[0].0, &sys.pins[0].1);
        let (x1, v1) = (&sys.pins[1].0, &sys.pins[1].1);
        let span = g.eval(x1) - g.eval(x0);
        u0.lead = Complex::with_val(prec, v1 - v0) / span;
        let g = sys.poly(&u0);
        u0.constant = Complex::with_val(prec, v0 - g.eval(x0));
    } else {
        let (x1, v1) = (&sys.pins[0].0, &sys.pins[0].1);
        u0.lead = Complex::with_val(prec, v1 / g.eval(x1));
    }
    let g = sys.poly(&u0);
    let base_vals: Vec<ComplexMP> = u0.crit.iter().map(|z| g.eval(z)).collect();

    let gamma = c(0.6, 0.8);
    let mut u = sys.pack(&u0);
    let steps = 64;
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let wt: Vec<ComplexMP> = base_vals
            .iter()
            .zip(targets)
            .map(|(a0, a)| {
                let num = Complex::with_val(prec, a0 * &gamma) * (1.0 - t) + Complex::with_val(prec, a * t);
                let den = Complex::with_val(prec, &gamma * (1.0 - t)) + t;
                num / den
            })
            .collect();
        let loose = if k == steps { 1e-25 } else { 1e-12 };
        let (next, res, _) = newton(sys, u.clone(), &wt, loose, 40)?;
        if !(res < 1e-6) {
            return Err(Error::NonConvergence(format!(
                "homotopy lost the path at t = {t} (residual {res:e})"
            )));
        }
        u = next;
    }
    Ok(u)
}

/// Closed form for the cubic template with critical value `a`:
/// `t = 1/(1 + ρ)` with `ρ³ = (1 - a)/a`, `A = a/t³`, for the cube-root
/// branch `k`.
pub fn cubic_closed_form(a: &ComplexMP, branch: u32, prec: u32) -> (ComplexMP, ComplexMP) {
    let one = Complex::with_val(prec, 1);
    let ratio = Complex::with_val(prec, &one - a) / a;
    let third = Float::with_val(prec, 1) / 3u32;
    let root = ratio.pow(Complex::with_val(prec, (third, 0)));
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let angle = Float::with_val(prec, &pi * 2u32) * branch / 3u32;
    let (s, cth) = angle.sin_cos(Float::new(prec));
    let rho = root * Complex::with_val(prec, (cth, s));
    let t = Complex::with_val(prec, &one + &rho).recip();
    let t3 = Complex::with_val(prec, (&t).pow(3u32));
    let lead = Complex::with_val(prec, a / &t3);
    (lead, t)
}

/// `V₀` of an exact polynomial as a set, for checking chain outputs.
pub fn exact_critical_values(g: &RatPoly) -> Result<FiniteAlgebraicSet> {
    critical_values_set(g)
}

/// Multiprecision value of a rational target.
pub fn target_point(prec: u32, q: &Rational) -> ComplexMP {
    from_rational(prec, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn chain_examples() {
        let c = chain_with_critvals(&[q(-2, 1)]).unwrap();
        assert_eq!(c.composite(), RatPoly::from_ints(&[-2, 0, 1]));
        let c = chain_with_critvals(&[q(-2, 1), q(2, 1)]).unwrap();
        assert_eq!(c.composite(), RatPoly::from_ints(&[2, 0, -4, 0, 1]));
        assert_eq!(c.degree(), 4);
        let v = critical_values_set(&c.composite()).unwrap();
        assert_eq!(v.rational_points(), Some(&[q(-2, 1), q(2, 1)][..]));
        match chain_with_critvals(&[q(1, 1), q(3, 1)]) {
            Err(Error::NotRationalChain { discriminant }) => assert_eq!(discriminant, "2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pinned_exact_pair() {
        let g = pinned_exact(&[q(-2, 1), q(2, 1)]).unwrap();
        assert_eq!(g.eval(&q(0, 1)), -2);
        assert_eq!(g.eval(&q(1, 1)), 2);
        assert!(g.derivative().eval(&q(0, 1)) == 0 && g.derivative().eval(&q(1, 1)) == 0);
    }

    #[test]
    fn pinned_exact_triple_when_rational() {
        let c = q(3, 1);
        let rho = Rational::from(c.clone().pow(3u32) * (q(2, 1) - &c)) / (q(2, 1) * &c - 1u32);
        let targets = [q(0, 1), q(1, 1), rho];
        let g = pinned_exact(&targets).unwrap();
        let v = critical_values_set(&g).unwrap();
        let expect = FiniteAlgebraicSet::from_points(&targets, false).unwrap();
        assert_eq!(v, expect);
    }

    #[test]
    fn cubic_template_one_ninth() {
        let a = Complex::with_val(P, (Float::with_val(P, 1) / 9u32, 0));
        let sol = solve_template(&PolyTemplate::cubic_triple(), &[a.clone()], None, P).unwrap();
        let t = &sol.critical_points[0];
        // real branch: t = 1/3, A = 3
        assert!(abs_f64(&Complex::with_val(P, t - Float::with_val(P, 1) / 3u32)) < 1e-35);
        assert!(abs_f64(&Complex::with_val(P, &sol.lead - 9u32)) < 1e-35);
        let g0 = sol.eval(&Complex::new(P));
        let g1 = sol.eval(&Complex::with_val(P, 1));
        assert!(abs_f64(&g0) < 1e-35);
        assert!(abs_f64(&(g1 - 1u32)) < 1e-35);
        assert!(abs_f64(&(sol.eval(t) - &a)) < 1e-35);
        let (lead, t2) = cubic_closed_form(&a, 0, P);
        assert!(abs_f64(&(t2 - t)) < 1e-35);
        assert!(abs_f64(&(lead * 3u32 - &sol.lead)) < 1e-35);
    }

    #[test]
    fn cubic_template_one_half() {
        let a = Complex::with_val(P, (0.5, 0));
        let sol = solve_template(&PolyTemplate::cubic_triple(), &[a.clone()], None, P).unwrap();
        let v = sol.eval(&sol.critical_points[0]);
        assert!(abs_f64(&(v - &a)) < 1e-30);
    }

    #[test]
    fn quadratic_template_is_exact() {
        let a = Complex::with_val(P, (-0.75, 0.1));
        let sol = solve_template(&PolyTemplate::quadratic(), &[a.clone()], None, P).unwrap();
        assert_eq!(sol.newton_steps, 0);
        assert_eq!(sol.eval(&Complex::new(P)), a);
    }

    #[test]
    fn simple_template_hits_targets() {
        let targets: Vec<ComplexMP> = [(0.3, 0.4), (-1.2, 0.2), (2.0, -0.7)]
            .iter()
            .map(|&(re, im)| Complex::with_val(P, (re, im)))
            .collect();
        let t = PolyTemplate::simple(4);
        assert!(t.is_consistent());
        let sol = solve_template(&t, &targets, None, P).unwrap();
        assert!(abs_f64(&sol.eval(&Complex::new(P))) < 1e-60);
        assert!(abs_f64(&(sol.eval(&Complex::with_val(P, 1)) - 1u32)) < 1e-30);
        let dg = sol.poly.derivative();
        for (c, a) in sol.critical_points.iter().zip(&targets) {
            assert!(abs_f64(&dg.eval(c)) < 1e-30);
            assert!(abs_f64(&(sol.eval(c) - a)) < 1e-30);
        }
        // reseeding from the solution at nearby targets moves coefficients by O(δ)
        let nudged: Vec<ComplexMP> = targets.iter().map(|a| Complex::with_val(P, a + 1e-7)).collect();
        let sol2 = solve_template(&t, &nudged, Some(&sol), P).unwrap();
        let shift = sol
            .poly
            .coeffs
            .iter()
            .zip(&sol2.poly.coeffs)
            .map(|(x, y)| abs_f64(&Complex::with_val(P, x - y)))
            .fold(0.0, f64::max);
        assert!(shift < 1e-4 && shift > 0.0);
    }

    #[test]
    fn pinned_template_numeric() {
        let targets: Vec<ComplexMP> = [(-1.0, 0.0), (2.0, 0.0), (0.5, 1.5), (3.0, 0.25)]
            .iter()
            .map(|&(re, im)| Complex::with_val(P, (re, im)))
            .collect();
        let sol = solve_template(&PolyTemplate::pinned01(4), &targets, None, P).unwrap();
        assert_eq!(sol.poly.degree(), 5);
        let dg = sol.poly.derivative();
        assert!(abs_f64(&dg.eval(&Complex::new(P))) < 1e-60);
        assert!(abs_f64(&dg.eval(&Complex::with_val(P, 1))) < 1e-60);
        assert!(abs_f64(&(sol.eval(&Complex::new(P)) - &targets[0])) < 1e-30);
        assert!(abs_f64(&(sol.eval(&Complex::with_val(P, 1)) - &targets[1])) < 1e-30);
        for (c, a) in sol.critical_points.iter().zip(&targets[2..]) {
            assert!(abs_f64(&(sol.eval(c) - a)) < 1e-30);
        }
    }
}
