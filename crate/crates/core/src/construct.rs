//! Polynomials with a prescribed finite postcritical set: `f = g ∘ β` with
//! `β` a Belyi reduction and `g` placing its critical values on the set.

use std::fmt;

use itertools::Itertools;
use rug::{Complex, Integer, Rational};

use crate::algsets::{
    belyi_with, critical_points_contain, critical_values_set, critical_values_within,
    forward_invariant, image_set, BelyiCertificate, BelyiOptions, FiniteAlgebraicSet,
};
use crate::certificate::{Certificate, Claim};
use crate::critval::{chain_with_critvals, pinned_exact, solve_template, PolyTemplate};
use crate::error::{Error, Result};
use crate::exact::{rational_roots, RatPoly};
use crate::numeric::{abs_f64, dist_f64, CPoly, ComplexMP, DEFAULT_PRECISION};

/// Bound for numeric claims.
pub const NUMERIC_BOUND: f64 = 1e-30;

/// Degree above which `V₀(f)` is certified through the factorization
/// rather than computed directly.
const DIRECT_CRITVAL_DEGREE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    /// Fail rather than fall back to numerics.
    Exact,
    /// Exact where possible, numeric otherwise.
    Auto,
}

#[derive(Clone, Debug)]
pub struct ConstructOptions {
    pub tier: Tier,
    pub prec: u32,
    pub belyi: BelyiOptions,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            tier: Tier::Auto,
            prec: DEFAULT_PRECISION,
            belyi: BelyiOptions::default(),
        }
    }
}

/// How `g` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GPath {
    /// `g = z² + a` for a single point.
    Quadratic,
    /// Critical points pinned at 0 and 1, rational coefficients.
    Pinned,
    /// Quadratic chain, affinely normalized.
    Chain,
    /// Newton solve on the pinned template.
    Template,
}

impl fmt::Display for GPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GPath::Quadratic => "quadratic",
            GPath::Pinned => "pinned",
            GPath::Chain => "chain",
            GPath::Template => "template",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub enum MapCoeffs {
    Exact(RatPoly),
    Numeric(CPoly),
}

impl MapCoeffs {
    pub fn degree(&self) -> usize {
        match self {
            MapCoeffs::Exact(p) => p.deg(),
            MapCoeffs::Numeric(p) => p.degree(),
        }
    }

    pub fn eval(&self, prec: u32, z: &ComplexMP) -> ComplexMP {
        match self {
            MapCoeffs::Exact(p) => CPoly::from_rat(prec, p).eval(z),
            MapCoeffs::Numeric(p) => p.eval(z),
        }
    }

    pub fn as_exact(&self) -> Option<&RatPoly> {
        match self {
            MapCoeffs::Exact(p) => Some(p),
            MapCoeffs::Numeric(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PCFCertificate {
    /// The finite part of `X`.
    pub set: FiniteAlgebraicSet,
    pub f: MapCoeffs,
    pub beta: RatPoly,
    pub g: MapCoeffs,
    pub path: GPath,
    pub belyi: Option<BelyiCertificate>,
    pub report: Certificate,
    pub prec: u32,
}

impl PCFCertificate {
    pub fn verdict(&self) -> bool {
        self.report.verdict()
    }

    pub fn belyi_degree(&self) -> usize {
        self.beta.deg()
    }

    pub fn g_degree(&self) -> usize {
        self.g.degree()
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn is_exact(&self) -> bool {
        self.report.claims.iter().all(Claim::is_exact)
    }
}

/// Build `f` with `P(f) ∩ C = X ∖ {∞}` for a set containing `∞`.
pub fn construct_postcritical(x: &FiniteAlgebraicSet) -> Result<PCFCertificate> {
    construct_postcritical_with(x, &ConstructOptions::default())
}

pub fn construct_postcritical_with(
    x: &FiniteAlgebraicSet,
    opts: &ConstructOptions,
) -> Result<PCFCertificate> {
    if !x.contains_infinity() {
        return Err(Error::InvalidInput(
            "the set must contain ∞; move a rational point there first".into(),
        ));
    }
    let fin = x.finite_part();
    if fin.finite_size() == 0 {
        return Err(Error::InvalidInput("need at least two points including ∞".into()));
    }
    let k = fin.finite_size();

    if k == 1 {
        // (z - a)² + a
        let a = fin.rational_points().expect("a Galois-stable singleton is rational")[0].clone();
        let beta = RatPoly::linear(Rational::from(-&a), Rational::from(1));
        let g = RatPoly::new(vec![a, Rational::new(), Rational::from(1)]);
        return Ok(finish_exact(fin, beta, None, g, GPath::Quadratic));
    }

    let bc = belyi_with(&fin, &opts.belyi)?;
    let beta = bc.beta.clone();

    if let Some(points) = fin.rational_points() {
        if let Some(g) = pinned_exact(points) {
            return Ok(finish_exact(fin, beta, Some(bc), g, GPath::Pinned));
        }
        match normalized_chain(points) {
            Ok(g) => return Ok(finish_exact(fin, beta, Some(bc), g, GPath::Chain)),
            Err(e) if opts.tier == Tier::Exact => return Err(e),
            Err(_) => {}
        }
    } else if opts.tier == Tier::Exact {
        return Err(Error::InvalidInput(
            "exact tier needs rational points; irrational sets go through the numeric template"
                .into(),
        ));
    }
    Ok(finish_numeric(fin, beta, bc, opts.prec))
}

/// Chain for some ordering of the targets, precomposed with the affine map
/// sending 0 and 1 to its two rational critical points of largest value.
fn normalized_chain(points: &[Rational]) -> Result<RatPoly> {
    let mut last = None;
    for perm in points.iter().cloned().permutations(points.len()) {
        let chain = match chain_with_critvals(&perm) {
            Ok(c) => c,
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let g = chain.composite();
        let (mut crit, _) = rational_roots(&g.derivative());
        crit.dedup();
        if crit.len() < 2 {
            continue;
        }
        crit.sort_by(|a, b| b.cmp(a));
        let (p, q) = (&crit[0], &crit[1]);
        let lambda = RatPoly::linear(p.clone(), Rational::from(q - p));
        return Ok(g.compose(&lambda));
    }
    Err(last.unwrap_or_else(|| Error::NotRationalChain {
        discriminant: "no ordering gives two rational critical points".into(),
    }))
}

fn finish_exact(
    fin: FiniteAlgebraicSet,
    beta: RatPoly,
    belyi: Option<BelyiCertificate>,
    g: RatPoly,
    path: GPath,
) -> PCFCertificate {
    let f = g.compose(&beta);
    let mut report = Certificate::new(format!("postcritical construction ({path} g-stage)"));

    let v0 = if f.deg() <= DIRECT_CRITVAL_DEGREE {
        let ok = critical_values_set(&f).is_ok_and(|v| v == fin);
        Claim::exact("V₀(f) = X∖{∞}", ok)
    } else {
        // V₀(g) ⊆ V₀(f) ⊆ X when V₀(g) = X and f' | X.defining ∘ f
        let ok = critical_values_set(&g).is_ok_and(|v| v == fin) && critical_values_within(&f, &fin);
        Claim::exact("V₀(f) = X∖{∞} via V₀(g) = X and f' | X∘f", ok)
    };
    report.push(v0);
    report.push(Claim::exact("f(X∖{∞}) ⊆ X∖{∞}", forward_invariant(&fin, &f)));
    report.push(Claim::exact("X∖{∞} ⊆ C₀(f)", critical_points_contain(&f, &fin)));
    if let Some(bc) = &belyi {
        report.notes.push(format!("deg β = {}, Belyi checks {}", bc.degree, bc.verdict()));
    }
    PCFCertificate {
        set: fin,
        f: MapCoeffs::Exact(f),
        beta,
        g: MapCoeffs::Exact(g),
        path,
        belyi,
        report,
        prec: DEFAULT_PRECISION,
    }
}

/// Targets ordered by decreasing real part, then imaginary part.
fn ordered_targets(fin: &FiniteAlgebraicSet, prec: u32) -> Result<Vec<ComplexMP>> {
    let mut pts = fin.numeric_points(prec)?;
    pts.sort_by(|a, b| {
        b.real()
            .partial_cmp(a.real())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.imag().partial_cmp(a.imag()).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(pts)
}

fn nearest(z: &ComplexMP, set: &[ComplexMP]) -> f64 {
    set.iter().map(|w| dist_f64(z, w)).fold(f64::INFINITY, f64::min)
}

fn hausdorff(a: &[ComplexMP], b: &[ComplexMP]) -> f64 {
    let ab = a.iter().map(|z| nearest(z, b)).fold(0.0, f64::max);
    let ba = b.iter().map(|z| nearest(z, a)).fold(0.0, f64::max);
    ab.max(ba)
}

fn finish_numeric(
    fin: FiniteAlgebraicSet,
    beta: RatPoly,
    bc: BelyiCertificate,
    prec: u32,
) -> PCFCertificate {
    let mut report = Certificate::new("postcritical construction (template g-stage)");
    let failed = |report: &mut Certificate, why: String| {
        for s in ["V₀(f) = X∖{∞}", "f(X∖{∞}) ⊆ X∖{∞}", "X∖{∞} ⊆ C₀(f)"] {
            report.push(Claim::numeric(s, f64::INFINITY, NUMERIC_BOUND));
        }
        report.notes.push(why);
    };
    let targets = match ordered_targets(&fin, prec) {
        Ok(t) => t,
        Err(e) => {
            failed(&mut report, format!("target roots: {e}"));
            return numeric_cert(fin, beta, bc, CPoly::new(prec, vec![]), report, prec);
        }
    };
    let template = PolyTemplate::pinned01(targets.len());
    let sol = match solve_template(&template, &targets, None, prec) {
        Ok(s) => s,
        Err(e) => {
            failed(&mut report, format!("template solve: {e}"));
            return numeric_cert(fin, beta, bc, CPoly::new(prec, vec![]), report, prec);
        }
    };
    let g = sol.poly.clone();
    let dg = g.derivative();
    let zero = Complex::new(prec);
    let one = Complex::with_val(prec, 1);

    // critical values of g at 0, 1 and the free critical points
    let crit: Vec<ComplexMP> = [zero.clone(), one.clone()]
        .into_iter()
        .chain(sol.critical_points.iter().cloned())
        .collect();
    let crit_res = crit.iter().map(|c| abs_f64(&dg.eval(c))).fold(0.0, f64::max);
    let values: Vec<ComplexMP> = crit.iter().map(|c| g.eval(c)).collect();
    let g01 = values[0..2].iter().map(|v| nearest(v, &targets)).fold(0.0, f64::max);
    let v0g = hausdorff(&values, &targets).max(crit_res);

    let exact_beta = bc.verdict();
    let beta_note = if exact_beta { "" } else { " (Belyi checks FAILED)" };
    let penalty = |r: f64| if exact_beta { r } else { f64::INFINITY };
    report.push(Claim::numeric(
        format!("V₀(f) = V₀(g) ∪ g(V₀(β)) = X∖{{∞}}; V₀(β) ⊆ {{0,1}} exact{beta_note}"),
        penalty(v0g.max(g01)),
        NUMERIC_BOUND,
    ));
    report.push(Claim::numeric(
        format!("f(X∖{{∞}}) ⊆ g({{0,1}}) ⊆ X∖{{∞}}; β(X) ⊆ {{0,1}} exact{beta_note}"),
        penalty(g01),
        NUMERIC_BOUND,
    ));
    let dg01 = abs_f64(&dg.eval(&zero)).max(abs_f64(&dg.eval(&one)));
    report.push(Claim::numeric(
        format!("X∖{{∞}} ⊆ C₀(f): g'(0) = g'(1) = 0, β(X) ⊆ {{0,1}} exact{beta_note}"),
        penalty(dg01),
        NUMERIC_BOUND,
    ));
    report.notes.push(format!(
        "template Newton: {} steps, residual {:e}",
        sol.newton_steps, sol.residual
    ));
    numeric_cert(fin, beta, bc, g, report, prec)
}

fn numeric_cert(
    fin: FiniteAlgebraicSet,
    beta: RatPoly,
    bc: BelyiCertificate,
    g: CPoly,
    report: Certificate,
    prec: u32,
) -> PCFCertificate {
    let f = g.compose_rat(&beta);
    PCFCertificate {
        set: fin,
        f: MapCoeffs::Numeric(f),
        beta,
        g: MapCoeffs::Numeric(g),
        path: GPath::Template,
        belyi: Some(bc),
        report,
        prec,
    }
}

pub const DEFAULT_ORBIT_BUDGET: usize = 512;

#[derive(Clone, Debug)]
pub enum OrbitSet {
    Exact(FiniteAlgebraicSet),
    /// Point approximations, clustered at the report's tolerance.
    Numeric(Vec<ComplexMP>),
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub set: OrbitSet,
    pub steps: usize,
    pub budget: usize,
    pub finite: bool,
}

impl OrbitReport {
    pub fn exact_set(&self) -> Option<&FiniteAlgebraicSet> {
        match &self.set {
            OrbitSet::Exact(s) => Some(s),
            OrbitSet::Numeric(_) => None,
        }
    }
}

/// `f(z)` escapes to `∞` once `|z| > 1 + (1 + Σ_{i<d} |a_i|)/|a_d|`.
fn escape_radius(f: &RatPoly) -> Rational {
    let d = f.deg();
    let lead = Rational::from(f.coeff(d).abs_ref());
    let s: Rational = f.coeffs()[..d].iter().map(|c| Rational::from(c.abs_ref())).sum();
    Rational::from(1) + (s + 1u32) / lead
}

/// Cumulative forward images of `V₀(f)` until stable or until the total
/// defining degree passes `budget`. Coefficient growth beyond `64·budget`
/// bits also ends the search, as does a rational point past the escape
/// radius.
pub fn postcritical_orbit(f: &RatPoly, budget: usize) -> Result<OrbitReport> {
    if f.deg() < 2 {
        return Err(Error::InvalidInput("orbit needs degree at least 2".into()));
    }
    if budget == 0 {
        return Err(Error::InvalidInput("budget must be positive".into()));
    }
    let escape = escape_radius(f);
    let bit_cap = 64 * budget as u64;
    let mut frontier = critical_values_set(f)?;
    let mut total = frontier.clone();
    let mut steps = 0;
    loop {
        let over = total.finite_size() > budget || total.defining().max_bits() as u64 > bit_cap;
        let escaped = total
            .rational_points()
            .is_some_and(|p| p.iter().any(|x| Rational::from(x.abs_ref()) > escape));
        if over || escaped {
            return Ok(OrbitReport {
                set: OrbitSet::Exact(total),
                steps,
                budget,
                finite: false,
            });
        }
        let next = image_set(&frontier, f)?;
        steps += 1;
        let union = total.union(&next);
        if union == total {
            return Ok(OrbitReport {
                set: OrbitSet::Exact(total),
                steps,
                budget,
                finite: true,
            });
        }
        frontier = next;
        total = union;
    }
}

/// Orbit of the critical values of `f = g ∘ β` computed pointwise at the
/// certificate's precision; points closer than `tol` are merged. `budget`
/// caps the number of distinct points.
pub fn postcritical_orbit_numeric(
    cert: &PCFCertificate,
    budget: usize,
    tol: f64,
) -> Result<OrbitReport> {
    let prec = cert.prec;
    if cert.g.degree() < 1 {
        return Err(Error::Degenerate("no map to iterate".into()));
    }
    let g = match &cert.g {
        MapCoeffs::Exact(p) => CPoly::from_rat(prec, p),
        MapCoeffs::Numeric(p) => p.clone(),
    };
    let beta = CPoly::from_rat(prec, &cert.beta);
    let f = |z: &ComplexMP| g.eval(&beta.eval(z));

    // V₀(f) = V₀(g) ∪ g(V₀(β))
    let mut start: Vec<ComplexMP> = Vec::new();
    let dg = g.derivative();
    if dg.degree() >= 1 {
        for b in crate::numeric::roots(&dg, prec)? {
            start.push(g.eval(&b.center));
        }
    }
    if cert.beta.deg() >= 2 {
        for v in critical_values_set(&cert.beta)?.numeric_points(prec)? {
            start.push(g.eval(&v));
        }
    }
    let mut points: Vec<ComplexMP> = Vec::new();
    let mut frontier = Vec::new();
    for z in start {
        if nearest(&z, &points) >= tol {
            points.push(z.clone());
            frontier.push(z);
        }
    }
    let mut steps = 0;
    while !frontier.is_empty() {
        if points.len() > budget {
            return Ok(OrbitReport {
                set: OrbitSet::Numeric(points),
                steps,
                budget,
                finite: false,
            });
        }
        steps += 1;
        let mut next = Vec::new();
        for z in &frontier {
            let w = f(z);
            if !abs_f64(&w).is_finite() {
                return Ok(OrbitReport {
                    set: OrbitSet::Numeric(points),
                    steps,
                    budget,
                    finite: false,
                });
            }
            if nearest(&w, &points) >= tol {
                points.push(w.clone());
                next.push(w);
            }
        }
        frontier = next;
    }
    Ok(OrbitReport {
        set: OrbitSet::Numeric(points),
        steps,
        budget,
        finite: true,
    })
}

/// Achieved degrees, all upper bounds for the minimal ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub belyi_degree: usize,
    pub g_degree: usize,
    pub postcritical_degree: usize,
    /// `deg β + |X| + 1` with `|X|` counting `∞`.
    pub bound: usize,
}

pub fn degree_report(x: &FiniteAlgebraicSet) -> Result<DegreeReport> {
    let cert = construct_postcritical(x)?;
    Ok(DegreeReport {
        belyi_degree: cert.belyi_degree(),
        g_degree: cert.g_degree(),
        postcritical_degree: cert.degree(),
        bound: cert.belyi_degree() + x.size() + 1,
    })
}

/// `z ↦ (a z + b)/(c z + d)` over Q.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMobius {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

/// Coordinate change `z ↦ 1/(z - r)` for the least rational point `r` of a
/// set without `∞`, together with the image set (which contains `∞`).
pub fn move_point_to_infinity(
    x: &FiniteAlgebraicSet,
) -> Result<(FiniteAlgebraicSet, RationalMobius)> {
    if x.contains_infinity() {
        return Err(Error::InvalidInput("set already contains ∞".into()));
    }
    let (roots, _) = rational_roots(x.defining());
    let Some(r) = roots.into_iter().min() else {
        return Err(Error::InvalidInput(
            "no rational point to move to ∞; supply the coordinate change".into(),
        ));
    };
    let shifted = x.defining().compose(&RatPoly::linear(r.clone(), Rational::from(1)));
    let (q, rem) = shifted.div_rem(&RatPoly::x());
    debug_assert!(rem.is_zero());
    // roots w of q(w) correspond to 1/w
    let mut rev: Vec<Rational> = q.coeffs().to_vec();
    rev.reverse();
    let image = RatPoly::new(rev);
    let set = if image.is_constant() {
        FiniteAlgebraicSet::infinity()
    } else {
        FiniteAlgebraicSet::from_defining(&image, true)?
    };
    let m = RationalMobius {
        a: Rational::new(),
        b: Rational::from(1),
        c: Rational::from(1),
        d: -r,
    };
    Ok((set, m))
}

/// Integer-height of a rational: `max(|num|, den)`.
pub fn height(q: &Rational) -> Integer {
    Integer::from(q.numer().abs_ref()).max(q.denom().clone())
}
