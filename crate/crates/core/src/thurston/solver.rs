//! The pullback iteration on marked points.

use pathfinding::kuhn_munkres::kuhn_munkres_min;
use pathfinding::matrix::Matrix;
use rug::Complex;

use super::table::{match_fixture, Fixture, TableCase};
use super::{choose_k, h_iterate, h_preimages, Configuration, MarkedSelfMap};
use crate::critval::{solve_template, PolyTemplate, TemplateSolution};
use crate::error::{Error, Result};
use crate::exact::field::{KPoint, RationalMap};
use crate::numeric::{roots, sph_dist, ComplexMP, Mobius, SpherePoint, DEFAULT_PRECISION};

#[derive(Clone, Debug)]
pub struct ThurstonOptions {
    pub prec: u32,
    /// Stop once a step moves every marked point less than this.
    pub tol: f64,
    /// Bound on the residuals of an accepted result.
    pub cert_tol: f64,
    /// Largest admissible displacement of the initial selection.
    pub delta0: f64,
    pub max_iters: usize,
    /// First `n` to try; defaults to `max(choose_k(|X|), 6)`.
    pub seed_n: Option<u32>,
    pub n_cap: u32,
    pub max_prec: u32,
    /// Beam width of the initial fiber scan.
    pub beam: usize,
}

impl Default for ThurstonOptions {
    fn default() -> Self {
        ThurstonOptions {
            prec: DEFAULT_PRECISION,
            tol: 1e-10,
            cert_tol: 1e-9,
            delta0: 0.05,
            max_iters: 200,
            seed_n: None,
            n_cap: 40,
            max_prec: 2048,
            beam: 256,
        }
    }
}

/// A chosen inverse branch of `g ∘ hⁿ`: `levels[0] = u` with `g(u)` the
/// target and `levels[i] = h^{n-i}(x')`, so `levels[n] = x'`.
#[derive(Clone, Debug)]
pub struct Branch {
    pub levels: Vec<SpherePoint>,
}

impl Branch {
    pub fn point(&self) -> &SpherePoint {
        self.levels.last().expect("nonempty branch")
    }
}

#[derive(Clone, Debug)]
pub enum RealizedMap {
    /// `g ∘ hⁿ ∘ N⁻¹`.
    Iterated {
        g: TemplateSolution,
        n: u32,
        normalizer: Mobius,
    },
    /// `C ∘ T ∘ C⁻¹` for a fixture `T`; `perm[x]` indexes the fixture's
    /// postcritical point carrying label `x`.
    Fixture {
        case: TableCase,
        conjugacy: Mobius,
        perm: [usize; 3],
    },
}

impl RealizedMap {
    pub fn degree(&self) -> usize {
        match self {
            RealizedMap::Iterated { g, n, .. } => g.template.degree << n,
            RealizedMap::Fixture { case, .. } => case.fixture().degree(),
        }
    }

    pub fn eval(&self, z: &SpherePoint, prec: u32) -> SpherePoint {
        match self {
            RealizedMap::Iterated { g, n, normalizer } => {
                let w = h_iterate(&normalizer.inverse().apply(z), *n, prec);
                match w {
                    SpherePoint::Infinity => SpherePoint::Infinity,
                    SpherePoint::Finite(w) => SpherePoint::Finite(g.eval(&w)),
                }
            }
            RealizedMap::Fixture { case, conjugacy, .. } => {
                let t = case.fixture();
                let w = conjugacy.inverse().apply(z);
                conjugacy.apply(&t.eval(&w, prec))
            }
        }
    }

    /// Critical values, evaluated through the factors.
    pub fn critical_values(&self, prec: u32) -> Vec<SpherePoint> {
        match self {
            RealizedMap::Iterated { g, .. } => {
                let mut v: Vec<SpherePoint> = g
                    .all_critical_points()
                    .iter()
                    .map(|(c, _)| SpherePoint::Finite(g.eval(c)))
                    .collect();
                // critical values of hⁿ are 0, 1, ∞
                for z in [0, 1] {
                    v.push(SpherePoint::Finite(g.eval(&Complex::with_val(prec, z))));
                }
                v.push(SpherePoint::Infinity);
                v
            }
            RealizedMap::Fixture { case, conjugacy, .. } => {
                let crit: Vec<SpherePoint> = match case.fixture() {
                    Fixture::Rational(f, set) => critical_in(&f, &set, prec),
                    Fixture::Alpha(f, set) => critical_in(&f, &set, prec),
                };
                crit.iter().map(|p| conjugacy.apply(p)).collect()
            }
        }
    }
}

fn critical_in<K: crate::exact::field::Field>(
    f: &RationalMap<K>,
    set: &[KPoint<K>],
    prec: u32,
) -> Vec<SpherePoint> {
    set.iter()
        .filter(|p| f.is_critical_value(p))
        .map(|p| p.to_sphere(prec))
        .collect()
}

#[derive(Clone, Debug)]
pub struct ThurstonResult {
    pub map: MarkedSelfMap,
    pub initial: Configuration,
    /// `P*`.
    pub configuration: Configuration,
    pub realized: RealizedMap,
    pub n: u32,
    pub degree: usize,
    pub prec: u32,
    /// `max_x d(f(P*(x)), P*(F(x)))`.
    pub r_dyn: f64,
    /// `max_v min_x d(v, P*(x))` over critical values `v`.
    pub r_crit: f64,
    /// Displacement of each step, starting with the initial selection.
    pub trace: Vec<f64>,
    /// Max of the last five step ratios.
    pub lambda_hat: Option<f64>,
    /// Max over all step ratios.
    pub lambda_max: Option<f64>,
    /// Distance of the initial selection from `X₀`, before normalization.
    pub epsilon0: f64,
    /// `d(P*, X₀)`.
    pub distance_to_initial: f64,
    /// `d(P*, X₀) ≤ trace[0] / (1 - λ_max)`.
    pub bound_holds: bool,
    /// The trace decreases strictly after the first step.
    pub monotone_tail: bool,
    /// `deg f` is not a perfect square; `None` when not applicable.
    pub lattes_guard: Option<bool>,
    pub accepted: bool,
    pub attempts: Vec<String>,
    /// Tracked inverse branches at `P*`, for continuing the iteration.
    pub branches: Vec<Branch>,
}

impl ThurstonResult {
    pub fn separation(&self) -> f64 {
        self.configuration.separation()
    }
}

fn is_square(n: usize) -> bool {
    let r = (n as f64).sqrt().round() as usize;
    (r.saturating_sub(1)..=r + 1).any(|s| s * s == n)
}

fn ratios(trace: &[f64]) -> Vec<f64> {
    trace.windows(2).map(|w| w[1] / w[0]).collect()
}

/// Roots of `g(u) = y`; `u = ∞` over `y = ∞`.
fn g_roots(g: &TemplateSolution, y: &SpherePoint, prec: u32) -> Result<Vec<SpherePoint>> {
    match y {
        SpherePoint::Infinity => Ok(vec![SpherePoint::Infinity]),
        SpherePoint::Finite(y) => {
            let mut c = g.poly.clone();
            c.coeffs[0] -= y;
            Ok(roots(&c, prec)?
                .into_iter()
                .map(|r| SpherePoint::Finite(r.center))
                .collect())
        }
    }
}

fn nearest(cands: &[SpherePoint], to: &SpherePoint) -> SpherePoint {
    cands
        .iter()
        .min_by(|a, b| sph_dist(a, to).total_cmp(&sph_dist(b, to)))
        .expect("nonempty candidate list")
        .clone()
}

/// Leaves of the fiber `(g ∘ hⁿ)⁻¹(y)` near `x`, found by a beam search
/// that keeps the partial branches whose level-`i` point is nearest
/// `h^{n-i}(x)`.
fn fiber_near(
    g: &TemplateSolution,
    n: u32,
    y: &SpherePoint,
    x: &SpherePoint,
    beam: usize,
    prec: u32,
) -> Result<Vec<(f64, Branch)>> {
    let n = n as usize;
    let mut orbit = vec![x.clone()];
    for _ in 0..n {
        let next = super::h_eval(orbit.last().unwrap(), prec);
        orbit.push(next);
    }
    let score = |p: &SpherePoint, level: usize| sph_dist(p, &orbit[n - level]);
    let mut front: Vec<(f64, Branch)> = g_roots(g, y, prec)?
        .into_iter()
        .map(|u| (score(&u, 0), Branch { levels: vec![u] }))
        .collect();
    for level in 1..=n {
        let mut next: Vec<(f64, Branch)> = Vec::with_capacity(2 * front.len());
        for (_, b) in &front {
            for w in h_preimages(b.point(), prec) {
                let mut levels = b.levels.clone();
                let s = score(&w, level);
                levels.push(w);
                next.push((s, Branch { levels }));
            }
        }
        next.sort_by(|a, b| a.0.total_cmp(&b.0));
        // h⁻¹(∞) is a double point
        next.dedup_by(|a, b| sph_dist(a.1.point(), b.1.point()) < 1e-40 && a.1.levels[0] == b.1.levels[0]);
        next.truncate(beam);
        front = next;
    }
    Ok(front)
}

/// For each label, a branch over `targets[F(x)]` near `near[x]`, injective
/// within each fiber by minimal total distance.
fn select_branches(
    g: &TemplateSolution,
    n: u32,
    f: &MarkedSelfMap,
    targets: &[SpherePoint],
    near: &[SpherePoint],
    beam: usize,
    prec: u32,
) -> Result<Vec<Branch>> {
    let k = f.len();
    let mut out: Vec<Option<Branch>> = vec![None; k];
    for image in 0..k {
        let group: Vec<usize> = (0..k).filter(|&x| f.apply(x) == image).collect();
        if group.is_empty() {
            continue;
        }
        let mut cands: Vec<Branch> = Vec::new();
        for &x in &group {
            for (_, b) in fiber_near(g, n, &targets[image], &near[x], beam, prec)? {
                if !cands.iter().any(|c| sph_dist(c.point(), b.point()) < 1e-40) {
                    cands.push(b);
                }
            }
        }
        if cands.len() < group.len() {
            return Err(Error::Degenerate("fiber too small for an injective selection".into()));
        }
        let cost = Matrix::from_fn(group.len(), cands.len(), |(i, j)| {
            (sph_dist(cands[j].point(), &near[group[i]]) * 1e15) as i64
        });
        let (_, assign) = kuhn_munkres_min(&cost);
        for (i, &x) in group.iter().enumerate() {
            out[x] = Some(cands[assign[i]].clone());
        }
    }
    Ok(out.into_iter().map(|b| b.expect("every label has an image")).collect())
}

fn moving_targets(p: &Configuration) -> Vec<ComplexMP> {
    (0..p.len())
        .filter(|&x| !p.is_distinguished(x))
        .map(|x| p.points[x].as_finite().expect("moving points are finite").clone())
        .collect()
}

fn normalize(
    lifted: &[SpherePoint],
    distinguished: [usize; 3],
    prec: u32,
) -> Result<(Configuration, Mobius)> {
    let [a, b, c] = distinguished.map(|d| &lifted[d]);
    let m = Mobius::through(a, b, c, prec, 0.0)?;
    let mut points: Vec<SpherePoint> = lifted.iter().map(|p| m.apply(p)).collect();
    points[distinguished[0]] = SpherePoint::Finite(Complex::new(prec));
    points[distinguished[1]] = SpherePoint::Finite(Complex::with_val(prec, 1));
    points[distinguished[2]] = SpherePoint::Infinity;
    Ok((Configuration { points, distinguished }, m))
}

/// One pullback: lift each `P(F(x))` along the tracked branch of
/// `g ∘ hⁿ`, then normalize. `g` must be solved for the moving points of
/// `p`. Returns the new configuration, the updated branches and the
/// normalizing map.
pub fn pullback_step(
    p: &Configuration,
    f: &MarkedSelfMap,
    g: &TemplateSolution,
    n: u32,
    branches: &[Branch],
    prec: u32,
) -> Result<(Configuration, Vec<Branch>, Mobius)> {
    let k = f.len();
    let mut next = Vec::with_capacity(k);
    for x in 0..k {
        let old = &branches[x].levels;
        let u = nearest(&g_roots(g, &p.points[f.apply(x)], prec)?, &old[0]);
        let mut levels = vec![u];
        for i in 1..=n as usize {
            let w = nearest(&h_preimages(&levels[i - 1], prec), &old[i]);
            levels.push(w);
        }
        next.push(Branch { levels });
    }
    let lifted: Vec<SpherePoint> = next.iter().map(|b| b.point().clone()).collect();
    let collide = (0..k).any(|i| (0..i).any(|j| sph_dist(&lifted[i], &lifted[j]) < 1e-30));
    if collide {
        let targets = &p.points;
        let near: Vec<SpherePoint> = branches.iter().map(|b| b.point().clone()).collect();
        next = select_branches(g, n, f, targets, &near, 64, prec)?;
    }
    let lifted: Vec<SpherePoint> = next.iter().map(|b| b.point().clone()).collect();
    let (cfg, m) = normalize(&lifted, p.distinguished, prec)?;
    Ok((cfg, next, m))
}

struct Run {
    configuration: Configuration,
    branches: Vec<Branch>,
    g: TemplateSolution,
    normalizer: Mobius,
    trace: Vec<f64>,
    epsilon0: f64,
}

fn initial_selection(
    x0: &Configuration,
    f: &MarkedSelfMap,
    template: &PolyTemplate,
    n: u32,
    prec: u32,
    opts: &ThurstonOptions,
) -> Result<(TemplateSolution, Vec<Branch>, f64)> {
    let g = solve_template(template, &moving_targets(x0), None, prec)?;
    let branches = select_branches(&g, n, f, &x0.points, &x0.points, opts.beam, prec)?;
    let eps = branches
        .iter()
        .zip(&x0.points)
        .map(|(b, x)| sph_dist(b.point(), x))
        .fold(0.0, f64::max);
    Ok((g, branches, eps))
}

fn iterate(
    x0: &Configuration,
    f: &MarkedSelfMap,
    template: &PolyTemplate,
    n: u32,
    prec: u32,
    opts: &ThurstonOptions,
    start: (TemplateSolution, Vec<Branch>, f64),
) -> Result<Run> {
    let (mut g, mut branches, epsilon0) = start;
    let lifted: Vec<SpherePoint> = branches.iter().map(|b| b.point().clone()).collect();
    let (mut p, _) = normalize(&lifted, x0.distinguished, prec)?;
    let mut normalizer;
    let mut trace = vec![p.distance(x0)];
    for _ in 0..opts.max_iters {
        let gi = solve_template(template, &moving_targets(&p), Some(&g), prec)?;
        let (next, nb, m) = pullback_step(&p, f, &gi, n, &branches, prec)?;
        let d = next.distance(&p);
        trace.push(d);
        g = gi;
        branches = nb;
        normalizer = m;
        p = next;
        if next_is_degenerate(&p, opts) {
            return Err(Error::Degenerate("marked points collided during iteration".into()));
        }
        if d < opts.tol {
            return Ok(Run {
                configuration: p,
                branches,
                g,
                normalizer,
                trace,
                epsilon0,
            });
        }
    }
    Err(Error::NonConvergence(format!(
        "{} pullback steps at n = {n}, {prec} bits; last displacement {:e}",
        opts.max_iters,
        trace.last().copied().unwrap_or(f64::NAN)
    )))
}

fn next_is_degenerate(p: &Configuration, opts: &ThurstonOptions) -> bool {
    p.separation() <= 10.0 * opts.cert_tol
}

fn residuals(
    realized: &RealizedMap,
    p: &Configuration,
    f: &MarkedSelfMap,
    prec: u32,
) -> (f64, f64) {
    let r_dyn = (0..f.len())
        .map(|x| sph_dist(&realized.eval(&p.points[x], prec), &p.points[f.apply(x)]))
        .fold(0.0, f64::max);
    let r_crit = realized
        .critical_values(prec)
        .iter()
        .map(|v| p.points.iter().map(|q| sph_dist(v, q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    (r_dyn, r_crit)
}

fn fixture_result(x0: &Configuration, f: &MarkedSelfMap, opts: &ThurstonOptions) -> Result<ThurstonResult> {
    let prec = opts.prec;
    let (case, perm) = match_fixture(&f.map)
        .ok_or_else(|| Error::InvalidInput("three-label map outside the table".into()))?;
    let q = case.fixture().points(prec);
    let [a, b, c] = x0.distinguished.map(|d| &q[perm[d]]);
    // sends the fixture's points to the labels' positions 0, 1, ∞
    let conjugacy = Mobius::through(a, b, c, prec, 0.0)?;
    let realized = RealizedMap::Fixture { case, conjugacy, perm };
    let (r_dyn, r_crit) = residuals(&realized, x0, f, prec);
    let accepted = r_dyn < opts.cert_tol && r_crit < opts.cert_tol;
    Ok(ThurstonResult {
        map: f.clone(),
        initial: x0.clone(),
        configuration: x0.clone(),
        degree: realized.degree(),
        realized,
        n: 0,
        prec,
        r_dyn,
        r_crit,
        trace: vec![],
        lambda_hat: None,
        lambda_max: None,
        epsilon0: 0.0,
        distance_to_initial: 0.0,
        bound_holds: true,
        monotone_tail: true,
        lattes_guard: None,
        accepted,
        attempts: vec![format!("three marked points: fixture {case}")],
        branches: vec![],
    })
}

/// Realize `f` on the marked points `x0`. Three labels use the fixture
/// table; otherwise `n` grows until the initial selection lies within
/// `delta0`, then the pullback is iterated, raising precision and `n`
/// alternately on failure.
pub fn solve_thurston(
    x0: &Configuration,
    f: &MarkedSelfMap,
    opts: &ThurstonOptions,
) -> Result<ThurstonResult> {
    if x0.len() != f.len() {
        return Err(Error::InvalidInput(format!(
            "{} marked points but the map has {} labels",
            x0.len(),
            f.len()
        )));
    }
    if f.len() == 3 {
        return fixture_result(x0, f, opts);
    }
    let template = PolyTemplate::for_marked_set(f.len())?;
    let mut attempts = Vec::new();
    let mut n = opts.seed_n.unwrap_or_else(|| choose_k(f.len()).max(6));
    let mut prec = opts.prec;
    let mut raise_prec = true;

    loop {
        if n > opts.n_cap {
            return Err(Error::NonConvergence(format!(
                "n reached the cap {}; a larger δ₀ may help. attempts: {}",
                opts.n_cap,
                attempts.join("; ")
            )));
        }
        let start = initial_selection(x0, f, &template, n, prec, opts)?;
        if start.2 > opts.delta0 {
            attempts.push(format!("n = {n}: initial displacement {:.3e} > δ₀", start.2));
            n += 1;
            continue;
        }
        match iterate(x0, f, &template, n, prec, opts, start) {
            Ok(run) => return Ok(finish(x0, f, run, n, prec, opts, attempts)),
            Err(e) => {
                attempts.push(format!("n = {n}, {prec} bits: {e}"));
                if raise_prec && prec * 2 <= opts.max_prec {
                    prec *= 2;
                } else {
                    n += 1;
                }
                raise_prec = !raise_prec;
            }
        }
    }
}

fn finish(
    x0: &Configuration,
    f: &MarkedSelfMap,
    run: Run,
    n: u32,
    prec: u32,
    opts: &ThurstonOptions,
    mut attempts: Vec<String>,
) -> ThurstonResult {
    attempts.push(format!("n = {n}, {prec} bits: converged in {} steps", run.trace.len()));
    let realized = RealizedMap::Iterated {
        g: run.g,
        n,
        normalizer: run.normalizer,
    };
    let p = run.configuration;
    let (r_dyn, r_crit) = residuals(&realized, &p, f, prec);
    let rs = ratios(&run.trace);
    let lambda_hat = rs.iter().rev().take(5).copied().reduce(f64::max);
    let lambda_max = rs.iter().copied().reduce(f64::max);
    let distance_to_initial = p.distance(x0);
    let bound_holds = match lambda_max {
        Some(l) if l < 1.0 => distance_to_initial <= run.trace[0] / (1.0 - l) * (1.0 + 1e-9),
        _ => false,
    };
    let monotone_tail = run.trace.windows(2).skip(1).all(|w| w[1] < w[0]);
    let degree = realized.degree();
    let lattes_guard = (f.len() == 4).then(|| !is_square(degree));
    let accepted = r_dyn < opts.cert_tol
        && r_crit < opts.cert_tol
        && p.separation() > 10.0 * opts.cert_tol
        && lambda_hat.is_some_and(|l| l < 1.0)
        && lattes_guard != Some(false);
    ThurstonResult {
        map: f.clone(),
        initial: x0.clone(),
        configuration: p,
        realized,
        n,
        degree,
        prec,
        r_dyn,
        r_crit,
        trace: run.trace,
        lambda_hat,
        lambda_max,
        epsilon0: run.epsilon0,
        distance_to_initial,
        bound_holds,
        monotone_tail,
        lattes_guard,
        accepted,
        attempts,
        branches: run.branches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(prec: u32, extra: &[(f64, f64)]) -> Configuration {
        let mut pts = vec![
            SpherePoint::Finite(Complex::new(prec)),
            SpherePoint::Finite(Complex::with_val(prec, 1)),
            SpherePoint::Infinity,
        ];
        pts.extend(extra.iter().map(|&(re, im)| SpherePoint::from_f64(prec, re, im)));
        Configuration::new(pts, 1e-20).unwrap()
    }

    #[test]
    fn square_check() {
        assert!(is_square(16) && is_square(1) && !is_square(3 << 5) && !is_square(12));
    }

    #[test]
    fn three_cycle_uses_fixture() {
        let x = config(128, &[]);
        let f = MarkedSelfMap::cycle(3).unwrap();
        let opts = ThurstonOptions { prec: 128, ..Default::default() };
        let r = solve_thurston(&x, &f, &opts).unwrap();
        assert!(matches!(r.realized, RealizedMap::Fixture { case: TableCase::A, .. }));
        assert!(r.accepted, "{} {}", r.r_dyn, r.r_crit);
        assert!(r.r_dyn < 1e-30 && r.r_crit < 1e-30);
    }

    #[test]
    fn every_three_label_map_is_realized() {
        let x = config(128, &[]);
        let opts = ThurstonOptions { prec: 128, ..Default::default() };
        for m in 0..27 {
            let f = MarkedSelfMap::new(vec![m % 3, (m / 3) % 3, m / 9]).unwrap();
            let r = solve_thurston(&x, &f, &opts).unwrap();
            assert!(r.accepted, "{:?}: {} {}", f.map, r.r_dyn, r.r_crit);
        }
    }

    #[test]
    fn identity_on_four_points() {
        let x = config(256, &[(1.0 / 9.0, 0.0)]);
        let f = MarkedSelfMap::identity(4).unwrap();
        let r = solve_thurston(&x, &f, &ThurstonOptions::default()).unwrap();
        assert!(r.accepted, "{r:?}");
        assert_eq!(r.degree, 3 << r.n);
        assert_eq!(r.lattes_guard, Some(true));
    }

    #[test]
    fn continued_steps_shrink() {
        let x = config(256, &[(1.0 / 9.0, 0.0)]);
        let f = MarkedSelfMap::cycle(4).unwrap();
        let r = solve_thurston(&x, &f, &ThurstonOptions::default()).unwrap();
        let RealizedMap::Iterated { g, n, .. } = &r.realized else { panic!() };
        let (mut p, mut g, mut b) = (r.configuration.clone(), g.clone(), r.branches.clone());
        let mut last = f64::INFINITY;
        for _ in 0..6 {
            g = solve_template(&g.template, &moving_targets(&p), Some(&g), 256).unwrap();
            let (q, nb, _) = pullback_step(&p, &f, &g, *n, &b, 256).unwrap();
            let d = q.distance(&p);
            assert!(d <= last.max(1e-60));
            assert!(q.points[2].is_infinity());
            last = d;
            p = q;
            b = nb;
        }
        assert!(last < 1e-30, "{last:e}");
    }
}
