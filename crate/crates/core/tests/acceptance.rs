//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the summary always prints.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Rational};

use pcf_core::algsets::{belyi, FiniteAlgebraicSet};
use pcf_core::construct::{
    construct_postcritical, postcritical_orbit, postcritical_orbit_numeric, MapCoeffs, OrbitSet,
    DEFAULT_ORBIT_BUDGET,
};
use pcf_core::exact::field::KPoint;
use pcf_core::exact::RatPoly;
use pcf_core::numeric::{dist_f64, SpherePoint};
use pcf_core::passports::*;
use pcf_core::thurston::*;

const PREC: u32 = 256;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_rational(rng: &mut ChaCha8Rng, height: i64) -> Rational {
    let p = rng.gen_range(-height..=height);
    let q = rng.gen_range(1..=height);
    Rational::from((p, q))
}

fn random_set(rng: &mut ChaCha8Rng, max_size: usize, height: i64) -> Vec<Rational> {
    let size = rng.gen_range(1..=max_size);
    let mut pts: Vec<Rational> = Vec::new();
    while pts.len() < size {
        let r = random_rational(rng, height);
        if !pts.contains(&r) {
            pts.push(r);
        }
    }
    pts
}

fn belyi_exact(x: &FiniteAlgebraicSet) -> Result<Duration, String> {
    let t = Instant::now();
    let b = belyi(x).map_err(|e| e.to_string())?;
    let exact = b.image_check.is_exact() && b.critval_check.is_exact();
    if !(b.verdict() && exact) {
        return Err("checks failed".into());
    }
    Ok(t.elapsed())
}

fn criterion_1() -> Outcome {
    let q = |n: i64, d: i64| Rational::from((n, d));
    let fixed = [
        FiniteAlgebraicSet::from_points(&[q(0, 1), q(1, 1), q(1, 3)], false).unwrap(),
        FiniteAlgebraicSet::from_defining(&RatPoly::from_ints(&[-2, 0, 1]), false).unwrap(),
    ];
    let fixed_ok = fixed.iter().all(|x| belyi_exact(x).is_ok_and(|t| t < Duration::from_secs(5)));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut passed = 0;
    let mut failures = Vec::new();
    for _ in 0..200 {
        let pts = random_set(&mut rng, 5, 50);
        let x = FiniteAlgebraicSet::from_points(&pts, false).unwrap();
        match belyi_exact(&x) {
            Ok(t) if t < Duration::from_secs(5) => passed += 1,
            Ok(t) => failures.push(format!("slow {t:?}")),
            Err(e) => failures.push(e),
        }
    }
    let budget = failures.iter().filter(|e| e.contains("budget")).count();
    outcome(
        fixed_ok && passed == 200,
        format!(
            "fixed sets {}; random sets {passed}/200 ({budget} over the degree budget)",
            if fixed_ok { "ok" } else { "FAIL" }
        ),
    )
}

fn construct_ok(x: &FiniteAlgebraicSet) -> Result<&'static str, String> {
    let c = construct_postcritical(x).map_err(|e| e.to_string())?;
    if !c.verdict() {
        return Err(format!("certificate rejected: {:?}", c.report.claims));
    }
    let fin = x.finite_part();
    match &c.f {
        MapCoeffs::Exact(f) => {
            if !c.is_exact() {
                return Err("exact path with numeric claims".into());
            }
            let orbit = postcritical_orbit(f, DEFAULT_ORBIT_BUDGET).map_err(|e| e.to_string())?;
            if orbit.exact_set() != Some(&fin) {
                return Err("orbit differs from X∖{∞}".into());
            }
            Ok("exact")
        }
        MapCoeffs::Numeric(_) => {
            if c.report.claims.iter().any(|cl| cl.residual.is_none_or(|r| r >= 1e-30)) {
                return Err("numeric residual above 1e-30".into());
            }
            let orbit = postcritical_orbit_numeric(&c, 64, 1e-20).map_err(|e| e.to_string())?;
            let OrbitSet::Numeric(pts) = orbit.set else {
                return Err("numeric orbit expected".into());
            };
            let roots = fin.numeric_points(PREC).map_err(|e| e.to_string())?;
            let far = |a: &[Complex], b: &[Complex]| {
                a.iter()
                    .map(|z| b.iter().map(|w| dist_f64(z, w)).fold(f64::INFINITY, f64::min))
                    .fold(0.0, f64::max)
            };
            if far(&pts, &roots).max(far(&roots, &pts)) >= 1e-30 {
                return Err("numeric orbit differs from X∖{∞}".into());
            }
            Ok("numeric")
        }
    }
}

fn criterion_2() -> Outcome {
    let q = |n: i64| Rational::from(n);
    let base = FiniteAlgebraicSet::from_points(&[q(-2), q(2)], true).unwrap();
    let base_ok = construct_ok(&base);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut exact, mut numeric) = (0, 0);
    let mut failures = Vec::new();
    for _ in 0..50 {
        let pts = random_set(&mut rng, 3, 6);
        let x = FiniteAlgebraicSet::from_points(&pts, true).unwrap();
        match construct_ok(&x) {
            Ok("exact") => exact += 1,
            Ok(_) => numeric += 1,
            Err(e) => failures.push(format!("{pts:?}: {e}")),
        }
    }
    outcome(
        base_ok == Ok("exact") && failures.is_empty(),
        format!(
            "{{-2, 2, ∞}} {base_ok:?}; random sets: {exact} exact, {numeric} numeric, {} failed {}",
            failures.len(),
            failures.first().cloned().unwrap_or_default()
        ),
    )
}

fn partitions_of(d: u32, max: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(d)).rev() {
        for mut rest in partitions_of(d - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Multisets of nontrivial partitions of `d` with branching summing to `d - 1`.
fn polynomial_passports(d: u32) -> Vec<Vec<Partition>> {
    let parts: Vec<Partition> = partitions_of(d, d)
        .into_iter()
        .map(|p| Partition::new(p).unwrap())
        .filter(|p| !p.is_trivial())
        .collect();
    fn go(parts: &[Partition], from: usize, left: u32, cur: &mut Vec<Partition>, out: &mut Vec<Vec<Partition>>) {
        if left == 0 {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for i in from..parts.len() {
            let b = parts[i].branching();
            if b <= left {
                cur.push(parts[i].clone());
                go(parts, i, left - b, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&parts, 0, d - 1, &mut Vec::new(), &mut out);
    out
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = Vec::new();
    for _ in 0..100 {
        let n = rng.gen_range(2..=5);
        let coll: Vec<Partition> = (0..n)
            .map(|_| {
                let len = rng.gen_range(0..=4);
                Partition::new((0..len).map(|_| rng.gen_range(1..=6)).collect()).unwrap()
            })
            .collect();
        let poly = match extend_to_polynomial_passport(&coll) {
            Ok(p) => p,
            Err(e) => {
                bad.push(format!("polynomial extension: {e}"));
                continue;
            }
        };
        if !(poly.extends(&coll) && poly.c_value() == poly.degree() - 1) {
            bad.push(format!("polynomial extension {poly} of {coll:?}"));
        }
        if n >= 3 {
            match extend_to_rational_passport(&coll) {
                Ok(r) => {
                    let c = r.constellation();
                    let ok = c.product().is_identity()
                        && c.is_transitive()
                        && c.genus_cycle_count() == 0
                        && c.genus_riemann_hurwitz() == 0
                        && r.passport().c_value() as usize == 2 * c.degree - 2
                        && r.passport().extends(&coll);
                    if !ok {
                        bad.push(format!("rational extension of {coll:?}"));
                    }
                }
                Err(e) => bad.push(format!("rational extension: {e}")),
            }
        }
    }
    let t = Instant::now();
    let mut realized = 0;
    for d in 2..=10 {
        for pp in polynomial_passports(d) {
            let p = Passport::new(pp).unwrap();
            match realize_polynomial_constellation(&p) {
                Ok(c) if c.product() == Perm::long_cycle(c.degree) && c.passport() == p => realized += 1,
                _ => bad.push(format!("realization of {p}")),
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(60),
        format!(
            "100 random collections, {realized} polynomial passports with d ≤ 10 realized in {elapsed:.2?}; {} problems {}",
            bad.len(),
            bad.first().cloned().unwrap_or_default()
        ),
    )
}

fn criterion_4() -> Outcome {
    let pts = vec![
        SpherePoint::Finite(Complex::new(PREC)),
        SpherePoint::Finite(Complex::with_val(PREC, 1)),
        SpherePoint::Infinity,
        SpherePoint::Finite(Complex::with_val(PREC, Rational::from((1, 9)))),
    ];
    let x = Configuration::new(pts, 1e-20).unwrap();
    let maps = [
        ("identity", MarkedSelfMap::identity(4).unwrap()),
        ("4-cycle", MarkedSelfMap::cycle(4).unwrap()),
        ("constant", MarkedSelfMap::constant(4, 0).unwrap()),
    ];
    let mut all = true;
    let mut lines = Vec::new();
    for (name, f) in maps {
        let t = Instant::now();
        match solve_thurston(&x, &f, &ThurstonOptions::default()) {
            Ok(r) => {
                let ok = r.accepted
                    && r.r_dyn < 1e-9
                    && r.r_crit < 1e-9
                    && r.configuration.separation() > 1e-8
                    && r.lambda_hat.is_some_and(|l| l < 1.0)
                    && r.monotone_tail
                    && r.bound_holds
                    && r.lattes_guard == Some(true)
                    && r.degree == 3 << r.n
                    && t.elapsed() < Duration::from_secs(600);
                all &= ok;
                lines.push(format!(
                    "{name}: {} n={} r_dyn={:.1e} r_crit={:.1e} λ̂={:.2e} steps={} {:.1?}",
                    if ok { "ok" } else { "FAIL" },
                    r.n,
                    r.r_dyn,
                    r.r_crit,
                    r.lambda_hat.unwrap_or(f64::NAN),
                    r.trace.len(),
                    t.elapsed()
                ));
            }
            Err(e) => {
                all = false;
                lines.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(all, lines.join("; "))
}

fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    let mut all = true;
    let mut shapes = Vec::new();
    for case in TableCase::ALL {
        let v = verify_table_case(case);
        let exact = v.report.certificate.claims.iter().all(|c| c.is_exact());
        let field_ok = (case == TableCase::B) == (v.field == "Q(α)");
        let ok = v.verdict() && exact && field_ok && v.report.postcritical.len() == 3;
        all &= ok;
        shapes.push(graph_shape(&v.report.graph));
        lines.push(format!("{case}{}", if ok { "" } else { " FAIL" }));
    }
    shapes.sort();
    shapes.dedup();
    all &= shapes.len() == 7;
    outcome(all, format!("{} verified, {} distinct graphs", lines.join(" "), shapes.len()))
}

fn criterion_6() -> Outcome {
    let h = h_exact();
    let q = |n: i64| KPoint::Finite(Rational::from(n));
    let orbit = h.eval(&q(2)) == q(0)
        && h.eval(&q(0)) == KPoint::Infinity
        && h.eval(&KPoint::Infinity) == q(1)
        && h.eval(&q(1)) == q(1);
    let p = [q(0), q(1), KPoint::Infinity];
    let ph = postcritical_report(&h, &p);
    let ph_ok = ph.certificate.verdict() && ph.postcritical.len() == 3;
    let mut iterates = Vec::new();
    for n in 2..=4 {
        let hn = h_iterate_exact(n);
        iterates.push(hn.critical_values_within(&p) && p.iter().all(|v| hn.is_critical_value(v)));
    }
    let all = orbit && ph_ok && iterates.iter().all(|&b| b);
    outcome(
        all,
        format!("orbit 2↦0↦∞↦1↦1 {orbit}; P(h) = {{0,1,∞}} {ph_ok}; V(hⁿ) = {{0,1,∞}} for n = 2,3,4: {iterates:?}"),
    )
}

fn hpoly_ok(x: &FiniteAlgebraicSet) -> Result<(), String> {
    let r = h_poly_for_set(x).map_err(|e| e.to_string())?;
    if !r.is_exact() {
        return Err("numeric path".into());
    }
    if !(r.certificate.verdict() && r.certificate.claims.iter().all(|c| c.is_exact())) {
        return Err(format!("{:?}", r.certificate.claims));
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let third = Rational::from((1, 3));
    let x = FiniteAlgebraicSet::from_points(&[third.clone()], false).unwrap();
    let base = h_poly_for_set(&x).map(|r| {
        let MapCoeffs::Exact(h) = &r.h else { return false };
        let z = Rational::new();
        let b = Rational::from((4, 3));
        *h == RatPoly::from_ints(&[0, 9, -18, 9])
            && r.a == HPolyPoint::Rational(z.clone())
            && r.b == HPolyPoint::Rational(b.clone())
            && h.eval(&z) == z
            && h.eval(&b) == b
            && h.eval(&third) == b
            && r.certificate.verdict()
    });
    let base_ok = base == Ok(true);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut passed = 0;
    let mut failures = Vec::new();
    for _ in 0..50 {
        let pts = random_set(&mut rng, 2, 10);
        let x = FiniteAlgebraicSet::from_points(&pts, false).unwrap();
        match hpoly_ok(&x) {
            Ok(()) => passed += 1,
            Err(e) => failures.push(format!("{pts:?}: {e}")),
        }
    }
    outcome(
        base_ok && passed == 50,
        format!(
            "X = {{1/3}} {}; random singletons/pairs {passed}/50 {}",
            if base_ok { "ok" } else { "FAIL" },
            failures.first().cloned().unwrap_or_default()
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 7] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
    ];
    let handles: Vec<_> = criteria
        .into_iter()
        .map(|(i, f)| (i, std::thread::spawn(f)))
        .collect();
    let mut failed = 0;
    for (i, h) in handles {
        let o = h.join().unwrap_or_else(|_| outcome(false, "panicked"));
        if !o.pass {
            failed += 1;
        }
        println!("criterion {i}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} of 7 criteria failed");
        std::process::exit(1);
    }
}
