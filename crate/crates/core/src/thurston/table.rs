//! The seven maps whose postcritical set has three points, one per
//! functional graph on three points.

use std::fmt;
use std::str::FromStr;

use rug::Rational;

use crate::certificate::{Certificate, Claim};
use crate::error::{Error, Result};
use crate::exact::field::{Field, KPoint, KPoly, QAlpha, RationalMap};
use crate::numeric::SpherePoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableCase {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TableCase {
    pub const ALL: [TableCase; 7] = [
        TableCase::A,
        TableCase::B,
        TableCase::C,
        TableCase::D,
        TableCase::E,
        TableCase::F,
        TableCase::G,
    ];

    pub fn formula(self) -> &'static str {
        match self {
            TableCase::A => "1 - 1/z^2",
            TableCase::B => "(z - α)^3/(z - 1 + α)^3, α^2 - α + 1 = 0",
            TableCase::C => "z^2(3 - 2z)",
            TableCase::D => "(1 - 2/z)^2",
            TableCase::E => "z^2 - 1",
            TableCase::F => "(2z - 1)^2/(4z(z - 1))",
            TableCase::G => "z^2 - 2",
        }
    }

    pub fn fixture(self) -> Fixture {
        let q = |n: i64| Rational::from(n);
        let rp = |c: &[i64]| KPoly::new(c.iter().map(|&n| q(n)).collect());
        let fin = |n: i64| KPoint::Finite(q(n));
        let map = |n: &[i64], d: &[i64]| RationalMap::new(rp(n), rp(d));
        let (f, set) = match self {
            TableCase::B => {
                let a = QAlpha::alpha();
                let lin = |c: QAlpha| KPoly::new(vec![c, QAlpha::one()]);
                let num = lin(-a.clone()).pow(3);
                let den = lin(a - QAlpha::one()).pow(3);
                let set = vec![
                    KPoint::Finite(QAlpha::zero()),
                    KPoint::Finite(QAlpha::one()),
                    KPoint::Infinity,
                ];
                return Fixture::Alpha(RationalMap::new(num, den), set);
            }
            TableCase::A => (map(&[-1, 0, 1], &[0, 0, 1]), vec![fin(0), fin(1), KPoint::Infinity]),
            TableCase::C => (map(&[0, 0, 3, -2], &[1]), vec![fin(0), fin(1), KPoint::Infinity]),
            TableCase::D => (map(&[4, -4, 1], &[0, 0, 1]), vec![fin(0), fin(1), KPoint::Infinity]),
            TableCase::E => (map(&[-1, 0, 1], &[1]), vec![fin(-1), fin(0), KPoint::Infinity]),
            TableCase::F => (map(&[1, -4, 4], &[0, -4, 4]), vec![fin(0), fin(1), KPoint::Infinity]),
            TableCase::G => (map(&[-2, 0, 1], &[1]), vec![fin(-2), fin(2), KPoint::Infinity]),
        };
        Fixture::Rational(f, set)
    }

    /// Expected graph on the listed postcritical points, by index.
    pub fn expected_graph(self) -> [usize; 3] {
        match self {
            TableCase::A => [2, 0, 1],
            TableCase::B => [1, 1, 1],
            TableCase::C => [0, 1, 2],
            TableCase::D => [2, 1, 1],
            TableCase::E => [1, 0, 2],
            TableCase::F => [2, 2, 1],
            TableCase::G => [1, 1, 2],
        }
    }
}

impl fmt::Display for TableCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TableCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TableCase::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown table case {s:?}; expected A..G")))
    }
}

/// A fixture map and its postcritical set.
#[derive(Clone, Debug)]
pub enum Fixture {
    Rational(RationalMap<Rational>, Vec<KPoint<Rational>>),
    Alpha(RationalMap<QAlpha>, Vec<KPoint<QAlpha>>),
}

impl Fixture {
    pub fn points(&self, prec: u32) -> Vec<SpherePoint> {
        match self {
            Fixture::Rational(_, s) => s.iter().map(|p| p.to_sphere(prec)).collect(),
            Fixture::Alpha(_, s) => s.iter().map(|p| p.to_sphere(prec)).collect(),
        }
    }

    pub fn eval(&self, z: &SpherePoint, prec: u32) -> SpherePoint {
        match self {
            Fixture::Rational(f, _) => f.eval_sphere(z, prec),
            Fixture::Alpha(f, _) => f.eval_sphere(z, prec),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Fixture::Rational(f, _) => f.degree(),
            Fixture::Alpha(f, _) => f.degree(),
        }
    }
}

/// Exact facts about a rational map against a candidate postcritical set.
#[derive(Clone, Debug)]
pub struct PostcriticalReport {
    pub degree: usize,
    /// Squarefree polynomial of finite critical points, as text.
    pub critical_point_poly: String,
    pub infinity_critical: bool,
    pub critical_values: Vec<String>,
    pub postcritical: Vec<String>,
    /// `graph[i] = j` when `f(P[i]) = P[j]`.
    pub graph: Vec<usize>,
    pub certificate: Certificate,
}

fn poly_text<K: Field>(p: &KPoly<K>) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let t = match i {
            0 => format!("({c})"),
            1 => format!("({c})z"),
            _ => format!("({c})z^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Check `P(f) = set` exactly: `V(f) ⊆ set`, `f(set) ⊆ set`, and every
/// point of `set` lies in the forward orbit of `V(f)`.
pub fn postcritical_report<K: Field>(f: &RationalMap<K>, set: &[KPoint<K>]) -> PostcriticalReport {
    let mut cert = Certificate::new("postcritical set");
    let within = f.critical_values_within(set);
    cert.push(Claim::exact("V(f) ⊆ P, by W | ∏ (N - pD)", within));

    let mut graph = Vec::new();
    let mut closed = true;
    for p in set {
        match set.iter().position(|q| *q == f.eval(p)) {
            Some(j) => graph.push(j),
            None => {
                closed = false;
                graph.push(usize::MAX);
            }
        }
    }
    cert.push(Claim::exact("f(P) ⊆ P", closed));

    let crit: Vec<usize> = (0..set.len()).filter(|&i| f.is_critical_value(&set[i])).collect();
    let mut reached = vec![false; set.len()];
    let mut frontier = crit.clone();
    while let Some(i) = frontier.pop() {
        if reached[i] {
            continue;
        }
        reached[i] = true;
        if let Some(&j) = graph.get(i).filter(|&&j| j != usize::MAX) {
            frontier.push(j);
        }
    }
    let all = reached.iter().all(|&r| r);
    cert.push(Claim::exact("P ⊆ orbit of V(f)", all && closed));

    PostcriticalReport {
        degree: f.degree(),
        critical_point_poly: poly_text(&f.critical_point_poly()),
        infinity_critical: f.infinity_critical_order() > 0,
        critical_values: crit.iter().map(|&i| set[i].to_string()).collect(),
        postcritical: set
            .iter()
            .zip(&reached)
            .filter(|(_, &r)| r)
            .map(|(p, _)| p.to_string())
            .collect(),
        graph,
        certificate: cert,
    }
}

#[derive(Clone, Debug)]
pub struct TableVerification {
    pub case: TableCase,
    pub formula: &'static str,
    /// `Q` or `Q(α)`.
    pub field: &'static str,
    pub report: PostcriticalReport,
    pub expected_graph: [usize; 3],
}

impl TableVerification {
    pub fn verdict(&self) -> bool {
        self.report.certificate.verdict()
            && self.report.postcritical.len() == 3
            && self.report.graph == self.expected_graph
    }

    /// Edges `p ↦ f(p)` as text.
    pub fn edges(&self) -> Vec<String> {
        let pts = &self.report.postcritical;
        self.report
            .graph
            .iter()
            .enumerate()
            .filter_map(|(i, &j)| Some(format!("{} -> {}", pts.get(i)?, pts.get(j)?)))
            .collect()
    }
}

pub fn verify_table_case(case: TableCase) -> TableVerification {
    let (report, field) = match case.fixture() {
        Fixture::Rational(f, set) => (postcritical_report(&f, &set), "Q"),
        Fixture::Alpha(f, set) => (postcritical_report(&f, &set), "Q(α)"),
    };
    let mut report = report;
    report.certificate.subject = format!("table case {case}: {}", case.formula());
    TableVerification {
        case,
        formula: case.formula(),
        field,
        report,
        expected_graph: case.expected_graph(),
    }
}

/// Canonical shape of a self-map of a three-point set: sorted cycle
/// lengths, then number of points off cycles, then whether a tail point maps
/// to another tail point.
pub fn graph_shape(g: &[usize]) -> (Vec<usize>, usize, bool) {
    let n = g.len();
    let on_cycle: Vec<bool> = (0..n)
        .map(|i| {
            let mut j = g[i];
            for _ in 0..n {
                if j == i {
                    return true;
                }
                j = g[j];
            }
            false
        })
        .collect();
    let mut cycles = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if on_cycle[i] && !seen[i] {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                len += 1;
                j = g[j];
            }
            cycles.push(len);
        }
    }
    cycles.sort_unstable();
    let tails = on_cycle.iter().filter(|&&c| !c).count();
    let chained = (0..n).any(|i| !on_cycle[i] && !on_cycle[g[i]]);
    (cycles, tails, chained)
}

/// Find a fixture whose graph matches `map` on three labels; returns the
/// case and `perm` with `fixture(P[perm[x]]) = P[perm[map[x]]]`.
pub fn match_fixture(map: &[usize]) -> Option<(TableCase, [usize; 3])> {
    if map.len() != 3 || map.iter().any(|&y| y >= 3) {
        return None;
    }
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for case in TableCase::ALL {
        let g = case.expected_graph();
        for p in PERMS {
            if (0..3).all(|x| g[p[x]] == p[map[x]]) {
                return Some((case, p));
            }
        }
    }
    None
}
