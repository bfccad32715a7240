//! Partitions, passports and their extensions; realization as permutation
//! constellations, mating of polynomial data, and dessins d'enfants.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A multiset of positive integers, stored in decreasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(1^d)`.
    pub fn trivial(d: u32) -> Self {
        Partition(vec![1; d as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `|P|`, the number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every part equals 1 (the empty partition included).
    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    /// `P + P'`, the multiset union.
    pub fn plus(&self, other: &[u32]) -> Partition {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    /// `self = other + P'` for some partition `P'`.
    pub fn extends(&self, other: &Partition) -> bool {
        let mut have: BTreeMap<u32, i64> = BTreeMap::new();
        for &p in &self.0 {
            *have.entry(p).or_default() += 1;
        }
        for &p in &other.0 {
            let e = have.entry(p).or_default();
            *e -= 1;
            if *e < 0 {
                return false;
            }
        }
        true
    }

    /// `d - |P|`.
    pub fn branching(&self) -> u32 {
        self.degree() - self.len() as u32
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Partitions of a common degree, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Passport {
    partitions: Vec<Partition>,
    degree: u32,
}

impl Passport {
    pub fn new(partitions: Vec<Partition>) -> Result<Self> {
        let Some(first) = partitions.first() else {
            return Err(Error::InvalidInput("empty passport".into()));
        };
        let degree = first.degree();
        if let Some(p) = partitions.iter().find(|p| p.degree() != degree) {
            return Err(Error::InvalidInput(format!(
                "partition {p} has degree {} but {first} has degree {degree}",
                p.degree()
            )));
        }
        Ok(Passport { partitions, degree })
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// No partition equals `(1^d)`.
    pub fn is_strict(&self) -> bool {
        self.partitions.iter().all(|p| !p.is_trivial())
    }

    /// `c = Σ (d - |P_i|)`.
    pub fn c_value(&self) -> u32 {
        c_value(&self.partitions)
    }

    pub fn is_polynomial(&self) -> bool {
        is_polynomial_passport(self)
    }

    /// Some ordering of `self` extends `other` entrywise.
    pub fn extends(&self, other: &[Partition]) -> bool {
        collection_extends(&self.partitions, other)
    }
}

impl fmt::Display for Passport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.partitions.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

pub fn c_value(parts: &[Partition]) -> u32 {
    parts.iter().map(Partition::branching).sum()
}

pub fn is_polynomial_passport(p: &Passport) -> bool {
    p.degree() >= 1 && p.c_value() == p.degree() - 1
}

/// Bipartite matching: `q` has the same length as `p` and some ordering of
/// it extends `p` entrywise.
pub fn collection_extends(q: &[Partition], p: &[Partition]) -> bool {
    if q.len() != p.len() {
        return false;
    }
    let n = p.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(
        i: usize,
        q: &[Partition],
        p: &[Partition],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..q.len() {
            if seen[j] || !q[j].extends(&p[i]) {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, q, p, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    (0..n).all(|i| augment(i, q, p, &mut vec![false; n], &mut owner))
}

/// Extend to a polynomial passport: equalize degrees with single nontrivial
/// parts, pad every partition with `(1)` until `d - 1 ≥ c`, then apply
/// `P_{1,2} + (3)`, `P_{i≥3} + (1,1,1)` until `c = d - 1`.
pub fn extend_to_polynomial_passport(parts: &[Partition]) -> Result<Passport> {
    if parts.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least two partitions, got {}",
            parts.len()
        )));
    }
    let mut d = parts.iter().map(Partition::degree).max().unwrap_or(0);
    let feasible = |d: u32| {
        parts.iter().all(|p| {
            let gap = d - p.degree();
            !p.is_trivial() || gap >= 2
        })
    };
    while !feasible(d) {
        d += 1;
    }
    let mut q: Vec<Partition> = parts
        .iter()
        .map(|p| {
            let gap = d - p.degree();
            if gap == 0 {
                p.clone()
            } else {
                p.plus(&[gap])
            }
        })
        .collect();

    while d - 1 < c_value(&q) {
        q = q.iter().map(|p| p.plus(&[1])).collect();
        d += 1;
    }
    while c_value(&q) < d - 1 {
        q = q
            .iter()
            .enumerate()
            .map(|(i, p)| if i < 2 { p.plus(&[3]) } else { p.plus(&[1, 1, 1]) })
            .collect();
        d += 3;
    }
    Passport::new(q)
}

/// From a polynomial passport of degree `d` to one of degree `d + k`,
/// `k ≥ 2`: `P₁ + (k)`, `P₂ + (2, 1^{k-2})`, `P_i + (1^k)`.
pub fn bump_polynomial_passport(p: &Passport, k: u32) -> Result<Passport> {
    if k < 2 || p.len() < 2 {
        return Err(Error::InvalidInput("degree bump needs k ≥ 2 and two partitions".into()));
    }
    let mut second = vec![2];
    second.extend(std::iter::repeat_n(1, k as usize - 2));
    let q = p
        .partitions()
        .iter()
        .enumerate()
        .map(|(i, part)| match i {
            0 => part.plus(&[k]),
            1 => part.plus(&second),
            _ => part.plus(&vec![1; k as usize]),
        })
        .collect();
    Passport::new(q)
}

/// Permutation of `{0, …, n-1}` as an image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// `0 → 1 → … → n-1 → 0`.
    pub fn long_cycle(n: usize) -> Self {
        Perm((0..n).map(|i| (i + 1) % n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x >= n || used[x] {
                    return Err(Error::InvalidInput("cycles overlap or leave the range".into()));
                }
                used[x] = true;
                img[x] = c[(i + 1) % c.len()];
            }
        }
        Ok(Perm(img))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `x ↦ t(self(t⁻¹(x)))`, relabelling through `t`.
    pub fn relabel(&self, t: &Perm) -> Perm {
        t.inverse().then(self).then(t)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Cycles including fixed points, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.0[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.0[x];
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycles().iter().map(|c| c.len() as u32).collect())
            .expect("cycle lengths are positive")
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

/// `⟨perms⟩` acts transitively on `{0, …, n-1}`.
pub fn is_transitive(n: usize, perms: &[&Perm]) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            for y in [p.apply(x), p.inverse().apply(x)] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
    }
    count == n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constellation {
    pub degree: usize,
    pub perms: Vec<Perm>,
}

impl Constellation {
    /// `σ₁` first, then `σ₂`, ….
    pub fn product(&self) -> Perm {
        self.perms
            .iter()
            .fold(Perm::identity(self.degree), |acc, p| acc.then(p))
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive(self.degree, &self.perms.iter().collect::<Vec<_>>())
    }

    pub fn passport(&self) -> Passport {
        Passport::new(self.perms.iter().map(Perm::cycle_type).collect())
            .expect("permutations share a degree")
    }

    /// Genus from Riemann-Hurwitz, `2 - 2g = 2d - c`, for a constellation
    /// with identity product.
    pub fn genus_riemann_hurwitz(&self) -> i64 {
        let d = self.degree as i64;
        let c = self.passport().c_value() as i64;
        (2 - 2 * d + c) / 2
    }

    /// Genus from cycle counts, `2 - 2g = Σ #cycles(σ_i) - (n - 2) d`.
    pub fn genus_cycle_count(&self) -> i64 {
        let d = self.degree as i64;
        let n = self.perms.len() as i64;
        let cyc: i64 = self.perms.iter().map(|p| p.cycle_count() as i64).sum();
        (2 - cyc + (n - 2) * d) / 2
    }

    /// Product identity, transitive, genus 0 in both forms.
    pub fn is_rational(&self) -> bool {
        self.product().is_identity()
            && self.is_transitive()
            && self.genus_riemann_hurwitz() == 0
            && self.genus_cycle_count() == 0
    }

    /// Product is the standard `d`-cycle and `c = d - 1`.
    pub fn is_polynomial(&self) -> bool {
        self.product() == Perm::long_cycle(self.degree) && self.passport().is_polynomial()
    }
}

/// Polygons (cycles) attached one at a time to a growing hypertree, each
/// sharing one vertex with it, never two polygons of one color at a vertex.
struct Cactus {
    /// `colors_at[v]` has bit `i` set when color `i` covers `v`.
    colors_at: Vec<u64>,
    /// `(color, vertices)`.
    polygons: Vec<(usize, Vec<usize>)>,
}

impl Cactus {
    fn attach(&mut self, color: usize, size: u32, at: usize) {
        let mut verts = vec![at];
        self.colors_at[at] |= 1 << color;
        for _ in 1..size {
            verts.push(self.colors_at.len());
            self.colors_at.push(1 << color);
        }
        self.polygons.push((color, verts));
    }

    fn detach(&mut self, size: u32) {
        let (color, verts) = self.polygons.pop().expect("attached polygon");
        self.colors_at.truncate(self.colors_at.len() - (size as usize - 1));
        self.colors_at[verts[0]] &= !(1 << color);
    }

    fn lacking(&self, color: usize) -> usize {
        self.colors_at.iter().filter(|&&m| m & (1 << color) == 0).count()
    }
}

fn grow(cactus: &mut Cactus, remaining: &mut Vec<Vec<u32>>, nodes: &mut usize) -> bool {
    if remaining.iter().all(Vec::is_empty) {
        return true;
    }
    *nodes += 1;
    if *nodes > 100_000 {
        return false;
    }
    // colors with the most free vertices first
    let mut order: Vec<usize> = (0..remaining.len())
        .filter(|&i| !remaining[i].is_empty())
        .collect();
    order.sort_by_key(|&i| std::cmp::Reverse((cactus.lacking(i), remaining[i][0])));
    for color in order {
        // a color can never run out of free vertices it needs later
        let size = remaining[color].remove(0);
        let at = (0..cactus.colors_at.len()).rev().find(|&v| cactus.colors_at[v] & (1 << color) == 0);
        if let Some(at) = at {
            cactus.attach(color, size, at);
            if grow(cactus, remaining, nodes) {
                return true;
            }
            cactus.detach(size);
        }
        remaining[color].insert(0, size);
    }
    false
}

/// Permutations with the passport's cycle types whose product is the
/// standard `d`-cycle.
pub fn realize_polynomial_constellation(p: &Passport) -> Result<Constellation> {
    if !p.is_polynomial() {
        return Err(Error::InvalidInput(format!("{p} is not a polynomial passport")));
    }
    if p.len() > 64 {
        return Err(Error::InvalidInput("at most 64 partitions".into()));
    }
    let d = p.degree() as usize;
    if d == 1 {
        return Ok(Constellation {
            degree: 1,
            perms: vec![Perm::identity(1); p.len()],
        });
    }
    // nontrivial parts per color, largest first
    let mut remaining: Vec<Vec<u32>> = p
        .partitions()
        .iter()
        .map(|q| q.parts().iter().copied().filter(|&x| x >= 2).collect())
        .collect();
    // start from the largest polygon of the color with most branching
    let first = (0..remaining.len())
        .filter(|&i| !remaining[i].is_empty())
        .max_by_key(|&i| (p.partitions()[i].branching(), std::cmp::Reverse(i)))
        .expect("c = d - 1 ≥ 1 gives a nontrivial part");
    let size = remaining[first].remove(0);
    let mut cactus = Cactus {
        colors_at: vec![0],
        polygons: Vec::new(),
    };
    cactus.attach(first, size, 0);
    let mut nodes = 0;
    if !grow(&mut cactus, &mut remaining, &mut nodes) {
        return Err(Error::SearchExhausted(format!(
            "no cactus for {p} after {nodes} nodes"
        )));
    }
    debug_assert_eq!(cactus.colors_at.len(), d);

    let mut cycles: Vec<Vec<Vec<usize>>> = vec![Vec::new(); p.len()];
    for (color, verts) in &cactus.polygons {
        cycles[*color].push(verts.clone());
    }
    let perms: Vec<Perm> = cycles
        .iter()
        .map(|c| Perm::from_cycles(d, c))
        .collect::<Result<_>>()?;
    let raw = Constellation { degree: d, perms };
    // a hypertree of cycles multiplies to a d-cycle in any order; relabel
    // along it to reach the standard one
    let gamma = raw.product();
    let mut t = vec![0; d];
    let mut x = 0;
    for k in 0..d {
        t[x] = k;
        x = gamma.apply(x);
    }
    let t = Perm::from_images(t)?;
    let out = Constellation {
        degree: d,
        perms: raw.perms.iter().map(|s| s.relabel(&t)).collect(),
    };
    if !out.is_polynomial() || out.passport() != *p {
        return Err(Error::SearchExhausted(format!("realization of {p} failed verification")));
    }
    Ok(out)
}

/// `(σ₁, …, σ_k, τ_m⁻¹, …, τ₁⁻¹)`: two polynomial constellations glued along
/// the circle at infinity.
pub fn mate(a: &Constellation, b: &Constellation) -> Result<Constellation> {
    if a.degree != b.degree {
        return Err(Error::InvalidInput(format!(
            "degrees differ: {} and {}",
            a.degree, b.degree
        )));
    }
    let cycle = Perm::long_cycle(a.degree);
    if a.product() != cycle || b.product() != cycle {
        return Err(Error::InvalidInput("mating needs products equal to the standard cycle".into()));
    }
    let mut perms = a.perms.clone();
    perms.extend(b.perms.iter().rev().map(Perm::inverse));
    Ok(Constellation {
        degree: a.degree,
        perms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterKind {
    White,
    Black,
    Face,
}

/// A vertex or face whose valence the assembly must preserve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtectedCenter {
    pub kind: CenterKind,
    /// An edge on the vertex or face.
    pub edge: usize,
    pub valence: u32,
}

/// Bicolored plane graph on edges `0..d`: `σ₀` rotates edges around white
/// vertices, `σ₁` around black ones; faces are cycles of `σ₀` then `σ₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dessin {
    pub sigma0: Perm,
    pub sigma1: Perm,
    pub protected: Vec<ProtectedCenter>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DessinInvariants {
    pub genus: i64,
    pub connected: bool,
    /// White, black and face cycle types.
    pub passport: [Partition; 3],
}

impl Dessin {
    pub fn degree(&self) -> usize {
        self.sigma0.len()
    }

    pub fn faces(&self) -> Perm {
        self.sigma0.then(&self.sigma1)
    }

    /// `(σ₀, σ₁, σ_∞)` with `σ_∞ = (σ₀σ₁)⁻¹`, product identity.
    pub fn constellation(&self) -> Constellation {
        Constellation {
            degree: self.degree(),
            perms: vec![self.sigma0.clone(), self.sigma1.clone(), self.faces().inverse()],
        }
    }

    fn cycle_len(&self, kind: CenterKind, edge: usize) -> u32 {
        let p = match kind {
            CenterKind::White => self.sigma0.clone(),
            CenterKind::Black => self.sigma1.clone(),
            CenterKind::Face => self.faces(),
        };
        let mut n = 1;
        let mut x = p.apply(edge);
        while x != edge {
            n += 1;
            x = p.apply(x);
        }
        n
    }

    /// Every protected center still has its recorded valence.
    pub fn centers_intact(&self) -> bool {
        self.protected
            .iter()
            .all(|c| self.cycle_len(c.kind, c.edge) == c.valence)
    }
}

pub fn dessin_invariants(d: &Dessin) -> DessinInvariants {
    let n = d.degree() as i64;
    let faces = d.faces();
    let v = (d.sigma0.cycle_count() + d.sigma1.cycle_count()) as i64;
    let f = faces.cycle_count() as i64;
    DessinInvariants {
        genus: (2 - (v - n + f)) / 2,
        connected: is_transitive(d.degree(), &[&d.sigma0, &d.sigma1]),
        passport: [d.sigma0.cycle_type(), d.sigma1.cycle_type(), faces.cycle_type()],
    }
}

/// Model dessins: `z^m` (white star), `z^m + 1` (black star) and
/// `(z^m + z^{-m} + 2)/4` (a `2m`-gon).
pub fn model_dessin(kind: CenterKind, m: usize) -> Dessin {
    match kind {
        CenterKind::White => Dessin {
            sigma0: Perm::long_cycle(m),
            sigma1: Perm::identity(m),
            protected: vec![ProtectedCenter {
                kind,
                edge: 0,
                valence: m as u32,
            }],
        },
        CenterKind::Black => Dessin {
            sigma0: Perm::identity(m),
            sigma1: Perm::long_cycle(m),
            protected: vec![ProtectedCenter {
                kind,
                edge: 0,
                valence: m as u32,
            }],
        },
        CenterKind::Face => {
            let n = 2 * m;
            let s0: Vec<Vec<usize>> = (0..m).map(|j| vec![2 * j, 2 * j + 1]).collect();
            let s1: Vec<Vec<usize>> = (0..m).map(|j| vec![2 * j + 1, (2 * j + 2) % n]).collect();
            Dessin {
                sigma0: Perm::from_cycles(n, &s0).expect("disjoint transpositions"),
                sigma1: Perm::from_cycles(n, &s1).expect("disjoint transpositions"),
                // the face through edge 1 stays untouched by attachments at
                // the corner after edge 0
                protected: vec![ProtectedCenter {
                    kind,
                    edge: 1,
                    valence: m as u32,
                }],
            }
        }
    }
}

/// Disjoint union, relabelling the second dessin's edges after the first.
fn disjoint_union(a: &Dessin, b: &Dessin) -> Dessin {
    let off = a.degree();
    let shift = |p: &Perm, q: &Perm| {
        let mut img = p.images().to_vec();
        img.extend(q.images().iter().map(|x| x + off));
        Perm(img)
    };
    let mut protected = a.protected.clone();
    protected.extend(b.protected.iter().map(|c| ProtectedCenter {
        edge: c.edge + off,
        ..c.clone()
    }));
    Dessin {
        sigma0: shift(&a.sigma0, &b.sigma0),
        sigma1: shift(&a.sigma1, &b.sigma1),
        protected,
    }
}

/// Insert `new` right after `after` in the rotation `p`.
fn insert_after(p: &mut Perm, after: usize, new: usize) {
    let next = p.0[after];
    p.0[after] = new;
    p.0[new] = next;
}

/// Add one edge whose white end sits after `white_after` in `σ₀` and whose
/// black end sits after `black_after` in `σ₁`.
fn add_edge(d: &mut Dessin, white_after: usize, black_after: usize) -> usize {
    let e = d.degree();
    d.sigma0.0.push(e);
    d.sigma1.0.push(e);
    insert_after(&mut d.sigma0, white_after, e);
    insert_after(&mut d.sigma1, black_after, e);
    e
}

/// Dessin whose white, black and face types extend `p0`, `p1`, `pinf`:
/// one model per part, each bridged to a central edge `[b, w]` away from
/// its center. Trivial inputs are first extended by `(2)`.
pub fn build_dessin(p0: &Partition, p1: &Partition, pinf: &Partition) -> Dessin {
    let fix = |p: &Partition| if p.is_trivial() { p.plus(&[2]) } else { p.clone() };
    let (p0, p1, pinf) = (fix(p0), fix(p1), fix(pinf));

    // hub edge 0: white vertex w and black vertex b
    let mut d = Dessin {
        sigma0: Perm::identity(1),
        sigma1: Perm::identity(1),
        protected: Vec::new(),
    };
    let hub = 0;
    for &m in p0.parts() {
        let off = d.degree();
        d = disjoint_union(&d, &model_dessin(CenterKind::White, m as usize));
        // black leaf of edge `off` to w
        add_edge(&mut d, hub, off);
    }
    for &m in p1.parts() {
        let off = d.degree();
        d = disjoint_union(&d, &model_dessin(CenterKind::Black, m as usize));
        add_edge(&mut d, off, hub);
    }
    for (j, &m) in pinf.parts().iter().enumerate() {
        let off = d.degree();
        d = disjoint_union(&d, &model_dessin(CenterKind::Face, m as usize));
        // the white corner after edge `off` and the black corner after
        // `off + 1` both lie on the face left open
        if j % 2 == 0 {
            add_edge(&mut d, off, hub);
        } else {
            add_edge(&mut d, hub, off + 1);
        }
    }
    d
}

/// Realized branch data for an extended passport.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalRealization {
    /// Mated polynomial constellations (four or more partitions).
    Mated {
        left: Passport,
        right: Passport,
        constellation: Constellation,
    },
    /// Dessin over `{0, 1, ∞}` (three partitions).
    Dessin(Dessin),
}

impl RationalRealization {
    pub fn constellation(&self) -> Constellation {
        match self {
            RationalRealization::Mated { constellation, .. } => constellation.clone(),
            RationalRealization::Dessin(d) => d.constellation(),
        }
    }

    pub fn passport(&self) -> Passport {
        match self {
            RationalRealization::Mated { constellation, .. } => constellation.passport(),
            RationalRealization::Dessin(d) => {
                let inv = dessin_invariants(d);
                Passport::new(inv.passport.to_vec()).expect("common degree")
            }
        }
    }
}

/// Bring two polynomial passports to a common degree with the `+k` moves;
/// a gap of 1 bumps the smaller side by 3 and the larger by 2.
pub fn match_degrees(a: &Passport, b: &Passport) -> Result<(Passport, Passport)> {
    let (da, db) = (a.degree(), b.degree());
    let (small, large, swapped) = if da <= db { (a, b, false) } else { (b, a, true) };
    let gap = large.degree() - small.degree();
    let (s, l) = match gap {
        0 => (small.clone(), large.clone()),
        1 => (bump_polynomial_passport(small, 3)?, bump_polynomial_passport(large, 2)?),
        g => (bump_polynomial_passport(small, g)?, large.clone()),
    };
    Ok(if swapped { (l, s) } else { (s, l) })
}

/// Extend to the passport of a rational map and realize it: mating for
/// four or more partitions, a dessin for three.
pub fn extend_to_rational_passport(parts: &[Partition]) -> Result<RationalRealization> {
    match parts.len() {
        n if n < 3 => Err(Error::InvalidInput(format!(
            "rational extension needs at least three partitions, got {n}"
        ))),
        3 => Ok(RationalRealization::Dessin(build_dessin(&parts[0], &parts[1], &parts[2]))),
        _ => {
            let left = extend_to_polynomial_passport(&parts[..2])?;
            let right = extend_to_polynomial_passport(&parts[2..])?;
            let (left, right) = match_degrees(&left, &right)?;
            let a = realize_polynomial_constellation(&left)?;
            let b = realize_polynomial_constellation(&right)?;
            let constellation = mate(&a, &b)?;
            Ok(RationalRealization::Mated {
                left,
                right,
                constellation,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn pp(v: &[&[u32]]) -> Passport {
        Passport::new(v.iter().map(|x| p(x)).collect()).unwrap()
    }

    #[test]
    fn c_values() {
        assert_eq!(pp(&[&[2], &[2]]).c_value(), 2);
        assert_eq!(pp(&[&[5]]).c_value(), 4);
        assert_eq!(pp(&[&[2, 1], &[2, 1]]).c_value(), 2);
        assert!(pp(&[&[2]]).is_polynomial());
        assert!(pp(&[&[2, 1], &[2, 1]]).is_polynomial());
        assert!(!pp(&[&[2], &[2]]).is_polynomial());
    }

    #[test]
    fn extension_relation() {
        assert!(p(&[7, 5, 3, 1]).extends(&p(&[7, 3])));
        assert!(!p(&[7, 5]).extends(&p(&[7, 3])));
        assert!(p(&[2]).extends(&Partition::empty()));
        assert!(collection_extends(&[p(&[2, 1]), p(&[3])], &[p(&[3]), p(&[2])]));
    }

    #[test]
    fn polynomial_extension_examples() {
        let q = extend_to_polynomial_passport(&[p(&[2]), p(&[2])]).unwrap();
        assert_eq!(q, pp(&[&[2, 1], &[2, 1]]));
        let q = extend_to_polynomial_passport(&[p(&[3]), p(&[2])]).unwrap();
        assert_eq!(q, pp(&[&[3, 1], &[2, 1, 1]]));
        let q = extend_to_polynomial_passport(&[p(&[2, 1, 1, 1]), p(&[2, 1, 1, 1])]).unwrap();
        assert_eq!((q.degree(), q.c_value()), (11, 10));
        assert!(extend_to_polynomial_passport(&[p(&[2])]).is_err());
        // trivial and empty inputs become nontrivial
        let q = extend_to_polynomial_passport(&[p(&[1]), Partition::empty(), p(&[3])]).unwrap();
        assert!(q.is_strict() && q.is_polynomial());
    }

    #[test]
    fn realization_examples() {
        for pass in [pp(&[&[2]]), pp(&[&[2, 1], &[2, 1]]), pp(&[&[3]])] {
            let c = realize_polynomial_constellation(&pass).unwrap();
            assert_eq!(c.product(), Perm::long_cycle(c.degree));
            assert_eq!(c.passport(), pass);
        }
        assert!(realize_polynomial_constellation(&pp(&[&[2], &[2]])).is_err());
    }

    #[test]
    fn mating_examples() {
        let a = realize_polynomial_constellation(&pp(&[&[2]])).unwrap();
        let m = mate(&a, &a).unwrap();
        assert!(m.is_rational());
        assert_eq!(m.passport(), pp(&[&[2], &[2]]));

        let a = realize_polynomial_constellation(&pp(&[&[3]])).unwrap();
        let b = realize_polynomial_constellation(&pp(&[&[2, 1], &[2, 1]])).unwrap();
        let m = mate(&a, &b).unwrap();
        assert!(m.is_rational());
        assert_eq!(m.perms.len(), 3);
        assert_eq!(m.passport(), pp(&[&[3], &[2, 1], &[2, 1]]));
    }

    #[test]
    fn dessin_models() {
        let star = model_dessin(CenterKind::White, 3);
        let inv = dessin_invariants(&star);
        assert_eq!(inv.genus, 0);
        assert!(inv.connected);
        assert_eq!(inv.passport, [p(&[3]), p(&[1, 1, 1]), p(&[3])]);

        let gon = model_dessin(CenterKind::Face, 2);
        assert_eq!(gon.sigma0, Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap());
        assert_eq!(gon.sigma1, Perm::from_cycles(4, &[vec![1, 2], vec![3, 0]]).unwrap());
        let inv = dessin_invariants(&gon);
        assert_eq!(inv.passport, [p(&[2, 2]), p(&[2, 2]), p(&[2, 2])]);
        assert_eq!(inv.genus, 0);

        let digon = model_dessin(CenterKind::Face, 1);
        assert_eq!(dessin_invariants(&digon).passport, [p(&[2]), p(&[2]), p(&[1, 1])]);

        let split = disjoint_union(&star, &star);
        assert!(!dessin_invariants(&split).connected);
    }

    #[test]
    fn dessin_assembly() {
        for (a, b, c) in [
            (p(&[2]), p(&[2]), p(&[2])),
            (p(&[2]), p(&[3]), p(&[4])),
            (p(&[4]), p(&[1]), p(&[1])),
            (p(&[3, 2, 1]), p(&[1, 1]), p(&[5, 2, 2])),
        ] {
            let d = build_dessin(&a, &b, &c);
            let inv = dessin_invariants(&d);
            assert!(inv.connected && inv.genus == 0, "{a} {b} {c}: {inv:?}");
            let fix = |p: &Partition| if p.is_trivial() { p.plus(&[2]) } else { p.clone() };
            assert!(inv.passport[0].extends(&fix(&a)));
            assert!(inv.passport[1].extends(&fix(&b)));
            assert!(inv.passport[2].extends(&fix(&c)));
            assert!(d.centers_intact());
            let cons = d.constellation();
            assert!(cons.is_rational());
            assert_eq!(cons.passport().c_value() as usize, 2 * d.degree() - 2);
        }
    }

    #[test]
    fn rational_extension_dispatch() {
        let four = [p(&[2]), p(&[2]), p(&[2]), p(&[2])];
        let r = extend_to_rational_passport(&four).unwrap();
        assert!(matches!(r, RationalRealization::Mated { .. }));
        let c = r.constellation();
        assert!(c.is_rational());
        assert!(r.passport().extends(&four));
        assert_eq!(r.passport().c_value() as usize, 2 * c.degree - 2);

        let three = [p(&[2]), p(&[3]), p(&[4])];
        let r = extend_to_rational_passport(&three).unwrap();
        assert!(matches!(r, RationalRealization::Dessin(_)));
        assert!(r.passport().extends(&three));
        assert!(extend_to_rational_passport(&[p(&[2]), p(&[2])]).is_err());
    }

    #[test]
    fn degree_matching() {
        let a = pp(&[&[2, 1], &[2, 1]]);
        let b = pp(&[&[2, 1, 1], &[2, 1, 1], &[2, 1, 1]]);
        let (x, y) = match_degrees(&a, &b).unwrap();
        assert_eq!(x.degree(), y.degree());
        assert!(x.is_polynomial() && y.is_polynomial());
        assert!(x.extends(a.partitions()) && y.extends(b.partitions()));
    }
}
