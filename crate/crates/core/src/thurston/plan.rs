//! Combinatorial planning for prescribed local degrees at marked points.

use super::MarkedSelfMap;
use crate::passports::{extend_to_rational_passport, Partition, Passport};

#[derive(Clone, Debug, PartialEq)]
pub enum PlanVerdict {
    /// Three labels: the moduli space is a point, a fixture applies.
    Fixture,
    /// Four labels, all multiplicities 1: the cubic family.
    CubicFamily,
    /// Five or more labels, all multiplicities 1: simple critical points.
    SimpleTemplate,
    /// A passport for `g` exists but no numerical template realizes it.
    PassportOnly,
}

#[derive(Clone, Debug)]
pub struct MultiplicityPlan {
    /// `P_x`: the multiplicities `M(y)` over `y ∈ F⁻¹(x)`.
    pub partitions: Vec<Partition>,
    /// `P'_x = P_x + (1)`.
    pub padded: Vec<Partition>,
    /// `Σ |P'_x|`, which equals `2|X|`.
    pub padded_count: usize,
    /// `Σ |P'_x| ≥ |X| + 3`.
    pub count_check: bool,
    /// A rational passport extending the `P'_x`, when one is produced.
    pub passport: Option<Passport>,
    /// Local degree requirements on the lifted points.
    pub requirements: Vec<String>,
    pub verdict: PlanVerdict,
}

impl MultiplicityPlan {
    pub fn is_realizable(&self) -> bool {
        self.verdict != PlanVerdict::PassportOnly
    }
}

pub fn multiplicity_plan(f: &MarkedSelfMap) -> MultiplicityPlan {
    let n = f.len();
    let mut fibers: Vec<Vec<u32>> = vec![Vec::new(); n];
    for y in 0..n {
        fibers[f.apply(y)].push(f.mults[y]);
    }
    let partitions: Vec<Partition> = fibers
        .into_iter()
        .map(|parts| Partition::new(parts).expect("multiplicities are positive"))
        .collect();
    let padded: Vec<Partition> = partitions.iter().map(|p| p.plus(&[1])).collect();
    let padded_count = padded.iter().map(Partition::len).sum();
    let requirements = (0..n)
        .filter(|&y| f.mults[y] > 1)
        .map(|y| format!("mult(g, ι({y})) = {} over label {}", f.mults[y], f.apply(y)))
        .collect();
    let simple = f.mults.iter().all(|&m| m == 1);
    let verdict = match (n, simple) {
        (3, _) if simple => PlanVerdict::Fixture,
        (4, true) => PlanVerdict::CubicFamily,
        (_, true) => PlanVerdict::SimpleTemplate,
        _ => PlanVerdict::PassportOnly,
    };
    let passport = extend_to_rational_passport(&padded).ok().map(|r| r.passport());
    MultiplicityPlan {
        partitions,
        padded,
        padded_count,
        count_check: padded_count >= n + 3,
        passport,
        requirements,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_map_on_three() {
        let f = MarkedSelfMap::constant(3, 0).unwrap();
        let p = multiplicity_plan(&f);
        assert_eq!(p.partitions[0].parts(), &[1, 1, 1]);
        assert!(p.partitions[1].is_empty());
        assert_eq!(p.padded[0].parts(), &[1, 1, 1, 1]);
        assert_eq!(p.padded[2].parts(), &[1]);
        assert_eq!(p.padded_count, 6);
        assert!(p.count_check);
        assert_eq!(p.verdict, PlanVerdict::Fixture);
    }

    #[test]
    fn raised_multiplicity() {
        let f = MarkedSelfMap::with_mults(vec![1, 2, 3, 0, 0], vec![2, 1, 1, 1, 1]).unwrap();
        let p = multiplicity_plan(&f);
        assert_eq!(p.partitions[1].parts(), &[2]);
        assert_eq!(p.partitions[0].parts(), &[1, 1]);
        assert_eq!(p.requirements.len(), 1);
        assert_eq!(p.verdict, PlanVerdict::PassportOnly);
        let q = p.passport.unwrap();
        assert!(q.extends(&p.padded));
        assert_eq!(q.c_value(), 2 * q.degree() - 2);
        let total: usize = p.partitions.iter().map(Partition::len).sum();
        assert_eq!(total, 5);
    }
}
