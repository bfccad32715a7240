use pcf_core::passports::*;
use proptest::prelude::*;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=6, 0..=4).prop_map(|v| Partition::new(v).unwrap())
}

fn collection(min: usize) -> impl Strategy<Value = Vec<Partition>> {
    prop::collection::vec(partition(), min..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polynomial_extension_is_polynomial(parts in collection(2)) {
        let q = extend_to_polynomial_passport(&parts).unwrap();
        prop_assert!(q.is_strict());
        prop_assert_eq!(q.c_value(), q.degree() - 1);
        prop_assert!(q.extends(&parts));
        prop_assert_eq!(q.len(), parts.len());
    }

    #[test]
    fn polynomial_realization(parts in collection(2)) {
        let q = extend_to_polynomial_passport(&parts).unwrap();
        let c = realize_polynomial_constellation(&q).unwrap();
        prop_assert_eq!(c.product(), Perm::long_cycle(c.degree));
        prop_assert_eq!(c.passport(), q);
        prop_assert!(c.is_transitive());
    }

    #[test]
    fn rational_extension_is_genus_zero(parts in collection(3)) {
        let r = extend_to_rational_passport(&parts).unwrap();
        let c = r.constellation();
        prop_assert!(c.product().is_identity());
        prop_assert!(c.is_transitive());
        prop_assert_eq!(c.genus_riemann_hurwitz(), 0);
        prop_assert_eq!(c.genus_cycle_count(), 0);
        prop_assert_eq!(r.passport().c_value() as usize, 2 * c.degree - 2);
        prop_assert!(r.passport().extends(&parts));
        if let RationalRealization::Dessin(d) = &r {
            prop_assert!(d.centers_intact());
            prop_assert!(dessin_invariants(d).connected);
        }
        if let RationalRealization::Mated { left, right, constellation } = &r {
            let mut both = left.partitions().to_vec();
            both.extend(right.partitions().iter().cloned());
            // passports are unordered; mating lists the second one reversed
            let mut got = constellation.passport().partitions().to_vec();
            both.sort();
            got.sort();
            prop_assert_eq!(got, both);
        }
    }

    #[test]
    fn extension_relation_is_transitive(a in partition(), x in prop::collection::vec(1u32..=6, 0..3), y in prop::collection::vec(1u32..=6, 0..3)) {
        let b = a.plus(&x);
        let c = b.plus(&y);
        prop_assert!(a.extends(&a));
        prop_assert!(b.extends(&a));
        prop_assert!(c.extends(&a));
    }
}
