use nilorbit::linkpattern::{self, LinkPattern};
use nilorbit::matrixrep::{self, LieMatrix};
use nilorbit::orbits;
use nilorbit::{weyl, Family, Poly, RootSystemType, SignedPermutation};
use num::BigRational;
use proptest::prelude::*;

fn system() -> impl Strategy<Value = RootSystemType> {
    prop_oneof![
        (1usize..=6).prop_map(|n| RootSystemType::new(Family::A, n).unwrap()),
        (1usize..=4).prop_map(|n| RootSystemType::new(Family::B, n).unwrap()),
        (1usize..=4).prop_map(|n| RootSystemType::new(Family::C, n).unwrap()),
        (2usize..=4).prop_map(|n| RootSystemType::new(Family::D, n).unwrap()),
    ]
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-5i64..=5, 0..4)
        .prop_map(|c| Poly::from_coefficients(c.into_iter().map(|k| BigRational::from_integer(k.into())).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn involution_round_trip_and_length(t in system(), pick in any::<prop::sample::Index>()) {
        let all = weyl::involutions(t);
        let sigma = &all[pick.index(all.len())];
        let set = weyl::disjoint_reflection_decomposition(sigma).unwrap();
        prop_assert_eq!(&SignedPermutation::reflection_product(t.family(), sigma.size(), &set).unwrap(), sigma);
        let pattern = LinkPattern::of_set(&set, t).unwrap();
        if t.family() != Family::A {
            prop_assert!(pattern.is_symmetric());
            prop_assert!(linkpattern::halving_identity_check(&set, t).unwrap());
        }
        let formula = match t.family() {
            Family::A => linkpattern::length_formula_a(&set, t).unwrap(),
            Family::B | Family::C => linkpattern::length_formula_c(&set, t).unwrap(),
            Family::D => linkpattern::length_formula_d(&set, t).unwrap(),
        };
        prop_assert_eq!(formula, weyl::length(sigma, t).unwrap() as i64);
    }

    #[test]
    fn bruhat_order_respects_length(t in system(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        prop_assume!(t.rank() <= 4);
        let all = weyl::group_elements(t);
        let (u, w) = (&all[a.index(all.len())], &all[b.index(all.len())]);
        prop_assert!(weyl::bruhat_leq(u, u, t).unwrap());
        if weyl::bruhat_leq(u, w, t).unwrap() {
            prop_assert!(weyl::length(u, t).unwrap() <= weyl::length(w, t).unwrap());
            if u != w {
                prop_assert!(!weyl::bruhat_leq(w, u, t).unwrap());
            }
        }
    }

    #[test]
    fn poly_ring_laws(p in poly(), q in poly(), r in poly(), x in -4i64..=4) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert!((&p - &p).is_zero());
        let x = BigRational::from_integer(x.into());
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(p.compose(&q).eval(&x), p.eval(&q.eval(&x)));
    }

    #[test]
    fn nilradical_is_abelian(t in system(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        for id in t.abelian_nilradicals() {
            let roots = id.positive_roots();
            let x = matrixrep::root_vector(t, &roots[a.index(roots.len())]).unwrap();
            let y = matrixrep::root_vector(t, &roots[b.index(roots.len())]).unwrap();
            prop_assert!(x.in_algebra());
            prop_assert!(matrixrep::bracket(&x, &y).unwrap().is_zero());
        }
    }

    #[test]
    fn predicted_dimension_matches_rank(t in system(), pick in any::<prop::sample::Index>()) {
        prop_assume!(t.rank() <= 4);
        for id in t.abelian_nilradicals() {
            let labels = orbits::enumerate_orbits(&id);
            let label = &labels[pick.index(labels.len())];
            let x: LieMatrix = matrixrep::representative(t, label.roots()).unwrap();
            prop_assert_eq!(orbits::predicted_dimension(label).unwrap(), matrixrep::orbit_dimension(&x).unwrap());
        }
    }
}
