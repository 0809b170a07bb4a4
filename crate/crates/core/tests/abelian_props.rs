use proptest::prelude::*;

use recipro::abelian::AbelianGroup;

prop_compose! {
    fn small_group()(orders in prop::collection::vec(1u64..=12, 0..=4)) -> AbelianGroup {
        AbelianGroup::new(orders).unwrap()
    }
}

proptest! {
    #[test]
    fn closed_form_rank_matches_enumerated_two_torsion(g in small_group()) {
        let closed = g.rank2();
        prop_assert_eq!(closed.two_torsion_size, 1u64 << closed.rank);
        prop_assert_eq!(g.two_torsion_subgroup().unwrap().len() as u64, closed.two_torsion_size);
        prop_assert_eq!(g.rank2_enumerated().unwrap(), closed);
    }

    #[test]
    fn sum_of_all_elements_follows_the_rank(g in small_group()) {
        let sum = g.sum_all_elements().unwrap();
        if g.rank2().rank == 1 {
            prop_assert_eq!(sum.order(), 2);
            let torsion = g.two_torsion_subgroup().unwrap();
            let nontrivial: Vec<_> = torsion.into_iter().filter(|x| !x.is_identity()).collect();
            prop_assert_eq!(nontrivial, vec![sum]);
        } else {
            prop_assert!(sum.is_identity(), "sum {} in {}", sum, g);
        }
    }

    #[test]
    fn pairing_leaves_only_two_torsion(g in small_group()) {
        prop_assert_eq!(g.sum_all_elements().unwrap(), g.sum_two_torsion().unwrap());
    }

    #[test]
    fn element_orders_divide_group_order(g in small_group()) {
        for x in g.elements().unwrap() {
            prop_assert_eq!(g.order() % x.order(), 0);
            prop_assert!(x.scale(x.order()).is_identity());
        }
    }

    #[test]
    fn negation_is_additive_inverse(g in small_group(), seed in any::<u64>()) {
        let coords: Vec<u64> = g.factor_orders().iter().map(|n| seed % n).collect();
        let x = g.element(coords).unwrap();
        prop_assert!(x.add(&x.neg()).unwrap().is_identity());
    }
}

#[test]
fn enumeration_visits_every_element_once() {
    let g = AbelianGroup::new(vec![3, 4, 2]).unwrap();
    let all: Vec<_> = g.elements().unwrap().collect();
    assert_eq!(all.len() as u64, g.order());
    let unique: std::collections::HashSet<_> = all.iter().map(|x| x.coords().to_vec()).collect();
    assert_eq!(unique.len(), all.len());
    let mut sorted = all.iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>();
    sorted.sort();
    assert_eq!(
        sorted,
        all.iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>()
    );
}
