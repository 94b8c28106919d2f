use adjlab_core::scenarios::random_trace;
use adjlab_core::surface::{
    bdiv_equal, cartier_closure, codiscrepancy_on, codiscrepancy_recursive, codiscrepancy_total_transform, explore,
    BDivTrace,
};
use adjlab_core::ExtReal;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_routes_agree(seed in 0u64..1_000_000, depth in 1u32..=3, declared in any::<bool>()) {
        let (model, trace) = random_trace(seed);
        let expl = explore(&model, depth, declared);
        let a = codiscrepancy_recursive(&expl, &trace).unwrap();
        let b = codiscrepancy_total_transform(&expl, &trace).unwrap();
        prop_assert_eq!(bdiv_equal(&a, &b, depth).unwrap(), None);
    }

    #[test]
    fn codiscrepancy_is_closure_plus_that_of_zero(seed in 0u64..1_000_000) {
        let (model, trace) = random_trace(seed);
        let expl = explore(&model, 3, true);
        let zero = BDivTrace::from_fn(&model, |_| ExtReal::zero());
        let lhs = codiscrepancy_on(&expl, &trace).unwrap();
        let rhs = cartier_closure(&expl, &trace).unwrap().try_add(&codiscrepancy_on(&expl, &zero).unwrap()).unwrap();
        prop_assert_eq!(bdiv_equal(&lhs, &rhs, 3).unwrap(), None);
    }

    #[test]
    fn exploration_keeps_the_model_valid(seed in 0u64..1_000_000) {
        let (model, _) = random_trace(seed);
        let expl = explore(&model, 2, true);
        prop_assert!(expl.model().validate().is_ok());
        prop_assert!(expl.nodes().iter().all(|n| n.level >= 1 && n.level <= 2));
    }
}
