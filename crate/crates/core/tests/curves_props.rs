use adjlab_core::curves::{
    crepant_pullback, discriminant_mult, discriminant_mult_oracle, fiber_moduli, klt_over_point, lc_over_point,
    BranchData, FiberData,
};
use adjlab_core::scenarios::{d_grid, partitions, random_tower};
use adjlab_core::{Context, ExtReal};
use proptest::prelude::*;

fn fiber(ms: &[u32], ds: &[ExtReal]) -> FiberData {
    FiberData::new(ms.iter().zip(ds).map(|(m, d)| BranchData::new(*m, d.clone()).unwrap()).collect()).unwrap()
}

fn grid_fiber() -> impl Strategy<Value = FiberData> {
    (1u32..=6).prop_flat_map(|n| {
        let parts = partitions(n);
        (0..parts.len()).prop_flat_map(move |i| {
            let ms = parts[i].clone();
            let len = ms.len();
            prop::collection::vec(0usize..7, len).prop_map(move |idx| {
                let grid = d_grid();
                let ds: Vec<ExtReal> = idx.iter().map(|&k| grid[k].clone()).collect();
                fiber(&ms, &ds)
            })
        })
    })
}

proptest! {
    #[test]
    fn formula_matches_oracle(f in grid_fiber()) {
        let ctx = Context::rational();
        prop_assert_eq!(discriminant_mult(&f, &ctx).unwrap(), discriminant_mult_oracle(&f, &ctx).unwrap());
    }

    #[test]
    fn semiadditivity(f in grid_fiber(), n in -4i64..=0, d in 1i64..=4) {
        let ctx = Context::rational();
        let t = ExtReal::ratio(n, d);
        let shifted = f.shifted(&t).unwrap();
        prop_assert_eq!(discriminant_mult(&shifted, &ctx).unwrap(), &discriminant_mult(&f, &ctx).unwrap() + &t);
    }

    #[test]
    fn some_moduli_branch_vanishes(f in grid_fiber()) {
        let ctx = Context::rational();
        let (_, mods) = fiber_moduli(&f, &ctx).unwrap();
        prop_assert!(mods.iter().any(|m| m.is_zero()));
        for m in &mods {
            prop_assert!(ctx.le(m, &ExtReal::zero()).unwrap());
        }
    }

    #[test]
    fn lc_and_klt_are_read_off_the_discriminant(ms in prop::collection::vec(1u32..=4, 1..4), seed in 0i64..100) {
        let ctx = Context::rational();
        let ds: Vec<ExtReal> = ms.iter().enumerate().map(|(i, _)| ExtReal::ratio((seed * 7 + i as i64 * 5) % 9, 6)).collect();
        let f = fiber(&ms, &ds);
        let d = discriminant_mult(&f, &ctx).unwrap();
        prop_assert_eq!(lc_over_point(&f, &ctx).unwrap(), ctx.le(&d, &ExtReal::one()).unwrap());
        prop_assert_eq!(klt_over_point(&f, &ctx).unwrap(), ctx.lt(&d, &ExtReal::one()).unwrap());
    }

    #[test]
    fn crepant_round_trip(n in 1u32..=6, k in 0usize..7) {
        let ctx = Context::rational();
        let q = d_grid()[k].clone();
        for ms in partitions(n) {
            let f = crepant_pullback(&ms, &q).unwrap();
            prop_assert_eq!(discriminant_mult(&f, &ctx).unwrap(), q.clone());
            let (_, mods) = fiber_moduli(&f, &ctx).unwrap();
            prop_assert!(mods.iter().all(|m| m.is_zero()));
        }
    }

    #[test]
    fn random_towers_are_transitive_and_additive(seed in 0u64..10_000) {
        let ctx = Context::rational();
        let s = random_tower(seed, 4);
        let adjlab_core::scenarios::Payload::Tower(t) = &s.payload else { unreachable!() };
        prop_assert!(t.transitivity_check(&ctx).unwrap().holds);
        prop_assert!(t.moduli_additivity_check(&ctx).unwrap().holds);
    }
}

#[test]
fn boundary_free_fibres_give_the_ramification_ratio() {
    let ctx = Context::rational();
    for m in 1..=6u32 {
        let f = fiber(&[m], &[ExtReal::zero()]);
        assert_eq!(discriminant_mult(&f, &ctx).unwrap(), ExtReal::ratio(i64::from(m) - 1, i64::from(m)));
    }
}
