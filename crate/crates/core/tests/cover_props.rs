use std::collections::BTreeMap;

use adjlab_core::cover::{CoverState, Progress, StepKind};
use adjlab_core::scenarios::{denominator_lcm, example5_state, irrational_context, random_cover, Payload};
use adjlab_core::surface::{bdiv_equal, cartier_closure, BDivTrace};
use adjlab_core::{Context, ExtReal};
use proptest::prelude::*;

fn cover(seed: u64) -> CoverState {
    match random_cover(seed, 4, 5, 12).payload {
        Payload::Cover(s) => s,
        _ => unreachable!(),
    }
}

fn normalized(seed: u64, ctx: &Context) -> CoverState {
    cover(seed).normalize(ctx).unwrap().0
}

/// Same cover with a free point on the first divisor and an off-configuration point.
fn with_extra_points(state: &CoverState, ctx: &Context) -> CoverState {
    let mut base = state.base().clone();
    let first = base.divisor_ids().next().unwrap();
    base.add_free_point(first, "f").unwrap();
    base.add_off_point("o");
    let table: BTreeMap<_, _> = state
        .base()
        .divisor_ids()
        .map(|d| (d, state.sheet_mults(d).into_iter().map(Option::unwrap).collect()))
        .collect();
    CoverState::new(base, state.delta().clone(), state.sheets(), table, [], ctx).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn local_criterion_is_sound(seed in 0u64..1_000_000) {
        let ctx = Context::rational();
        let s = normalized(seed, &ctx);
        if s.bp_violations(&ctx).unwrap().is_empty() {
            for depth in 1..=4 {
                prop_assert_eq!(s.verify_bp(depth, false, &ctx).unwrap(), None);
            }
        } else {
            let d = s.verify_bp(1, false, &ctx).unwrap();
            prop_assert!(d.is_some_and(|d| d.level == 1));
        }
    }

    #[test]
    fn free_and_off_points_are_neutral(seed in 0u64..1_000_000) {
        let ctx = Context::rational();
        let s = with_extra_points(&normalized(seed, &ctx), &ctx);
        for name in ["f", "o"] {
            let p = s.base().point_by_name(name).unwrap();
            prop_assert!(s.bp_point_ok(p, &ctx).unwrap());
        }
    }

    #[test]
    fn normalization_shifts_by_the_closure(seed in 0u64..1_000_000) {
        let ctx = Context::rational();
        let before = cover(seed);
        let (after, _) = before.normalize(&ctx).unwrap();
        let shift = BDivTrace::from_fn(before.base(), |d| {
            after.ddiv_mult_at(adjlab_core::cover::Target::Divisor(d), &ctx).unwrap()
                - before.ddiv_mult_at(adjlab_core::cover::Target::Divisor(d), &ctx).unwrap()
        });
        let (expl, d0) = before.ddiv_bdiv(3, false, &ctx).unwrap();
        let (_, d1) = after.ddiv_bdiv(3, false, &ctx).unwrap();
        let expected = d0.try_add(&cartier_closure(&expl, &shift).unwrap()).unwrap();
        prop_assert_eq!(bdiv_equal(&d1, &expected, 3).unwrap(), None);
        prop_assert_eq!(before.bp_violations(&ctx).unwrap(), after.bp_violations(&ctx).unwrap());
    }

    #[test]
    fn every_step_makes_progress_and_saturation_is_neutral(seed in 0u64..1_000_000) {
        let ctx = Context::rational();
        let mut state = normalized(seed, &ctx);
        let mut steps = 0;
        while let Some(prev) = state.progress(&ctx).unwrap() {
            let (next, records) = state.step(&ctx).unwrap().unwrap();
            if records[0].kind == StepKind::Saturation {
                let (_, a) = state.ddiv_bdiv(3, false, &ctx).unwrap();
                let (_, b) = next.ddiv_bdiv(3, false, &ctx).unwrap();
                prop_assert_eq!(bdiv_equal(&a, &b, 3).unwrap(), None);
            }
            prop_assert!(Progress::improves_on(next.progress(&ctx).unwrap().as_ref(), &prev, &ctx).unwrap());
            state = next;
            steps += 1;
            prop_assert!(steps < 10_000);
        }
    }

    #[test]
    fn rational_runs_stabilize_and_keep_denominators(seed in 0u64..1_000_000) {
        let ctx = Context::rational();
        let s = cover(seed);
        let lcm = denominator_lcm(s.up_mults().map(|(_, v)| v)).unwrap();
        let run = s.stabilize(10_000, &ctx).unwrap();
        prop_assert!(run.is_stabilized());
        for (_, v) in run.state().up_mults() {
            prop_assert!((&lcm % v.denominator().unwrap()) == 0.into());
        }
    }

    #[test]
    fn example5_blowups_follow_euclid(a in 1i64..12, b in 1i64..12, den in 2i64..=12) {
        prop_assume!(a < den && b < den);
        let ctx = Context::rational();
        let (d1, d2) = (ExtReal::ratio(a, den), ExtReal::ratio(b, den));
        let one = ExtReal::one();
        let euclid = adjlab_core::cover::euclid_oracle(&(&one - &d1), &(&one - &d2), 100, &ctx).unwrap();
        let run = example5_state(d1, d2, &ctx).unwrap().stabilize(10_000, &ctx).unwrap();
        prop_assert!(run.is_stabilized());
        prop_assert_eq!(Some(run.blowups()), euclid.steps().map(|s| s + 1));
    }
}

#[test]
fn irrational_run_stays_in_the_affine_span() {
    let ctx = irrational_context();
    let d1 = ctx.generator("sqrt2_half").unwrap();
    let d2 = ctx.generator("sqrt3_third").unwrap();
    let run = example5_state(d1, d2, &ctx).unwrap().stabilize(50, &ctx).unwrap();
    assert!(!run.is_stabilized());
    let one = ExtReal::one();
    for (_, v) in run.state().up_mults() {
        assert!(v.coeffs().all(|(name, _)| name == "sqrt2_half" || name == "sqrt3_third"));
        if ctx.lt(v, &one).unwrap() {
            assert!(!v.is_rational(), "{v}");
        }
        if !v.is_rational() {
            assert_ne!(v, &one);
        }
    }
}
