use std::cmp::Ordering;
use std::sync::OnceLock;

use adjlab_core::exactnum::ratio;
use adjlab_core::scenarios::irrational_context;
use adjlab_core::{Context, ExtReal};
use proptest::prelude::*;

fn ctx() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(irrational_context)
}

fn ext() -> impl Strategy<Value = ExtReal> {
    (-20i64..=20, 1i64..=12, -6i64..=6, 1i64..=6, -6i64..=6, 1i64..=6).prop_map(|(a, b, c, d, e, f)| {
        ctx()
            .value(ratio(a, b), [("sqrt2_half", ratio(c, d)), ("sqrt3_third", ratio(e, f))])
            .unwrap()
    })
}

fn approx(x: &ExtReal) -> f64 {
    let (lo, hi) = ctx().enclose(x).unwrap();
    let mid = (lo + hi) / ratio(2, 1);
    mid.numer().to_string().parse::<f64>().unwrap() / mid.denom().to_string().parse::<f64>().unwrap()
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn negation_and_zero(a in ext()) {
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &ExtReal::zero(), a.clone());
        prop_assert_eq!(-(-a.clone()), a);
    }

    #[test]
    fn scaling_distributes(a in ext(), b in ext(), n in -5i64..=5, d in 1i64..=5) {
        let q = ratio(n, d);
        prop_assert_eq!((&a + &b).scale(&q), &a.scale(&q) + &b.scale(&q));
    }

    #[test]
    fn compare_is_antisymmetric_and_translation_invariant(a in ext(), b in ext(), c in ext()) {
        let ab = ctx().compare(&a, &b).unwrap();
        prop_assert_eq!(ab, ctx().compare(&b, &a).unwrap().reverse());
        prop_assert_eq!(ab, ctx().compare(&(&a + &c), &(&b + &c)).unwrap());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
    }

    #[test]
    fn compare_agrees_with_floating_point_when_far_apart(a in ext(), b in ext()) {
        let (x, y) = (approx(&a), approx(&b));
        prop_assume!((x - y).abs() > 1e-6);
        prop_assert_eq!(ctx().compare(&a, &b).unwrap(), x.partial_cmp(&y).unwrap());
    }

    #[test]
    fn max_is_an_upper_bound(a in ext(), b in ext(), c in ext()) {
        let m = ctx().max([&a, &b, &c]).unwrap().unwrap();
        for v in [&a, &b, &c] {
            prop_assert!(ctx().le(v, &m).unwrap());
        }
        prop_assert!(m == a || m == b || m == c);
    }

    #[test]
    fn display_round_trips_through_rational_parse(n in -50i64..=50, d in 1i64..=50) {
        let v = ExtReal::ratio(n, d);
        let parsed = adjlab_core::exactnum::parse_rational(&v.to_string()).unwrap();
        prop_assert_eq!(ExtReal::rational(parsed), v);
    }
}

#[test]
fn generators_lie_in_their_declared_enclosures() {
    let c = irrational_context();
    let g = c.generator("sqrt2_half").unwrap();
    let two_g_sq_minus_one = (approx_with(&c, &g) * approx_with(&c, &g) * 2.0) - 1.0;
    assert!(two_g_sq_minus_one.abs() < 1e-9);
    let h = c.generator("sqrt3_third").unwrap();
    assert!((approx_with(&c, &h) - 3f64.sqrt() / 3.0).abs() < 1e-9);
}

fn approx_with(c: &Context, x: &ExtReal) -> f64 {
    // comparing against the midpoint forces the enclosure to shrink
    for _ in 0..40 {
        let (lo, hi) = c.enclose(x).unwrap();
        if &hi - &lo < ratio(1, 1_000_000_000_000) {
            break;
        }
        let probe = ExtReal::rational((lo + hi) / ratio(2, 1));
        let _ = c.compare(x, &probe);
    }
    let (lo, _) = c.enclose(x).unwrap();
    lo.numer().to_string().parse::<f64>().unwrap() / lo.denom().to_string().parse::<f64>().unwrap()
}
