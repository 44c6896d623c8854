use proptest::prelude::*;
use teich::hyptrig::Mat2;
use teich::mcg::MappingClass;
use teich::metrics::farey_family;
use teich::torus::{build_rep, curve_length, FnTorus, Slope};
use teich::{FnTorus64, Mat2f64};

fn point() -> impl Strategy<Value = FnTorus64> {
    (
        0.3..4.0_f64,
        -3.0..3.0_f64,
        prop_oneof![Just(0.0), Just(0.1), Just(1.0), 0.0..2.0_f64],
    )
        .prop_map(|(l, t, b)| FnTorus::new(l, t, b).unwrap())
}

fn slope() -> impl Strategy<Value = Slope> {
    (-12i64..=12, 0i64..=12)
        .prop_filter("primitive", |&(p, q)| gcd(p, q) == 1)
        .prop_map(|(p, q)| Slope::new(p, q).unwrap())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn unimodular() -> impl Strategy<Value = Mat2f64> {
    (0.5..2.0_f64, -1.0..1.0_f64, -1.0..1.0_f64).prop_map(|(a, b, c)| Mat2::new(a, b, c, (1.0 + b * c) / a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn trace_identity(x in point()) {
        let r = build_rep(&x).unwrap();
        let lhs = (r.gen_a * r.gen_b).trace() + (r.gen_a * r.gen_b.inverse()).trace();
        let rhs = r.gen_a.trace() * r.gen_b.trace();
        prop_assert!((lhs - rhs).abs() < 1e-9 * rhs.abs().max(1.0));
    }

    #[test]
    fn trace_conditions(x in point()) {
        prop_assert!(build_rep(&x).unwrap().residuals().max_abs() < 1e-9);
    }

    #[test]
    fn twist_shift_is_the_dehn_twist(x in point(), s in slope()) {
        let shifted = FnTorus::new(x.ell, x.twist + x.ell, x.boundary).unwrap();
        let t = MappingClass::twist();
        let a = curve_length(&shifted, s).unwrap();
        let b = curve_length(&x, t.act_slope(s).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn twist_shift_multiplies_by_a(x in point()) {
        let shifted = FnTorus::new(x.ell, x.twist + x.ell, x.boundary).unwrap();
        let r = build_rep(&x).unwrap();
        let moved = build_rep(&shifted).unwrap().gen_b.entries();
        let expected = (r.gen_a * r.gen_b).entries();
        for (u, v) in moved.iter().zip(expected) {
            prop_assert!((u - v).abs() < 1e-9 * v.abs().max(1.0));
        }
    }

    #[test]
    fn lengths_survive_conjugation(x in point(), n in unimodular(), s in slope()) {
        let r = build_rep(&x).unwrap();
        let a = r.holonomy().slope_length(s).unwrap();
        let b = r.conjugated(&n).holonomy().slope_length(s).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn vertical_length_is_convex_in_twist(ell in 0.3..4.0_f64, b in 0.0..2.0_f64, t in 0.05..3.0_f64) {
        let len = |tw: f64| curve_length(&FnTorus::new(ell, tw, b).unwrap(), Slope::vertical()).unwrap();
        let (l0, lp, lm) = (len(0.0), len(t), len(-t));
        prop_assert!(lp > l0 && lm > l0);
        prop_assert!((lp - lm).abs() < 1e-9 * lp);
        prop_assert!(len(t / 2.0) < (l0 + lp) / 2.0);
    }

    #[test]
    fn lengths_approach_the_cusp_monotonically(ell in 0.3..4.0_f64, tw in -3.0..3.0_f64, s in slope()) {
        let cusp = curve_length(&FnTorus::cusped(ell, tw).unwrap(), s).unwrap();
        let dev: Vec<f64> = [1.0, 0.5, 0.1, 0.01]
            .iter()
            .map(|&b| (curve_length(&FnTorus::new(ell, tw, b).unwrap(), s).unwrap() / cusp - 1.0).abs())
            .collect();
        for w in dev.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-15, "{dev:?}");
        }
    }
}

#[test]
fn square_point() {
    let r = build_rep(&FnTorus64::square()).unwrap();
    let (x, y, z) = r.trace_triple();
    let r2 = 2f64.sqrt() * 2.0;
    assert!((x.abs() - r2).abs() < 1e-9 && (y.abs() - r2).abs() < 1e-9 && (z.abs() - 4.0).abs() < 1e-9);
    assert!((FnTorus64::square().ell - 1.762747174039086).abs() < 1e-12);
}

#[test]
fn farey_lengths_are_symmetric_at_the_square() {
    let x = FnTorus64::square();
    for s in farey_family(6).unwrap().curves() {
        let swapped = Slope::new(s.q(), s.p()).unwrap();
        let a = curve_length(&x, s).unwrap();
        let b = curve_length(&x, swapped).unwrap();
        assert!((a - b).abs() < 1e-9 * a, "{s}: {a} vs {b}");
    }
}
