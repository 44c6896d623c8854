use proptest::prelude::*;
use teich::hyptrig::Mat2;
use teich::pantsnet::{build_glued_rep, build_pants_rep, FnPoint, PantsDecomp};
use teich::torus::{curve_length, slope_word, FnTorus, Slope};
use teich::word::Word;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn slopes_up_to(n: i64) -> Vec<Slope> {
    let mut out = vec![Slope::horizontal()];
    for q in 1..=n {
        for p in -n..=n {
            if gcd(p, q) == 1 {
                out.push(Slope::new(p, q).unwrap());
            }
        }
    }
    out
}

fn words(s: &[&str]) -> Vec<Word> {
    s.iter().map(|w| w.parse().unwrap()).collect()
}

fn torus_point(ell: f64, twist: f64, boundary: f64) -> FnPoint<f64> {
    FnPoint {
        lengths: vec![ell],
        twists: vec![twist],
        boundary: vec![boundary],
    }
}

#[test]
fn one_holed_torus_matches_torus_module() {
    let d = PantsDecomp::one_holed_torus();
    let to_glued = words(&["A", "C"]);
    for &(ell, twist, boundary) in &[
        (1.762747174039086, 0.0, 0.0),
        (1.0, 0.3, 0.0),
        (1.5, -0.7, 0.5),
        (0.8, 1.1, 2.0),
        (2.5, 4.0, 0.1),
    ] {
        let r = build_glued_rep(&d, &torus_point(ell, twist, boundary)).unwrap();
        let x = FnTorus::<f64>::new(ell, twist, boundary).unwrap();
        for s in slopes_up_to(8) {
            let want = curve_length(&x, s).unwrap();
            let got = r.word_length(&slope_word(s).substitute(&to_glued)).unwrap();
            assert!(
                (got - want).abs() < 1e-9,
                "{s} at ({ell}, {twist}, {boundary}): {got} vs {want}"
            );
        }
    }
}

#[test]
fn square_cusped_torus_vertical_curve() {
    let ell = 1.762747174039086;
    let r = build_glued_rep(&PantsDecomp::one_holed_torus(), &torus_point(ell, 0.0, 0.0)).unwrap();
    let len = r.word_length(&"C".parse().unwrap()).unwrap();
    assert!((len - ell).abs() < 1e-9);
    assert!(r.word_length(&"ACac".parse().unwrap()).unwrap() < 1e-9);
}

#[test]
fn genus_two_trace_conditions() {
    let d = PantsDecomp::genus_two();
    let x: FnPoint<f64> = FnPoint {
        lengths: vec![1.0; 3],
        twists: vec![0.0; 3],
        boundary: vec![],
    };
    let r = build_glued_rep(&d, &x).unwrap();
    assert_eq!(r.generators().len(), 6);
    // Three pants curves, each seen from both sides.
    let two_c = 2.0 * 0.5_f64.cosh();
    for w in ["A", "B", "ba", "C", "D", "dc"] {
        let tr = r
            .word_image(&w.parse().unwrap())
            .unwrap()
            .as_mat2()
            .unwrap()
            .trace()
            .abs();
        assert!((tr - two_c).abs() < 1e-9, "{w}: {tr}");
    }
    assert!(r.max_residual().unwrap() < 1e-9);
}

#[test]
fn genus_two_twist_shift_is_dehn_twist() {
    let d = PantsDecomp::genus_two();
    let x: FnPoint<f64> = FnPoint {
        lengths: vec![1.0, 1.3, 0.7],
        twists: vec![0.2, -0.4, 0.9],
        boundary: vec![],
    };
    let mut y = x.clone();
    y.twists[0] += x.lengths[0];
    let r = build_glued_rep(&d, &x).unwrap();
    let s = build_glued_rep(&d, &y).unwrap();
    let twist = words(&["A", "B", "ACa", "ADa", "Ea", "Fa"]);
    for w in ["CE", "ACEb", "DF", "ADeF", "BCeDf"] {
        let w: Word = w.parse().unwrap();
        let a = s.word_length(&w).unwrap();
        let b = r.word_length(&w.substitute(&twist)).unwrap();
        assert!((a - b).abs() < 1e-9, "{w}: {a} vs {b}");
    }
}

#[test]
fn torus_twist_shift_is_dehn_twist() {
    let d = PantsDecomp::one_holed_torus();
    let r = build_glued_rep(&d, &torus_point(1.2, 0.3, 0.4)).unwrap();
    let s = build_glued_rep(&d, &torus_point(1.2, 1.5, 0.4)).unwrap();
    let twist = words(&["A", "B", "AC"]);
    for w in ["C", "AC", "ACC", "aCCC"] {
        let w: Word = w.parse().unwrap();
        let a = s.word_length(&w).unwrap();
        let b = r.word_length(&w.substitute(&twist)).unwrap();
        assert!((a - b).abs() < 1e-9, "{w}");
    }
}

#[test]
fn pants_rep_word_lengths() {
    let r = build_pants_rep(0.9_f64, 1.4, 2.2).unwrap();
    for (w, l) in [("A", 0.9), ("B", 1.4), ("ba", 2.2), ("AB", 2.2)] {
        let got = r.word_length(&w.parse().unwrap()).unwrap();
        assert!((got - l).abs() < 1e-12, "{w}");
    }
    let w: Word = "AABab".parse().unwrap();
    let a = r.word_length(&w).unwrap();
    for k in 0..w.len() {
        assert!((r.word_length(&w.rotated(k)).unwrap() - a).abs() < 1e-12);
    }
    assert!((r.word_length(&w.inverse()).unwrap() - a).abs() < 1e-12);
    assert!(r.word_length(&Word::default()).is_err());
}

#[test]
fn json_schema_example() {
    let d: PantsDecomp = serde_json::from_str(
        r#"{"pants": [{"label": "P"}],
            "gluings": [{"a": {"pants": 0, "cuff": 0}, "b": {"pants": 0, "cuff": 1}, "curve": 0}],
            "boundary": [{"slot": {"pants": 0, "cuff": 2}, "index": 0}]}"#,
    )
    .unwrap();
    assert!(d.validate().is_ok());
    let x: FnPoint<f64> = serde_json::from_str(r#"{"lengths": [1], "twists": [0], "boundary": [0]}"#).unwrap();
    assert!(build_glued_rep(&d, &x).is_ok());
    let bad: FnPoint<f64> = serde_json::from_str(r#"{"lengths": [-1], "twists": [0], "boundary": [0]}"#).unwrap();
    assert!(build_glued_rep(&d, &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_torus_points_satisfy_traces(ell in 0.2..4.0f64, twist in -5.0..5.0f64, boundary in 0.0..3.0f64) {
        let r = build_glued_rep(&PantsDecomp::one_holed_torus(), &torus_point(ell, twist, boundary)).unwrap();
        prop_assert!(r.max_residual().unwrap() < 1e-9);
    }

    #[test]
    fn random_genus_two_points_satisfy_traces(
        l in prop::array::uniform3(0.2..4.0f64),
        t in prop::array::uniform3(-5.0..5.0f64),
    ) {
        let x: FnPoint<f64> = FnPoint { lengths: l.to_vec(), twists: t.to_vec(), boundary: vec![] };
        let r = build_glued_rep(&PantsDecomp::genus_two(), &x).unwrap();
        prop_assert!(r.max_residual().unwrap() < 1e-9);
    }

    #[test]
    fn conjugation_leaves_lengths_alone(
        l in prop::array::uniform3(0.3..3.0f64),
        t in prop::array::uniform3(-2.0..2.0f64),
        a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64,
    ) {
        // A product of shears and a translation, so unimodular.
        let n = Mat2::<f64>::new(1.0, a, 0.0, 1.0).unwrap() * Mat2::new(1.0, 0.0, b, 1.0).unwrap() * Mat2::translation(c);
        let x: FnPoint<f64> = FnPoint { lengths: l.to_vec(), twists: t.to_vec(), boundary: vec![] };
        let r = build_glued_rep(&PantsDecomp::genus_two(), &x).unwrap();
        let s = r.conjugated(&n);
        for w in ["CE", "ACEb", "DFa", "BCeDf"] {
            let w: Word = w.parse().unwrap();
            prop_assert!((r.word_length(&w).unwrap() - s.word_length(&w).unwrap()).abs() < 1e-9);
        }
    }
}
