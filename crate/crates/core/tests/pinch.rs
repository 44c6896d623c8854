use teich::hyptrig::collar_width;
use teich::metrics::farey_family;
use teich::pinch::{arc_residual, pinch_sweep, psi_inv, DEFAULT_LEVELS};
use teich::torus::{curve_length, FnTorus};
use teich::FnTorus64;

// Frozen gaps for the pair (1.3, 0.4) -> (1, 0) over the default levels.
const GAPS: [f64; 6] = [
    2.5660748322331654e-3,
    6.488581256061907e-4,
    1.6267870455283123e-4,
    2.604945096470416e-5,
    6.513108244687384e-6,
    2.605338734297018e-7,
];

#[test]
fn gap_decays_on_the_reverse_pair() {
    let x0 = FnTorus64::cusped(1.3, 0.4).unwrap();
    let y0 = FnTorus64::cusped(1.0, 0.0).unwrap();
    let rows = pinch_sweep(&x0, &y0, &DEFAULT_LEVELS, 8).unwrap();
    for (r, g) in rows.iter().zip(GAPS) {
        assert!((r.gap - g).abs() < 1e-6 * g, "L = {}: {} vs {g}", r.l, r.gap);
    }
    assert!(rows.windows(2).all(|w| w[1].gap <= w[0].gap));
    // The gap is largest at the largest boundary.
    assert_eq!(rows.iter().map(|r| r.gap).fold(0.0, f64::max), rows[0].gap);
}

#[test]
fn forward_pair_has_no_gap() {
    let x0 = FnTorus64::cusped(1.0, 0.0).unwrap();
    let y0 = FnTorus64::cusped(1.3, 0.4).unwrap();
    let rows = pinch_sweep(&x0, &y0, &DEFAULT_LEVELS, 8).unwrap();
    assert_eq!(rows.len(), DEFAULT_LEVELS.len());
    for (r, l) in rows.iter().zip(DEFAULT_LEVELS) {
        assert_eq!(r.l, l);
        assert!(r.gap <= 1e-12);
        assert!((r.d_th - 1.3f64.ln()).abs() < 1e-12);
        assert_eq!(r.witness_th, "curve(1,0)");
    }
}

#[test]
fn curve_ratios_shrink_with_the_boundary() {
    let cusp = FnTorus64::cusped(1.0, 0.4).unwrap();
    for s in farey_family(4).unwrap().curves() {
        let l0 = curve_length(&cusp, s).unwrap();
        let dev = |b: f64| (curve_length(&psi_inv(&cusp, b).unwrap(), s).unwrap() / l0 - 1.0).abs();
        let (near, far) = (dev(0.01), dev(1.0));
        assert!(near < far || (near == 0.0 && far == 0.0), "{s}: {near} vs {far}");
    }
}

#[test]
fn collars_are_wide_for_short_boundaries() {
    for l in DEFAULT_LEVELS.into_iter().filter(|&l| l <= 0.5) {
        assert!(collar_width(l).unwrap() > 2.0, "L = {l}");
    }
    assert!((collar_width(0.1_f64).unwrap() - 3.689087757070663).abs() < 1e-12);
}

#[test]
fn arc_residual_shrinks() {
    let levels = [1.0_f64, 0.5, 0.1, 0.01, 0.001];
    let r: Vec<f64> = levels.iter().map(|&l| arc_residual(1.0, l).unwrap().abs()).collect();
    assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
    assert!(r[3] < 1e-3);
}

#[test]
fn sweep_is_deterministic() {
    let x0 = FnTorus::cusped(0.8, -0.7).unwrap();
    let y0 = FnTorus::cusped(2.1, 1.1).unwrap();
    let a = pinch_sweep(&x0, &y0, &DEFAULT_LEVELS, 6).unwrap();
    let b = pinch_sweep(&x0, &y0, &DEFAULT_LEVELS, 6).unwrap();
    assert_eq!(a, b);
}
