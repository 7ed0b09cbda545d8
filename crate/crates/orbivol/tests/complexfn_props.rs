use approx::assert_abs_diff_eq;
use orbivol::complexfn::{li2, mod_reduce, principal_log, rogers, rogers_r, Cx};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// −∫₀¹ log(1 − t·z)/t dt by composite 10-point Gauss–Legendre on a
/// geometrically graded mesh (the integrand is smooth for |z| < 1).
fn li2_quadrature(z: Cx) -> Cx {
    const NODES: [f64; 5] = [
        0.148_874_338_981_631_2,
        0.433_395_394_129_247_2,
        0.679_409_568_299_024_4,
        0.865_063_366_688_984_5,
        0.973_906_528_517_171_7,
    ];
    const WEIGHTS: [f64; 5] = [
        0.295_524_224_714_752_9,
        0.269_266_719_309_996_4,
        0.219_086_362_515_982,
        0.149_451_349_150_580_6,
        0.066_671_344_308_688_1,
    ];
    let f = |t: f64| -(Cx::new(1.0, 0.0) - t * z).ln() / t;
    let panels = 200;
    let mut sum = Cx::new(0.0, 0.0);
    for p in 0..panels {
        let (a, b) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            sum += w * half * (f(mid + half * x) + f(mid - half * x));
        }
    }
    sum
}

#[test]
fn log_examples() {
    assert_eq!(principal_log(Cx::new(1.0, 0.0)).unwrap(), Cx::new(0.0, 0.0));
    let l = principal_log(Cx::new(-1.0, 0.0)).unwrap();
    assert_abs_diff_eq!(l.im, PI, epsilon = 1e-15);
    let l = principal_log(Cx::new(0.0, 2.0)).unwrap();
    assert_abs_diff_eq!(l.re, 2f64.ln(), epsilon = 1e-15);
    assert_abs_diff_eq!(l.im, PI / 2.0, epsilon = 1e-15);
    assert!(principal_log(Cx::new(0.0, 0.0)).is_err());
}

#[test]
fn log_round_trip_on_annulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let z = Cx::from_polar(10f64.powf(rng.gen_range(-6.0..6.0)), rng.gen_range(-PI..PI));
        let l = principal_log(z).unwrap();
        assert!(l.im > -PI && l.im <= PI);
        assert!((l.exp() - z).norm() <= 1e-13 * z.norm(), "z = {z}");
    }
}

#[test]
fn li2_examples() {
    assert_eq!(li2(Cx::new(0.0, 0.0)), Cx::new(0.0, 0.0));
    assert_abs_diff_eq!(li2(Cx::new(1.0, 0.0)).re, PI * PI / 6.0, epsilon = 1e-14);
    // series oracle Σ 2⁻ᵏ/k²
    let series: f64 = (1..200).map(|k| 0.5f64.powi(k) / (k * k) as f64).sum();
    assert_abs_diff_eq!(li2(Cx::new(0.5, 0.0)).re, series, epsilon = 1e-13);
    assert_abs_diff_eq!(series, 0.5822405265, epsilon = 1e-10);
}

#[test]
fn li2_matches_power_series_in_small_disk() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let z = Cx::from_polar(rng.gen_range(0.0..0.5), rng.gen_range(-PI..PI));
        let series: Cx = (1..80).map(|k| z.powi(k) / (k * k) as f64).sum();
        assert!((li2(z) - series).norm() <= 1e-13, "z = {z}");
    }
}

#[test]
fn li2_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let z = Cx::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(-PI..PI));
        assert!((li2(z) - li2_quadrature(z)).norm() <= 1e-10, "z = {z}");
    }
}

#[test]
fn li2_on_cut_is_lower_limit() {
    for x in [1.5, 2.0, 7.0] {
        let on = li2(Cx::new(x, 0.0));
        let below = li2(Cx::new(x, -1e-9));
        assert!((on - below).norm() < 1e-6);
        assert!(on.im < 0.0);
    }
}

#[test]
fn rogers_examples() {
    let v = rogers_r(Cx::new(0.5, 0.0), 0, 0).unwrap();
    assert_abs_diff_eq!(v.re, -PI * PI / 12.0, epsilon = 1e-13);
    for x in [0.1, 0.3, 0.77] {
        let s = rogers_r(Cx::new(x, 0.0), 0, 0).unwrap()
            + rogers_r(Cx::new(1.0 - x, 0.0), 0, 0).unwrap();
        assert_abs_diff_eq!(s.re, -PI * PI / 6.0, epsilon = 1e-13);
        assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-13);
    }
    assert!(rogers(Cx::new(1.0, 0.0)).is_err());
    assert!(rogers_r(Cx::new(0.0, 0.0), 0, 0).is_err());
}

#[test]
fn rogers_r_is_affine_in_p_q() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let z = Cx::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (p, q) = (rng.gen_range(-3..4), rng.gen_range(-3..4));
        let diff = rogers_r(z, p, q).unwrap() - rogers_r(z, 0, 0).unwrap();
        let expect = Cx::new(0.0, PI / 2.0)
            * (p as f64 * principal_log(1.0 - z).unwrap() + q as f64 * principal_log(z).unwrap());
        assert!((diff - expect).norm() < 1e-12);
    }
}

#[test]
fn mod_reduce_examples() {
    assert_eq!(mod_reduce(0.0, 1.0).unwrap(), 0.0);
    assert_eq!(mod_reduce(7.5, 2.5).unwrap(), 0.0);
    let r = mod_reduce(-3.2898681337, PI * PI / 3.0).unwrap();
    assert!(r < 1e-9 || PI * PI / 3.0 - r < 1e-9);
    assert!(mod_reduce(1.0, 0.0).is_err());
    assert!(mod_reduce(f64::NAN, 1.0).is_err());
}

proptest! {
    #[test]
    fn mod_reduce_is_idempotent(x in -1e6f64..1e6, mu in 1e-3f64..100.0) {
        let once = mod_reduce(x, mu).unwrap();
        prop_assert!((0.0..mu).contains(&once));
        prop_assert_eq!(mod_reduce(once, mu).unwrap(), once);
    }

    #[test]
    fn mod_reduce_preserves_class(x in -1e4f64..1e4, mu in 0.1f64..20.0) {
        let r = mod_reduce(x, mu).unwrap();
        let k = ((x - r) / mu).round();
        prop_assert!((x - r - k * mu).abs() <= 1e-12 * x.abs().max(1.0) * 10.0);
    }

    #[test]
    fn li2_inversion_relation(re in -3.0f64..3.0, im in 0.05f64..3.0) {
        // Li₂(z) + Li₂(1/z) = −π²/6 − ½ log²(−z) off the real axis
        let z = Cx::new(re, im);
        let lhs = li2(z) + li2(z.inv());
        let l = principal_log(-z).unwrap();
        let rhs = -PI * PI / 6.0 - 0.5 * l * l;
        prop_assert!((lhs - rhs).norm() < 1e-11);
    }
}
