use orbivol::chebyshev::{cheb_s, cheb_s_of_poly, matrix_power};
use orbivol::complexfn::Cx;
use orbivol::jknot::SL2;
use orbivol::polyroots::{poly_eval, PolyCx};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

fn rand_cx(rng: &mut ChaCha8Rng, radius: f64) -> Cx {
    c(
        rng.gen_range(-radius..radius),
        rng.gen_range(-radius..radius),
    )
}

#[test]
fn scalar_examples() {
    let xi = c(0.3, -1.7);
    assert_eq!(cheb_s(-1, xi), c(0.0, 0.0));
    assert_eq!(cheb_s(0, xi), c(1.0, 0.0));
    assert!((cheb_s(2, xi) - (xi * xi - 1.0)).norm() < 1e-14);
    assert_eq!(cheb_s(5, c(2.0, 0.0)), c(6.0, 0.0));
    for k in 2..10 {
        assert_eq!(cheb_s(-k, xi), -cheb_s(k - 2, xi));
    }
}

#[test]
fn poly_examples() {
    let v = PolyCx::linear(c(0.5, 0.25));
    assert_eq!(cheb_s_of_poly(0, &v), PolyCx::constant(c(1.0, 0.0)));
    assert_eq!(cheb_s_of_poly(1, &v), v);
    // (x + c)² − 1
    let cc = c(0.5, 0.25);
    let expect = PolyCx::new(vec![cc * cc - 1.0, 2.0 * cc, c(1.0, 0.0)]);
    let got = cheb_s_of_poly(2, &v);
    for (a, b) in got.coeffs().iter().zip(expect.coeffs()) {
        assert!((a - b).norm() < 1e-15);
    }
}

#[test]
fn determinant_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let v = rand_cx(&mut rng, 2.5);
        for n in 0..=30 {
            let (a, b) = (cheb_s(n, v), cheb_s(n - 1, v));
            let scale = 1.0f64.max(a.norm_sqr() + (v * a * b).norm() + b.norm_sqr());
            assert!((a * a - v * a * b + b * b - 1.0).norm() <= 1e-9 * scale);
        }
    }
}

#[test]
fn poly_scalar_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let v = PolyCx::new(vec![rand_cx(&mut rng, 1.5), rand_cx(&mut rng, 1.0)]);
        let x = rand_cx(&mut rng, 1.0);
        for k in -1..=12 {
            let a = poly_eval(&cheb_s_of_poly(k, &v), x);
            let b = cheb_s(k, poly_eval(&v, x));
            assert!((a - b).norm() <= 1e-11 * b.norm().max(1.0), "k = {k}");
        }
    }
}

#[test]
fn matrix_power_matches_repeated_multiplication() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut done = 0;
    while done < 100 {
        let (a, b, cc) = (
            rand_cx(&mut rng, 1.0),
            rand_cx(&mut rng, 1.0),
            rand_cx(&mut rng, 1.0),
        );
        if a.norm() < 0.2 {
            continue;
        }
        let v = SL2::new(a, b, cc, (1.0 + b * cc) / a);
        done += 1;
        for k in 0..=12 {
            let [[p, q], [r, s]] = matrix_power(v.to_array(), k);
            let direct = v.pow(k as usize);
            let scale = direct.max_abs().max(1.0);
            assert!(SL2::new(p, q, r, s).dist(&direct) <= 1e-9 * scale);
        }
    }
}

proptest! {
    #[test]
    fn recurrence_holds(re in -3.0f64..3.0, im in -3.0f64..3.0, k in 1i64..25) {
        let xi = c(re, im);
        let lhs = cheb_s(k + 1, xi);
        let rhs = xi * cheb_s(k, xi) - cheb_s(k - 1, xi);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }
}
