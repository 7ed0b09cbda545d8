//! The polynomials S_k with S₀ = 1, S₁ = ξ, S_k = ξ S_{k−1} − S_{k−2}.

use crate::complexfn::Cx;
use crate::polyroots::{poly_mul, PolyCx};
use num_traits::Num;

/// S_k(ξ) for any integer k over any commutative ring; negative indices use
/// S₋₁ = 0, S_k = −S_{−k−2}.
pub fn cheb_s<T: Num + Copy>(k: i64, xi: T) -> T {
    match k {
        -1 => T::zero(),
        k if k <= -2 => T::zero() - cheb_s(-k - 2, xi),
        _ => {
            let (mut s0, mut s1) = (T::zero(), T::one());
            for _ in 0..k {
                let s2 = xi * s1 - s0;
                s0 = s1;
                s1 = s2;
            }
            s1
        }
    }
}

/// S_k(ξ) together with dS_k/dξ.
pub fn cheb_s_with_derivative(k: i64, xi: Cx) -> (Cx, Cx) {
    let zero = Cx::new(0.0, 0.0);
    let one = Cx::new(1.0, 0.0);
    match k {
        -1 => (zero, zero),
        k if k <= -2 => {
            let (s, ds) = cheb_s_with_derivative(-k - 2, xi);
            (-s, -ds)
        }
        0 => (one, zero),
        _ => {
            let (mut s0, mut s1) = (one, xi);
            let (mut d0, mut d1) = (zero, one);
            for _ in 1..k {
                let s2 = xi * s1 - s0;
                let d2 = s1 + xi * d1 - d0;
                s0 = s1;
                s1 = s2;
                d0 = d1;
                d1 = d2;
            }
            (s1, d1)
        }
    }
}

/// The polynomial S_k(v(x)), built with the same recurrence over polynomials.
pub fn cheb_s_of_poly(k: i64, v: &PolyCx) -> PolyCx {
    let one = PolyCx::constant(Cx::new(1.0, 0.0));
    match k {
        -1 => PolyCx::zero(),
        k if k <= -2 => cheb_s_of_poly(-k - 2, v).scale(Cx::new(-1.0, 0.0)),
        0 => one,
        _ => {
            let (mut s0, mut s1) = (one, v.clone());
            for _ in 1..k {
                let s2 = poly_mul(v, &s1).sub(&s0);
                s0 = s1;
                s1 = s2;
            }
            s1
        }
    }
}

/// V^k for det V = 1 via S_k of the trace:
/// `[[S_k − d S_{k−1}, b S_{k−1}], [c S_{k−1}, S_k − a S_{k−1}]]`.
pub fn matrix_power(v: [[Cx; 2]; 2], k: i64) -> [[Cx; 2]; 2] {
    let [[a, b], [c, d]] = v;
    let xi = a + d;
    let sk = cheb_s(k, xi);
    let sk1 = cheb_s(k - 1, xi);
    [[sk - d * sk1, b * sk1], [c * sk1, sk - a * sk1]]
}
