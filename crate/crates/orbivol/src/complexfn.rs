//! Elementary complex functions on the principal branch: log, Li₂, the
//! Rogers dilogarithm and a real modular reduction.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type Cx = Complex64;

const PI2_6: f64 = PI * PI / 6.0;

// B_{2k} / (2k+1)! for k = 1..15
const BERNOULLI_COEFFS: [f64; 15] = [
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
    -5.581785874325009e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.315975652702203e-26,
];

/// Principal logarithm with imaginary part in (−π, π].
///
/// A signed zero in the imaginary part is ignored, so the negative real axis
/// always maps to `+iπ`.
pub fn principal_log(z: Cx) -> Result<Cx> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("log(0)".into()));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log of non-finite value {z}")));
    }
    Ok(log_unchecked(z))
}

/// Same as [`principal_log`] without the zero check; returns −∞ for 0.
#[inline]
pub(crate) fn log_unchecked(z: Cx) -> Cx {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    Cx::new(z.norm().ln(), im.atan2(z.re))
}

/// Principal dilogarithm Li₂(z) = −∫₀ᶻ log(1−t)/t dt.
///
/// On the cut (1, ∞) the value is the limit from the lower half-plane, which
/// makes `d/dz Li₂(z) = −log(1−z)/z` hold with the principal log.
pub fn li2(z: Cx) -> Cx {
    if z.re == 0.0 && z.im == 0.0 {
        return Cx::new(0.0, 0.0);
    }
    if z.im == 0.0 && z.re >= 1.0 {
        let x = z.re;
        if x == 1.0 {
            return Cx::new(PI2_6, 0.0);
        }
        let lx = x.ln();
        let re = 2.0 * PI2_6 - 0.5 * lx * lx - li2_unit(Cx::new(1.0 / x, 0.0)).re;
        return Cx::new(re, -PI * lx);
    }
    if z.norm() > 1.0 {
        let l = log_unchecked(-z);
        return -PI2_6 - 0.5 * l * l - li2_unit(z.inv());
    }
    li2_unit(z)
}

// |z| ≤ 1, z ≠ 1
fn li2_unit(z: Cx) -> Cx {
    if z.norm() <= 0.5 {
        return li2_series(z);
    }
    if z.re > 0.5 {
        let w = Cx::new(1.0, 0.0) - z;
        return PI2_6 - log_unchecked(z) * log_unchecked(w) - li2_bernoulli(w);
    }
    li2_bernoulli(z)
}

fn li2_series(z: Cx) -> Cx {
    let mut sum = Cx::new(0.0, 0.0);
    let mut p = z;
    for k in 1..200 {
        let term = p / (k * k) as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        p *= z;
    }
    sum
}

// Series in u = −log(1−z); valid for |z| ≤ 1, Re z ≤ 1/2.
fn li2_bernoulli(z: Cx) -> Cx {
    let u = -log_unchecked(Cx::new(1.0, 0.0) - z);
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut p = u * u2;
    for c in BERNOULLI_COEFFS {
        sum += c * p;
        p *= u2;
    }
    sum
}

/// Rogers dilogarithm ℛ(z) = Li₂(z) + ½ log z · log(1−z).
pub fn rogers(z: Cx) -> Result<Cx> {
    let one = Cx::new(1.0, 0.0);
    if z == one {
        return Err(Error::Domain("rogers dilogarithm at z = 1".into()));
    }
    let lz = principal_log(z)?;
    let l1 = principal_log(one - z)?;
    Ok(li2(z) + 0.5 * lz * l1)
}

/// Extended Rogers dilogarithm
/// R(z; p, q) = ℛ(z) + (πi/2)(p·log(1−z) + q·log z) − π²/6.
pub fn rogers_r(z: Cx, p: i64, q: i64) -> Result<Cx> {
    let base = rogers(z)?;
    let lz = principal_log(z)?;
    let l1 = principal_log(Cx::new(1.0, 0.0) - z)?;
    let half_pi_i = Cx::new(0.0, PI / 2.0);
    Ok(base + half_pi_i * (p as f64 * l1 + q as f64 * lz) - PI2_6)
}

/// Representatives this close to μ (relative to μ) are rounding noise
/// below 0 and are reported as 0.
const MOD_SNAP_REL: f64 = 1e-12;

/// Reduce `x` into `[0, mu)`.
pub fn mod_reduce(x: f64, mu: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Domain(format!("modulus must be positive, got {mu}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("cannot reduce non-finite {x}")));
    }
    let r = x.rem_euclid(mu);
    Ok(if r >= mu * (1.0 - MOD_SNAP_REL) {
        0.0
    } else {
        r
    })
}

/// Distance between `a` and `b` on the circle ℝ/μℤ.
pub fn mod_distance(a: f64, b: f64, mu: f64) -> f64 {
    let d = (a - b).rem_euclid(mu);
    d.min(mu - d).abs()
}
