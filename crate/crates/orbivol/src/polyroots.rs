//! Dense complex polynomials and simultaneous root finding.

use crate::complexfn::Cx;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Polynomial with complex coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCx {
    coeffs: Vec<Cx>,
}

impl PolyCx {
    /// Builds a polynomial and trims trailing zero coefficients.
    pub fn new(coeffs: Vec<Cx>) -> Self {
        let mut p = PolyCx { coeffs };
        p.normalize();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Cx::new(c, 0.0)).collect())
    }

    pub fn constant(c: Cx) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        Self::constant(Cx::new(0.0, 0.0))
    }

    /// x + c
    pub fn linear(c: Cx) -> Self {
        Self::new(vec![c, Cx::new(1.0, 0.0)])
    }

    fn normalize(&mut self) {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == Cx::new(0.0, 0.0) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Cx::new(0.0, 0.0));
        }
    }

    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Cx::new(0.0, 0.0)
    }

    pub fn leading(&self) -> Cx {
        *self.coeffs.last().unwrap()
    }

    /// Sum of coefficient magnitudes.
    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn eval(&self, x: Cx) -> Cx {
        poly_eval(self, x)
    }

    /// Value and first derivative at `x`.
    pub fn eval_with_derivative(&self, x: Cx) -> (Cx, Cx) {
        let mut p = Cx::new(0.0, 0.0);
        let mut dp = Cx::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn scale(&self, s: Cx) -> PolyCx {
        PolyCx::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn sub(&self, other: &PolyCx) -> PolyCx {
        poly_add(self, &other.scale(Cx::new(-1.0, 0.0)))
    }
}

pub fn poly_add(a: &PolyCx, b: &PolyCx) -> PolyCx {
    let n = a.coeffs.len().max(b.coeffs.len());
    let zero = Cx::new(0.0, 0.0);
    let coeffs = (0..n)
        .map(|i| *a.coeffs.get(i).unwrap_or(&zero) + *b.coeffs.get(i).unwrap_or(&zero))
        .collect();
    PolyCx::new(coeffs)
}

pub fn poly_mul(a: &PolyCx, b: &PolyCx) -> PolyCx {
    if a.is_zero() || b.is_zero() {
        return PolyCx::zero();
    }
    let mut out = vec![Cx::new(0.0, 0.0); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &x) in a.coeffs.iter().enumerate() {
        for (j, &y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    PolyCx::new(out)
}

/// Horner evaluation.
pub fn poly_eval(p: &PolyCx, x: Cx) -> Cx {
    p.coeffs
        .iter()
        .rev()
        .fold(Cx::new(0.0, 0.0), |acc, &c| acc * x + c)
}

const MAX_ABERTH_ITER: usize = 500;
// fixed irrational offset for the starting circle
const START_ANGLE: f64 = 0.618_033_988_749_894_8;

fn residual_ok(p: &PolyCx, z: Cx, tol: f64) -> bool {
    let scale = p.norm1() * z.norm().max(1.0).powi(p.degree() as i32);
    p.eval(z).norm() <= tol * scale
}

/// Newton polish of a single root, given a function returning `(f, f')`.
///
/// Iterates while the residual keeps decreasing; returns the best point seen.
pub fn newton_polish<F>(f: F, mut x: Cx, max_iter: usize) -> Cx
where
    F: Fn(Cx) -> (Cx, Cx),
{
    let (mut fx, mut dfx) = f(x);
    for _ in 0..max_iter {
        if fx.norm() == 0.0 || dfx.norm() == 0.0 {
            break;
        }
        let xn = x - fx / dfx;
        let (fn_, dfn) = f(xn);
        if !(fn_.norm() < fx.norm()) {
            // accept one last non-increasing step for exact-zero plateaus
            if fn_.norm() <= fx.norm() && xn.re.is_finite() {
                x = xn;
            }
            break;
        }
        x = xn;
        fx = fn_;
        dfx = dfn;
    }
    x
}

/// Simultaneous Aberth refinement of a full set of root approximations,
/// with values and derivatives supplied by `f`.
///
/// Useful when a function can be evaluated more accurately than its
/// expanded coefficients allow; the mutual repulsion keeps approximations
/// from collapsing onto the same root.
pub fn aberth_refine<F>(f: F, mut z: Vec<Cx>, max_iter: usize) -> Vec<Cx>
where
    F: Fn(Cx) -> (Cx, Cx),
{
    let n = z.len();
    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (fi, dfi) = f(z[i]);
            if fi.norm() == 0.0 {
                continue;
            }
            let repulsion: Cx = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let ratio = fi / dfi;
            let w = ratio / (Cx::new(1.0, 0.0) - ratio * repulsion);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Cauchy's bound for a monic polynomial: the positive root of
/// xⁿ − Σ_{i<n} |aᵢ| xⁱ, found by bisection below 1 + max |aᵢ|.
fn cauchy_bound(monic: &PolyCx) -> f64 {
    let deg = monic.degree();
    let mags: Vec<f64> = monic.coeffs[..deg].iter().map(|c| c.norm()).collect();
    let f = |x: f64| {
        // xⁿ − Σ|aᵢ|xⁱ divided by xⁿ to stay finite
        1.0 - mags
            .iter()
            .enumerate()
            .map(|(i, a)| a * x.powi(i as i32 - deg as i32))
            .sum::<f64>()
    };
    let mut hi = 1.0 + mags.iter().cloned().fold(0.0, f64::max);
    let mut lo = 0.0;
    if mags.iter().all(|&a| a == 0.0) {
        return 1.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.max(f64::MIN_POSITIVE)
}

/// All roots of `p` with multiplicity, lexicographically sorted by (Re, Im).
pub fn roots_all(p: &PolyCx) -> Result<Vec<Cx>> {
    let deg = p.degree();
    if deg == 0 {
        return Err(Error::Domain("constant polynomial has no roots".into()));
    }
    let lead = p.leading();
    let monic = PolyCx::new(p.coeffs.iter().map(|&c| c / lead).collect());
    let radius = cauchy_bound(&monic);

    let mut z: Vec<Cx> = (0..deg)
        .map(|k| Cx::from_polar(radius, 2.0 * PI * k as f64 / deg as f64 + START_ANGLE))
        .collect();

    let mut iterations = 0;
    while iterations < MAX_ABERTH_ITER {
        iterations += 1;
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let (f, df) = monic.eval_with_derivative(z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let repulsion: Cx = (0..deg)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let ratio = f / df;
            let mut w = ratio / (Cx::new(1.0, 0.0) - ratio * repulsion);
            if !w.re.is_finite() || !w.im.is_finite() {
                w = Cx::new(1e-3, 1e-3) * (1.0 + z[i].norm());
            }
            z[i] -= w;
            max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 || z.iter().all(|&x| residual_ok(&monic, x, 1e-14)) {
            break;
        }
    }

    for x in z.iter_mut() {
        *x = newton_polish(|t| monic.eval_with_derivative(t), *x, 8);
    }

    if !z.iter().all(|&x| residual_ok(p, x, 1e-10)) {
        return Err(Error::Convergence {
            iterations,
            best: z,
        });
    }
    sort_lex(&mut z);
    Ok(z)
}

pub(crate) fn sort_lex(z: &mut [Cx]) {
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn add_examples() {
        let r = poly_add(&PolyCx::from_real(&[1.0]), &PolyCx::from_real(&[-1.0]));
        assert_eq!(r.coeffs(), &[c(0.0, 0.0)]);
        assert_eq!(r.degree(), 0);
        let r = poly_add(
            &PolyCx::from_real(&[1.0, 1.0]),
            &PolyCx::from_real(&[0.0, -1.0]),
        );
        assert_eq!(r, PolyCx::from_real(&[1.0]));
        let r = poly_add(
            &PolyCx::from_real(&[1.0, 2.0, 3.0]),
            &PolyCx::from_real(&[4.0, 5.0]),
        );
        assert_eq!(r, PolyCx::from_real(&[5.0, 7.0, 3.0]));
    }

    #[test]
    fn mul_examples() {
        let x = PolyCx::from_real(&[0.0, 1.0]);
        assert_eq!(poly_mul(&x, &x), PolyCx::from_real(&[0.0, 0.0, 1.0]));
        let p = PolyCx::from_real(&[3.0, -2.0, 5.0]);
        assert_eq!(poly_mul(&p, &PolyCx::from_real(&[1.0])), p);
        let r = poly_mul(
            &PolyCx::from_real(&[1.0, 1.0]),
            &PolyCx::from_real(&[-1.0, 1.0]),
        );
        assert_eq!(r, PolyCx::from_real(&[-1.0, 0.0, 1.0]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(
            poly_eval(&PolyCx::from_real(&[-1.0, 0.0, 1.0]), c(1.0, 0.0)),
            c(0.0, 0.0)
        );
        assert_eq!(
            poly_eval(&PolyCx::from_real(&[1.0, 1.0]), c(0.0, 1.0)),
            c(1.0, 1.0)
        );
        let k = PolyCx::constant(c(2.5, -1.0));
        assert_eq!(poly_eval(&k, c(17.0, 3.0)), c(2.5, -1.0));
    }

    #[test]
    fn roots_examples() {
        let r = roots_all(&PolyCx::from_real(&[1.0, 0.0, 1.0])).unwrap();
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-12);

        let r = roots_all(&PolyCx::from_real(&[1.0, -1.0, 1.0])).unwrap();
        let s = 3f64.sqrt() / 2.0;
        assert!((r[0] - c(0.5, -s)).norm() < 1e-12);
        assert!((r[1] - c(0.5, s)).norm() < 1e-12);

        let r = roots_all(&PolyCx::from_real(&[-1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(r.len(), 3);
        for k in 0..3 {
            let w = Cx::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            assert!(r.iter().any(|&x| (x - w).norm() < 1e-12));
        }

        assert!(roots_all(&PolyCx::from_real(&[3.0])).is_err());
    }

    #[test]
    fn repeated_roots() {
        // (x−1)³(x+2)
        let p = PolyCx::from_real(&[-2.0, 5.0, -3.0, -1.0, 1.0]);
        let r = roots_all(&p).unwrap();
        assert_eq!(r.len(), 4);
        assert!((r[0] - c(-2.0, 0.0)).norm() < 1e-10);
        for x in &r[1..] {
            assert!((x - c(1.0, 0.0)).norm() < 1e-4);
        }
    }
}
