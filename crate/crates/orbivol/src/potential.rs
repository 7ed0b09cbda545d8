//! The potential function V of a diagram and its logarithmic gradient.

use crate::complexfn::{li2, log_unchecked, Cx};
use crate::diagram::{KnotDiagram, SideType, SLOT_A, SLOT_B, SLOT_C, SLOT_D};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// A ratio closer than this to 0 or 1 is degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// `sign · Li₂(z_num / z_den)`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DilogTerm {
    pub sign: i8,
    pub num: usize,
    pub den: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialFunction {
    pub terms: Vec<DilogTerm>,
    pub num_segments: usize,
    /// Per-side sign of the hyperbolicity equations, carried over from the
    /// diagram so the equations can be checked from the potential alone.
    pub side_types: Vec<SideType>,
}

/// Segment values, one per side of the diagram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentSolution {
    pub z: Vec<Cx>,
    /// true once the values are rescaled so that z₁ = 1
    pub gauge_fixed: bool,
}

impl SegmentSolution {
    pub fn new(z: Vec<Cx>) -> Self {
        SegmentSolution {
            z,
            gauge_fixed: false,
        }
    }

    /// Rescales so that z₁ = 1.
    pub fn gauged(&self) -> Result<SegmentSolution> {
        let z0 = *self
            .z
            .first()
            .ok_or_else(|| Error::Degenerate("empty solution".into()))?;
        if z0.norm() == 0.0 || !z0.re.is_finite() || !z0.im.is_finite() {
            return Err(Error::Degenerate(format!("cannot gauge by z₁ = {z0}")));
        }
        Ok(SegmentSolution {
            z: self.z.iter().map(|&v| v / z0).collect(),
            gauge_fixed: true,
        })
    }
}

/// Four terms per crossing: Li₂(b/a) − Li₂(b/c) + Li₂(d/c) − Li₂(d/a).
pub fn build_potential(diagram: &KnotDiagram) -> PotentialFunction {
    let mut terms = Vec::with_capacity(4 * diagram.crossings().len());
    for c in diagram.crossings() {
        let s = c.slots;
        let (a, b, cc, d) = (s[SLOT_A], s[SLOT_B], s[SLOT_C], s[SLOT_D]);
        terms.push(DilogTerm {
            sign: 1,
            num: b,
            den: a,
        });
        terms.push(DilogTerm {
            sign: -1,
            num: b,
            den: cc,
        });
        terms.push(DilogTerm {
            sign: 1,
            num: d,
            den: cc,
        });
        terms.push(DilogTerm {
            sign: -1,
            num: d,
            den: a,
        });
    }
    PotentialFunction {
        terms,
        num_segments: diagram.num_segments(),
        side_types: diagram.side_types().to_vec(),
    }
}

fn ratio(pf: &PotentialFunction, idx: usize, z: &[Cx]) -> Result<Cx> {
    let t = pf.terms[idx];
    let u = z[t.num] / z[t.den];
    let finite = u.re.is_finite() && u.im.is_finite();
    if !finite || u.norm() < DEGENERACY_TOL || (u - 1.0).norm() < DEGENERACY_TOL {
        return Err(Error::Degenerate(format!(
            "term {} (z{}/z{}) has ratio {}",
            idx + 1,
            t.num + 1,
            t.den + 1,
            u
        )));
    }
    Ok(u)
}

fn check_len(pf: &PotentialFunction, z: &[Cx]) -> Result<()> {
    if z.len() != pf.num_segments {
        return Err(Error::Precondition(format!(
            "{} values for {} segments",
            z.len(),
            pf.num_segments
        )));
    }
    Ok(())
}

/// V(z) = Σ sign · Li₂(z_num / z_den).
pub fn eval_v(pf: &PotentialFunction, z: &[Cx]) -> Result<Cx> {
    check_len(pf, z)?;
    let mut v = Cx::new(0.0, 0.0);
    for (i, t) in pf.terms.iter().enumerate() {
        v += t.sign as f64 * li2(ratio(pf, i, z)?);
    }
    Ok(v)
}

/// Component k is z_k ∂V/∂z_k.
pub fn eval_grad(pf: &PotentialFunction, z: &[Cx]) -> Result<Vec<Cx>> {
    check_len(pf, z)?;
    let mut g = vec![Cx::new(0.0, 0.0); pf.num_segments];
    for (i, t) in pf.terms.iter().enumerate() {
        let l = log_unchecked(Cx::new(1.0, 0.0) - ratio(pf, i, z)?);
        let s = t.sign as f64;
        g[t.num] -= s * l;
        g[t.den] += s * l;
    }
    Ok(g)
}

/// Gradient together with its Jacobian with respect to w = log z,
/// `J[(k, j)] = ∂(z_k ∂V/∂z_k)/∂w_j`.
pub fn eval_grad_jacobian(pf: &PotentialFunction, z: &[Cx]) -> Result<(Vec<Cx>, DMatrix<Cx>)> {
    check_len(pf, z)?;
    let n = pf.num_segments;
    let mut g = vec![Cx::new(0.0, 0.0); n];
    let mut jac = DMatrix::from_element(n, n, Cx::new(0.0, 0.0));
    for (i, t) in pf.terms.iter().enumerate() {
        let u = ratio(pf, i, z)?;
        let one_minus = Cx::new(1.0, 0.0) - u;
        let l = log_unchecked(one_minus);
        // d log(1−u)/dw_num = −u/(1−u), and the opposite for w_den
        let d = -u / one_minus;
        let s = t.sign as f64;
        g[t.num] -= s * l;
        g[t.den] += s * l;
        for (k, c) in [(t.num, -s), (t.den, s)] {
            jac[(k, t.num)] += c * d;
            jac[(k, t.den)] -= c * d;
        }
    }
    Ok((g, jac))
}

/// max_k |exp(z_k ∂V/∂z_k) − exp(±i·angle)|, sign per side type.
pub fn hyperbolicity_residual(pf: &PotentialFunction, z: &[Cx], angle: f64) -> Result<f64> {
    let g = eval_grad(pf, z)?;
    Ok(g.iter()
        .zip(&pf.side_types)
        .map(|(gk, ty)| (gk.exp() - Cx::from_polar(1.0, ty.sign() * angle)).norm())
        .fold(0.0, f64::max))
}
