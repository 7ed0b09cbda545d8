//! Complex volume from a solution of the hyperbolicity equations:
//! i(vol + i·cs) = V(z) − Σ_k (z_k ∂V/∂z_k) log z_k.

use crate::complexfn::{mod_distance, mod_reduce, principal_log, Cx};
use crate::error::{Error, Result};
use crate::jknot::{geometric_lambda, JKnotParams};
use crate::potential::{
    eval_grad, eval_v, hyperbolicity_residual, PotentialFunction, SegmentSolution,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Solutions must satisfy the equations this closely before evaluation.
pub const EQUATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbifoldInvariants {
    pub w_raw: Cx,
    pub volume: f64,
    /// −Re w reduced into [0, modulus)
    pub cs_rep: f64,
    pub modulus: f64,
    /// orbifold order; `None` for the complete structure
    pub r: Option<u32>,
    pub lambda: Option<Cx>,
    pub z: SegmentSolution,
    pub residual: f64,
    /// Σ_k z_k ∂V/∂z_k; vanishes when w is independent of the gauge
    pub grad_sum: Cx,
}

/// π²/r for odd r, 2π²/r for even r; π² for the complete structure.
pub fn modulus(r: Option<u32>) -> f64 {
    match r {
        Some(r) if r % 2 == 1 => PI * PI / r as f64,
        Some(r) => 2.0 * PI * PI / r as f64,
        None => PI * PI,
    }
}

/// Cone angle 2π/r, or 0 for the complete structure.
pub fn cone_angle(r: Option<u32>) -> f64 {
    r.map_or(0.0, |r| 2.0 * PI / r as f64)
}

/// V − Σ grad_k log z_k without any residual check.
pub fn formula_value(pf: &PotentialFunction, z: &[Cx]) -> Result<Cx> {
    let v = eval_v(pf, z)?;
    let g = eval_grad(pf, z)?;
    let mut w = v;
    for (gk, zk) in g.iter().zip(z) {
        w -= gk * principal_log(*zk)?;
    }
    Ok(w)
}

pub fn complex_volume(
    pf: &PotentialFunction,
    z: &SegmentSolution,
    r: Option<u32>,
) -> Result<OrbifoldInvariants> {
    let z = z.gauged()?;
    let residual = hyperbolicity_residual(pf, &z.z, cone_angle(r))?;
    if !(residual <= EQUATION_TOL) {
        return Err(Error::Precondition(format!(
            "hyperbolicity residual {residual:.3e} exceeds {EQUATION_TOL:.0e}"
        )));
    }
    let w_raw = formula_value(pf, &z.z)?;
    let grad_sum = eval_grad(pf, &z.z)?.iter().sum();
    let mu = modulus(r);
    Ok(OrbifoldInvariants {
        w_raw,
        volume: w_raw.im,
        cs_rep: mod_reduce(-w_raw.re, mu)?,
        modulus: mu,
        r,
        lambda: None,
        z,
        residual,
        grad_sum,
    })
}

/// Closed-form pipeline for one J(2n,−2m) orbifold.
pub fn table1_row(params: &JKnotParams) -> Result<OrbifoldInvariants> {
    Ok(geometric_lambda(params)?.invariants)
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct GoldenRow {
    pub two_n: usize,
    pub two_m: usize,
    pub r: u32,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub w_re: f64,
    pub w_im: f64,
}

impl GoldenRow {
    pub fn params(&self) -> Result<JKnotParams> {
        JKnotParams::from_crossings(self.two_n, self.two_m, self.r)
    }

    pub fn lambda(&self) -> Cx {
        Cx::new(self.lambda_re, self.lambda_im)
    }

    pub fn w(&self) -> Cx {
        Cx::new(self.w_re, self.w_im)
    }
}

const TABLE1_CSV: &str = include_str!("../data/table1.csv");

/// The published J(2n,−2m) orbifold table, 79 rows.
pub fn table1_golden() -> Vec<GoldenRow> {
    csv::Reader::from_reader(TABLE1_CSV.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<GoldenRow>, _>>()
        .expect("embedded table is well formed")
}

/// Deviations of computed invariants from a golden row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowDeviation {
    pub lambda: f64,
    pub volume: f64,
    /// distance of −Re w from the tabulated reading on ℝ/μℤ
    pub cs: f64,
}

pub fn compare_with_golden(inv: &OrbifoldInvariants, row: &GoldenRow) -> RowDeviation {
    let lambda = inv.lambda.map_or(f64::INFINITY, |l| {
        (l.re - row.lambda_re)
            .abs()
            .max((l.im - row.lambda_im).abs())
    });
    RowDeviation {
        lambda,
        volume: (inv.volume - row.w_im).abs(),
        cs: mod_distance(-inv.w_raw.re, -row.w_re, inv.modulus),
    }
}
