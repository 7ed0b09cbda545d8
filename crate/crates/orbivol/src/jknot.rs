//! Closed-form pipeline for the double twist knots J(2n,−2m): the
//! Riley–Mednykh polynomial, its representation-theoretic oracle, the
//! recurrence sequences and the assembled segment solution.
//!
//! `n` and `m` count full twists, so the diagram has 2n vertical and 2m
//! horizontal crossings. Sequence indices run over crossing counts (2n, 2m),
//! while the Chebyshev indices in φ use n and m directly.

use crate::chebyshev::{cheb_s, cheb_s_of_poly, cheb_s_with_derivative};
use crate::complexfn::Cx;
use crate::cvolume::{complex_volume, OrbifoldInvariants};
use crate::diagram::generate_j_diagram;
use crate::error::{Error, Result};
use crate::polyroots::{aberth_refine, newton_polish, poly_mul, roots_all, sort_lex, PolyCx};
use crate::potential::{
    build_potential, hyperbolicity_residual, PotentialFunction, SegmentSolution,
};
use num_complex::Complex;
use num_traits::Num;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::Mul;
use twofloat::TwoFloat;

/// Free values (z₁, z₂, z₃) of the solution family; z₁ = 1 is the gauge.
pub const DEFAULT_SEEDS: [Cx; 3] = [Cx::new(1.0, 0.0), Cx::new(0.3, 0.7), Cx::new(-0.4, 1.1)];

/// Roots closer than this are treated as one.
const ROOT_DEDUP_TOL: f64 = 1e-7;
const IDENTIFICATION_TOL: f64 = 1e-8;
const ASSEMBLY_RESIDUAL_TOL: f64 = 1e-8;
const VOLUME_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SL2 {
    pub a: Cx,
    pub b: Cx,
    pub c: Cx,
    pub d: Cx,
}

impl SL2 {
    pub fn new(a: Cx, b: Cx, c: Cx, d: Cx) -> Self {
        SL2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        let (o, z) = (Cx::new(1.0, 0.0), Cx::new(0.0, 0.0));
        SL2::new(o, z, z, o)
    }

    pub fn det(&self) -> Cx {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Cx {
        self.a + self.d
    }

    /// Inverse assuming unit determinant.
    pub fn inv(&self) -> Self {
        SL2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(SL2::identity(), |acc, _| acc * *self)
    }

    /// V^k from S_k of the trace.
    pub fn pow_closed_form(&self, k: i64) -> Self {
        let [[a, b], [c, d]] = crate::chebyshev::matrix_power(self.to_array(), k);
        SL2::new(a, b, c, d)
    }

    pub fn to_array(&self) -> [[Cx; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// Largest entrywise distance.
    pub fn dist(&self, o: &SL2) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for SL2 {
    type Output = SL2;
    fn mul(self, o: SL2) -> SL2 {
        SL2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JKnotParams {
    /// vertical full twists
    pub n: usize,
    /// horizontal full twists
    pub m: usize,
    /// orbifold order
    pub r: u32,
}

impl JKnotParams {
    /// Validated parameters for a hyperbolic orbifold.
    pub fn new(n: usize, m: usize, r: u32) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Domain("twist counts must be positive".into()));
        }
        if r < 3 {
            return Err(Error::Domain(format!(
                "orbifold order must be ≥ 3, got {r}"
            )));
        }
        if (n, m, r) == (1, 1, 3) {
            return Err(Error::NonHyperbolic(
                "O(J(2,-2), 3) is not hyperbolic".into(),
            ));
        }
        Ok(JKnotParams { n, m, r })
    }

    /// Parameters from crossing counts (2n, 2m).
    pub fn from_crossings(two_n: usize, two_m: usize, r: u32) -> Result<Self> {
        if !two_n.is_multiple_of(2) || !two_m.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "crossing counts must be even, got ({two_n}, {two_m})"
            )));
        }
        Self::new(two_n / 2, two_m / 2, r)
    }

    pub fn two_n(&self) -> usize {
        2 * self.n
    }

    pub fn two_m(&self) -> usize {
        2 * self.m
    }

    /// M = exp(iπ/r), so that M² = exp(2πi/r).
    pub fn meridian(&self) -> Cx {
        Cx::from_polar(1.0, PI / self.r as f64)
    }

    pub fn cone_angle(&self) -> f64 {
        2.0 * PI / self.r as f64
    }
}

fn m_squares(mm: Cx) -> (Cx, Cx) {
    let m2 = mm * mm;
    (m2, m2.inv())
}

/// φ(x) = S_m(z) + [−1 + x S_{n−1}(v)(S_n(v) + (1−v) S_{n−1}(v))] S_{m−1}(z)
/// with v = x + M² + M⁻² and z = 2 + (v−2) x S_{n−1}(v)².
pub fn rm_polynomial(params: &JKnotParams) -> PolyCx {
    let (m2, mi2) = m_squares(params.meridian());
    let one = Cx::new(1.0, 0.0);
    let n = params.n as i64;
    let m = params.m as i64;
    let v = PolyCx::linear(m2 + mi2);
    let x = PolyCx::linear(Cx::new(0.0, 0.0));
    let sn1 = cheb_s_of_poly(n - 1, &v);
    let sn = cheb_s_of_poly(n, &v);
    let v_minus_2 = v.sub(&PolyCx::constant(2.0 * one));
    let z = poly_mul(&poly_mul(&v_minus_2, &x), &poly_mul(&sn1, &sn1))
        .sub(&PolyCx::constant(-2.0 * one));
    let one_minus_v = PolyCx::constant(one).sub(&v);
    let inner = crate::polyroots::poly_add(&sn, &poly_mul(&one_minus_v, &sn1));
    let bracket = poly_mul(&poly_mul(&x, &sn1), &inner).sub(&PolyCx::constant(one));
    crate::polyroots::poly_add(
        &cheb_s_of_poly(m, &z),
        &poly_mul(&bracket, &cheb_s_of_poly(m - 1, &z)),
    )
}

/// φ and dφ/dx by direct evaluation of the Chebyshev recurrences, which is
/// better conditioned than the expanded coefficients.
pub fn rm_eval(params: &JKnotParams, x: Cx) -> (Cx, Cx) {
    let (m2, mi2) = m_squares(params.meridian());
    let one = Cx::new(1.0, 0.0);
    let n = params.n as i64;
    let m = params.m as i64;
    let v = x + m2 + mi2;
    let (a, da) = cheb_s_with_derivative(n - 1, v);
    let (b, db) = cheb_s_with_derivative(n, v);
    let z = 2.0 * one + (v - 2.0) * x * a * a;
    let dz = x * a * a + (v - 2.0) * a * a + (v - 2.0) * x * 2.0 * a * da;
    let (sm, dsm) = cheb_s_with_derivative(m, z);
    let (sm1, dsm1) = cheb_s_with_derivative(m - 1, z);
    let inner = b + (one - v) * a;
    let dinner = db - a + (one - v) * da;
    let bracket = -one + x * a * inner;
    let dbracket = a * inner + x * da * inner + x * a * dinner;
    let phi = sm + bracket * sm1;
    let dphi = dsm * dz + dbracket * sm1 + bracket * dsm1 * dz;
    (phi, dphi)
}

/// Distinct roots of φ, polished against [`rm_eval`] and sorted by (Re, Im).
pub fn rm_roots(params: &JKnotParams) -> Result<Vec<Cx>> {
    let eval = |t| rm_eval(params, t);
    let raw = aberth_refine(eval, roots_all(&rm_polynomial(params))?, 200);
    let mut out: Vec<Cx> = Vec::with_capacity(raw.len());
    for x in raw {
        let x = newton_polish(eval, x, 30);
        if !out
            .iter()
            .any(|y| (x - y).norm() <= ROOT_DEDUP_TOL * (1.0 + y.norm()))
        {
            out.push(x);
        }
    }
    sort_lex(&mut out);
    Ok(out)
}

/// (ρ(s), ρ(t)) for the two meridian generators.
pub fn holonomy_matrices(x: Cx, mm: Cx) -> (SL2, SL2) {
    let zero = Cx::new(0.0, 0.0);
    let one = Cx::new(1.0, 0.0);
    let (m2, mi2) = m_squares(mm);
    let s = SL2::new(mm, one, zero, mm.inv());
    let t = SL2::new(mm, zero, 2.0 * one - m2 - mi2 - x, mm.inv());
    (s, t)
}

/// W = (T⁻¹S)ⁿ(TS⁻¹)ⁿ by repeated multiplication.
pub fn w_matrix(x: Cx, mm: Cx, n: usize) -> SL2 {
    let (s, t) = holonomy_matrices(x, mm);
    (t.inv() * s).pow(n) * (t * s.inv()).pow(n)
}

/// The entries (W₁₁, W₁₂, W₂₂) of W in closed form; W₂₁ = (2−v)W₁₂.
pub fn w_entries_closed_form(x: Cx, mm: Cx, n: usize) -> (Cx, Cx, Cx) {
    let (m2, mi2) = m_squares(mm);
    let v = x + m2 + mi2;
    let sn = cheb_s(n as i64, v);
    let sn1 = cheb_s(n as i64 - 1, v);
    let w11 = sn * sn
        + (2.0 - 2.0 * v) * sn * sn1
        + (1.0 + 2.0 * mi2 - 2.0 * v - mi2 * v + v * v) * sn1 * sn1;
    let w12 = (mm.inv() - mm) * sn * sn1 + (mm * v - mm - mm.inv()) * sn1 * sn1;
    let w22 = sn * sn - 2.0 * sn * sn1 + (1.0 + 2.0 * m2 - m2 * v) * sn1 * sn1;
    (w11, w12, w22)
}

/// tr W = 2 + (v−2) x S_{n−1}(v)².
pub fn trace_w_closed_form(x: Cx, mm: Cx, n: usize) -> Cx {
    let (m2, mi2) = m_squares(mm);
    let v = x + m2 + mi2;
    let s = cheb_s(n as i64 - 1, v);
    2.0 + (v - 2.0) * x * s * s
}

/// tr(S·Wᵐ·c)/√(2−v), with c the off-diagonal matrix built from √(2−v).
pub fn phi_via_matrices(x: Cx, params: &JKnotParams) -> Cx {
    let mm = params.meridian();
    let (m2, mi2) = m_squares(mm);
    let v = x + m2 + mi2;
    let root = (2.0 - v).sqrt();
    let zero = Cx::new(0.0, 0.0);
    let c = SL2::new(zero, -root.inv(), root, zero);
    let (s, _) = holonomy_matrices(x, mm);
    let w = w_matrix(x, mm, params.n);
    (s * w.pow(params.m) * c).trace() / root
}

/// ‖S·Wᵐ − Wᵐ·T‖ (largest entry); zero iff ρ respects the group relation.
pub fn rep_residual(x: Cx, params: &JKnotParams) -> f64 {
    let mm = params.meridian();
    let (s, t) = holonomy_matrices(x, mm);
    let wm = w_matrix(x, mm, params.n).pow(params.m);
    (s * wm).dist(&(wm * t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtBranch {
    Principal,
    Opposite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceBundle {
    pub sqrt_lambda: Cx,
    pub b: Vec<Cx>,
    pub p: Vec<Cx>,
    pub q: Vec<Cx>,
    pub bp: Vec<Cx>,
    pub pp: Vec<Cx>,
    pub qp: Vec<Cx>,
    /// B and B′ with M replaced by 1/M
    pub b_tilde: Vec<Cx>,
    pub bp_tilde: Vec<Cx>,
}

/// Coefficients (α, β) of x_{j+1} = α x_j + β x_{j−1} for odd and even j.
#[derive(Clone, Copy)]
struct TwoPhase<T> {
    odd: (T, T),
    even: (T, T),
}

impl<T: Num + Copy> TwoPhase<T> {
    fn coeffs(&self, j: usize) -> (T, T) {
        if j % 2 == 1 {
            self.odd
        } else {
            self.even
        }
    }

    /// Extends `seq` (holding x₀…x_k) up to index `last`.
    fn extend(&self, mut seq: Vec<T>, last: usize) -> Vec<T> {
        while seq.len() <= last {
            let j = seq.len() - 1;
            let (al, be) = self.coeffs(j);
            seq.push(al * seq[j] + be * seq[j - 1]);
        }
        seq
    }

    /// x₀ recovered from x₁, x₂.
    fn back(&self, x1: T, x2: T) -> T {
        let (al, be) = self.coeffs(1);
        (x2 - al * x1) / be
    }
}

/// The seed-independent sequences B, B̃, B′, B̃′ and the recurrences that
/// produce B and B′ (P, Q and their primed versions reuse them).
struct BaseSequences<T> {
    b: Vec<T>,
    b_tilde: Vec<T>,
    bp: Vec<T>,
    bp_tilde: Vec<T>,
    rec_b: TwoPhase<T>,
    rec_bp: TwoPhase<T>,
}

fn base_sequences<T: Num + Copy>(nv: usize, nh: usize, s: T, m2: T, mi2: T) -> BaseSequences<T> {
    let (zero, one) = (T::zero(), T::one());
    let rec_b = TwoPhase {
        odd: (s, m2),
        even: (s, mi2),
    };
    let rec_bt = TwoPhase {
        odd: (s, mi2),
        even: (s, m2),
    };
    let b = rec_b.extend(vec![zero, one], nv + 3);
    let b_tilde = rec_bt.extend(vec![zero, one], nv + 3);
    let w = b[nv + 1] - b[nv - 1];
    let wt = b_tilde[nv + 1] - b_tilde[nv - 1];
    let rec_bp = TwoPhase {
        odd: (wt, mi2),
        even: (w, m2),
    };
    let rec_bpt = TwoPhase {
        odd: (w, m2),
        even: (wt, mi2),
    };
    let bp = rec_bp.extend(vec![zero, one], nh + 3);
    let bp_tilde = rec_bpt.extend(vec![zero, one], nh + 3);
    BaseSequences {
        b,
        b_tilde,
        bp,
        bp_tilde,
        rec_b,
        rec_bp,
    }
}

/// φ(x) from the closed form of [`rm_polynomial`], over any commutative ring.
fn phi_value<T: Num + Copy>(n: i64, m: i64, x: T, m2: T, mi2: T) -> T {
    let one = T::one();
    let two = one + one;
    let v = x + m2 + mi2;
    let a = cheb_s(n - 1, v);
    let z = two + (v - two) * x * a * a;
    let bracket = x * a * (cheb_s(n, v) + (one - v) * a) - one;
    cheb_s(m, z) + bracket * cheb_s(m - 1, z)
}

/// Sequences for Λ with the default seeds and the principal √Λ.
pub fn build_sequences(params: &JKnotParams, lam: Cx) -> Result<SequenceBundle> {
    build_sequences_with(params, lam, DEFAULT_SEEDS, SqrtBranch::Principal)
}

pub fn build_sequences_with(
    params: &JKnotParams,
    lam: Cx,
    seeds: [Cx; 3],
    branch: SqrtBranch,
) -> Result<SequenceBundle> {
    if lam.norm() == 0.0 {
        return Err(Error::Domain("Λ must be nonzero".into()));
    }
    let (m2, mi2) = m_squares(params.meridian());
    let s = match branch {
        SqrtBranch::Principal => lam.sqrt(),
        SqrtBranch::Opposite => -lam.sqrt(),
    };
    let nv = params.two_n();
    let nh = params.two_m();
    let [z1, z2, z3] = seeds;
    let BaseSequences {
        b,
        b_tilde,
        bp,
        bp_tilde,
        rec_b,
        rec_bp,
    } = base_sequences(nv, nh, s, m2, mi2);
    let p = rec_b.extend(vec![z1 * (z2 - z3 * mi2), s * z2 * z3], nv + 3);
    let (q1, q2) = (s * z3, z2 - z3 * mi2);
    let q = rec_b.extend(vec![rec_b.back(q1, q2), q1, q2], nv + 3);
    let pp = rec_bp.extend(vec![p[nv], p[0]], nh + 3);
    let (qp1, qp2) = (q[2], q[nv + 2]);
    let qp = rec_bp.extend(vec![rec_bp.back(qp1, qp2), qp1, qp2], nh + 3);

    Ok(SequenceBundle {
        sqrt_lambda: s,
        b,
        p,
        q,
        bp,
        pp,
        qp,
        b_tilde,
        bp_tilde,
    })
}

/// |φ(x) − (B′_{2m+1} + B̃′_{2m} B̃_{2n−1})| with the sequences built at Λ = x.
///
/// Both sides grow like |x|^{deg φ} and reach 10¹⁰ for moderate n, m, so the
/// identity is checked in double-double arithmetic: x and M² are taken as
/// exact inputs, M⁻² and √Λ are refined by Newton steps, and the same recurrences
/// as [`build_sequences`] run at roughly 32 significant digits.
pub fn rm_equivalence_residual(params: &JKnotParams, x: Cx) -> Result<f64> {
    if x.norm() == 0.0 {
        return Err(Error::Domain("Λ must be nonzero".into()));
    }
    // twofloat's division is only f64-accurate, so 1/M² and √x are refined
    // with one multiplication-only Newton step each
    let dd = |z: Cx| Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im));
    let one = dd(Cx::new(1.0, 0.0));
    let m2_f = params.meridian() * params.meridian();
    let m2 = dd(m2_f);
    let r0 = dd(m2_f.inv());
    let mi2 = r0 + r0 * (one - m2 * r0);
    let xd = dd(x);
    let s_f = x.sqrt();
    let s0 = dd(s_f);
    let s = s0 + (xd - s0 * s0) * dd(0.5 / s_f);
    let (nv, nh) = (params.two_n(), params.two_m());
    let seq = base_sequences(nv, nh, s, m2, mi2);
    let rhs = seq.bp[nh + 1] + seq.bp_tilde[nh] * seq.b_tilde[nv - 1];
    let diff = phi_value(params.n as i64, params.m as i64, xd, m2, mi2) - rhs;
    Ok(f64::from(diff.re).hypot(f64::from(diff.im)))
}

fn ratio(num: Cx, den: Cx, what: &str) -> Result<Cx> {
    let v = num / den;
    if den.norm() == 0.0 || !v.re.is_finite() || !v.im.is_finite() || v.norm() == 0.0 {
        return Err(Error::Degenerate(format!("{what} is 0 or ∞")));
    }
    Ok(v)
}

fn same(a: Cx, b: Cx) -> bool {
    (a - b).norm() <= IDENTIFICATION_TOL * a.norm().max(b.norm())
}

/// Segment values from the recurrences for one choice of seeds and √Λ,
/// indexed like [`generate_j_diagram`], in the z₁ = 1 gauge.
pub fn assemble_with(
    params: &JKnotParams,
    lam: Cx,
    seeds: [Cx; 3],
    branch: SqrtBranch,
) -> Result<SegmentSolution> {
    let seq = build_sequences_with(params, lam, seeds, branch)?;
    let nv = params.two_n();
    let nh = params.two_m();
    let mut z = vec![Cx::new(0.0, 0.0); 2 * (nv + nh)];
    for j in 1..=nv + 1 {
        z[2 * j - 2] = ratio(seq.p[j - 1], seq.q[j + 1], "vertical segment")?;
        z[2 * j - 1] = ratio(seq.p[j], seq.q[j], "vertical segment")?;
    }
    let mut h = vec![Cx::new(0.0, 0.0); 2 * nh + 3];
    for j in 1..=nh + 1 {
        h[2 * j - 1] = ratio(seq.pp[j - 1], seq.qp[j + 1], "horizontal segment")?;
        h[2 * j] = ratio(seq.pp[j], seq.qp[j], "horizontal segment")?;
    }
    let pairs = [
        (1, 2 * nv + 1),
        (2, 1),
        (2 * nh + 1, 2 * nv + 2),
        (2 * nh + 2, 2),
    ];
    for (hj, vj) in pairs {
        if !same(h[hj], z[vj - 1]) {
            return Err(Error::Inconsistent(format!(
                "z'_{hj} = {} but z_{vj} = {}",
                h[hj],
                z[vj - 1]
            )));
        }
    }
    for j in 3..=2 * nh {
        z[2 * nv + 2 + (j - 3)] = h[j];
    }
    SegmentSolution::new(z).gauged()
}

/// The potential of the generated J(2n,−2m) diagram.
pub fn j_potential(params: &JKnotParams) -> Result<PotentialFunction> {
    Ok(build_potential(&generate_j_diagram(params.n, params.m)?))
}

/// Assembled solution for a root Λ. The principal √Λ is tried first and the
/// opposite branch if the hyperbolicity equations fail.
pub fn assemble_solution(params: &JKnotParams, lam: Cx) -> Result<SegmentSolution> {
    let pf = j_potential(params)?;
    let mut first_err = None;
    for branch in [SqrtBranch::Principal, SqrtBranch::Opposite] {
        let attempt = assemble_with(params, lam, DEFAULT_SEEDS, branch).and_then(|sol| {
            let res = hyperbolicity_residual(&pf, &sol.z, params.cone_angle())?;
            if res <= ASSEMBLY_RESIDUAL_TOL {
                Ok(sol)
            } else {
                Err(Error::Inconsistent(format!(
                    "hyperbolicity residual {res:.3e}"
                )))
            }
        });
        match attempt {
            Ok(sol) => return Ok(sol),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap())
}

/// Λ = (M² z₂ − z₃)(z₄ − M² z₁) / (M² z₂ z₃).
pub fn lambda_from_solution(z: &SegmentSolution, mm: Cx) -> Result<Cx> {
    if z.z.len() < 4 {
        return Err(Error::Precondition("need at least four segments".into()));
    }
    let (z1, z2, z3, z4) = (z.z[0], z.z[1], z.z[2], z.z[3]);
    let m2 = mm * mm;
    let den = m2 * z2 * z3;
    if den.norm() == 0.0 {
        return Err(Error::Degenerate("z₂ z₃ = 0".into()));
    }
    Ok((m2 * z2 - z3) * (z4 - m2 * z1) / den)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub lambda: Cx,
    pub w: Option<Cx>,
    pub volume: Option<f64>,
    pub error: Option<String>,
    pub geometric: bool,
}

#[derive(Debug, Clone)]
pub struct GeometricChoice {
    pub lambda: Cx,
    pub solution: SegmentSolution,
    pub invariants: OrbifoldInvariants,
    pub candidates: Vec<Candidate>,
}

/// Evaluates every root of φ and picks the one of maximal volume.
pub fn geometric_lambda(params: &JKnotParams) -> Result<GeometricChoice> {
    let params = JKnotParams::new(params.n, params.m, params.r)?;
    let pf = j_potential(&params)?;
    let roots = rm_roots(&params)?;
    let mut candidates = Vec::with_capacity(roots.len());
    let mut best: Option<(usize, SegmentSolution, OrbifoldInvariants)> = None;
    for lam in roots {
        let outcome = assemble_solution(&params, lam)
            .and_then(|sol| complex_volume(&pf, &sol, Some(params.r)).map(|inv| (sol, inv)));
        match outcome {
            Ok((sol, inv)) => {
                candidates.push(Candidate {
                    lambda: lam,
                    w: Some(inv.w_raw),
                    volume: Some(inv.volume),
                    error: None,
                    geometric: false,
                });
                let better = match &best {
                    None => true,
                    Some((_, _, b)) => {
                        let dv = inv.volume - b.volume;
                        dv > VOLUME_TIE_TOL
                            || (dv.abs() <= VOLUME_TIE_TOL
                                && lam.im > 0.0
                                && b.lambda.is_none_or(|l| l.im <= 0.0))
                    }
                };
                if better {
                    let mut inv = inv;
                    inv.lambda = Some(lam);
                    best = Some((candidates.len() - 1, sol, inv));
                }
            }
            Err(e) => candidates.push(Candidate {
                lambda: lam,
                w: None,
                volume: None,
                error: Some(e.to_string()),
                geometric: false,
            }),
        }
    }
    match best {
        Some((idx, sol, inv)) if inv.volume > 0.0 => {
            candidates[idx].geometric = true;
            Ok(GeometricChoice {
                lambda: inv.lambda.unwrap(),
                solution: sol,
                invariants: inv,
                candidates,
            })
        }
        _ => Err(Error::NoGeometricSolution {
            candidates: candidates.len(),
        }),
    }
}
