//! Generic solution of the hyperbolicity equations for a reduced alternating
//! diagram: the complete structure by Newton iteration from many seeds, and
//! the orbifold structures by continuation in the cone angle.
//!
//! All iterations run in log coordinates w = log z on the equations
//! exp(z_k ∂V/∂z_k) = exp(±i·t). The solution set is invariant under the
//! global rescaling of z and has further null directions, so every linear
//! solve is a minimum-norm least-squares solve on the unpinned columns.

use crate::complexfn::Cx;
use crate::cvolume::formula_value;
use crate::diagram::KnotDiagram;
use crate::error::{Error, Result};
use crate::jknot::DEFAULT_SEEDS;
use crate::potential::{eval_grad, eval_grad_jacobian, PotentialFunction, SegmentSolution};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Solutions at or below this volume are flagged as non-geometric.
pub const VOLUME_WARNING_TOL: f64 = 1e-9;
/// A continuation path whose volume drops to this level has degenerated.
pub const PATH_VOLUME_FLOOR: f64 = 1e-6;
/// Step halvings per continuation step before giving up.
pub const MAX_HALVINGS: u32 = 8;
/// Newton iterations per continuation corrector; kept small so that a
/// corrector fails rather than jumping to another branch.
const CORRECTOR_MAX_ITER: usize = 15;
/// Backtracking halvings per Newton step.
const LINE_SEARCH_HALVINGS: u32 = 20;
/// Singular values below this fraction of the largest are discarded.
const LSTSQ_RCOND: f64 = 1e-10;
/// Deterministic pseudo-random restarts after the regular seed.
const RANDOM_RESTARTS: usize = 32;
const RNG_SEED: u64 = 0x006f_7262_6976_6f6c;
/// Log-polar grid for the one-parameter chart scan.
const SCAN_RADIAL: usize = 720;
const SCAN_ANGULAR: usize = 720;
const SCAN_LOG_RADIUS: f64 = 5.0;
const SCAN_MINIMA: usize = 400;
/// Deflated random search in the chart.
const DEFLATION_BUDGET: usize = 300;
const DEFLATION_PATIENCE: usize = 80;
const CHART_TOL: f64 = 1e-12;
const ROOT_DEDUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedStrategy {
    /// Near-regular seed, restarts and a chart scan; keep the largest volume.
    Regular,
    /// Newton from `SolverConfig::initial` only.
    Given,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// bound on max_k |exp(z_k ∂V/∂z_k) − target_k|
    pub tol: f64,
    pub max_iter: usize,
    pub continuation_steps: usize,
    pub seed_strategy: SeedStrategy,
    /// starting point for [`SeedStrategy::Given`]
    pub initial: Option<SegmentSolution>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-11,
            max_iter: 60,
            continuation_steps: 64,
            seed_strategy: SeedStrategy::Regular,
            initial: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        if self.continuation_steps == 0 {
            return Err(Error::Domain(
                "continuation_steps must be at least 1".into(),
            ));
        }
        if self.seed_strategy == SeedStrategy::Given && self.initial.is_none() {
            return Err(Error::Domain(
                "seed strategy 'given' needs an initial solution".into(),
            ));
        }
        Ok(())
    }
}

/// A converged solution with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved {
    /// values in the z₁ = 1 gauge
    pub z: SegmentSolution,
    pub residual: f64,
    /// Im of the complex-volume formula at `z`
    pub volume: f64,
    /// distinct converged solutions compared (complete structure only)
    pub candidates: usize,
    pub warnings: Vec<String>,
}

/// exp(±i·angle) per side.
fn targets(pf: &PotentialFunction, angle: f64) -> Vec<Cx> {
    pf.side_types
        .iter()
        .map(|ty| Cx::from_polar(1.0, ty.sign() * angle))
        .collect()
}

fn exp_all(w: &[Cx]) -> Vec<Cx> {
    w.iter().map(|v| v.exp()).collect()
}

fn finite(v: Cx) -> bool {
    v.re.is_finite() && v.im.is_finite()
}

/// F_k = exp(g_k) − target_k; `None` when z is degenerate.
fn system(pf: &PotentialFunction, w: &[Cx], target: &[Cx]) -> Option<Vec<Cx>> {
    let g = eval_grad(pf, &exp_all(w)).ok()?;
    let f: Vec<Cx> = g.iter().zip(target).map(|(gk, t)| gk.exp() - t).collect();
    f.iter().all(|&v| finite(v)).then_some(f)
}

fn max_abs(f: &[Cx]) -> f64 {
    f.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn sq_norm(f: &[Cx]) -> f64 {
    f.iter().map(|v| v.norm_sqr()).sum()
}

/// Minimum-norm least-squares solution of A·x = b.
fn lstsq(a: DMatrix<Cx>, b: DVector<Cx>) -> Option<DVector<Cx>> {
    let svd = a.svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if !(smax > 0.0) {
        return None;
    }
    svd.solve(&b, LSTSQ_RCOND * smax).ok()
}

/// Damped Gauss–Newton on F(w) = 0 with the `pinned` columns held fixed.
/// Returns the final point and residual whether or not `tol` was reached;
/// `None` if the iteration left the nondegenerate region.
fn newton(
    pf: &PotentialFunction,
    mut w: Vec<Cx>,
    target: &[Cx],
    pinned: &[usize],
    tol: f64,
    max_iter: usize,
) -> Option<(Vec<Cx>, f64)> {
    let n = w.len();
    let free: Vec<usize> = (0..n).filter(|k| !pinned.contains(k)).collect();
    let mut f = system(pf, &w, target)?;
    for _ in 0..max_iter {
        if max_abs(&f) <= tol {
            break;
        }
        let (g, jac) = eval_grad_jacobian(pf, &exp_all(&w)).ok()?;
        let a = DMatrix::from_fn(n, free.len(), |k, j| g[k].exp() * jac[(k, free[j])]);
        let b = DVector::from_iterator(n, f.iter().map(|v| -v));
        let d = lstsq(a, b)?;
        let f0 = sq_norm(&f);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=LINE_SEARCH_HALVINGS {
            let mut trial = w.clone();
            for (j, &k) in free.iter().enumerate() {
                trial[k] += lambda * d[j];
            }
            if let Some(ft) = system(pf, &trial, target) {
                if sq_norm(&ft) < f0 {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((wt, ft)) => {
                w = wt;
                f = ft;
            }
            None => break,
        }
    }
    let r = max_abs(&f);
    Some((w, r))
}

fn log_values(z: &[Cx]) -> Result<Vec<Cx>> {
    z.iter()
        .map(|&v| {
            if v.norm() == 0.0 || !finite(v) {
                Err(Error::Degenerate(format!("segment value {v}")))
            } else {
                Ok(v.ln())
            }
        })
        .collect()
}

/// One factor of exp(g_k) = Π (1 − ratio)^power.
#[derive(Debug, Clone, Copy)]
struct Factor {
    other: usize,
    power: i8,
    /// the ratio is z_k / z_other (otherwise z_other / z_k)
    own_is_num: bool,
}

impl Factor {
    fn base(&self, z: &[Cx], k: usize) -> Cx {
        if self.own_is_num {
            1.0 - z[k] / z[self.other]
        } else {
            1.0 - z[self.other] / z[k]
        }
    }

    fn value(&self, z: &[Cx], k: usize) -> Cx {
        let b = self.base(z, k);
        if self.power > 0 {
            b
        } else {
            b.inv()
        }
    }
}

/// Elimination order for the complete-structure equations: each step uses
/// the equation of a known side with a single unknown neighbour to solve
/// for that neighbour; sides never reached get a free seed value, and the
/// equations not consumed are the residual.
#[derive(Debug, Clone)]
struct Plan {
    factors: Vec<Vec<Factor>>,
    seeds: Vec<usize>,
    steps: Vec<(usize, usize)>,
    rest: Vec<usize>,
}

impl Plan {
    fn new(pf: &PotentialFunction) -> Plan {
        let n = pf.num_segments;
        let mut factors = vec![Vec::new(); n];
        for t in &pf.terms {
            factors[t.num].push(Factor {
                other: t.den,
                power: -t.sign,
                own_is_num: true,
            });
            factors[t.den].push(Factor {
                other: t.num,
                power: t.sign,
                own_is_num: false,
            });
        }
        let mut known = vec![false; n];
        let mut used = vec![false; n];
        let mut seeds = vec![0];
        let mut steps = Vec::new();
        known[0] = true;
        while known.iter().any(|k| !k) {
            let mut progress = false;
            for k in 0..n {
                if used[k] || !known[k] {
                    continue;
                }
                let unknown: Vec<usize> = factors[k]
                    .iter()
                    .map(|f| f.other)
                    .filter(|&o| !known[o])
                    .collect();
                if unknown.len() == 1 {
                    steps.push((k, unknown[0]));
                    known[unknown[0]] = true;
                    used[k] = true;
                    progress = true;
                }
            }
            if !progress {
                let best = (0..n)
                    .filter(|&k| !known[k])
                    .max_by_key(|&k| {
                        let c = factors[k].iter().filter(|f| known[f.other]).count();
                        (c, std::cmp::Reverse(k))
                    })
                    .expect("some side is unknown");
                known[best] = true;
                seeds.push(best);
            }
        }
        let rest = (0..n).filter(|&k| !used[k]).collect();
        Plan {
            factors,
            seeds,
            steps,
            rest,
        }
    }

    /// All values from the seed values, with every consumed equation set to 1.
    fn propagate(&self, seed_values: &[Cx]) -> Option<Vec<Cx>> {
        let n = self.factors.len();
        let mut z = vec![Cx::new(f64::NAN, f64::NAN); n];
        for (&k, &v) in self.seeds.iter().zip(seed_values) {
            z[k] = v;
        }
        for &(k, u) in &self.steps {
            let mut product = Cx::new(1.0, 0.0);
            let mut own = None;
            for f in &self.factors[k] {
                if f.other == u {
                    own = Some(*f);
                } else {
                    product *= f.value(&z, k);
                }
            }
            let own = own?;
            // the remaining factor must equal 1/product
            let base = if own.power > 0 {
                product.inv()
            } else {
                product
            };
            z[u] = if own.own_is_num {
                z[k] / (1.0 - base)
            } else {
                z[k] * (1.0 - base)
            };
            if !finite(z[u]) {
                return None;
            }
        }
        Some(z)
    }

    /// Residuals of the unconsumed equations.
    fn residual(&self, z: &[Cx]) -> Vec<Cx> {
        self.rest
            .iter()
            .map(|&k| {
                self.factors[k]
                    .iter()
                    .map(|f| f.value(z, k))
                    .product::<Cx>()
                    - 1.0
            })
            .collect()
    }
}

/// The complete-structure equations restricted to a one-parameter chart:
/// the first three seeds are pinned and the fourth is the unknown.
struct Chart<'a> {
    plan: &'a Plan,
}

impl Chart<'_> {
    fn seed_values(x: Cx) -> [Cx; 4] {
        [DEFAULT_SEEDS[0], DEFAULT_SEEDS[1], DEFAULT_SEEDS[2], x]
    }

    fn eval(&self, x: Cx) -> Option<(Vec<Cx>, Vec<Cx>)> {
        let z = self.plan.propagate(&Self::seed_values(x))?;
        let r = self.plan.residual(&z);
        r.iter().all(|&v| finite(v)).then_some((r, z))
    }

    fn norm(&self, x: Cx) -> f64 {
        self.eval(x)
            .map_or(f64::INFINITY, |(r, _)| sq_norm(&r).sqrt())
    }

    /// Gauss–Newton on the residual vector, deflated by known roots.
    fn newton(&self, mut x: Cx, roots: &[Cx], max_iter: usize) -> Option<Cx> {
        let deflate = |x: Cx| -> Option<Vec<Cx>> {
            let (r, _) = self.eval(x)?;
            let d: Cx = roots.iter().map(|q| x - q).product();
            Some(r.into_iter().map(|v| v / d).collect())
        };
        for _ in 0..max_iter {
            let (r0, _) = self.eval(x)?;
            if max_abs(&r0) < CHART_TOL {
                return Some(x);
            }
            let r = deflate(x)?;
            let h = 1e-7 * (1.0 + x.norm());
            let r2 = deflate(x + h)?;
            let d: Vec<Cx> = r2.iter().zip(&r).map(|(a, b)| (a - b) / h).collect();
            let dd: f64 = sq_norm(&d);
            if !(dd > 0.0) || !dd.is_finite() {
                return None;
            }
            let dr: Cx = d.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
            let dx = -dr / dd;
            let base = sq_norm(&r);
            let mut lambda = 1.0;
            let mut next = x + dx;
            for _ in 0..30 {
                next = x + lambda * dx;
                if deflate(next).is_some_and(|rn| sq_norm(&rn) < base) {
                    break;
                }
                lambda *= 0.5;
            }
            x = next;
        }
        None
    }

    /// Local minima of the residual norm on a log-polar grid, best first.
    fn grid_minima(&self) -> Vec<Cx> {
        let point = |i: usize, j: usize| {
            let lr = -SCAN_LOG_RADIUS + 2.0 * SCAN_LOG_RADIUS * i as f64 / (SCAN_RADIAL - 1) as f64;
            Cx::from_polar(lr.exp(), 2.0 * PI * j as f64 / SCAN_ANGULAR as f64)
        };
        let grid: Vec<Vec<f64>> = (0..SCAN_RADIAL)
            .into_par_iter()
            .map(|i| (0..SCAN_ANGULAR).map(|j| self.norm(point(i, j))).collect())
            .collect();
        let mut minima = Vec::new();
        for i in 0..SCAN_RADIAL {
            for j in 0..SCAN_ANGULAR {
                let v = grid[i][j];
                if !v.is_finite() {
                    continue;
                }
                let is_min = (-1i64..=1).all(|di| {
                    (-1i64..=1).all(|dj| {
                        let ii = i as i64 + di;
                        if (di == 0 && dj == 0) || ii < 0 || ii >= SCAN_RADIAL as i64 {
                            return true;
                        }
                        let jj = (j as i64 + dj).rem_euclid(SCAN_ANGULAR as i64) as usize;
                        v <= grid[ii as usize][jj]
                    })
                });
                if is_min {
                    minima.push((v, i, j));
                }
            }
        }
        minima.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        minima
            .into_iter()
            .take(SCAN_MINIMA)
            .map(|(_, i, j)| point(i, j))
            .collect()
    }

    /// Roots of the chart from the grid minima and a deflated random search.
    fn roots(&self, max_iter: usize, rng: &mut ChaCha8Rng) -> Vec<Cx> {
        let found: Vec<Option<Cx>> = self
            .grid_minima()
            .into_par_iter()
            .map(|x0| self.newton(x0, &[], max_iter))
            .collect();
        let mut roots: Vec<Cx> = Vec::new();
        let push = |roots: &mut Vec<Cx>, x: Cx| {
            let new = !roots
                .iter()
                .any(|q| (x - q).norm() < ROOT_DEDUP_TOL * (1.0 + q.norm()));
            if new {
                roots.push(x);
            }
            new
        };
        for x in found.into_iter().flatten() {
            push(&mut roots, x);
        }
        let (mut misses, mut tries) = (0, 0);
        while tries < DEFLATION_BUDGET && misses < DEFLATION_PATIENCE {
            tries += 1;
            let radius = rng.gen_range(-3.0f64..3.0).exp();
            let x0 = Cx::from_polar(radius, rng.gen_range(0.0..2.0 * PI));
            let found = self.newton(x0, &roots, 100);
            match found {
                Some(x) if push(&mut roots, x) => misses = 0,
                _ => misses += 1,
            }
        }
        roots
    }
}

/// z_k = exp(iθ_k) with θ propagated breadth-first so that each ratio
/// z_num/z_den is close to exp(iπ/3).
pub fn regular_seed(pf: &PotentialFunction) -> SegmentSolution {
    let n = pf.num_segments;
    let mut theta: Vec<Option<f64>> = vec![None; n];
    if n > 0 {
        theta[0] = Some(0.0);
    }
    let mut frontier = std::collections::VecDeque::from([0usize]);
    while let Some(k) = frontier.pop_front() {
        let tk = theta[k].expect("frontier sides are assigned");
        for t in &pf.terms {
            let (other, value) = if t.den == k {
                (t.num, tk + PI / 3.0)
            } else if t.num == k {
                (t.den, tk - PI / 3.0)
            } else {
                continue;
            };
            if theta[other].is_none() {
                theta[other] = Some(value);
                frontier.push_back(other);
            }
        }
    }
    SegmentSolution::new(
        theta
            .into_iter()
            .map(|t| Cx::from_polar(1.0, t.unwrap_or(0.0)))
            .collect(),
    )
}

/// Candidate starting points for the complete structure.
fn seeds(pf: &PotentialFunction, cfg: &SolverConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<Cx>> {
    if cfg.seed_strategy == SeedStrategy::Given {
        return cfg.initial.iter().map(|s| s.z.clone()).collect();
    }
    let regular = regular_seed(pf).z;
    let mut out = vec![regular.clone()];
    for _ in 0..RANDOM_RESTARTS {
        let mut w: Vec<Cx> = regular.iter().map(|z| z.ln()).collect();
        for v in w.iter_mut().skip(1) {
            *v += Cx::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        }
        out.push(exp_all(&w));
    }
    out
}

fn volume_of(pf: &PotentialFunction, z: &[Cx]) -> Option<f64> {
    formula_value(pf, z)
        .ok()
        .map(|w| w.im)
        .filter(|v| v.is_finite())
}

/// The complete hyperbolic structure: every converged solution of
/// exp(z_k ∂V/∂z_k) = 1 reached from the seeds is compared and the one of
/// largest volume is returned.
pub fn solve_complete(
    pf: &PotentialFunction,
    diagram: &KnotDiagram,
    cfg: &SolverConfig,
) -> Result<Solved> {
    cfg.validate()?;
    if diagram.num_segments() != pf.num_segments {
        return Err(Error::Precondition(
            "potential does not belong to the diagram".into(),
        ));
    }
    let target = targets(pf, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    let mut starts = seeds(pf, cfg, &mut rng);
    if cfg.seed_strategy == SeedStrategy::Regular {
        let plan = Plan::new(pf);
        if plan.seeds.len() == 4 {
            let chart = Chart { plan: &plan };
            for x in chart.roots(cfg.max_iter, &mut rng) {
                if let Some((_, z)) = chart.eval(x) {
                    starts.push(z);
                }
            }
        }
    }

    let polished: Vec<Option<(Vec<Cx>, f64)>> = starts
        .par_iter()
        .map(|z| {
            let w = log_values(z).ok()?;
            newton(pf, w, &target, &[0], cfg.tol, cfg.max_iter)
        })
        .collect();

    let mut best: Option<(f64, Vec<Cx>, f64)> = None;
    let mut volumes: Vec<f64> = Vec::new();
    let mut degenerate = None;
    let mut best_residual = f64::INFINITY;
    let mut best_point = Vec::new();
    for (w, r) in polished.into_iter().flatten() {
        if r < best_residual {
            best_residual = r;
            best_point = exp_all(&w);
        }
        if r > cfg.tol {
            continue;
        }
        let z = exp_all(&w);
        let Some(vol) = volume_of(pf, &z) else {
            degenerate = Some(z);
            continue;
        };
        if !volumes.iter().any(|v| (v - vol).abs() < 1e-9) {
            volumes.push(vol);
        }
        if best.as_ref().is_none_or(|(bv, _, _)| vol > *bv) {
            best = Some((vol, z, r));
        }
    }
    let Some((volume, z, residual)) = best else {
        if degenerate.is_some() {
            return Err(Error::Degenerate(
                "every converged solution has a ratio at 0 or 1".into(),
            ));
        }
        return Err(Error::Convergence {
            iterations: cfg.max_iter,
            best: best_point,
        });
    };
    let mut warnings = Vec::new();
    if volume <= VOLUME_WARNING_TOL {
        warnings.push(format!(
            "largest volume {volume:.3e} is not positive; solution is not on the geometric branch"
        ));
    }
    Ok(Solved {
        z: SegmentSolution::new(z).gauged()?,
        residual,
        volume,
        candidates: volumes.len(),
        warnings,
    })
}

/// Sides held fixed along the continuation path: the gauge side and two
/// more that parametrize the remaining null directions.
fn continuation_pins(pf: &PotentialFunction) -> Vec<usize> {
    Plan::new(pf).seeds.into_iter().take(3).collect()
}

/// Continues a complete-structure solution along t ∈ [0, 2π/r], correcting
/// exp(z_k ∂V/∂z_k) = exp(±i·t) at each of `cfg.continuation_steps` equal
/// steps. A failed step is retried with up to [`MAX_HALVINGS`] halvings;
/// a path whose volume collapses counts as failed.
pub fn continue_to_orbifold(
    pf: &PotentialFunction,
    start: &SegmentSolution,
    r: u32,
    cfg: &SolverConfig,
) -> Result<Solved> {
    cfg.validate()?;
    if r < 3 {
        return Err(Error::Domain(format!(
            "orbifold order must be ≥ 3, got {r}"
        )));
    }
    let pins = continuation_pins(pf);
    let theta = 2.0 * PI / r as f64;
    let steps = cfg.continuation_steps;
    let mut w = log_values(&start.z)?;
    let mut last_t = 0.0;
    let intermediate_tol = 100.0 * cfg.tol;
    for step in 0..steps {
        let mut done = None;
        for halvings in 0..=MAX_HALVINGS {
            let sub = 1usize << halvings;
            let mut trial = w.clone();
            let mut ok = true;
            for q in 1..=sub {
                let t = theta * (step as f64 + q as f64 / sub as f64) / steps as f64;
                let target = targets(pf, t);
                match newton(
                    pf,
                    trial.clone(),
                    &target,
                    &pins,
                    cfg.tol,
                    CORRECTOR_MAX_ITER,
                ) {
                    Some((wn, res))
                        if res <= intermediate_tol
                            && volume_of(pf, &exp_all(&wn))
                                .is_some_and(|v| v > PATH_VOLUME_FLOOR) =>
                    {
                        trial = wn;
                        last_t = f64::max(last_t, t);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                done = Some(trial);
                break;
            }
        }
        match done {
            Some(next) => w = next,
            None => return Err(Error::Continuation { last_t }),
        }
    }
    let target = targets(pf, theta);
    let (w, residual) = newton(pf, w, &target, &pins, cfg.tol, cfg.max_iter)
        .ok_or(Error::Continuation { last_t })?;
    if residual > cfg.tol {
        return Err(Error::Convergence {
            iterations: cfg.max_iter,
            best: exp_all(&w),
        });
    }
    let z = exp_all(&w);
    let volume = volume_of(pf, &z)
        .ok_or_else(|| Error::Degenerate("continued solution is degenerate".into()))?;
    Ok(Solved {
        z: SegmentSolution::new(z).gauged()?,
        residual,
        volume,
        candidates: 1,
        warnings: Vec::new(),
    })
}

/// The orbifold structure of cone angle 2π/r, continued from the complete
/// structure.
pub fn solve_orbifold(
    pf: &PotentialFunction,
    diagram: &KnotDiagram,
    r: u32,
    cfg: &SolverConfig,
) -> Result<Solved> {
    if r < 3 {
        return Err(Error::Domain(format!(
            "orbifold order must be ≥ 3, got {r}"
        )));
    }
    let complete = solve_complete(pf, diagram, cfg)?;
    continue_to_orbifold(pf, &complete.z, r, cfg)
}
