//! Brute-force perimeter minimization over polar graphs r(θ) sampled on a
//! uniform grid, used to cross-check the closed-form classifier.
//!
//! Between nodes r is linear in θ and each edge is integrated with a 4-point
//! Gauss rule. Both sums are exactly homogeneous in r (degrees p+1 and p+2),
//! so rescaling r restores the area without error. A cruder midpoint edge
//! rule undercounts steep drops to the origin and lets the minimizer cheat. Descent runs
//! on the scale-free ratio P/A^{(p+1)/(p+2)} with a tridiagonal Sobolev
//! preconditioner built from the edge curvature of the perimeter.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cgc::{self, CgcError, UndularySpec};
use crate::measures::{iso_ratio, MeasureError, PolarGraph, PowerDensity};
use crate::quadrature;
use crate::sector::{classify_sector, SectorError, SectorKind};

/// Nodes are never pushed below this radius.
pub const RADIUS_FLOOR: f64 = 1e-12;
/// An end radius below this fraction of the largest radius touches the origin.
pub const ORIGIN_CONTACT: f64 = 1e-6;
pub const GRADIENT_TOLERANCE: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 20_000;
pub const DEFAULT_NODES: usize = 256;
/// Relative radius spread below which a curve counts as an arc.
pub const ARC_FLATNESS: f64 = 1e-3;
/// Curvature statistics skip nodes closer to the origin than this fraction of
/// the largest radius; stencils there straddle the contact corner.
pub const CURVATURE_CUTOFF: f64 = 0.05;
/// Size of the seeded low-mode perturbation applied to every start.
const PERTURBATION: f64 = 1e-3;
const EDGE_GAUSS_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid oracle problem: {0}")]
    InvalidProblem(String),
    #[error("curve collapsed to zero area at iteration {iteration}")]
    CollapseDetected { iteration: usize },
    #[error("every start failed: {}", .0.join("; "))]
    AllStartsFailed(Vec<String>),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Cgc(#[from] CgcError),
    #[error(transparent)]
    Sector(#[from] SectorError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OracleInit {
    FromArc,
    FromSemicircle,
    FromUndulary { r1: f64 },
    Custom { curve: PolarGraph },
}

impl OracleInit {
    pub fn name(&self) -> &'static str {
        match self {
            OracleInit::FromArc => "arc",
            OracleInit::FromSemicircle => "semicircle",
            OracleInit::FromUndulary { .. } => "undulary",
            OracleInit::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleProblem {
    pub p: f64,
    pub theta0: f64,
    pub target_area: f64,
    pub node_count: usize,
    pub init: OracleInit,
    pub seed: u64,
}

impl OracleProblem {
    pub fn new(p: f64, theta0: f64, target_area: f64, init: OracleInit) -> Self {
        Self { p, theta0, target_area, node_count: DEFAULT_NODES, init, seed: 0 }
    }

    fn validate(&self) -> Result<(), OracleError> {
        let bad = |msg: String| Err(OracleError::InvalidProblem(msg));
        if !(self.p > 0.0) || !self.p.is_finite() {
            return bad(format!("p must be positive and finite, got {}", self.p));
        }
        if !(self.theta0 > 0.0) || !self.theta0.is_finite() {
            return bad(format!("theta0 must be positive and finite, got {}", self.theta0));
        }
        if !(self.target_area > 0.0) || !self.target_area.is_finite() {
            return bad(format!("target area must be positive and finite, got {}", self.target_area));
        }
        if self.node_count < 64 {
            return bad(format!("need at least 64 nodes, got {}", self.node_count));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub curve: PolarGraph,
    pub perimeter: f64,
    pub area: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Constrained gradient relative to the perimeter gradient, 2-norm.
    pub gradient_norm: f64,
}

impl OracleResult {
    pub fn ratio(&self, p: f64) -> Result<f64, MeasureError> {
        iso_ratio(self.perimeter, self.area, PowerDensity::new(p))
    }

    pub fn touches_origin(&self) -> bool {
        let r = self.curve.radius();
        let top = r.iter().cloned().fold(0.0, f64::max);
        r[0] < ORIGIN_CONTACT * top || r[r.len() - 1] < ORIGIN_CONTACT * top
    }

    /// Origin contact, then flatness, decide the shape.
    pub fn shape(&self) -> SectorKind {
        if self.touches_origin() {
            return SectorKind::Semicircle;
        }
        let r = self.curve.radius();
        let top = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let bottom = r.iter().cloned().fold(f64::INFINITY, f64::min);
        if (top - bottom) / top < ARC_FLATNESS {
            SectorKind::Arc
        } else {
            SectorKind::Undulary
        }
    }
}

/// Discrete perimeter and area: r is interpolated linearly in θ between
/// nodes and each edge is integrated with a fixed Gauss rule.
#[derive(Debug, Clone)]
struct Discrete {
    p: f64,
    h: f64,
    /// Gauss nodes and weights on [0, 1].
    rule: Vec<(f64, f64)>,
}

impl Discrete {
    fn new(p: f64, theta0: f64, nodes: usize) -> Self {
        let g = quadrature::gauss_legendre(EDGE_GAUSS_POINTS);
        let rule = g.nodes.iter().zip(&g.weights).map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
        Self { p, h: theta0 / (nodes - 1) as f64, rule }
    }

    fn perimeter(&self, r: &[f64]) -> f64 {
        r.windows(2)
            .map(|w| {
                let s = (w[1] - w[0]) / self.h;
                self.rule
                    .iter()
                    .map(|&(t, wt)| {
                        let x = w[0] + t * (w[1] - w[0]);
                        wt * x.powf(self.p) * x.hypot(s)
                    })
                    .sum::<f64>()
                    * self.h
            })
            .sum()
    }

    fn area(&self, r: &[f64]) -> f64 {
        r.windows(2)
            .map(|w| {
                self.rule.iter().map(|&(t, wt)| wt * (w[0] + t * (w[1] - w[0])).powf(self.p + 2.0)).sum::<f64>()
                    * self.h
            })
            .sum::<f64>()
            / (self.p + 2.0)
    }

    fn perimeter_gradient(&self, r: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; r.len()];
        for (i, w) in r.windows(2).enumerate() {
            let s = (w[1] - w[0]) / self.h;
            for &(t, wt) in &self.rule {
                let x = w[0] + t * (w[1] - w[0]);
                let q = x.hypot(s);
                let xp = x.powf(self.p);
                let dx = self.p * xp / x * q + xp * x / q;
                let ds = xp * s / q;
                g[i] += wt * (self.h * (1.0 - t) * dx - ds);
                g[i + 1] += wt * (self.h * t * dx + ds);
            }
        }
        g
    }

    fn area_gradient(&self, r: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; r.len()];
        for (i, w) in r.windows(2).enumerate() {
            for &(t, wt) in &self.rule {
                let f = wt * self.h * (w[0] + t * (w[1] - w[0])).powf(self.p + 1.0);
                g[i] += (1.0 - t) * f;
                g[i + 1] += t * f;
            }
        }
        g
    }

    /// Perimeter gradient minus the multiple of the area gradient that makes
    /// it tangent to scalings, i.e. the gradient of P with A held fixed.
    fn constrained_gradient(&self, r: &[f64]) -> Vec<f64> {
        let gp = self.perimeter_gradient(r);
        let ga = self.area_gradient(r);
        let lambda = (self.p + 1.0) / (self.p + 2.0) * self.perimeter(r) / self.area(r);
        gp.iter().zip(&ga).map(|(a, b)| a - lambda * b).collect()
    }

    /// Solves M v = rhs for the Sobolev preconditioner; nodes with
    /// `frozen[i]` get v = 0.
    fn precondition(&self, r: &[f64], rhs: &[f64], frozen: &[bool]) -> Vec<f64> {
        let n = r.len();
        let stiff: Vec<f64> = r
            .windows(2)
            .map(|w| {
                let s = (w[1] - w[0]) / self.h;
                self.rule
                    .iter()
                    .map(|&(t, wt)| {
                        let x = w[0] + t * (w[1] - w[0]);
                        let q = x.hypot(s);
                        wt * x.powf(self.p) * x * x / (q * q * q)
                    })
                    .sum()
            })
            .collect();
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n - 1];
        for (e, &k) in stiff.iter().enumerate() {
            let c = k / self.h;
            diag[e] += c;
            diag[e + 1] += c;
            diag[e] += 0.5 * self.h * k;
            diag[e + 1] += 0.5 * self.h * k;
            if !frozen[e] && !frozen[e + 1] {
                off[e] = -c;
            }
        }
        let mut b: Vec<f64> = rhs.to_vec();
        for i in 0..n {
            if frozen[i] {
                diag[i] = 1.0;
                b[i] = 0.0;
            }
        }
        solve_symmetric_tridiagonal(&diag, &off, &b)
    }
}

fn solve_symmetric_tridiagonal(diag: &[f64], off: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = if n > 1 { off[0] / diag[0] } else { 0.0 };
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - off[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = off[i] / denom;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

fn uniform_grid(theta0: f64, n: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (0..n).map(|i| theta0 * i as f64 / (n - 1) as f64).collect();
    t[n - 1] = theta0;
    t
}

/// Piecewise-linear resampling of (xs, ys) at `at`, clamped to the ends.
fn resample(xs: &[f64], ys: &[f64], at: &[f64]) -> Vec<f64> {
    at.iter()
        .map(|&x| {
            let j = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
            let (x0, x1) = (xs[j - 1], xs[j]);
            let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
            ys[j - 1] + t * (ys[j] - ys[j - 1])
        })
        .collect()
}

fn initial_radii(prob: &OracleProblem, theta: &[f64]) -> Result<Vec<f64>, OracleError> {
    let theta0 = prob.theta0;
    let mut r: Vec<f64> = match &prob.init {
        OracleInit::FromArc => vec![1.0; theta.len()],
        OracleInit::FromSemicircle => {
            let squeeze = (FRAC_PI_2 / theta0).min(1.0);
            theta.iter().map(|&t| (t * squeeze).min(FRAC_PI_2).cos()).collect()
        }
        OracleInit::FromUndulary { r1 } => {
            let spec = UndularySpec::new(*r1, PowerDensity::new(prob.p))?;
            let wave = cgc::integrate_undulary(&spec, 1024)?;
            let stretch = wave.theta0() / theta0;
            let at: Vec<f64> = theta.iter().map(|t| t * stretch).collect();
            resample(wave.theta(), wave.radius(), &at)
        }
        OracleInit::Custom { curve } => {
            if (curve.theta0() - theta0).abs() > 1e-12 * theta0 {
                return Err(OracleError::InvalidProblem(format!(
                    "custom curve spans {} but the sector is {theta0}",
                    curve.theta0()
                )));
            }
            resample(curve.theta(), curve.radius(), theta)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(prob.seed);
    let modes: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    for (x, &t) in r.iter_mut().zip(theta) {
        let wobble: f64 =
            modes.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * std::f64::consts::PI * t / theta0).cos()).sum();
        *x = (*x * (1.0 + PERTURBATION * wobble)).max(RADIUS_FLOOR);
    }
    Ok(r)
}

fn rescale(disc: &Discrete, r: &mut [f64], target: f64, iteration: usize) -> Result<f64, OracleError> {
    let area = disc.area(r);
    let k = (target / area).powf(1.0 / (disc.p + 2.0));
    if !(area > 0.0) || !k.is_finite() {
        return Err(OracleError::CollapseDetected { iteration });
    }
    for x in r.iter_mut() {
        *x = (*x * k).max(RADIUS_FLOOR);
    }
    let top = r.iter().cloned().fold(0.0, f64::max);
    if r.iter().filter(|&&x| x > ORIGIN_CONTACT * top).count() < 3 {
        return Err(OracleError::CollapseDetected { iteration });
    }
    Ok(disc.area(r))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Minimizes the discrete perimeter at fixed area from the given start.
/// Running out of iterations is reported through `converged = false`.
pub fn minimize_polar(prob: &OracleProblem) -> Result<OracleResult, OracleError> {
    prob.validate()?;
    let n = prob.node_count;
    let disc = Discrete::new(prob.p, prob.theta0, n);
    let theta = uniform_grid(prob.theta0, n);
    let kappa = (prob.p + 1.0) / (prob.p + 2.0);
    let mut r = initial_radii(prob, &theta)?;
    let mut area = rescale(&disc, &mut r, prob.target_area, 0)?;
    let mut step: f64 = 1.0;
    let mut iterations = 0;
    let mut converged = false;
    let mut gradient_norm = f64::INFINITY;
    let ratio = |x: &[f64]| disc.perimeter(x) / disc.area(x).powf(kappa);
    while iterations < MAX_ITERATIONS {
        let grad = disc.constrained_gradient(&r);
        let frozen: Vec<bool> = r.iter().zip(&grad).map(|(&x, &g)| x <= 2.0 * RADIUS_FLOOR && g > 0.0).collect();
        let free: Vec<f64> = grad.iter().zip(&frozen).map(|(&g, &f)| if f { 0.0 } else { g }).collect();
        gradient_norm = norm(&free) / norm(&disc.perimeter_gradient(&r));
        if gradient_norm < GRADIENT_TOLERANCE {
            converged = true;
            break;
        }
        let dir: Vec<f64> = disc.precondition(&r, &free, &frozen).iter().map(|v| -v).collect();
        let j0 = ratio(&r);
        let scale = disc.area(&r).powf(kappa);
        let slack = 8.0 * f64::EPSILON * j0;
        step = (2.0 * step).min(1.0);
        let mut accepted = None;
        while step > 1e-14 {
            let trial: Vec<f64> = r.iter().zip(&dir).map(|(x, d)| (x + step * d).max(RADIUS_FLOOR)).collect();
            let decrease: f64 =
                grad.iter().zip(trial.iter().zip(&r)).map(|(g, (t, x))| g * (t - x)).sum::<f64>() / scale;
            let j1 = ratio(&trial);
            if j1.is_finite() && j1 <= j0 + 1e-4 * decrease + slack {
                accepted = Some(trial);
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        let Some(trial) = accepted else { break };
        r = trial;
        area = rescale(&disc, &mut r, prob.target_area, iterations)?;
    }
    let perimeter = disc.perimeter(&r);
    let curve = PolarGraph::new(theta, r)?;
    Ok(OracleResult { curve, perimeter, area, converged, iterations, gradient_norm })
}

/// Constrained gradient of the discrete perimeter, the direction the
/// minimizer descends along before preconditioning.
pub fn constrained_gradient(p: f64, theta0: f64, r: &[f64]) -> Vec<f64> {
    Discrete::new(p, theta0, r.len()).constrained_gradient(r)
}

/// Central differences of r ↦ P(r·s(r)) with s restoring the area of `r`.
pub fn finite_difference_gradient(p: f64, theta0: f64, r: &[f64], rel_step: f64) -> Vec<f64> {
    let disc = Discrete::new(p, theta0, r.len());
    let target = disc.area(r);
    let projected = |x: &[f64]| {
        let k = (target / disc.area(x)).powf(1.0 / (p + 2.0));
        disc.perimeter(x) * k.powf(p + 1.0)
    };
    (0..r.len())
        .map(|i| {
            let h = rel_step * r[i].abs().max(1e-3);
            let mut up = r.to_vec();
            let mut down = r.to_vec();
            up[i] += h;
            down[i] -= h;
            (projected(&up) - projected(&down)) / (2.0 * h)
        })
        .collect()
}

/// Largest gap between the analytic and finite-difference gradients,
/// relative to the largest analytic component.
pub fn gradient_check(p: f64, theta0: f64, r: &[f64]) -> f64 {
    let exact = constrained_gradient(p, theta0, r);
    let fd = finite_difference_gradient(p, theta0, r, 1e-6);
    let scale = exact.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    exact.iter().zip(&fd).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSpread {
    pub mean: f64,
    pub std_dev: f64,
    pub nodes: usize,
}

impl CurvatureSpread {
    pub fn relative(&self) -> f64 {
        self.std_dev / self.mean.abs()
    }
}

/// Generalized curvature statistics over the part of the curve away from
/// the origin (radius above `cutoff` times the largest radius).
pub fn curvature_spread(result: &OracleResult, p: f64, cutoff: f64) -> Result<CurvatureSpread, OracleError> {
    let r = result.curve.radius();
    let t = result.curve.theta();
    let top = r.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..r.len()).filter(|&i| r[i] > cutoff * top).collect();
    let (lo, hi) = (keep[0], *keep.last().unwrap());
    if hi - lo + 1 != keep.len() {
        return Err(OracleError::InvalidProblem("curve leaves the origin more than once".into()));
    }
    let sub = PolarGraph::new(t[lo..=hi].iter().map(|x| x - t[lo]).collect(), r[lo..=hi].to_vec())?;
    let lambda = cgc::generalized_curvature_of(&sub, PowerDensity::new(p))?;
    let count = lambda.len() as f64;
    let mean = lambda.iter().sum::<f64>() / count;
    let var = lambda.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / count;
    Ok(CurvatureSpread { mean, std_dev: var.sqrt(), nodes: lambda.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub area: f64,
    pub starts: usize,
    pub node_count: usize,
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { area: 1.0, starts: 3, node_count: DEFAULT_NODES, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub init: String,
    pub outcome: Result<(SectorKind, f64, bool), String>,
}

/// Oracle ratio minus a closed-form ratio, relative to the latter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleMargin {
    pub kind: SectorKind,
    pub closed_form_ratio: f64,
    pub relative_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleClassification {
    pub p: f64,
    pub theta0: f64,
    pub winner: SectorKind,
    pub ratio: f64,
    pub best_start: usize,
    pub best: OracleResult,
    pub starts: Vec<StartSummary>,
    pub margins: Vec<OracleMargin>,
}

/// Start list: arc, semicircle, equilibrium undulary when one exists, then
/// reseeded arcs until `count` starts are listed.
pub fn default_starts(p: f64, theta0: f64, count: usize) -> Vec<OracleInit> {
    let mut inits = vec![OracleInit::FromArc, OracleInit::FromSemicircle];
    if let Ok(spec) = cgc::solve_equilibrium_undulary(theta0, PowerDensity::new(p)) {
        inits.push(OracleInit::FromUndulary { r1: spec.r1 });
    }
    while inits.len() < count {
        inits.push(OracleInit::FromArc);
    }
    inits.truncate(count);
    inits
}

/// Runs every start in parallel and keeps the smallest perimeter, earliest
/// start first on ties; the winner is the shape of that curve.
pub fn oracle_classify(p: f64, theta0: f64, opts: ClassifyOptions) -> Result<OracleClassification, OracleError> {
    if opts.starts == 0 {
        return Err(OracleError::InvalidProblem("need at least one start".into()));
    }
    let inits = default_starts(p, theta0, opts.starts);
    let runs: Vec<Result<OracleResult, OracleError>> = inits
        .par_iter()
        .enumerate()
        .map(|(i, init)| {
            let prob = OracleProblem {
                p,
                theta0,
                target_area: opts.area,
                node_count: opts.node_count,
                init: init.clone(),
                seed: opts.seed.wrapping_add(i as u64),
            };
            minimize_polar(&prob)
        })
        .collect();
    let starts: Vec<StartSummary> = inits
        .iter()
        .zip(&runs)
        .map(|(init, run)| StartSummary {
            init: init.name().to_string(),
            outcome: run.as_ref().map(|r| (r.shape(), r.perimeter, r.converged)).map_err(|e| e.to_string()),
        })
        .collect();
    let best_start = runs
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().ok().map(|r| (i, r.perimeter)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i);
    let Some(best_start) = best_start else {
        return Err(OracleError::AllStartsFailed(starts.iter().filter_map(|s| s.outcome.clone().err()).collect()));
    };
    let best = runs.into_iter().nth(best_start).unwrap()?;
    let ratio = best.ratio(p)?;
    let closed = classify_sector(PowerDensity::new(p), theta0)?;
    let margins = closed
        .ranked
        .iter()
        .map(|c| OracleMargin {
            kind: c.shape.kind(),
            closed_form_ratio: c.measure.ratio,
            relative_gap: (ratio - c.measure.ratio) / c.measure.ratio,
        })
        .collect();
    Ok(OracleClassification { p, theta0, winner: best.shape(), ratio, best_start, best, starts, margins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{arc_measures, semicircle_measures};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn run(p: f64, theta0: f64, init: OracleInit) -> OracleResult {
        minimize_polar(&OracleProblem::new(p, theta0, 1.0, init)).unwrap()
    }

    #[test]
    fn discrete_measures_are_homogeneous() {
        let disc = Discrete::new(1.5, 2.0, 100);
        let r: Vec<f64> = (0..100).map(|i| 1.0 + 0.3 * (i as f64 * 0.07).sin()).collect();
        let k = 1.7f64;
        let rk: Vec<f64> = r.iter().map(|x| x * k).collect();
        let p_rel = disc.perimeter(&rk) / (disc.perimeter(&r) * k.powf(2.5)) - 1.0;
        let a_rel = disc.area(&rk) / (disc.area(&r) * k.powf(3.5)) - 1.0;
        assert!(p_rel.abs() < 1e-14 && a_rel.abs() < 1e-14);
    }

    #[test]
    fn constant_radius_is_a_discrete_critical_point() {
        let g = constrained_gradient(1.0, 1.3, &[2.0; 80]);
        assert!(g.iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for &p in &[0.5, 1.0, 2.0] {
            let r: Vec<f64> = (0..256)
                .map(|i| {
                    let t = i as f64 / 255.0;
                    1.0 + 0.4 * t * t + 0.1 * (5.0 * t).sin()
                })
                .collect();
            let err = gradient_check(p, 2.1, &r);
            assert!(err < 1e-5, "p = {p}: {err}");
        }
    }

    #[test]
    fn tridiagonal_solver() {
        let diag = [4.0, 5.0, 6.0, 7.0];
        let off = [1.0, -2.0, 0.5];
        let x = [1.0, -1.0, 2.0, 0.5];
        let b: Vec<f64> = (0..4)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += off[i - 1] * x[i - 1];
                }
                if i < 3 {
                    s += off[i] * x[i + 1];
                }
                s
            })
            .collect();
        let got = solve_symmetric_tridiagonal(&diag, &off, &b);
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-14);
        }
    }

    #[test]
    fn arc_start_in_arc_regime() {
        let res = run(1.0, 1.4, OracleInit::FromArc);
        assert!(res.converged, "{res:?}");
        assert_eq!(res.shape(), SectorKind::Arc);
        let d = PowerDensity::new(1.0);
        let unit = arc_measures(1.0, d, 1.4).unwrap();
        let r = (1.0 / unit.area).powf(1.0 / 3.0);
        let expected = arc_measures(r, d, 1.4).unwrap().perimeter;
        assert!((res.perimeter / expected - 1.0).abs() < 1e-3);
        assert!((res.area - 1.0).abs() < 1e-8);
    }

    #[test]
    fn semicircle_start_in_half_plane() {
        let res = run(1.0, PI, OracleInit::FromSemicircle);
        assert!(res.touches_origin());
        let closed = semicircle_measures(1.0, PowerDensity::new(1.0)).unwrap().ratio;
        assert!((closed - 4.5f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((res.ratio(1.0).unwrap() / closed - 1.0).abs() < 1e-3);
        let spread = curvature_spread(&res, 1.0, CURVATURE_CUTOFF).unwrap();
        assert!(spread.relative() < 1e-3, "{spread:?}");
        let dia = res.curve.radius()[0];
        assert!((spread.mean * dia / 3.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn undulary_regime_multi_start() {
        let out = oracle_classify(1.0, 2.30, ClassifyOptions::default()).unwrap();
        assert_eq!(out.winner, SectorKind::Undulary);
        let r = out.best.curve.radius();
        assert!(r.windows(2).all(|w| w[1] > w[0]) || r.windows(2).all(|w| w[1] < w[0]));
        assert!(r.iter().all(|&x| x > 0.01));
        let spread = curvature_spread(&out.best, 1.0, 0.0).unwrap();
        assert!(spread.relative() < 1e-3, "{spread:?}");
        let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = r.iter().cloned().fold(0.0, f64::max);
        let t = cgc::half_period(hi / lo, PowerDensity::new(1.0)).unwrap();
        assert!((t - 2.30).abs() < 1e-2, "T = {t}");
    }

    #[test]
    fn classify_examples() {
        let tag = |p: f64, t: f64| oracle_classify(p, t, ClassifyOptions::default()).unwrap().winner;
        assert_eq!(tag(1.0, 1.0), SectorKind::Arc);
        assert_eq!(tag(1.0, 3.2), SectorKind::Semicircle);
        assert_eq!(tag(2.0, 1.95), SectorKind::Undulary);
    }

    #[test]
    fn deterministic_given_seed() {
        let prob = OracleProblem { seed: 9, ..OracleProblem::new(2.0, 1.9, 1.0, OracleInit::FromArc) };
        assert_eq!(minimize_polar(&prob).unwrap(), minimize_polar(&prob).unwrap());
    }

    #[test]
    fn rejects_bad_problems() {
        let mut prob = OracleProblem::new(1.0, 1.0, 1.0, OracleInit::FromArc);
        prob.node_count = 32;
        assert!(matches!(minimize_polar(&prob), Err(OracleError::InvalidProblem(_))));
        prob.node_count = 64;
        prob.target_area = 0.0;
        assert!(matches!(minimize_polar(&prob), Err(OracleError::InvalidProblem(_))));
        prob.target_area = 1.0;
        prob.p = 0.0;
        assert!(matches!(minimize_polar(&prob), Err(OracleError::InvalidProblem(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn result_meets_area_and_is_single_valued(p in 0.5f64..3.0, theta0 in 0.5f64..3.5, seed in 0u64..1000) {
            let prob = OracleProblem { seed, node_count: 96, ..OracleProblem::new(p, theta0, 2.0, OracleInit::FromArc) };
            let res = minimize_polar(&prob).unwrap();
            prop_assert!((res.area / 2.0 - 1.0).abs() < 1e-8);
            prop_assert_eq!(res.curve.len(), 96);
            prop_assert!(res.curve.radius().iter().all(|&r| r >= RADIUS_FLOOR));
        }
    }
}
