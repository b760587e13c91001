//! Quadrature and finite-difference building blocks.
//!
//! Gauss–Legendre rules are cached per order. The adaptive integrator
//! splits whichever panel disagrees most with its two halves. Sampled data on
//! non-uniform grids is integrated with composite Simpson and differentiated
//! with Fornberg stencils.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("sample arrays must have equal length >= {min}, got {got}")]
    BadSamples { min: usize, got: usize },
}

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn build_rule(n: usize) -> GaussRule {
    assert!(n >= 1);
    if n == 1 {
        return GaussRule { nodes: vec![0.0], weights: vec![2.0] };
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

/// Cached Gauss–Legendre rule of order `n`.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("gauss rule cache poisoned");
    guard.entry(n).or_insert_with(|| Arc::new(build_rule(n))).clone()
}

/// Fixed-order Gauss–Legendre integral of `f` over [a, b].
pub fn gauss_integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Settings for [`adaptive_gauss`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub order: usize,
    pub rel_tol: f64,
    /// Panels are never split beyond this many halvings.
    pub max_depth: u32,
    /// Upper bound on the number of panels.
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self { order: 20, rel_tol: 1e-13, max_depth: 48, max_panels: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

struct Panel {
    lo: f64,
    hi: f64,
    left: f64,
    right: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Legendre. A panel's error is the gap between its
/// rule value and the sum over its halves; the worst panel is split until the
/// summed error is within `rel_tol` of the total, the error reaches rounding
/// level, or the panel budget runs out.
pub fn adaptive_gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, opts: AdaptiveOptions) -> Result<Integral, QuadError> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    let checked = |lo: f64, hi: f64| -> Result<f64, QuadError> {
        let v = gauss_integrate(f, lo, hi, opts.order);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x: 0.5 * (lo + hi) })
        }
    };
    let panel = |lo: f64, hi: f64, coarse: f64, depth: u32| -> Result<Panel, QuadError> {
        let mid = 0.5 * (lo + hi);
        let (left, right) = (checked(lo, mid)?, checked(mid, hi)?);
        Ok(Panel { lo, hi, left, right, error: (left + right - coarse).abs(), depth })
    };
    let first = panel(a, b, checked(a, b)?, 0)?;
    let mut value = first.left + first.right;
    let mut error = first.error;
    let mut magnitude = first.left.abs() + first.right.abs();
    let mut heap = std::collections::BinaryHeap::from([first]);
    let mut frozen = Vec::new();
    while let Some(worst) = heap.pop() {
        let converged = error <= opts.rel_tol * value.abs() || error <= 4.0 * f64::EPSILON * magnitude;
        let tiny = worst.hi - worst.lo <= 8.0 * f64::EPSILON * worst.lo.abs().max(worst.hi.abs());
        if converged || heap.len() + frozen.len() + 1 >= opts.max_panels {
            heap.push(worst);
            break;
        }
        if worst.depth >= opts.max_depth || tiny {
            frozen.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        let l = panel(worst.lo, mid, worst.left, worst.depth + 1)?;
        let r = panel(mid, worst.hi, worst.right, worst.depth + 1)?;
        value += l.left + l.right + r.left + r.right - worst.left - worst.right;
        error += l.error + r.error - worst.error;
        magnitude += l.left.abs() + l.right.abs() + r.left.abs() + r.right.abs() - worst.left.abs() - worst.right.abs();
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to shed drift from the running totals.
    let all = heap.iter().chain(frozen.iter());
    let (value, error) = all.fold((0.0, 0.0), |(v, e), p| (v + p.left + p.right, e + p.error));
    Ok(Integral { value, error })
}

/// Composite Simpson rule on a non-uniform grid. An odd number of intervals
/// is closed with a three-point correction on the last interval.
pub fn simpson(x: &[f64], y: &[f64]) -> Result<f64, QuadError> {
    let n = x.len();
    if n != y.len() || n < 3 {
        return Err(QuadError::BadSamples { min: 3, got: n.min(y.len()) });
    }
    let intervals = n - 1;
    let paired = intervals - intervals % 2;
    let mut sum = 0.0;
    let mut i = 0;
    while i < paired {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        let hs = h0 + h1;
        sum += hs / 6.0 * ((2.0 - h1 / h0) * y[i] + hs * hs / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
        i += 2;
    }
    if intervals % 2 == 1 {
        let h0 = x[n - 2] - x[n - 3];
        let h1 = x[n - 1] - x[n - 2];
        let alpha = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
        let beta = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
        let eta = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
        sum += alpha * y[n - 1] + beta * y[n - 2] - eta * y[n - 3];
    }
    Ok(sum)
}

/// Trapezoid rule on a non-uniform grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])).sum()
}

/// Fornberg weights for derivatives of order 0..=`order` at `x0` from the
/// stencil `xs`. Row `k` holds the weights of the k-th derivative.
pub fn fornberg_weights(x0: f64, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// First and second derivatives of sampled data from five-point stencils,
/// centred in the interior and shifted inward at the ends.
pub fn derivatives(x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let width = 5.min(n);
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 0..n {
        let start = i.saturating_sub(width / 2).min(n - width);
        let xs = &x[start..start + width];
        let w = fornberg_weights(x[i], xs, 2);
        let ys = &y[start..start + width];
        d1[i] = w[1].iter().zip(ys).map(|(a, b)| a * b).sum();
        if width >= 3 {
            d2[i] = w[2].iter().zip(ys).map(|(a, b)| a * b).sum();
        }
    }
    (d1, d2)
}

/// Which ends of an interval get geometric refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Uniform,
    Start,
    End,
    Both,
}

/// Geometric refinement toward a graded end: 20 levels of ratio 0.5, each level
/// split into up to 16 equal steps.
pub const GRADING_LEVELS: usize = 20;
pub const GRADING_FACTOR: f64 = 0.5;
pub const GRADING_STEPS_PER_LEVEL: usize = 16;

/// Grid of exactly `nodes` points on [lo, hi] with optional geometric grading.
pub fn graded_mesh(lo: f64, hi: f64, nodes: usize, grading: Grading) -> Vec<f64> {
    assert!(nodes >= 3, "graded_mesh needs at least 3 nodes");
    let zones = match grading {
        Grading::Uniform => 0,
        Grading::Start | Grading::End => 1,
        Grading::Both => 2,
    };
    let mut levels = GRADING_LEVELS;
    let mut steps = GRADING_STEPS_PER_LEVEL;
    if zones > 0 {
        // Spend at most half of the nodes on grading.
        let budget = nodes / 2;
        while zones * (levels + 1) * steps > budget && steps > 1 {
            steps /= 2;
        }
        while zones * (levels + 1) * steps > budget && levels > 1 {
            levels -= 1;
        }
        if zones * (levels + 1) * steps > budget {
            return graded_mesh(lo, hi, nodes, Grading::Uniform);
        }
    }
    let graded_count = zones * (levels + 1) * steps;
    let base = nodes - graded_count;
    let h = 1.0 / ((base - 1) as f64 + (zones * steps) as f64);
    let w = steps as f64 * h;
    let start_offset = if matches!(grading, Grading::Start | Grading::Both) { w } else { 0.0 };

    let zone = |out: &mut Vec<f64>| {
        let mut x = w;
        for _ in 0..levels {
            let next = x * GRADING_FACTOR;
            for j in 1..=steps {
                out.push(x - (x - next) * j as f64 / steps as f64);
            }
            x = next;
        }
        for j in 1..=steps {
            out.push(x - x * j as f64 / steps as f64);
        }
    };

    let mut t = Vec::with_capacity(nodes);
    if matches!(grading, Grading::Start | Grading::Both) {
        let mut z = Vec::new();
        zone(&mut z);
        z.reverse();
        t.extend(z);
    }
    for i in 0..base {
        t.push(start_offset + i as f64 * h);
    }
    if matches!(grading, Grading::End | Grading::Both) {
        let mut z = Vec::new();
        zone(&mut z);
        t.extend(z.into_iter().map(|d| 1.0 - d));
    }
    // The uniform block already contains the points where graded zones begin,
    // so zones contribute their interior points plus the far endpoint.
    t.dedup_by(|a, b| (*a - *b).abs() < 1e-300);
    let mut out: Vec<f64> = t.into_iter().map(|s| lo + (hi - lo) * s).collect();
    out[0] = lo;
    let last = out.len() - 1;
    out[last] = hi;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 20, 64] {
            let rule = gauss_legendre(n);
            for k in 0..(2 * n) {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let got: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
                assert!((got - exact).abs() < 1e-13, "n={n} k={k} got={got}");
            }
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let f = |x: f64| 1.0 / (1e-6 + x * x);
        let got = adaptive_gauss(&f, 0.0, 1.0, AdaptiveOptions::default()).unwrap().value;
        let exact = (1.0f64 / 1e-3).atan() / 1e-3;
        assert!((got / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_reports_non_finite() {
        let f = |x: f64| if x > 0.5 { f64::NAN } else { 1.0 };
        assert!(adaptive_gauss(&f, 0.0, 1.0, AdaptiveOptions::default()).is_err());
    }

    #[test]
    fn simpson_is_exact_for_quadratics_on_irregular_grids() {
        for n in [3usize, 4, 7, 10] {
            let x: Vec<f64> = (0..n).map(|i| (i as f64 / (n - 1) as f64).powf(1.7) * 2.0).collect();
            let y: Vec<f64> = x.iter().map(|t| 3.0 * t * t - 2.0 * t + 1.0).collect();
            let exact = 8.0 - 4.0 + 2.0;
            assert!((simpson(&x, &y).unwrap() - exact).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn fornberg_matches_centered_difference() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
    }

    #[test]
    fn derivatives_of_sine_on_graded_grid() {
        let x = graded_mesh(0.0, 1.5, 400, Grading::Both);
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let (d1, d2) = derivatives(&x, &y);
        for i in 0..x.len() {
            // Differences lose accuracy to rounding on the finest levels.
            let h = (x[i.max(1)] - x[i.max(1) - 1]).min(x[(i + 1).min(x.len() - 1)] - x[i.min(x.len() - 2)]);
            assert!((d1[i] - x[i].cos()).abs() < 1e-7 + 1e-15 / h, "i={i}");
            assert!((d2[i] + x[i].sin()).abs() < 1e-6 + 1e-14 / (h * h), "i={i}");
        }
    }

    #[test]
    fn graded_mesh_shape() {
        for g in [Grading::Uniform, Grading::Start, Grading::End, Grading::Both] {
            for n in [3usize, 64, 257, 2048] {
                let m = graded_mesh(-1.0, 2.0, n, g);
                assert_eq!(m.len(), n, "{g:?} {n}");
                assert_eq!(m[0], -1.0);
                assert_eq!(m[n - 1], 2.0);
                assert!(m.windows(2).all(|w| w[1] > w[0]), "{g:?} {n}");
            }
        }
        let m = graded_mesh(0.0, 1.0, 2048, Grading::End);
        let last_step = m[2047] - m[2046];
        assert!(last_step < 1e-8);
    }

    #[test]
    fn graded_mesh_recovers_endpoint_power_singularity() {
        let x = graded_mesh(0.0, PI / 2.0, 2048, Grading::End);
        let y: Vec<f64> = x.iter().map(|t| t.cos().max(0.0).sqrt()).collect();
        let got = simpson(&x, &y).unwrap();
        // Beta(1/2, 3/4) / 2
        let exact = 1.198140234735592;
        assert!((got / exact - 1.0).abs() < 1e-9, "{}", got / exact - 1.0);
    }
}
