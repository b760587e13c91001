//! Curves of constant generalized curvature λ = κ + p·sinσ/r under the
//! density r^p.
//!
//! An undulary normalized to minimum radius 1 satisfies the first integral
//! r^{p+1} sinσ = 1 − K(1 − r^{p+2}) with K = λ/(p+2), where σ is the angle
//! between the curve and the radial direction. Its maximum radius r₁ fixes K.
//! All integrals over one half wave are taken in the variable u with
//! r = 1 + (r₁−1)·sin²u, which removes the inverse square roots at both
//! critical radii. The interval is split at u = π/4 and each half is written
//! in terms of the distance to its own endpoint so that nothing cancels.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measures::{Measure, MeasureError, PolarGraph, PowerDensity};
use crate::quadrature::{self, adaptive_gauss, AdaptiveOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CgcError {
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("integrated radius is not strictly increasing at node {index}")]
    MonotonicityViolation { index: usize },
    #[error("grid needs at least {min} nodes, got {got}")]
    DegenerateGrid { min: usize, got: usize },
    #[error("no undulary has half period {theta0}; attained range is [{t_min}, {t_max}]")]
    NoSolution { theta0: f64, t_min: f64, t_max: f64 },
    #[error("bracketing failed for half period {theta0}: {reason}")]
    BracketFailure { theta0: f64, reason: String },
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Largest maximum radius probed when solving for an equilibrium undulary.
pub const R1_MAX: f64 = 1e6;
/// Smallest excess r₁ − 1 probed when solving for an equilibrium undulary.
pub const R1_MIN_EXCESS: f64 = 1e-6;

/// Undulary half wave normalized to minimum radius 1 at θ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UndularySpec {
    pub r1: f64,
    pub p: f64,
    pub lambda: f64,
}

impl UndularySpec {
    pub fn new(r1: f64, d: PowerDensity) -> Result<Self, CgcError> {
        Ok(Self { r1, p: d.p, lambda: lambda_of_r1(r1, d)? })
    }

    pub fn density(&self) -> PowerDensity {
        PowerDensity::new(self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveClass {
    Undulary,
    Nodoid,
    CircleThroughOrigin,
    CircleAboutOrigin,
    Geodesic,
}

/// Curve type for a given λ, with exact comparisons on the boundary values.
pub fn classify_lambda(lambda: f64, d: PowerDensity) -> CurveClass {
    let p = d.p;
    if lambda == p + 1.0 {
        CurveClass::CircleAboutOrigin
    } else if lambda == p + 2.0 {
        CurveClass::CircleThroughOrigin
    } else if lambda == 0.0 {
        CurveClass::Geodesic
    } else if lambda > 0.0 && lambda < p + 2.0 {
        CurveClass::Undulary
    } else {
        CurveClass::Nodoid
    }
}

/// The geodesic through (1, 0): r = sec((p+1)θ)^{1/(p+1)}.
pub fn geodesic_radius(theta: f64, d: PowerDensity) -> Result<f64, CgcError> {
    let a = d.p + 1.0;
    if !(a > 0.0) {
        return Err(CgcError::OutOfDomain(format!("geodesic needs p > -1, got {}", d.p)));
    }
    if !(theta.abs() < FRAC_PI_2 / a) {
        return Err(CgcError::OutOfDomain(format!("|theta| must be below {}", FRAC_PI_2 / a)));
    }
    Ok((a * theta).cos().powf(-1.0 / a))
}

fn check_undulary_args(r1: f64, d: PowerDensity) -> Result<(), CgcError> {
    if !(r1 > 1.0) || !r1.is_finite() {
        return Err(CgcError::OutOfDomain(format!("r1 must exceed 1, got {r1}")));
    }
    if !(d.p > 0.0) {
        return Err(CgcError::OutOfDomain(format!("undularies need p > 0, got {}", d.p)));
    }
    Ok(())
}

/// K = (r₁^{p+1} − 1)/(r₁^{p+2} − 1), evaluated without cancellation.
fn first_integral_constant(r1: f64, p: f64) -> f64 {
    let l = (r1 - 1.0).ln_1p();
    ((p + 1.0) * l).exp_m1() / ((p + 2.0) * l).exp_m1()
}

/// λ of the undulary with minimum radius 1 and maximum radius r₁.
pub fn lambda_of_r1(r1: f64, d: PowerDensity) -> Result<f64, CgcError> {
    check_undulary_args(r1, d)?;
    Ok((d.p + 2.0) * first_integral_constant(r1, d.p))
}

#[derive(Debug, Clone, Copy)]
enum Weight {
    Angle,
    Perimeter,
    Area,
}

/// Integrands over one half wave in the u variable.
struct HalfWave {
    p: f64,
    a: f64,
    b: f64,
    y: f64,
    r1: f64,
    k: f64,
    /// Linear Taylor coefficients of the first-integral numerator about the
    /// inner and outer critical radii (in log radius).
    inner_slope: f64,
    outer_slope: f64,
    r1a: f64,
    r1b: f64,
}

/// e^x − 1 − x without cancellation.
fn exp_m1_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let mut term = x * x / 2.0;
        let mut sum = term;
        for k in 3..40 {
            term *= x / k as f64;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

impl HalfWave {
    fn new(r1: f64, p: f64) -> Self {
        let (a, b) = (p + 1.0, p + 2.0);
        let l = (r1 - 1.0).ln_1p();
        let k = first_integral_constant(r1, p);
        let r1a = r1.powf(a);
        let r1b = r1.powf(b);
        let (inner_slope, outer_slope) = if l < 0.5 {
            let denom = (b * l).exp_m1();
            let inner = (a * exp_m1_minus_x(b * l) - b * exp_m1_minus_x(a * l)) / denom;
            let outer =
                ((a - b) * exp_m1_minus_x((a + b) * l) - a * exp_m1_minus_x(a * l) + b * exp_m1_minus_x(b * l)) / denom;
            (inner, outer)
        } else {
            (a - k * b, a * r1a - k * b * r1b)
        };
        Self { p, a, b, y: r1 - 1.0, r1, k, inner_slope, outer_slope, r1a, r1b }
    }

    /// Radius at u, computed from whichever endpoint is closer.
    fn radius(&self, u: f64) -> f64 {
        if u <= FRAC_PI_4 {
            1.0 + self.y * u.sin().powi(2)
        } else {
            self.r1 - self.y * u.cos().powi(2)
        }
    }

    /// Returns (r, sinσ, dr/(cosσ du)).
    fn state(&self, u: f64) -> (f64, f64, f64) {
        let (su, cu) = u.sin_cos();
        let (s2, c2) = (su * su, cu * cu);
        // n = r^{p+1} − 1 − K(r^{p+2} − 1), expanded about the nearer root.
        let (r, n) = if u <= FRAC_PI_4 {
            let x = self.y * s2;
            let l = x.ln_1p();
            let n = self.inner_slope * l + exp_m1_minus_x(self.a * l) - self.k * exp_m1_minus_x(self.b * l);
            (1.0 + x, n)
        } else {
            let dist = self.y * c2;
            let l = (-dist / self.r1).ln_1p();
            let n = self.outer_slope * l + self.r1a * exp_m1_minus_x(self.a * l)
                - self.k * self.r1b * exp_m1_minus_x(self.b * l);
            (self.r1 - dist, n)
        };
        let ra = r.powf(self.a);
        let h = n / (self.y * self.y * s2 * c2);
        let sin_sigma = 1.0 - n / ra;
        let jac = 2.0 / (h * (1.0 + sin_sigma) / ra).sqrt();
        (r, sin_sigma, jac)
    }

    fn integrand(&self, u: f64, w: Weight) -> f64 {
        let (r, s, jac) = self.state(u);
        let g = match w {
            Weight::Angle => s / r,
            Weight::Perimeter => r.powf(self.p),
            Weight::Area => r.powf(self.a) * s / self.b,
        };
        g * jac
    }

    fn integrate(&self, w: Weight, lo: f64, hi: f64) -> Result<f64, CgcError> {
        let opts = AdaptiveOptions { max_depth: 40, ..AdaptiveOptions::default() };
        let f = |u: f64| self.integrand(u, w);
        let mut total = 0.0;
        let mut pieces = [(lo, hi.min(FRAC_PI_4)), (lo.max(FRAC_PI_4), hi)];
        for piece in pieces.iter_mut() {
            if piece.1 > piece.0 {
                total += adaptive_gauss(&f, piece.0, piece.1, opts)
                    .map_err(|e| CgcError::QuadratureFailure(e.to_string()))?
                    .value;
            }
        }
        if total.is_finite() {
            Ok(total)
        } else {
            Err(CgcError::QuadratureFailure(format!("non-finite integral for r1 = {}", self.r1)))
        }
    }
}

/// Angular width T of the half wave between radius 1 and radius r₁.
pub fn half_period(r1: f64, d: PowerDensity) -> Result<f64, CgcError> {
    check_undulary_args(r1, d)?;
    HalfWave::new(r1, d.p).integrate(Weight::Angle, 0.0, FRAC_PI_2)
}

/// Limits of the half period as r₁ → 1 and as r₁ → ∞ (the latter is a
/// measured trend, not a proven bound).
pub fn half_period_limits(d: PowerDensity) -> (f64, f64) {
    (PI / (d.p + 1.0).sqrt(), PI * (d.p + 2.0) / (2.0 * d.p + 2.0))
}

/// Weighted area and perimeter of the half wave, by the same quadrature as the
/// half period.
pub fn undulary_measures(spec: &UndularySpec) -> Result<Measure, CgcError> {
    let d = spec.density();
    check_undulary_args(spec.r1, d)?;
    let wave = HalfWave::new(spec.r1, spec.p);
    let perimeter = wave.integrate(Weight::Perimeter, 0.0, FRAC_PI_2)?;
    let area = wave.integrate(Weight::Area, 0.0, FRAC_PI_2)?;
    Ok(Measure::new(area, perimeter, d)?)
}

/// Samples the half wave on `nodes` points uniform in u, so the grid clusters
/// near both critical radii.
pub fn integrate_undulary(spec: &UndularySpec, nodes: usize) -> Result<PolarGraph, CgcError> {
    if nodes < 64 {
        return Err(CgcError::DegenerateGrid { min: 64, got: nodes });
    }
    check_undulary_args(spec.r1, spec.density())?;
    let wave = HalfWave::new(spec.r1, spec.p);
    let us: Vec<f64> = (0..nodes).map(|i| FRAC_PI_2 * i as f64 / (nodes - 1) as f64).collect();
    let mut theta = Vec::with_capacity(nodes);
    let mut radius = Vec::with_capacity(nodes);
    let mut acc = 0.0;
    theta.push(0.0);
    radius.push(1.0);
    for w in us.windows(2) {
        acc += wave.integrate(Weight::Angle, w[0], w[1])?;
        theta.push(acc);
        radius.push(wave.radius(w[1]));
    }
    radius[nodes - 1] = spec.r1;
    if let Some(i) = radius.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(CgcError::MonotonicityViolation { index: i + 1 });
    }
    Ok(PolarGraph::new(theta, radius)?)
}

/// Per-node generalized curvature κ + p/√(r² + r'²) of a sampled graph, with
/// κ taken positive for circles about the origin.
pub fn generalized_curvature_of(g: &PolarGraph, d: PowerDensity) -> Result<Vec<f64>, CgcError> {
    if g.len() < 5 {
        return Err(CgcError::DegenerateGrid { min: 5, got: g.len() });
    }
    let (d1, d2) = quadrature::derivatives(g.theta(), g.radius());
    Ok(g.radius()
        .iter()
        .zip(d1.iter().zip(&d2))
        .map(|(&r, (&r1, &r2))| {
            let q = r * r + r1 * r1;
            let kappa = (r * r + 2.0 * r1 * r1 - r * r2) / q.powf(1.5);
            kappa + d.p / q.sqrt()
        })
        .collect())
}

/// r^{p+1}·sinσ − [1 − K(1 − r^{p+2})] at every node.
pub fn first_integral_residual(g: &PolarGraph, spec: &UndularySpec) -> Vec<f64> {
    let k = spec.lambda / (spec.p + 2.0);
    g.radius()
        .iter()
        .zip(g.slope())
        .map(|(&r, s)| {
            let sin_sigma = r / r.hypot(s);
            r.powf(spec.p + 1.0) * sin_sigma - (1.0 - k * (1.0 - r.powf(spec.p + 2.0)))
        })
        .collect()
}

/// Half periods on the log-spaced probe grid used for bracketing.
fn probe_table(d: PowerDensity) -> Result<Vec<(f64, f64)>, CgcError> {
    let lo = R1_MIN_EXCESS.ln();
    let hi = (R1_MAX - 1.0).ln();
    let count = 73;
    (0..count)
        .map(|i| {
            let ly = lo + (hi - lo) * i as f64 / (count - 1) as f64;
            Ok((ly, half_period(1.0 + ly.exp(), d)?))
        })
        .collect()
}

/// Finds r₁ with T(r₁) = θ₀ by log-spaced bracketing over r₁ − 1 ∈ [1e-6, 1e6]
/// followed by bisection in log(r₁ − 1).
pub fn solve_equilibrium_undulary(theta0: f64, d: PowerDensity) -> Result<UndularySpec, CgcError> {
    if !(d.p > 0.0) || !(theta0 > 0.0) {
        return Err(CgcError::OutOfDomain(format!("need p > 0 and theta0 > 0, got p = {}, theta0 = {theta0}", d.p)));
    }
    let table = probe_table(d)?;
    let t_min = table.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let t_max = table.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    let bracket = table.windows(2).find(|w| (w[0].1 - theta0) * (w[1].1 - theta0) <= 0.0);
    let Some(w) = bracket else {
        return Err(CgcError::NoSolution { theta0, t_min, t_max });
    };
    let (mut lo, mut f_lo) = (w[0].0, w[0].1 - theta0);
    let mut hi = w[1].0;
    if f_lo == 0.0 {
        return UndularySpec::new(1.0 + lo.exp(), d);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = half_period(1.0 + mid.exp(), d)? - theta0;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    let ly = 0.5 * (lo + hi);
    let spec = UndularySpec::new(1.0 + ly.exp(), d)?;
    let t = half_period(spec.r1, d)?;
    if (t - theta0).abs() > 1e-8 {
        return Err(CgcError::BracketFailure { theta0, reason: format!("bisection ended at T = {t}") });
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::Grading;
    use proptest::prelude::*;

    /// Half period by direct integration in r with a Chebyshev-type
    /// substitution, written independently of the production integrands.
    fn half_period_oracle(r1: f64, p: f64) -> f64 {
        let k = (1.0 - r1.powf(p + 1.0)) / (1.0 - r1.powf(p + 2.0));
        let f = |t: f64| {
            // r = (1 + r1)/2 − (r1 − 1)/2·cos t removes both endpoint roots.
            let r = 0.5 * (1.0 + r1) - 0.5 * (r1 - 1.0) * t.cos();
            let drdt = 0.5 * (r1 - 1.0) * t.sin();
            let q = k * (1.0 - r.powf(p + 2.0)) - 1.0;
            let root = (r.powf(2.0 * p + 2.0) / (q * q) - 1.0).sqrt();
            drdt / (r * root)
        };
        let n = 4000;
        let h = PI / n as f64;
        (0..n).map(|i| f((i as f64 + 0.5) * h) * h).sum()
    }

    #[test]
    fn classify_lambda_cases() {
        let d = PowerDensity::new(1.0);
        assert_eq!(classify_lambda(2.0, d), CurveClass::CircleAboutOrigin);
        assert_eq!(classify_lambda(3.0, d), CurveClass::CircleThroughOrigin);
        assert_eq!(classify_lambda(0.0, d), CurveClass::Geodesic);
        assert_eq!(classify_lambda(-0.5, d), CurveClass::Nodoid);
        assert_eq!(classify_lambda(3.5, d), CurveClass::Nodoid);
        assert_eq!(classify_lambda(1.2, d), CurveClass::Undulary);
        assert_eq!(classify_lambda(2.5, d), CurveClass::Undulary);
        assert_eq!(classify_lambda(3.7, PowerDensity::new(2.7)), CurveClass::CircleAboutOrigin);
    }

    #[test]
    fn geodesic_values() {
        let d = PowerDensity::new(1.0);
        assert_eq!(geodesic_radius(0.0, d).unwrap(), 1.0);
        assert!((geodesic_radius(PI / 6.0, d).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        let near = geodesic_radius(FRAC_PI_4 - 1e-9, d).unwrap();
        let nearer = geodesic_radius(FRAC_PI_4 - 1e-12, d).unwrap();
        assert!(nearer > near && near > 1e4);
        assert!(geodesic_radius(FRAC_PI_4, d).is_err());
    }

    #[test]
    fn lambda_examples() {
        let d = PowerDensity::new(1.0);
        assert!((lambda_of_r1(2.0, d).unwrap() - 9.0 / 7.0).abs() < 1e-15);
        assert!((lambda_of_r1(1.0 + 1e-12, d).unwrap() - 2.0).abs() < 1e-11);
        let far = lambda_of_r1(1e6, d).unwrap();
        assert!((far / 3e-6 - 1.0).abs() < 1e-5);
        assert!(lambda_of_r1(1.0, d).is_err());
    }

    #[test]
    fn half_period_matches_independent_oracle() {
        for p in [0.5, 1.0, 2.0, 5.0] {
            for r1 in [1.01, 1.5, 2.0, 5.0] {
                let t = half_period(r1, PowerDensity::new(p)).unwrap();
                let o = half_period_oracle(r1, p);
                assert!((t - o).abs() < 1e-6, "p={p} r1={r1} t={t} oracle={o}");
            }
        }
    }

    #[test]
    fn half_period_frozen_values() {
        // Frozen from an independent high-precision quadrature prototype.
        let cases = [
            (1.0, 1.0 + 1e-6, 2.221441469),
            (1.0, 2.0, 2.232066005),
            (1.0, 50.0, 2.340459992),
            (1.0, 1e3, 2.355305999),
            (1.0, 1e6, 2.356193592),
            (2.0, 1.0 + 1e-6, 1.813799364),
        ];
        for (p, r1, want) in cases {
            let t = half_period(r1, PowerDensity::new(p)).unwrap();
            assert!((t - want).abs() < 2e-9, "p={p} r1={r1} t={t}");
        }
    }

    #[test]
    fn half_period_limit_with_richardson() {
        for p in [0.5, 1.0, 2.0] {
            let d = PowerDensity::new(p);
            let limit = half_period_limits(d).0;
            let t3 = half_period(1.0 + 1e-3, d).unwrap();
            let t6 = half_period(1.0 + 1e-6, d).unwrap();
            assert!((t6 - limit).abs() < (t3 - limit).abs());
            // T is smooth in r₁ − 1, so the linear extrapolation removes the first-order term.
            let extrapolated = t6 - (t3 - t6) * 1e-6 / (1e-3 - 1e-6);
            assert!((extrapolated - limit).abs() < 1e-9, "p={p} {}", extrapolated - limit);
        }
    }

    #[test]
    fn undulary_curve_has_constant_curvature_and_satisfies_first_integral() {
        let d = PowerDensity::new(1.0);
        let spec = UndularySpec::new(2.0, d).unwrap();
        let g = integrate_undulary(&spec, 1024).unwrap();
        assert_eq!(g.radius()[0], 1.0);
        assert_eq!(*g.radius().last().unwrap(), 2.0);
        assert!((g.theta0() - half_period(2.0, d).unwrap()).abs() < 1e-12);
        let lambda = generalized_curvature_of(&g, d).unwrap();
        for l in &lambda {
            assert!((l - 9.0 / 7.0).abs() < 1e-5, "{l}");
        }
        for res in first_integral_residual(&g, &spec) {
            assert!(res.abs() < 1e-6, "{res}");
        }
        let slope = g.slope();
        assert!(slope[0].abs() < 1e-4 && slope.last().unwrap().abs() < 1e-4);
    }

    #[test]
    fn nearly_circular_undulary_is_flat() {
        let d = PowerDensity::new(1.0);
        let g = integrate_undulary(&UndularySpec::new(1.0 + 1e-9, d).unwrap(), 128).unwrap();
        assert!(g.radius().iter().all(|r| (r - 1.0).abs() <= 2e-9));
        assert!((g.theta0() - PI / 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn undulary_measures_match_sampled_curve() {
        for (p, r1) in [(1.0, 2.0), (2.0, 5.0), (0.5, 1.3)] {
            let d = PowerDensity::new(p);
            let spec = UndularySpec::new(r1, d).unwrap();
            let m = undulary_measures(&spec).unwrap();
            let g = integrate_undulary(&spec, 4000).unwrap();
            let sampled = crate::measures::graph_measure(&g, d).unwrap();
            assert!((m.area / sampled.area - 1.0).abs() < 1e-6, "p={p}");
            assert!((m.perimeter / sampled.perimeter - 1.0).abs() < 1e-6, "p={p}");
        }
    }

    #[test]
    fn reflected_and_scaled_wave_keeps_ratio() {
        let d = PowerDensity::new(1.0);
        let spec = UndularySpec::new(3.0, d).unwrap();
        let g = integrate_undulary(&spec, 2000).unwrap();
        let t0 = g.theta0();
        let theta: Vec<f64> = g.theta().iter().rev().map(|t| t0 - t).collect();
        let radius: Vec<f64> = g.radius().iter().rev().map(|r| r / spec.r1).collect();
        let flipped = PolarGraph::new(theta, radius).unwrap();
        let a = crate::measures::graph_measure(&g, d).unwrap();
        let b = crate::measures::graph_measure(&flipped, d).unwrap();
        assert!((a.ratio / b.ratio - 1.0).abs() < 1e-10);
        let la = generalized_curvature_of(&flipped, d).unwrap();
        let scaled_lambda = spec.lambda * spec.r1;
        assert!(la.iter().all(|l| (l - scaled_lambda).abs() < 1e-4));
    }

    #[test]
    fn calibration_curves() {
        for p in [0.5, 1.0, 2.0, 5.0] {
            let d = PowerDensity::new(p);
            let circle = PolarGraph::from_fn(1.0, 4096, Grading::Uniform, |_| 1.0).unwrap();
            assert!(generalized_curvature_of(&circle, d).unwrap().iter().all(|l| (l - p - 1.0).abs() < 1e-5));
            let through = PolarGraph::from_fn(1.2, 4096, Grading::Uniform, f64::cos).unwrap();
            assert!(generalized_curvature_of(&through, d).unwrap().iter().all(|l| (l - p - 2.0).abs() < 1e-5));
            let span = 0.8 * FRAC_PI_2 / (p + 1.0);
            let geo = PolarGraph::from_fn(span, 4096, Grading::Uniform, |t| geodesic_radius(t, d).unwrap()).unwrap();
            assert!(generalized_curvature_of(&geo, d).unwrap().iter().all(|l| l.abs() < 1e-5));
        }
    }

    #[test]
    fn equilibrium_examples() {
        let d = PowerDensity::new(2.0);
        let spec = solve_equilibrium_undulary(1.95, d).unwrap();
        assert!(spec.r1 > 1.0);
        assert!((half_period(spec.r1, d).unwrap() - 1.95).abs() < 1e-8);
        let d = PowerDensity::new(1.0);
        match solve_equilibrium_undulary(1.0, d) {
            Err(CgcError::NoSolution { t_min, .. }) => assert!((t_min - 2.2214).abs() < 1e-3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(solve_equilibrium_undulary(PI, d), Err(CgcError::NoSolution { .. })));
    }

    #[test]
    fn period_is_monotone_on_log_grid() {
        for p in [0.5, 1.0, 2.0] {
            let d = PowerDensity::new(p);
            let ts: Vec<f64> =
                (0..60).map(|i| half_period(1.0 + 1e-6 * 1e9f64.powf(i as f64 / 59.0), d).unwrap()).collect();
            assert!(ts.windows(2).all(|w| w[1] >= w[0]), "p={p}");
            let (lo, hi) = half_period_limits(d);
            assert!(ts[0] > lo && *ts.last().unwrap() < hi);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn lambda_stays_inside_open_band(ly in -20.0f64..13.0, p in 0.05f64..6.0) {
            let d = PowerDensity::new(p);
            let l = lambda_of_r1(1.0 + ly.exp(), d).unwrap();
            prop_assert!(l > 0.0 && l < p + 1.0);
            prop_assert_eq!(classify_lambda(l, d), CurveClass::Undulary);
        }

        #[test]
        fn integrated_wave_is_monotone(ly in -6.0f64..4.0, p in 0.2f64..5.0) {
            let d = PowerDensity::new(p);
            let g = integrate_undulary(&UndularySpec::new(1.0 + ly.exp(), d).unwrap(), 64).unwrap();
            prop_assert!(g.radius().windows(2).all(|w| w[1] > w[0]));
            prop_assert!(g.theta0() > 0.0 && g.theta0() < PI);
        }
    }
}
