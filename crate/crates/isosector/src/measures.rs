//! Weighted area and perimeter for polar graphs under the density r^p, plus
//! closed forms for arcs about the origin and semicircles through it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::quadrature::{self, graded_mesh, Grading};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("non-finite sample at node {index}")]
    NonFiniteSample { index: usize },
    #[error("grid needs at least {min} nodes, got {got}")]
    DegenerateGrid { min: usize, got: usize },
    #[error("invalid polar graph: {0}")]
    InvalidGraph(&'static str),
    #[error("{name} must be positive, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(&'static str),
    #[error("coordinate exponent must be nonzero")]
    ZeroExponent,
}

/// The radial density r^p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerDensity {
    pub p: f64,
}

impl PowerDensity {
    pub fn new(p: f64) -> Self {
        assert!(p.is_finite(), "density exponent must be finite");
        Self { p }
    }

    /// Exponent relating perimeter and area scaling, (p+1)/(p+2).
    pub fn ratio_exponent(&self) -> f64 {
        (self.p + 1.0) / (self.p + 2.0)
    }
}

/// A curve r(θ) sampled on a strictly increasing grid over [0, θ₀].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarGraph {
    theta: Vec<f64>,
    radius: Vec<f64>,
}

impl PolarGraph {
    pub fn new(theta: Vec<f64>, radius: Vec<f64>) -> Result<Self, MeasureError> {
        if theta.len() != radius.len() {
            return Err(MeasureError::InvalidGraph("theta and radius lengths differ"));
        }
        if theta.len() < 3 {
            return Err(MeasureError::DegenerateGrid { min: 3, got: theta.len() });
        }
        if theta[0] != 0.0 {
            return Err(MeasureError::InvalidGraph("grid must start at 0"));
        }
        if !theta.windows(2).all(|w| w[1] > w[0]) {
            return Err(MeasureError::InvalidGraph("grid must be strictly increasing"));
        }
        if let Some(index) = radius.iter().position(|r| !r.is_finite()) {
            return Err(MeasureError::NonFiniteSample { index });
        }
        if radius.iter().any(|&r| r < 0.0) {
            return Err(MeasureError::InvalidGraph("negative radius"));
        }
        let n = radius.len();
        if radius[1..n - 1].contains(&0.0) {
            return Err(MeasureError::InvalidGraph("interior radius is zero"));
        }
        Ok(Self { theta, radius })
    }

    /// Samples `f` on a grid of `nodes` points over [0, θ₀].
    pub fn from_fn<F: Fn(f64) -> f64>(theta0: f64, nodes: usize, grading: Grading, f: F) -> Result<Self, MeasureError> {
        if nodes < 3 {
            return Err(MeasureError::DegenerateGrid { min: 3, got: nodes });
        }
        if !(theta0 > 0.0) {
            return Err(MeasureError::NonPositiveInput { name: "theta0", value: theta0 });
        }
        let theta = graded_mesh(0.0, theta0, nodes, grading);
        let radius = theta.iter().map(|&t| f(t)).collect();
        Self::new(theta, radius)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn radius(&self) -> &[f64] {
        &self.radius
    }

    pub fn theta0(&self) -> f64 {
        *self.theta.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Radial derivative r'(θ) at every node.
    pub fn slope(&self) -> Vec<f64> {
        quadrature::derivatives(&self.theta, &self.radius).0
    }

    /// The same curve with every radius multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self { theta: self.theta.clone(), radius: self.radius.iter().map(|r| r * k).collect() }
    }
}

/// Area, perimeter and isoperimetric ratio of one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    pub area: f64,
    pub perimeter: f64,
    pub ratio: f64,
}

impl Measure {
    pub fn new(area: f64, perimeter: f64, d: PowerDensity) -> Result<Self, MeasureError> {
        let ratio = iso_ratio(perimeter, area, d)?;
        Ok(Self { area, perimeter, ratio })
    }
}

fn check_finite(values: &[f64]) -> Result<(), MeasureError> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(MeasureError::NonFiniteSample { index }),
        None => Ok(()),
    }
}

/// ∫ r^{p+2}/(p+2) dθ by composite Simpson on the graph's grid.
pub fn weighted_area_polar(g: &PolarGraph, d: PowerDensity) -> Result<f64, MeasureError> {
    if d.p <= -2.0 {
        return Err(MeasureError::ExponentOutOfRange("area needs p > -2"));
    }
    let b = d.p + 2.0;
    let y: Vec<f64> = g.radius.iter().map(|r| r.powf(b) / b).collect();
    check_finite(&y)?;
    quadrature::simpson(&g.theta, &y).map_err(|_| MeasureError::DegenerateGrid { min: 3, got: g.len() })
}

/// ∫ r^p √(r² + r'²) dθ with r' from five-point stencils.
pub fn weighted_perimeter_polar(g: &PolarGraph, d: PowerDensity) -> Result<f64, MeasureError> {
    let slope = g.slope();
    let y: Vec<f64> = g
        .radius
        .iter()
        .zip(&slope)
        .map(|(&r, &s)| {
            let speed = r.hypot(s);
            if r == 0.0 && d.p > 0.0 {
                0.0
            } else {
                r.powf(d.p) * speed
            }
        })
        .collect();
    check_finite(&y)?;
    quadrature::simpson(&g.theta, &y).map_err(|_| MeasureError::DegenerateGrid { min: 3, got: g.len() })
}

/// Weighted measures of a sampled graph.
pub fn graph_measure(g: &PolarGraph, d: PowerDensity) -> Result<Measure, MeasureError> {
    Measure::new(weighted_area_polar(g, d)?, weighted_perimeter_polar(g, d)?, d)
}

/// c = P / A^{(p+1)/(p+2)}.
pub fn iso_ratio(perimeter: f64, area: f64, d: PowerDensity) -> Result<f64, MeasureError> {
    if !(perimeter > 0.0) {
        return Err(MeasureError::NonPositiveInput { name: "perimeter", value: perimeter });
    }
    if !(area > 0.0) {
        return Err(MeasureError::NonPositiveInput { name: "area", value: area });
    }
    if d.p <= -2.0 {
        return Err(MeasureError::ExponentOutOfRange("ratio needs p > -2"));
    }
    Ok(perimeter / area.powf(d.ratio_exponent()))
}

/// Circular arc of radius `r` about the origin spanning the sector.
pub fn arc_measures(r: f64, d: PowerDensity, theta0: f64) -> Result<Measure, MeasureError> {
    if !(r > 0.0) {
        return Err(MeasureError::NonPositiveInput { name: "radius", value: r });
    }
    if !(theta0 > 0.0) {
        return Err(MeasureError::NonPositiveInput { name: "theta0", value: theta0 });
    }
    if d.p <= -2.0 {
        return Err(MeasureError::ExponentOutOfRange("arc needs p > -2"));
    }
    let b = d.p + 2.0;
    let perimeter = theta0 * r.powf(d.p + 1.0);
    let area = theta0 * r.powf(b) / b;
    let ratio = theta0.powf(1.0 / b) * b.powf(d.ratio_exponent());
    Ok(Measure { area, perimeter, ratio })
}

/// ∫_{-π/2}^{π/2} cos^k θ dθ = B(1/2, (k+1)/2).
pub fn wallis(k: f64) -> f64 {
    (0.5 * PI.ln() + ln_gamma(0.5 * (k + 1.0)) - ln_gamma(0.5 * k + 1.0)).exp()
}

/// Half of the circle of diameter `dia` through the origin, centred on an
/// edge: r = dia·cosθ on [0, π/2].
pub fn semicircle_measures(dia: f64, d: PowerDensity) -> Result<Measure, MeasureError> {
    if !(dia > 0.0) {
        return Err(MeasureError::NonPositiveInput { name: "diameter", value: dia });
    }
    if d.p < 0.0 {
        return Err(MeasureError::ExponentOutOfRange("semicircle needs p >= 0"));
    }
    let b = d.p + 2.0;
    let perimeter = 0.5 * dia.powf(d.p + 1.0) * wallis(d.p);
    let area = 0.5 * dia.powf(b) / b * wallis(b);
    let ratio = wallis(d.p) / (0.5 * wallis(b) / b).powf(d.ratio_exponent()) * 0.5;
    Ok(Measure { area, perimeter, ratio })
}

/// Exponents and angle after the map w = zⁿ/n: perimeter density r^p and area
/// density r^q on the θ₀-sector become r^{(p+1)/n−1} and r^{(q+2)/n−2} on the
/// |n|θ₀-sector.
pub fn change_coordinates(p_perim: f64, q_area: f64, theta0: f64, n: f64) -> Result<(f64, f64, f64), MeasureError> {
    if n == 0.0 {
        return Err(MeasureError::ZeroExponent);
    }
    if !(theta0 > 0.0) {
        return Err(MeasureError::NonPositiveInput { name: "theta0", value: theta0 });
    }
    Ok(((p_perim + 1.0) / n - 1.0, (q_area + 2.0) / n - 2.0, n.abs() * theta0))
}
