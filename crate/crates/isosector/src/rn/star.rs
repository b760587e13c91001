//! Star-shaped regions with radial-graph boundary and the averaging chain
//! Q_full ≥ Q_tangential ≥ Q_ball in the s = rⁿ coordinates.
//!
//! The boundary is ρ(u) = c + b·u + uᵀQu on the unit sphere, which spans the
//! spherical harmonics of degree ≤ 2 and gives the tangential gradient in
//! closed form. Only n = 2 (uniform angles) and n = 3 (Fibonacci lattice) have
//! sphere grids.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{unit_sphere_area, RadialProfile, RnError};

pub const MIN_FIBONACCI_NODES: usize = 500;

/// Unit directions and equal weights summing to |S^(n−1)|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereGrid {
    pub n: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weight: f64,
}

impl SphereGrid {
    pub fn new(n: usize, count: usize) -> Result<Self, RnError> {
        let nodes: Vec<Vec<f64>> = match n {
            2 => {
                if count < 3 {
                    return Err(RnError::GridTooCoarse { nodes: count, min: 3 });
                }
                (0..count)
                    .map(|i| {
                        let t = 2.0 * PI * i as f64 / count as f64;
                        vec![t.cos(), t.sin()]
                    })
                    .collect()
            }
            3 => {
                if count < MIN_FIBONACCI_NODES {
                    return Err(RnError::GridTooCoarse { nodes: count, min: MIN_FIBONACCI_NODES });
                }
                let golden = PI * (3.0 - 5f64.sqrt());
                (0..count)
                    .map(|i| {
                        let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                        let rho = (1.0 - z * z).sqrt();
                        let t = golden * i as f64;
                        vec![rho * t.cos(), rho * t.sin(), z]
                    })
                    .collect()
            }
            _ => return Err(RnError::InvalidInput(format!("sphere grids exist for n = 2 and 3, got {n}"))),
        };
        Ok(Self { n, weight: unit_sphere_area(n - 1) / count as f64, nodes })
    }
}

/// ρ(u) = constant + linear·u + uᵀ·quadratic·u.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Harmonics {
    pub constant: f64,
    pub linear: Vec<f64>,
    /// Symmetric n×n, row-major.
    pub quadratic: Vec<f64>,
}

impl Harmonics {
    pub fn ball(n: usize, radius: f64) -> Self {
        Self { constant: radius, linear: vec![0.0; n], quadratic: vec![0.0; n * n] }
    }

    /// 1 + amplitude·h(u) with |h| ≤ 1, drawn uniformly then normalized so the
    /// radius stays within [1 − amplitude, 1 + amplitude].
    pub fn random<R: Rng>(n: usize, amplitude: f64, rng: &mut R) -> Self {
        let linear: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let mut quadratic = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v: f64 = rng.random_range(-1.0..=1.0);
                quadratic[i * n + j] = v;
                quadratic[j * n + i] = v;
            }
        }
        let norm =
            linear.iter().map(|v| v * v).sum::<f64>().sqrt() + quadratic.iter().map(|v| v * v).sum::<f64>().sqrt();
        let k = amplitude / norm.max(f64::MIN_POSITIVE);
        Self {
            constant: 1.0,
            linear: linear.into_iter().map(|v| v * k).collect(),
            quadratic: quadratic.into_iter().map(|v| v * k).collect(),
        }
    }

    /// (ρ, |∇_S ρ|) at the unit vector u.
    fn eval(&self, u: &[f64]) -> (f64, f64) {
        let n = u.len();
        let mut rho = self.constant;
        // Euclidean gradient of the extension: b + 2Qu.
        let mut grad = self.linear.clone();
        for i in 0..n {
            rho += self.linear[i] * u[i];
            for j in 0..n {
                let q = self.quadratic[i * n + j];
                rho += u[i] * q * u[j];
                grad[i] += 2.0 * q * u[j];
            }
        }
        let radial: f64 = grad.iter().zip(u).map(|(g, x)| g * x).sum();
        let tangential = grad.iter().zip(u).map(|(g, x)| (g - radial * x).powi(2)).sum::<f64>().sqrt();
        (rho, tangential)
    }
}

/// Region {r u : 0 ≤ r ≤ ρ(u)} sampled on a sphere grid. `t` holds ρⁿ,
/// the boundary's s-coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarRegion {
    pub n: usize,
    pub grid: SphereGrid,
    pub t: Vec<f64>,
    radius: Vec<f64>,
    slope: Vec<f64>,
}

impl StarRegion {
    pub fn from_harmonics(grid: SphereGrid, h: &Harmonics) -> Result<Self, RnError> {
        let n = grid.n;
        if h.linear.len() != n || h.quadratic.len() != n * n {
            return Err(RnError::InvalidInput("harmonic coefficients do not match the dimension".into()));
        }
        let mut radius = Vec::with_capacity(grid.nodes.len());
        let mut slope = Vec::with_capacity(grid.nodes.len());
        for u in &grid.nodes {
            let (r, s) = h.eval(u);
            if !(r > 0.0) {
                return Err(RnError::InvalidInput(format!("boundary radius {r} is not positive")));
            }
            radius.push(r);
            slope.push(s);
        }
        let t = radius.iter().map(|r| r.powi(n as i32)).collect();
        Ok(Self { n, grid, t, radius, slope })
    }

    /// Euclidean volume ∫ t/n dΘ.
    pub fn volume(&self) -> f64 {
        self.grid.weight * self.t.iter().sum::<f64>() / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragingOutcome {
    pub q_full: f64,
    pub q_tangential: f64,
    pub q_ball: f64,
    pub ok: bool,
}

/// Surface terms with density a − a(0): the whole boundary, its tangential
/// part ∫ f(t) dΘ, and the ball about the origin of equal volume
/// |S^(n−1)|·f(t_avg).
pub fn averaging_inequality_check(reg: &StarRegion, prof: &RadialProfile) -> Result<AveragingOutcome, RnError> {
    if reg.n != prof.n {
        return Err(RnError::InvalidInput(format!("region in R^{} but profile in R^{}", reg.n, prof.n)));
    }
    let a0 = prof.at_origin();
    let nm1 = reg.n as i32 - 1;
    let w = reg.grid.weight;
    let mut q_full = 0.0;
    let mut q_tangential = 0.0;
    for ((&r, &g), &t) in reg.radius.iter().zip(&reg.slope).zip(&reg.t) {
        let a = prof.eval(r) - a0;
        let element = a * r.powi(nm1);
        q_tangential += w * prof.betta_function(t);
        q_full += w * element * (1.0 + (g / r).powi(2)).sqrt();
    }
    let t_avg = reg.t.iter().sum::<f64>() / reg.t.len() as f64;
    let q_ball = unit_sphere_area(reg.n - 1) * prof.betta_function(t_avg);
    let tol = 1e-9 * q_full.abs().max(q_ball.abs());
    Ok(AveragingOutcome {
        q_full,
        q_tangential,
        q_ball,
        ok: q_full >= q_tangential - tol && q_tangential >= q_ball - tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragingSuite {
    pub trials: usize,
    pub failures: usize,
    /// Smallest (Q_tangential − Q_ball)/Q_ball seen.
    pub worst_jensen_gap: f64,
}

/// Random regions 1 + amplitude·h(u); trial i uses ChaCha stream i of `seed`.
pub fn averaging_suite(
    prof: &RadialProfile,
    grid_nodes: usize,
    trials: usize,
    amplitude: f64,
    seed: u64,
) -> Result<AveragingSuite, RnError> {
    let grid = SphereGrid::new(prof.n, grid_nodes)?;
    let outcomes: Vec<AveragingOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let h = Harmonics::random(prof.n, amplitude, &mut rng);
            averaging_inequality_check(&StarRegion::from_harmonics(grid.clone(), &h)?, prof)
        })
        .collect::<Result<_, _>>()?;
    Ok(AveragingSuite {
        trials,
        failures: outcomes.iter().filter(|o| !o.ok).count(),
        worst_jensen_gap: outcomes
            .iter()
            .map(|o| (o.q_tangential - o.q_ball) / o.q_ball.abs().max(f64::MIN_POSITIVE))
            .fold(f64::INFINITY, f64::min),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_weights_and_coarseness() {
        let g = SphereGrid::new(3, 800).unwrap();
        assert!((g.weight * g.nodes.len() as f64 - 4.0 * PI).abs() < 1e-12);
        assert!(g.nodes.iter().all(|u| (u.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14));
        assert!(matches!(SphereGrid::new(3, 499), Err(RnError::GridTooCoarse { min: 500, .. })));
        assert!(SphereGrid::new(4, 1000).is_err());
    }

    #[test]
    fn fibonacci_grid_integrates_low_degree_exactly_enough() {
        let g = SphereGrid::new(3, 2000).unwrap();
        let z2: f64 = g.nodes.iter().map(|u| u[2] * u[2]).sum::<f64>() * g.weight;
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-5);
    }

    #[test]
    fn ball_makes_chain_equal() {
        for n in [2, 3] {
            let grid = SphereGrid::new(n, 600).unwrap();
            let reg = StarRegion::from_harmonics(grid, &Harmonics::ball(n, 1.3)).unwrap();
            let prof = RadialProfile::from_name(n, "r^2").unwrap();
            let o = averaging_inequality_check(&reg, &prof).unwrap();
            assert!((o.q_full - o.q_tangential).abs() < 1e-12 * o.q_full);
            assert!((o.q_tangential - o.q_ball).abs() < 1e-12 * o.q_full);
            assert!(o.ok);
        }
    }

    #[test]
    fn perturbed_region_gives_strict_chain() {
        let grid = SphereGrid::new(3, 2000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = Harmonics::random(3, 0.3, &mut rng);
        let reg = StarRegion::from_harmonics(grid, &h).unwrap();
        let o = averaging_inequality_check(&reg, &RadialProfile::from_name(3, "r^2").unwrap()).unwrap();
        assert!(o.q_full > o.q_tangential && o.q_tangential > o.q_ball);
    }

    #[test]
    fn tangential_gradient_of_linear_term() {
        // ρ = 1 + 0.2 x on the circle: dρ/dθ = −0.2 sin θ.
        let h = Harmonics { constant: 1.0, linear: vec![0.2, 0.0], quadratic: vec![0.0; 4] };
        let t: f64 = 0.7;
        let (r, g) = h.eval(&[t.cos(), t.sin()]);
        assert!((r - (1.0 + 0.2 * t.cos())).abs() < 1e-15);
        assert!((g - 0.2 * t.sin()).abs() < 1e-15);
    }

    #[test]
    fn suite_is_seeded() {
        let prof = RadialProfile::from_name(2, "1+r").unwrap();
        let a = averaging_suite(&prof, 256, 50, 0.3, 11).unwrap();
        let b = averaging_suite(&prof, 256, 50, 0.3, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.failures, 0);
    }
}
