//! Trials of the rescaled-sector inequality
//! [∫₀¹ r^q dα]^{1/q} ≤ ∫₀¹ √(r² + r'²/((p+1)θ₀)²) dα with q = (p+2)/(p+1),
//! on random positive functions r = floor + |Σ c_k cos(kπα)|.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SectorError;
use crate::measures::PowerDensity;
use crate::quadrature::{adaptive_gauss, AdaptiveOptions};

/// Margin by which the left side must exceed the right to count as a violation.
pub const VIOLATION_MARGIN: f64 = 1e-10;

/// r(α) = floor + |Σ_k c_k cos(kπα)| on [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFunction {
    pub coeffs: Vec<f64>,
    pub floor: f64,
}

impl TrialFunction {
    fn series(&self, alpha: f64) -> (f64, f64) {
        let mut s = 0.0;
        let mut ds = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let w = k as f64 * std::f64::consts::PI;
            let (sin, cos) = (w * alpha).sin_cos();
            s += c * cos;
            ds -= c * w * sin;
        }
        (s, ds)
    }

    /// (r, r') at α.
    pub fn eval(&self, alpha: f64) -> (f64, f64) {
        let (s, ds) = self.series(alpha);
        (self.floor + s.abs(), if s < 0.0 { -ds } else { ds })
    }

    /// Points in (0, 1) where the inner series changes sign, i.e. where r has
    /// a corner.
    fn kinks(&self) -> Vec<f64> {
        let n = 4096;
        let mut out = Vec::new();
        let mut prev = self.series(0.0).0;
        for i in 1..=n {
            let x = i as f64 / n as f64;
            let cur = self.series(x).0;
            if prev * cur < 0.0 {
                let (mut lo, mut hi) = ((i - 1) as f64 / n as f64, x);
                let s_lo = prev;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.series(mid).0 * s_lo > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
            prev = cur;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

/// Evaluates both sides by piecewise adaptive quadrature split at the corners
/// of r.
pub fn inequality_trial(
    d: PowerDensity,
    theta0: f64,
    coeffs: &[f64],
    floor: f64,
) -> Result<InequalityOutcome, SectorError> {
    if !(floor > 0.0) {
        return Err(SectorError::NonPositiveFunction { floor });
    }
    if !(d.p > -1.0) || !(theta0 > 0.0) {
        return Err(SectorError::InvalidInput(format!(
            "need p > -1 and theta0 > 0, got p = {}, theta0 = {theta0}",
            d.p
        )));
    }
    let f = TrialFunction { coeffs: coeffs.to_vec(), floor };
    let q = (d.p + 2.0) / (d.p + 1.0);
    let k = (d.p + 1.0) * theta0;
    let mut breaks = vec![0.0];
    breaks.extend(f.kinks());
    breaks.push(1.0);
    let opts = AdaptiveOptions { rel_tol: 1e-14, max_depth: 30, ..AdaptiveOptions::default() };
    let mut power = 0.0;
    let mut length = 0.0;
    for w in breaks.windows(2) {
        let pw = |a: f64| f.eval(a).0.powf(q);
        let ln = |a: f64| {
            let (r, dr) = f.eval(a);
            r.hypot(dr / k)
        };
        let quad_err = |e: crate::quadrature::QuadError| SectorError::InvalidInput(e.to_string());
        power += adaptive_gauss(&pw, w[0], w[1], opts).map_err(quad_err)?.value;
        length += adaptive_gauss(&ln, w[0], w[1], opts).map_err(quad_err)?.value;
    }
    let lhs = power.powf(1.0 / q);
    Ok(InequalityOutcome { lhs, rhs: length, violated: lhs > length + VIOLATION_MARGIN })
}

/// `modes` coefficients drawn uniformly from [−1, 1].
pub fn random_coefficients<R: Rng>(rng: &mut R, modes: usize) -> Vec<f64> {
    (0..modes).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub trials: usize,
    pub violations: usize,
    /// Smallest rhs − lhs over all trials.
    pub worst_gap: f64,
}

/// Runs `trials` random trials. Trial i draws from a ChaCha stream seeded by
/// `seed` and positioned at stream i, so results do not depend on scheduling.
pub fn inequality_suite(
    d: PowerDensity,
    theta0: f64,
    trials: usize,
    seed: u64,
    floor: f64,
) -> Result<SuiteOutcome, SectorError> {
    let outcomes: Vec<InequalityOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let coeffs = random_coefficients(&mut rng, 8);
            inequality_trial(d, theta0, &coeffs, floor)
        })
        .collect::<Result<_, _>>()?;
    Ok(SuiteOutcome {
        trials,
        violations: outcomes.iter().filter(|o| o.violated).count(),
        worst_gap: outcomes.iter().map(|o| o.rhs - o.lhs).fold(f64::INFINITY, f64::min),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn constants_give_equality() {
        let out = inequality_trial(PowerDensity::new(1.0), 1.3, &[0.7], 0.05).unwrap();
        assert!((out.lhs - 0.75).abs() < 1e-14 && (out.rhs - 0.75).abs() < 1e-14);
        assert!(!out.violated);
    }

    #[test]
    fn rejects_nonpositive_floor() {
        assert!(matches!(
            inequality_trial(PowerDensity::new(1.0), 1.0, &[1.0], 0.0),
            Err(SectorError::NonPositiveFunction { .. })
        ));
    }

    #[test]
    fn kinks_are_found() {
        let f = TrialFunction { coeffs: vec![0.0, 1.0], floor: 0.05 };
        let k = f.kinks();
        assert_eq!(k.len(), 1);
        assert!((k[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unstable_angle_admits_violation() {
        for p in [0.5, 1.0, 2.0] {
            let theta0 = 2.0 * PI / (p + 1.0f64).sqrt();
            let out = inequality_trial(PowerDensity::new(p), theta0, &[0.95, 0.3], 0.05).unwrap();
            assert!(out.violated, "p={p}");
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let d = PowerDensity::new(1.0);
        let a = inequality_suite(d, PI / 2.0, 64, 7, 0.05).unwrap();
        let b = inequality_suite(d, PI / 2.0, 64, 7, 0.05).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.violations, 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Small perturbations r = 1 + ε cos(πα) violate exactly when θ₀
        /// exceeds π/√(p+1), which a second-order expansion predicts.
        #[test]
        fn second_order_threshold(p in 0.2f64..4.0, side in prop_oneof![Just(-1.0f64), Just(1.0f64)]) {
            let threshold = PI / (p + 1.0).sqrt();
            let theta0 = threshold * (1.0 + 0.05 * side);
            let out = inequality_trial(PowerDensity::new(p), theta0, &[1.0 - 1e-9, 0.01], 1e-9).unwrap();
            prop_assert_eq!(out.lhs > out.rhs, side > 0.0);
        }
    }
}
