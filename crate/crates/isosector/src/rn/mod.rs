//! Radial densities in Rⁿ: the Betta convexity test, off-centre sphere
//! measures under r^p, and the shrinking-perimeter family for −n ≤ p < 0.

pub mod star;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::beta::checked_beta_reg;
use statrs::function::gamma::gamma;
use thiserror::Error;

use crate::quadrature::{adaptive_gauss, AdaptiveOptions, QuadError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RnError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("origin inside the sphere (centre distance {h}, radius {radius}) with a negative exponent")]
    OriginInside { h: f64, radius: f64 },
    #[error("profile is not finite at r = {r}")]
    NonFiniteProfile { r: f64 },
    #[error("volume {target} unattainable at radius {radius}; the largest is {max}")]
    VolumeUnattainable { radius: f64, target: f64, max: f64 },
    #[error("sphere grid of {nodes} nodes is too coarse; need at least {min}")]
    GridTooCoarse { nodes: usize, min: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Area of the unit sphere S^k ⊂ R^(k+1).
pub fn unit_sphere_area(k: usize) -> f64 {
    let h = 0.5 * (k as f64 + 1.0);
    2.0 * PI.powf(h) / gamma(h)
}

/// Surface density a(r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    /// r^k.
    Power {
        k: f64,
    },
    /// 1 + r^k.
    OnePlusPower {
        k: f64,
    },
    Constant {
        c: f64,
    },
    /// Samples on increasing radii, interpolated linearly in log–log and
    /// linearly from (0, a0) below the first sample.
    Sampled {
        r: Vec<f64>,
        a: Vec<f64>,
        a0: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub n: usize,
    pub profile: Profile,
    /// Radial extent examined by the convexity test.
    pub r_max: f64,
}

impl RadialProfile {
    pub fn new(n: usize, profile: Profile) -> Result<Self, RnError> {
        if n < 2 {
            return Err(RnError::InvalidInput(format!("dimension must be at least 2, got {n}")));
        }
        if let Profile::Sampled { r, a, a0 } = &profile {
            let ok = r.len() >= 2
                && r.len() == a.len()
                && r[0] > 0.0
                && r.windows(2).all(|w| w[1] > w[0])
                && a.iter().all(|&v| v > 0.0 && v.is_finite())
                && a0.is_finite()
                && *a0 >= 0.0;
            if !ok {
                return Err(RnError::InvalidInput(
                    "sampled profile needs ≥ 2 increasing positive radii and positive finite values".into(),
                ));
            }
        }
        Ok(Self { n, profile, r_max: 2.0 })
    }

    /// Samples `f` at `count` log-spaced radii in [r_min, r_max].
    pub fn sampled<F: Fn(f64) -> f64>(n: usize, f: F, r_min: f64, r_max: f64, count: usize) -> Result<Self, RnError> {
        if !(r_min > 0.0 && r_max > r_min) || count < 2 {
            return Err(RnError::InvalidInput("need 0 < r_min < r_max and at least 2 samples".into()));
        }
        let step = (r_max / r_min).ln() / (count - 1) as f64;
        let r: Vec<f64> = (0..count).map(|i| r_min * (step * i as f64).exp()).collect();
        let a = r.iter().map(|&x| f(x)).collect();
        let mut prof = Self::new(n, Profile::Sampled { r, a, a0: f(0.0) })?;
        prof.r_max = r_max;
        Ok(prof)
    }

    /// Parses `r`, `r^k`, `1+r`, `1+r^k`, `sqrt`, or `const`.
    pub fn from_name(n: usize, name: &str) -> Result<Self, RnError> {
        let parse_k =
            |s: &str| s.parse::<f64>().map_err(|_| RnError::InvalidInput(format!("bad exponent in profile '{name}'")));
        let profile = match name {
            "r" => Profile::Power { k: 1.0 },
            "sqrt" => Profile::Power { k: 0.5 },
            "const" => Profile::Constant { c: 1.0 },
            "1+r" => Profile::OnePlusPower { k: 1.0 },
            _ => {
                if let Some(k) = name.strip_prefix("1+r^") {
                    Profile::OnePlusPower { k: parse_k(k)? }
                } else if let Some(k) = name.strip_prefix("r^") {
                    Profile::Power { k: parse_k(k)? }
                } else {
                    return Err(RnError::InvalidInput(format!("unknown profile '{name}'")));
                }
            }
        };
        Self::new(n, profile)
    }

    pub fn name(&self) -> String {
        match &self.profile {
            Profile::Power { k } if *k == 1.0 => "r".into(),
            Profile::Power { k } if *k == 0.5 => "sqrt".into(),
            Profile::Power { k } => format!("r^{k}"),
            Profile::OnePlusPower { k } if *k == 1.0 => "1+r".into(),
            Profile::OnePlusPower { k } => format!("1+r^{k}"),
            Profile::Constant { c } => format!("const({c})"),
            Profile::Sampled { r, .. } => format!("sampled({})", r.len()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.profile {
            Profile::Power { k } => x.powf(*k),
            Profile::OnePlusPower { k } => 1.0 + x.powf(*k),
            Profile::Constant { c } => *c,
            Profile::Sampled { r, a, a0 } => {
                if x <= 0.0 {
                    return *a0;
                }
                if x < r[0] {
                    return a0 + (a[0] - a0) * x / r[0];
                }
                let i = r.partition_point(|&ri| ri <= x).clamp(1, r.len() - 1);
                let (r0, r1) = (r[i - 1].ln(), r[i].ln());
                let (v0, v1) = (a[i - 1].ln(), a[i].ln());
                (v0 + (v1 - v0) * (x.ln() - r0) / (r1 - r0)).exp()
            }
        }
    }

    pub fn at_origin(&self) -> f64 {
        self.eval(0.0)
    }

    /// f(s) = [a(s^(1/n)) − a(0)]·s^(1 − 1/n).
    pub fn betta_function(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let n = self.n as f64;
        (self.eval(s.powf(1.0 / n)) - self.at_origin()) * s.powf(1.0 - 1.0 / n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BettaVerdict {
    pub convex: bool,
    /// Most negative centred second difference of f on the grid.
    pub worst_second_difference: f64,
    /// max |f| on the grid; the tolerance is 1e-9 times this.
    pub scale: f64,
}

/// Convexity of f on a uniform s-grid over [0, r_max^n].
pub fn betta_convexity_check(prof: &RadialProfile, grid_size: usize) -> Result<BettaVerdict, RnError> {
    if grid_size < 3 {
        return Err(RnError::InvalidInput("convexity grid needs at least 3 points".into()));
    }
    let s_max = prof.r_max.powi(prof.n as i32);
    let h = s_max / (grid_size - 1) as f64;
    let mut f = Vec::with_capacity(grid_size);
    let mut prev_a = prof.at_origin();
    for i in 0..grid_size {
        let s = h * i as f64;
        let r = s.powf(1.0 / prof.n as f64);
        let a = prof.eval(r);
        let v = prof.betta_function(s);
        if !a.is_finite() || !v.is_finite() {
            return Err(RnError::NonFiniteProfile { r });
        }
        if a < prev_a - 1e-12 * prev_a.abs().max(1.0) {
            return Err(RnError::InvalidInput(format!("profile decreases near r = {r}")));
        }
        prev_a = a;
        f.push(v);
    }
    let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let worst = f.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).fold(f64::INFINITY, f64::min);
    Ok(BettaVerdict { convex: worst >= -1e-9 * scale.max(f64::MIN_POSITIVE), worst_second_difference: worst, scale })
}

/// Exponent e of the tangential element s^e dΘ after the substitution
/// s = r^(p+n), valid for p < −n where e = 1 − 1/(p+n) > 1.
pub fn negative_power_exponent(n: usize, p: f64) -> Result<f64, RnError> {
    let m = p + n as f64;
    if !(m < 0.0) {
        return Err(RnError::InvalidInput(format!("needs p < −n, got p = {p} with n = {n}")));
    }
    Ok(1.0 - 1.0 / m)
}

/// Density y^(n−2)·a(|(x, y)|) of the half plane y > 0 that quotients Rⁿ
/// with radial density a by rotations about an axis.
pub fn half_plane_density(prof: &RadialProfile, x: f64, y: f64) -> f64 {
    y.powi(prof.n as i32 - 2) * prof.eval(x.hypot(y))
}

/// Measure of the spherical cap on S^(n−1) whose angular radius ψ has
/// sin²(ψ/2) = `half_sin2`.
fn cap_measure(n: usize, half_sin2: f64) -> f64 {
    let q = half_sin2.clamp(0.0, 1.0);
    match n {
        2 => 4.0 * q.sqrt().asin(),
        3 => 4.0 * PI * q,
        _ => {
            let total = unit_sphere_area(n - 1);
            // sin²ψ = 4q(1 − q); past the equator take the complement.
            let s2 = (4.0 * q * (1.0 - q)).min(1.0);
            let half = 0.5 * total * checked_beta_reg(0.5 * (n as f64 - 1.0), 0.5, s2).unwrap_or(f64::NAN);
            if q <= 0.5 {
                half
            } else {
                total - half
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereMeasures {
    pub volume: f64,
    pub perimeter: f64,
}

/// Weighted volume and boundary area, density r^p, of the ball of radius R
/// whose centre lies at distance h from the origin. `order` is the
/// Gauss–Legendre order of the adaptive rule.
pub fn sphere_measures_rn(n: usize, p: f64, h: f64, radius: f64, order: usize) -> Result<SphereMeasures, RnError> {
    if n < 2 || !(radius > 0.0) || !(h >= 0.0) || !p.is_finite() || order < 2 {
        return Err(RnError::InvalidInput(format!(
            "need n ≥ 2, R > 0, h ≥ 0, finite p, order ≥ 2; got n = {n}, R = {radius}, h = {h}, p = {p}"
        )));
    }
    if p < 0.0 && h <= radius {
        return Err(RnError::OriginInside { h, radius });
    }
    let opts = AdaptiveOptions { order, ..AdaptiveOptions::default() };
    let nf = n as f64;
    let full = unit_sphere_area(n - 1);

    // Volume over shells |x| = r: r^(p+n−1) times the cap of directions
    // inside the ball.
    let mut volume = 0.0;
    if h < radius {
        let inner = radius - h;
        volume += full * adaptive_gauss(&|r: f64| r.powf(p + nf - 1.0), 0.0, inner, opts)?.value;
    }
    if h > 0.0 {
        // Shells meeting the boundary: r = c − w cos τ over τ ∈ [0, π], which
        // smooths the cap's endpoint behaviour. With d = r − h the cap's
        // half-angle satisfies sin²(ψ/2) = (R − d)(R + d)/(4rh); both factors
        // are written without cancellation.
        let outside = h >= radius;
        let (c, w) = if outside { (h, radius) } else { (radius, h) };
        let integrand = |tau: f64| {
            let s = tau.sin();
            let (sh, ch) = (0.5 * tau).sin_cos();
            let r = if outside { c - w * tau.cos() } else { c - w * (1.0 - 2.0 * sh * sh) };
            if r <= 0.0 {
                return 0.0;
            }
            let q = if outside {
                radius * radius * s * s / (4.0 * r * h)
            } else {
                let near = 2.0 * h * ch * ch;
                near * (2.0 * radius - near) / (4.0 * r * h)
            };
            r.powf(p + nf - 1.0) * cap_measure(n, q) * w * s
        };
        volume += adaptive_gauss(&integrand, 0.0, PI, opts)?.value;
    }

    // Boundary by the polar angle β about the ball's centre, measured from
    // the direction pointing away from the origin.
    let ring = unit_sphere_area(n - 2) * radius.powi(n as i32 - 1);
    let integrand = |beta: f64| {
        let s = beta.sin();
        let c = (0.5 * beta).cos();
        let r = ((h - radius).powi(2) + 4.0 * h * radius * c * c).sqrt();
        let w = if r == 0.0 && p > 0.0 { 0.0 } else { r.powf(p) };
        w * s.powi(n as i32 - 2)
    };
    let perimeter = ring * adaptive_gauss(&integrand, 0.0, PI, opts)?.value;
    Ok(SphereMeasures { volume, perimeter })
}

/// Closed forms for the ball about the origin, p > −n.
pub fn centred_sphere_measures(n: usize, p: f64, radius: f64) -> SphereMeasures {
    let nf = n as f64;
    let s = unit_sphere_area(n - 1);
    SphereMeasures { volume: s * radius.powf(nf + p) / (nf + p), perimeter: s * radius.powf(nf - 1.0 + p) }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemoRow {
    pub radius: f64,
    pub h: f64,
    pub volume: f64,
    pub perimeter: f64,
}

/// For each radius, moves the ball away from the origin until its weighted
/// volume equals `volume` and records the weighted boundary area.
pub fn vanishing_perimeter_demo(n: usize, p: f64, volume: f64, radii: &[f64]) -> Result<Vec<DemoRow>, RnError> {
    let nf = n as f64;
    if !(p >= -nf && p < 0.0) {
        return Err(RnError::InvalidInput(format!("needs −n ≤ p < 0, got p = {p} with n = {n}")));
    }
    if !(volume > 0.0) {
        return Err(RnError::InvalidInput(format!("volume must be positive, got {volume}")));
    }
    let order = 20;
    radii
        .iter()
        .map(|&radius| {
            let vol_at = |h: f64| sphere_measures_rn(n, p, h, radius, order).map(|m| m.volume);
            // Volume falls as the ball recedes; near contact it is largest.
            let mut lo = radius * (1.0 + 1e-9);
            let max = vol_at(lo)?;
            if !(max > volume) {
                return Err(RnError::VolumeUnattainable { radius, target: volume, max });
            }
            let mut hi = 2.0 * lo;
            while vol_at(hi)? > volume {
                lo = hi;
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = (lo * hi).sqrt();
                if mid <= lo || mid >= hi || (hi - lo) <= 1e-14 * hi {
                    break;
                }
                if vol_at(mid)? > volume {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let h = (lo * hi).sqrt();
            let m = sphere_measures_rn(n, p, h, radius, order)?;
            Ok(DemoRow { radius, h, volume: m.volume, perimeter: m.perimeter })
        })
        .collect()
}

/// Boundary areas, at equal weighted volume, of the ball about the origin
/// and the ball whose boundary passes through it, density r^p with p > 0.
/// Report only: which one wins is not established.
pub fn centred_vs_through_origin(n: usize, p: f64, volume: f64) -> Result<(f64, f64), RnError> {
    if !(p > 0.0) {
        return Err(RnError::InvalidInput(format!("needs p > 0, got {p}")));
    }
    let nf = n as f64;
    let unit = sphere_measures_rn(n, p, 1.0, 1.0, 20)?;
    let scale = (volume / unit.volume).powf(1.0 / (nf + p));
    let through = unit.perimeter * scale.powf(nf - 1.0 + p);
    let c = centred_sphere_measures(n, p, 1.0);
    let centred = c.perimeter * (volume / c.volume).powf((nf - 1.0 + p) / (nf + p));
    Ok((centred, through))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(2) - 4.0 * PI).abs() < 1e-13);
        assert!((unit_sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((unit_sphere_area(0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn caps_match_elementary_forms() {
        for psi in [0.1f64, 1.0, 2.0, 3.0] {
            let q = (0.5 * psi).sin().powi(2);
            assert!((cap_measure(2, q) - 2.0 * psi).abs() < 1e-12);
            assert!((cap_measure(3, q) - 2.0 * PI * (1.0 - psi.cos())).abs() < 1e-12);
            // S³: 2π(ψ − sin ψ cos ψ).
            assert!((cap_measure(4, q) - 2.0 * PI * (psi - psi.sin() * psi.cos())).abs() < 1e-11, "{psi}");
        }
    }

    #[test]
    fn betta_examples() {
        let v = betta_convexity_check(&RadialProfile::from_name(2, "r").unwrap(), 401).unwrap();
        assert!(v.convex);
        assert!(betta_convexity_check(&RadialProfile::from_name(2, "r^2").unwrap(), 401).unwrap().convex);
        let c = betta_convexity_check(&RadialProfile::from_name(3, "const").unwrap(), 401).unwrap();
        assert!(c.convex && c.scale == 0.0);
        assert!(!betta_convexity_check(&RadialProfile::from_name(2, "sqrt").unwrap(), 401).unwrap().convex);
    }

    #[test]
    fn betta_rejects_decreasing_profile() {
        let prof = RadialProfile::sampled(2, |r| 1.0 / (1.0 + r), 1e-3, 2.0, 64).unwrap();
        assert!(matches!(betta_convexity_check(&prof, 101), Err(RnError::InvalidInput(_))));
    }

    #[test]
    fn sampled_power_law_is_exact_in_log_log() {
        let prof = RadialProfile::sampled(3, |r| r * r, 1e-4, 2.0, 40).unwrap();
        for x in [1e-3, 0.37, 1.9] {
            assert!((prof.eval(x) - x * x).abs() < 1e-12 * x * x);
        }
        assert!(betta_convexity_check(&prof, 401).unwrap().convex);
    }

    #[test]
    fn euclidean_ball_anywhere() {
        for h in [0.0, 0.4, 3.0] {
            let m = sphere_measures_rn(3, 0.0, h, 1.0, 20).unwrap();
            assert!((m.volume - 4.0 * PI / 3.0).abs() < 1e-10, "h={h}: {}", m.volume);
            assert!((m.perimeter - 4.0 * PI).abs() < 1e-10);
        }
    }

    #[test]
    fn centred_closed_form() {
        for (n, p, radius) in [(2, 1.0, 1.3), (3, 0.5, 0.7), (4, 2.0, 1.1), (3, -1.5, 2.0)] {
            let want = centred_sphere_measures(n, p, radius);
            for h in [0.0, 1e-6] {
                if p < 0.0 && h <= radius {
                    continue;
                }
                let got = sphere_measures_rn(n, p, h, radius, 20).unwrap();
                let tol = if h == 0.0 { 1e-10 } else { 1e-5 };
                assert!((got.volume - want.volume).abs() < tol * want.volume, "n={n} p={p} h={h}");
                assert!((got.perimeter - want.perimeter).abs() < tol * want.perimeter);
            }
        }
    }

    /// Monte Carlo-free cross-check in the plane: integrate r^p over the
    /// off-centre disk in Cartesian polar coordinates about its own centre.
    #[test]
    fn planar_off_centre_against_direct_double_integral() {
        let (p, h, radius) = (1.5, 0.6, 1.0);
        let m = sphere_measures_rn(2, p, h, radius, 20).unwrap();
        let nr = 600;
        let nt = 600;
        let mut vol = 0.0;
        for i in 0..nr {
            let rho = radius * (i as f64 + 0.5) / nr as f64;
            for j in 0..nt {
                let t = 2.0 * PI * (j as f64 + 0.5) / nt as f64;
                let (x, y) = (h + rho * t.cos(), rho * t.sin());
                vol += x.hypot(y).powf(p) * rho;
            }
        }
        vol *= (radius / nr as f64) * (2.0 * PI / nt as f64);
        assert!((m.volume - vol).abs() < 1e-4 * vol, "{} vs {vol}", m.volume);
    }

    #[test]
    fn origin_inside_rejected_for_negative_power() {
        assert!(matches!(sphere_measures_rn(2, -1.0, 0.5, 1.0, 20), Err(RnError::OriginInside { .. })));
    }

    #[test]
    fn shrinking_family_in_plane_and_space() {
        let radii: Vec<f64> = (1..=8).map(|k| 2f64.powi(k)).collect();
        for (n, p) in [(2, -1.0), (3, -2.0)] {
            let rows = vanishing_perimeter_demo(n, p, 1.0, &radii).unwrap();
            assert!(rows.windows(2).all(|w| w[1].perimeter < w[0].perimeter));
            assert!(rows.last().unwrap().perimeter < rows[0].perimeter / 10.0);
            for r in &rows {
                assert!((r.volume - 1.0).abs() < 1e-9);
            }
        }
        assert!(vanishing_perimeter_demo(2, 0.0, 1.0, &radii).is_err());
        assert!(matches!(vanishing_perimeter_demo(2, -1.0, 1.0, &[1e-3]), Err(RnError::VolumeUnattainable { .. })));
    }

    #[test]
    fn negative_power_substitution_exponent() {
        let e = negative_power_exponent(3, -5.0).unwrap();
        assert!((e - 1.5).abs() < 1e-15 && e > 1.0);
        assert!(negative_power_exponent(3, -3.0).is_err());
    }

    #[test]
    fn half_plane_quotient_density() {
        let prof = RadialProfile::from_name(3, "r^2").unwrap();
        assert!((half_plane_density(&prof, 3.0, 4.0) - 4.0 * 25.0).abs() < 1e-12);
    }

    #[test]
    fn through_origin_report_is_consistent() {
        let (centred, through) = centred_vs_through_origin(2, 1.0, 1.0).unwrap();
        assert!(centred > 0.0 && through > 0.0);
        // In the plane with density r the circle through the origin wins.
        assert!(through < centred);
    }
}
