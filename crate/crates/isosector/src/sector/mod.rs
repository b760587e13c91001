//! Winner selection in the θ₀-sector with density r^p.
//!
//! Three candidates compete on the scale-free ratio P/A^{(p+1)/(p+2)}: the arc
//! about the origin, the semicircle through the origin, and the undulary whose
//! half period equals θ₀ when one exists.

mod inequality;

pub use inequality::{
    inequality_suite, inequality_trial, random_coefficients, InequalityOutcome, SuiteOutcome, TrialFunction,
};

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cgc::{self, CgcError, UndularySpec};
use crate::measures::{arc_measures, semicircle_measures, Measure, MeasureError, PowerDensity};

/// Relative ratio gap below which two candidates count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectorError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("trial function must stay positive (floor = {floor})")]
    NonPositiveFunction { floor: f64 },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Cgc(#[from] CgcError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectorKind {
    Arc,
    Semicircle,
    Undulary,
}

impl SectorKind {
    pub fn name(self) -> &'static str {
        match self {
            SectorKind::Arc => "arc",
            SectorKind::Semicircle => "semicircle",
            SectorKind::Undulary => "undulary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SectorShape {
    Arc,
    Semicircle,
    Undulary { spec: UndularySpec },
}

impl SectorShape {
    pub fn kind(&self) -> SectorKind {
        match self {
            SectorShape::Arc => SectorKind::Arc,
            SectorShape::Semicircle => SectorKind::Semicircle,
            SectorShape::Undulary { .. } => SectorKind::Undulary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorCandidate {
    pub shape: SectorShape,
    pub measure: Measure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Winner {
    Arc,
    Semicircle,
    Undulary,
    Tie,
}

impl Winner {
    pub fn name(self) -> &'static str {
        match self {
            Winner::Arc => "arc",
            Winner::Semicircle => "semicircle",
            Winner::Undulary => "undulary",
            Winner::Tie => "tie",
        }
    }
}

impl From<SectorKind> for Winner {
    fn from(k: SectorKind) -> Self {
        match k {
            SectorKind::Arc => Winner::Arc,
            SectorKind::Semicircle => Winner::Semicircle,
            SectorKind::Undulary => Winner::Undulary,
        }
    }
}

/// Why the undulary is missing from a ranking, if it is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum UndularyStatus {
    Solved,
    NoSolution { t_min: f64, t_max: f64 },
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub p: f64,
    pub theta0: f64,
    /// Candidates sorted by ratio, best first.
    pub ranked: Vec<SectorCandidate>,
    pub winner: Winner,
    /// Kinds within the tie tolerance of the best ratio.
    pub tied: Vec<SectorKind>,
    /// Relative ratio gap between the best and the runner-up.
    pub margin: f64,
    pub undulary: UndularyStatus,
}

impl Classification {
    pub fn ratio_of(&self, kind: SectorKind) -> Option<f64> {
        self.ranked.iter().find(|c| c.shape.kind() == kind).map(|c| c.measure.ratio)
    }

    /// Best or tied for best.
    pub fn is_best(&self, kind: SectorKind) -> bool {
        self.tied.contains(&kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProvenBounds {
    pub theta1_lo: f64,
    pub theta1_hi: f64,
    pub theta2_lo: f64,
    pub theta2_hi: f64,
    /// Whether the sharper lower bound θ₁ ≥ 2 for p = 1 was applied.
    pub p1_special: bool,
}

/// Proven brackets π/(p+1) ≤ θ₁ ≤ π/√(p+1) and π(p+2)/(2p+2) ≤ θ₂ ≤ π, with
/// θ₁ ≥ 2 when p = 1.
pub fn proven_bounds(d: PowerDensity) -> ProvenBounds {
    let p = d.p;
    let p1_special = p == 1.0;
    let base = PI / (p + 1.0);
    ProvenBounds {
        theta1_lo: if p1_special { base.max(2.0) } else { base },
        theta1_hi: PI / (p + 1.0).sqrt(),
        theta2_lo: PI * (p + 2.0) / (2.0 * p + 2.0),
        theta2_hi: PI,
        p1_special,
    }
}

/// Conjectured transition angles π/√(p+1) and π(p+2)/(2p+2).
pub fn conjectured_transitions(d: PowerDensity) -> (f64, f64) {
    cgc::half_period_limits(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcStability {
    /// (1+p)(θ₀/π)²; the arc has positive second variation iff this is below 1.
    pub q: f64,
    pub stable: bool,
    /// Q equals 1 to rounding.
    pub boundary: bool,
}

pub fn arc_stability(theta0: f64, d: PowerDensity) -> ArcStability {
    let q = (1.0 + d.p) * (theta0 / PI).powi(2);
    if d.p < -1.0 {
        return ArcStability { q, stable: true, boundary: false };
    }
    let boundary = (q - 1.0).abs() <= 4.0 * f64::EPSILON;
    ArcStability { q, stable: q < 1.0 && !boundary, boundary }
}

/// Ranks arc, semicircle and (when solvable) the equilibrium undulary.
pub fn classify_sector(d: PowerDensity, theta0: f64) -> Result<Classification, SectorError> {
    if !(d.p > 0.0) || !(theta0 > 0.0) || !theta0.is_finite() {
        return Err(SectorError::InvalidInput(format!(
            "need p > 0 and finite theta0 > 0, got p = {}, theta0 = {theta0}",
            d.p
        )));
    }
    let mut ranked = vec![
        SectorCandidate { shape: SectorShape::Arc, measure: arc_measures(1.0, d, theta0)? },
        SectorCandidate { shape: SectorShape::Semicircle, measure: semicircle_measures(1.0, d)? },
    ];
    let undulary = match cgc::solve_equilibrium_undulary(theta0, d)
        .and_then(|spec| cgc::undulary_measures(&spec).map(|m| (spec, m)))
    {
        Ok((spec, measure)) => {
            ranked.push(SectorCandidate { shape: SectorShape::Undulary { spec }, measure });
            UndularyStatus::Solved
        }
        Err(CgcError::NoSolution { t_min, t_max, .. }) => UndularyStatus::NoSolution { t_min, t_max },
        Err(e) => UndularyStatus::Failed { reason: e.to_string() },
    };
    ranked.sort_by(|a, b| a.measure.ratio.total_cmp(&b.measure.ratio));
    let best = ranked[0].measure.ratio;
    let tied: Vec<SectorKind> =
        ranked.iter().filter(|c| (c.measure.ratio - best) / best < TIE_TOLERANCE).map(|c| c.shape.kind()).collect();
    let margin = ranked.get(1).map_or(f64::INFINITY, |c| (c.measure.ratio - best) / best);
    let winner = if tied.len() > 1 { Winner::Tie } else { ranked[0].shape.kind().into() };
    Ok(Classification { p: d.p, theta0, ranked, winner, tied, margin, undulary })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub p: f64,
    pub theta0: f64,
    pub result: Result<Classification, String>,
}

/// Classifies every (p, θ₀) pair, p-major, in parallel; output order follows
/// the grids.
pub fn phase_sweep(p_grid: &[f64], theta_grid: &[f64]) -> Vec<PhaseCell> {
    let cells: Vec<(f64, f64)> = p_grid.iter().flat_map(|&p| theta_grid.iter().map(move |&t| (p, t))).collect();
    cells
        .par_iter()
        .map(|&(p, theta0)| PhaseCell {
            p,
            theta0,
            result: classify_sector(PowerDensity::new(p), theta0).map_err(|e| e.to_string()),
        })
        .collect()
}

/// Once the arc stops winning it never wins again, and once the semicircle
/// wins outright it stays best or tied. `cells` must be ordered by increasing θ₀.
pub fn once_lost_always_lost(cells: &[Classification]) -> bool {
    let mut arc_lost = false;
    let mut semi_won = false;
    for c in cells {
        if arc_lost && c.winner == Winner::Arc {
            return false;
        }
        if semi_won && !c.is_best(SectorKind::Semicircle) {
            return false;
        }
        arc_lost |= c.winner != Winner::Arc;
        semi_won |= c.winner == Winner::Semicircle;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub theta: f64,
    /// Width of the final bisection bracket.
    pub bracket: f64,
    /// Angular uncertainty: the larger of the bracket and how far the half
    /// period still moves over the last decade of probed r₁ at that end.
    pub resolution: f64,
    pub within_proven_bounds: bool,
    pub conjecture: f64,
    pub conjecture_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transitions {
    pub p: f64,
    /// First angle where the arc is no longer the unique winner.
    pub theta1: Option<Transition>,
    /// First angle where the semicircle is the unique winner. Near the top of
    /// the undulary window the two ratios agree to within the tie tolerance
    /// while the undulary is still strictly better, so ties do not count here.
    pub theta2: Option<Transition>,
}

fn bisect_predicate<F: Fn(f64) -> Result<bool, SectorError>>(
    mut lo: f64,
    mut hi: f64,
    pred: F,
    tol: f64,
) -> Result<(f64, f64), SectorError> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((0.5 * (lo + hi), hi - lo))
}

/// Scans `steps` angles in [lo, hi] and bisects each winner change to 1e-6.
pub fn locate_transitions(d: PowerDensity, lo: f64, hi: f64, steps: usize) -> Result<Transitions, SectorError> {
    if !(hi > lo) || steps < 2 {
        return Err(SectorError::InvalidInput("need lo < hi and at least 2 steps".into()));
    }
    let grid: Vec<f64> = (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect();
    let cells: Vec<Classification> = grid.par_iter().map(|&t| classify_sector(d, t)).collect::<Result<_, _>>()?;
    let bounds = proven_bounds(d);
    let (c1, c2) = conjectured_transitions(d);
    let arc_lost = |t: f64| classify_sector(d, t).map(|c| c.winner != Winner::Arc);
    let semi_won = |t: f64| classify_sector(d, t).map(|c| c.winner == Winner::Semicircle);
    let low_tail =
        cgc::half_period(1.0 + 10.0 * cgc::R1_MIN_EXCESS, d)? - cgc::half_period(1.0 + cgc::R1_MIN_EXCESS, d)?;
    let high_tail = cgc::half_period(cgc::R1_MAX, d)? - cgc::half_period(cgc::R1_MAX / 10.0, d)?;

    let mut theta1 = None;
    if let Some(i) = cells.iter().position(|c| c.winner != Winner::Arc) {
        if i > 0 {
            let (theta, bracket) = bisect_predicate(grid[i - 1], grid[i], arc_lost, 1e-6)?;
            let resolution = bracket.max(low_tail.abs());
            theta1 = Some(Transition {
                theta,
                bracket,
                resolution,
                within_proven_bounds: theta >= bounds.theta1_lo - resolution && theta <= bounds.theta1_hi + resolution,
                conjecture: c1,
                conjecture_gap: theta - c1,
            });
        }
    }
    let mut theta2 = None;
    if let Some(i) = cells.iter().position(|c| c.winner == Winner::Semicircle) {
        if i > 0 {
            let (theta, bracket) = bisect_predicate(grid[i - 1], grid[i], semi_won, 1e-6)?;
            let resolution = bracket.max(high_tail.abs());
            theta2 = Some(Transition {
                theta,
                bracket,
                resolution,
                within_proven_bounds: theta >= bounds.theta2_lo - resolution && theta <= bounds.theta2_hi + resolution,
                conjecture: c2,
                conjecture_gap: theta - c2,
            });
        }
    }
    Ok(Transitions { p: d.p, theta1, theta2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_examples() {
        let b = proven_bounds(PowerDensity::new(1.0));
        assert_eq!(b.theta1_lo, 2.0);
        assert!((b.theta1_hi - PI / 2f64.sqrt()).abs() < 1e-15);
        assert!((b.theta2_lo - 0.75 * PI).abs() < 1e-15);
        assert_eq!(b.theta2_hi, PI);
        assert!(b.p1_special);
        let b = proven_bounds(PowerDensity::new(3.0));
        assert!((b.theta1_lo - PI / 4.0).abs() < 1e-15 && (b.theta1_hi - PI / 2.0).abs() < 1e-15);
        assert!((b.theta2_lo - 5.0 * PI / 8.0).abs() < 1e-15);
        let b = proven_bounds(PowerDensity::new(1e-12));
        for v in [b.theta1_lo, b.theta1_hi, b.theta2_lo, b.theta2_hi] {
            assert!((v - PI).abs() < 1e-10);
        }
    }

    #[test]
    fn conjecture_examples() {
        let (a, b) = conjectured_transitions(PowerDensity::new(2.0));
        assert!((a - 1.813799364234218).abs() < 1e-12 && (b - 2.0 * PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn stability_examples() {
        let s = arc_stability(2.0, PowerDensity::new(1.0));
        assert!(s.stable && (s.q - 8.0 / (PI * PI)).abs() < 1e-15);
        let s = arc_stability(PI / 2f64.sqrt(), PowerDensity::new(1.0));
        assert!(s.boundary && !s.stable);
        assert!(arc_stability(100.0, PowerDensity::new(-2.0)).stable);
    }

    #[test]
    fn classify_examples() {
        let d = PowerDensity::new(1.0);
        assert_eq!(classify_sector(d, 1.4).unwrap().winner, Winner::Arc);
        assert_eq!(classify_sector(d, 3.2).unwrap().winner, Winner::Semicircle);
        let c = classify_sector(d, 2.30).unwrap();
        assert_eq!(c.winner, Winner::Undulary);
        let und = c.ratio_of(SectorKind::Undulary).unwrap();
        assert!(und < c.ratio_of(SectorKind::Arc).unwrap());
        assert!(und < c.ratio_of(SectorKind::Semicircle).unwrap());
        if let SectorShape::Undulary { spec } = c.ranked[0].shape {
            assert!((cgc::half_period(spec.r1, d).unwrap() - 2.30).abs() < 1e-8);
            assert!(spec.lambda > 0.0 && spec.lambda < 2.0);
        } else {
            panic!("undulary should rank first");
        }
    }

    #[test]
    fn sweep_of_one_cell_matches_classifier() {
        let cells = phase_sweep(&[1.0], &[2.3]);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].result.as_ref().unwrap(), &classify_sector(PowerDensity::new(1.0), 2.3).unwrap());
    }

    #[test]
    fn p2_transitions_near_conjecture() {
        let t = locate_transitions(PowerDensity::new(2.0), 1.6, 2.4, 17).unwrap();
        let t1 = t.theta1.unwrap();
        let t2 = t.theta2.unwrap();
        assert!(t1.conjecture_gap.abs() < 0.02 && t2.conjecture_gap.abs() < 0.02);
        assert!(t1.within_proven_bounds && t2.within_proven_bounds);
    }
}
