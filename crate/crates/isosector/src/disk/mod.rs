//! Sector of angle θ₀ with density a > 1 inside the unit disk D and 1 outside.
//!
//! Perimeter lying on ∂D is weighted at 1, the smaller of the two sides.
//! Candidates are compared by perimeter at equal weighted area.

pub mod bite;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sector::TIE_TOLERANCE;
use bite::{bite_geometry, bite_measures, max_bite_angle, snell_contact_angle};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiskError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{kind} parameter {value} out of range: {reason}")]
    ParamOutOfRange { kind: &'static str, value: f64, reason: &'static str },
    #[error("area {area} unattainable by {kind}; attainable range ({lo}, {hi})")]
    AreaUnattainable { kind: &'static str, area: f64, lo: f64, hi: f64 },
    #[error("bite solve failed for area {area}: {reason}")]
    BiteSolveFailure { area: f64, reason: String },
    #[error("no transition: {0}")]
    NoTransition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskDensity {
    pub a: f64,
}

impl DiskDensity {
    pub fn new(a: f64) -> Result<Self, DiskError> {
        if a.is_finite() && a > 1.0 {
            Ok(Self { a })
        } else {
            Err(DiskError::InvalidInput(format!("interior density must be finite and > 1, got {a}")))
        }
    }

    /// Weighted area of the whole disk sector, aθ₀/2.
    pub fn full_area(self, theta0: f64) -> f64 {
        0.5 * self.a * theta0
    }
}

/// Boundary contact angle of a bite, arccos(1/a).
pub fn snell_angle(dd: DiskDensity) -> f64 {
    snell_contact_angle(dd.a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiskKind {
    ArcInside,
    ArcEnclosing,
    Annulus,
    Bite,
    EdgeSemicircle,
    EnclosingSemicircle,
}

impl DiskKind {
    pub const ALL: [DiskKind; 6] = [
        DiskKind::ArcInside,
        DiskKind::ArcEnclosing,
        DiskKind::Annulus,
        DiskKind::Bite,
        DiskKind::EdgeSemicircle,
        DiskKind::EnclosingSemicircle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiskKind::ArcInside => "arc-inside",
            DiskKind::ArcEnclosing => "arc-enclosing",
            DiskKind::Annulus => "annulus",
            DiskKind::Bite => "bite",
            DiskKind::EdgeSemicircle => "edge-semicircle",
            DiskKind::EnclosingSemicircle => "enclosing-semicircle",
        }
    }
}

impl std::str::FromStr for DiskKind {
    type Err = DiskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DiskKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| DiskError::InvalidInput(format!("unknown disk candidate '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DiskCandidate {
    /// Arc about the origin of radius ≤ 1.
    ArcInside { radius: f64 },
    /// Arc about the origin of radius ≥ 1.
    ArcEnclosing { radius: f64 },
    /// The region between radius ρ and ∂D.
    Annulus { inner_radius: f64 },
    /// Disk sector minus a lens at the θ = 0 edge with boundary half-angle φ.
    Bite { phi: f64 },
    /// Semicircle on an edge, outside D.
    EdgeSemicircle { radius: f64 },
    /// Semicircle centred on the axis enclosing D; only at θ₀ = π.
    EnclosingSemicircle { radius: f64 },
}

impl DiskCandidate {
    pub fn kind(&self) -> DiskKind {
        match self {
            DiskCandidate::ArcInside { .. } => DiskKind::ArcInside,
            DiskCandidate::ArcEnclosing { .. } => DiskKind::ArcEnclosing,
            DiskCandidate::Annulus { .. } => DiskKind::Annulus,
            DiskCandidate::Bite { .. } => DiskKind::Bite,
            DiskCandidate::EdgeSemicircle { .. } => DiskKind::EdgeSemicircle,
            DiskCandidate::EnclosingSemicircle { .. } => DiskKind::EnclosingSemicircle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskMeasure {
    pub area: f64,
    pub perimeter: f64,
}

fn is_half_turn(theta0: f64) -> bool {
    (theta0 - PI).abs() <= 1e-12 * PI
}

fn check_theta(theta0: f64) -> Result<(), DiskError> {
    if theta0.is_finite() && theta0 > 0.0 {
        Ok(())
    } else {
        Err(DiskError::InvalidInput(format!("sector angle must be positive, got {theta0}")))
    }
}

pub fn disk_candidate_measures(c: DiskCandidate, dd: DiskDensity, theta0: f64) -> Result<DiskMeasure, DiskError> {
    check_theta(theta0)?;
    let a = dd.a;
    let out_of_range =
        |value: f64, reason: &'static str| DiskError::ParamOutOfRange { kind: c.kind().name(), value, reason };
    let (area, perimeter) = match c {
        DiskCandidate::ArcInside { radius: r } => {
            if !(r > 0.0 && r <= 1.0) {
                return Err(out_of_range(r, "radius must lie in (0, 1]"));
            }
            (0.5 * a * theta0 * r * r, a * theta0 * r)
        }
        DiskCandidate::ArcEnclosing { radius: r } => {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(out_of_range(r, "radius must be at least 1"));
            }
            (dd.full_area(theta0) + 0.5 * theta0 * (r * r - 1.0), theta0 * r)
        }
        DiskCandidate::Annulus { inner_radius: rho } => {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(out_of_range(rho, "inner radius must lie in (0, 1)"));
            }
            (0.5 * a * theta0 * (1.0 - rho * rho), a * theta0 * rho + theta0)
        }
        DiskCandidate::Bite { phi } => {
            if !(phi > 0.0 && phi < max_bite_angle(a, theta0)) {
                return Err(out_of_range(phi, "boundary half-angle must lie in (0, min(θ₀, π − arccos(1/a)))"));
            }
            bite_measures(a, theta0, phi)
        }
        DiskCandidate::EdgeSemicircle { radius: s } => {
            if !(s > 0.0 && s.is_finite()) {
                return Err(out_of_range(s, "radius must be positive"));
            }
            (0.5 * PI * s * s, PI * s)
        }
        DiskCandidate::EnclosingSemicircle { radius: r } => {
            if !is_half_turn(theta0) {
                return Err(out_of_range(theta0, "exists only in the half plane"));
            }
            if !(r >= 1.0 && r.is_finite()) {
                return Err(out_of_range(r, "radius must be at least 1"));
            }
            (0.5 * PI * r * r + 0.5 * (a - 1.0) * PI, PI * r)
        }
    };
    Ok(DiskMeasure { area, perimeter })
}

/// Semicircle of radius R ≥ 1 tangent to ∂D plus the rest of ∂D, for θ₀ > π.
/// It is an equilibrium but not a ranked candidate.
pub fn tangent_semicircle_measures(dd: DiskDensity, theta0: f64, radius: f64) -> Result<DiskMeasure, DiskError> {
    if !(theta0 > PI) || !(radius >= 1.0) {
        return Err(DiskError::ParamOutOfRange {
            kind: "tangent-semicircle",
            value: radius,
            reason: "needs θ₀ > π and radius ≥ 1",
        });
    }
    Ok(DiskMeasure {
        area: 0.5 * PI * (radius * radius - 1.0) + dd.full_area(theta0),
        perimeter: PI * radius + theta0 - PI,
    })
}

/// P²/A for a semicircle of radius 1 meeting ∂D perpendicularly at one end and
/// spending angle β inside D: 2(π + β(a − 1)).
pub fn perpendicular_semicircle_ratio(dd: DiskDensity, beta: f64) -> f64 {
    let p = PI - beta + dd.a * beta;
    let area = 0.5 * p;
    p * p / area
}

/// Range of weighted areas reachable by a bite: (area at maximal φ, aθ₀/2).
pub fn bite_area_range(dd: DiskDensity, theta0: f64) -> (f64, f64) {
    let phi_max = max_bite_angle(dd.a, theta0);
    (bite_measures(dd.a, theta0, phi_max).0, dd.full_area(theta0))
}

fn solve_bite(dd: DiskDensity, theta0: f64, area: f64) -> Result<f64, DiskError> {
    let (lo_area, hi_area) = bite_area_range(dd, theta0);
    if !(area > lo_area && area < hi_area) {
        return Err(DiskError::AreaUnattainable { kind: "bite", area, lo: lo_area, hi: hi_area });
    }
    // Area decreases as φ grows.
    let (mut lo, mut hi) = (0.0, max_bite_angle(dd.a, theta0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if bite_measures(dd.a, theta0, mid).0 > area {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi = 0.5 * (lo + hi);
    let got = bite_measures(dd.a, theta0, phi).0;
    if (got - area).abs() > 1e-10 * area {
        return Err(DiskError::BiteSolveFailure { area, reason: format!("bisection stalled at area {got}") });
    }
    Ok(phi)
}

/// Candidate of the given kind enclosing weighted area `area`.
pub fn solve_candidate_for_area(
    kind: DiskKind,
    dd: DiskDensity,
    theta0: f64,
    area: f64,
) -> Result<DiskCandidate, DiskError> {
    check_theta(theta0)?;
    if !(area > 0.0 && area.is_finite()) {
        return Err(DiskError::InvalidInput(format!("area must be positive, got {area}")));
    }
    let full = dd.full_area(theta0);
    let unattainable = |lo: f64, hi: f64| DiskError::AreaUnattainable { kind: kind.name(), area, lo, hi };
    Ok(match kind {
        DiskKind::ArcInside => {
            if area > full {
                return Err(unattainable(0.0, full));
            }
            DiskCandidate::ArcInside { radius: (area / full).sqrt() }
        }
        DiskKind::ArcEnclosing => {
            if area < full {
                return Err(unattainable(full, f64::INFINITY));
            }
            DiskCandidate::ArcEnclosing { radius: (1.0 + 2.0 * (area - full) / theta0).sqrt() }
        }
        DiskKind::Annulus => {
            if area >= full {
                return Err(unattainable(0.0, full));
            }
            DiskCandidate::Annulus { inner_radius: (1.0 - area / full).sqrt() }
        }
        DiskKind::Bite => DiskCandidate::Bite { phi: solve_bite(dd, theta0, area)? },
        DiskKind::EdgeSemicircle => DiskCandidate::EdgeSemicircle { radius: (2.0 * area / PI).sqrt() },
        DiskKind::EnclosingSemicircle => {
            let lo = 0.5 * dd.a * PI;
            if !is_half_turn(theta0) || area < lo {
                return Err(unattainable(lo, f64::INFINITY));
            }
            DiskCandidate::EnclosingSemicircle { radius: (2.0 * area / PI - (dd.a - 1.0)).sqrt() }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedDisk {
    pub candidate: DiskCandidate,
    pub measure: DiskMeasure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentReport {
    pub radius: f64,
    pub perimeter: f64,
    /// Perimeter of the best ranked candidate minus the tangent semicircle's;
    /// negative when the tangent semicircle loses.
    pub advantage: f64,
    pub loses: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskClassification {
    pub a: f64,
    pub theta0: f64,
    pub area: f64,
    /// Attainable candidates, ascending by perimeter.
    pub ranked: Vec<RankedDisk>,
    /// Kinds within the tie tolerance of the least perimeter.
    pub winners: Vec<DiskKind>,
    /// Relative perimeter gap between the winners and the next candidate.
    pub margin: f64,
    pub tangent: Option<TangentReport>,
}

impl DiskClassification {
    pub fn perimeter_of(&self, kind: DiskKind) -> Option<f64> {
        self.ranked.iter().find(|c| c.candidate.kind() == kind).map(|c| c.measure.perimeter)
    }

    pub fn winner_names(&self) -> String {
        self.winners.iter().map(|k| k.name()).collect::<Vec<_>>().join("+")
    }
}

fn within_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs())
}

pub fn classify_disk(dd: DiskDensity, theta0: f64, area: f64) -> Result<DiskClassification, DiskError> {
    check_theta(theta0)?;
    if !(area > 0.0 && area.is_finite()) {
        return Err(DiskError::InvalidInput(format!("area must be positive, got {area}")));
    }
    let mut ranked = Vec::new();
    for kind in DiskKind::ALL {
        match solve_candidate_for_area(kind, dd, theta0, area) {
            Ok(candidate) => {
                // At exactly aθ₀/2 the inside and enclosing arcs coincide.
                if kind == DiskKind::ArcInside && area >= dd.full_area(theta0) {
                    continue;
                }
                let measure = disk_candidate_measures(candidate, dd, theta0)?;
                ranked.push(RankedDisk { candidate, measure });
            }
            Err(DiskError::AreaUnattainable { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    ranked.sort_by(|x, y| x.measure.perimeter.total_cmp(&y.measure.perimeter));
    let best = ranked[0].measure.perimeter;
    let winners: Vec<DiskKind> =
        ranked.iter().take_while(|c| within_tie(c.measure.perimeter, best)).map(|c| c.candidate.kind()).collect();
    let margin = ranked.get(winners.len()).map(|c| (c.measure.perimeter - best) / best).unwrap_or(f64::INFINITY);
    let tangent = if theta0 > PI && area >= dd.full_area(theta0) {
        let radius = (1.0 + 2.0 * (area - dd.full_area(theta0)) / PI).sqrt();
        let m = tangent_semicircle_measures(dd, theta0, radius)?;
        let advantage = best - m.perimeter;
        Some(TangentReport { radius, perimeter: m.perimeter, advantage, loses: m.perimeter > best })
    } else {
        None
    };
    Ok(DiskClassification { a: dd.a, theta0, area, ranked, winners, margin, tangent })
}

/// Winners that follow directly from (θ₀, A), for cells whose branch does not
/// depend on the located thresholds. `small_area` marks cells known to lie
/// below the first threshold.
pub fn known_winners(dd: DiskDensity, theta0: f64, area: f64, small_area: bool) -> Option<Vec<DiskKind>> {
    let a = dd.a;
    let full = dd.full_area(theta0);
    if theta0 > a * PI {
        return Some(vec![DiskKind::EdgeSemicircle]);
    }
    if area >= full {
        if theta0 <= PI {
            return Some(if is_half_turn(theta0) {
                vec![DiskKind::ArcEnclosing, DiskKind::EnclosingSemicircle]
            } else {
                vec![DiskKind::ArcEnclosing]
            });
        }
        let large = large_area_threshold(dd, theta0)?;
        return Some(if within_tie(area, large) {
            vec![DiskKind::ArcEnclosing, DiskKind::EdgeSemicircle]
        } else if area < large {
            vec![DiskKind::ArcEnclosing]
        } else {
            vec![DiskKind::EdgeSemicircle]
        });
    }
    if small_area {
        return Some(small_area_winners(dd, theta0));
    }
    None
}

/// Area above which an edge semicircle beats the enclosing arc,
/// θ₀²(a − 1)/(2(θ₀ − π)); defined for θ₀ > π.
pub fn large_area_threshold(dd: DiskDensity, theta0: f64) -> Option<f64> {
    (theta0 > PI && !is_half_turn(theta0)).then(|| theta0 * theta0 * (dd.a - 1.0) / (2.0 * (theta0 - PI)))
}

/// Small-area winners from P²/A: 2aθ₀ for the inside arc against 2π for the
/// edge semicircle.
pub fn small_area_winners(dd: DiskDensity, theta0: f64) -> Vec<DiskKind> {
    let arc = 2.0 * dd.a * theta0;
    let semi = 2.0 * PI;
    if within_tie(arc, semi) {
        vec![DiskKind::ArcInside, DiskKind::EdgeSemicircle]
    } else if arc < semi {
        vec![DiskKind::ArcInside]
    } else {
        vec![DiskKind::EdgeSemicircle]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub area: f64,
    pub bracket: f64,
}

fn perimeter_at(kind: DiskKind, dd: DiskDensity, theta0: f64, area: f64) -> Result<f64, DiskError> {
    let c = solve_candidate_for_area(kind, dd, theta0, area)?;
    Ok(disk_candidate_measures(c, dd, theta0)?.perimeter)
}

/// First sign change of `diff` on `samples` interior points of (lo, hi),
/// refined by bisection.
fn first_crossing<F>(lo: f64, hi: f64, samples: usize, diff: F) -> Result<Option<Crossing>, DiskError>
where
    F: Fn(f64) -> Result<f64, DiskError>,
{
    let pts: Vec<f64> = (1..=samples).map(|i| lo + (hi - lo) * i as f64 / (samples + 1) as f64).collect();
    let mut prev = (pts[0], diff(pts[0])?);
    for &x in &pts[1..] {
        let v = diff(x)?;
        if prev.1 * v < 0.0 {
            let (mut l, mut h) = (prev.0, x);
            let s_lo = prev.1.signum();
            while h - l > 1e-13 * h.abs().max(1.0) {
                let m = 0.5 * (l + h);
                if m <= l || m >= h {
                    break;
                }
                if diff(m)?.signum() == s_lo {
                    l = m;
                } else {
                    h = m;
                }
            }
            return Ok(Some(Crossing { area: 0.5 * (l + h), bracket: h - l }));
        }
        prev = (x, v);
    }
    Ok(None)
}

/// Area where the bite starts beating the better of the inside arc and the
/// edge semicircle.
pub fn first_bite_transition(dd: DiskDensity, theta0: f64) -> Result<Crossing, DiskError> {
    let (lo, hi) = bite_area_range(dd, theta0);
    let diff = |area: f64| {
        let small = perimeter_at(DiskKind::ArcInside, dd, theta0, area)?.min(perimeter_at(
            DiskKind::EdgeSemicircle,
            dd,
            theta0,
            area,
        )?);
        Ok(small - perimeter_at(DiskKind::Bite, dd, theta0, area)?)
    };
    first_crossing(lo, hi, 400, diff)?
        .ok_or_else(|| DiskError::NoTransition(format!("bite never overtakes the small-area winner at θ₀ = {theta0}")))
}

/// Perimeter of the bite minus that of the annulus at the same area.
pub fn bite_minus_annulus(dd: DiskDensity, theta0: f64, area: f64) -> Result<f64, DiskError> {
    Ok(perimeter_at(DiskKind::Bite, dd, theta0, area)? - perimeter_at(DiskKind::Annulus, dd, theta0, area)?)
}

/// Area where the annulus takes over from the bite.
pub fn bite_annulus_transition(dd: DiskDensity, theta0: f64) -> Result<Crossing, DiskError> {
    let (lo, hi) = bite_area_range(dd, theta0);
    first_crossing(lo, hi, 400, |area| bite_minus_annulus(dd, theta0, area))?
        .ok_or_else(|| DiskError::NoTransition(format!("the annulus never beats the bite at θ₀ = {theta0}")))
}

/// Sign changes of bite-minus-annulus perimeter over `samples` areas spread
/// across the range where both exist.
pub fn bite_annulus_sign_changes(dd: DiskDensity, theta0: f64, samples: usize) -> Result<usize, DiskError> {
    let (lo, hi) = bite_area_range(dd, theta0);
    let mut changes = 0;
    let mut prev = 0.0f64;
    for i in 1..=samples {
        let area = lo + (hi - lo) * i as f64 / (samples + 1) as f64;
        let d = bite_minus_annulus(dd, theta0, area)?;
        if d != 0.0 {
            if prev != 0.0 && d.signum() != prev.signum() {
                changes += 1;
            }
            prev = d;
        }
    }
    Ok(changes)
}

/// Large-area threshold found by bisecting the enclosing-arc and edge
/// semicircle perimeters, independent of the closed form.
pub fn large_area_threshold_by_bisection(dd: DiskDensity, theta0: f64) -> Result<f64, DiskError> {
    let diff = |area: f64| -> Result<f64, DiskError> {
        Ok(perimeter_at(DiskKind::ArcEnclosing, dd, theta0, area)?
            - perimeter_at(DiskKind::EdgeSemicircle, dd, theta0, area)?)
    };
    let mut lo = dd.full_area(theta0);
    if diff(lo)? >= 0.0 {
        return Err(DiskError::NoTransition("edge semicircle already wins at aθ₀/2".into()));
    }
    let cap = 1e12 * lo;
    let mut hi = 2.0 * lo;
    while diff(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > cap {
            return Err(DiskError::NoTransition(format!("enclosing arc wins at every area for θ₀ = {theta0}")));
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if diff(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub a: f64,
    pub theta0: f64,
    /// Small-area winner yields to the bite.
    pub first: Option<Crossing>,
    /// Bite yields to the annulus; absent when the annulus never wins.
    pub second: Option<Crossing>,
    /// Enclosing arc yields to the edge semicircle; absent for θ₀ ≤ π.
    pub large: Option<f64>,
    pub small_area_winners: Vec<DiskKind>,
}

fn optional(r: Result<Crossing, DiskError>) -> Result<Option<Crossing>, DiskError> {
    match r {
        Ok(c) => Ok(Some(c)),
        Err(DiskError::NoTransition(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn transition_thresholds(dd: DiskDensity, theta0: f64) -> Result<Thresholds, DiskError> {
    check_theta(theta0)?;
    Ok(Thresholds {
        a: dd.a,
        theta0,
        first: optional(first_bite_transition(dd, theta0))?,
        second: optional(bite_annulus_transition(dd, theta0))?,
        large: large_area_threshold(dd, theta0),
        small_area_winners: small_area_winners(dd, theta0),
    })
}

/// Sector angle where bite and annulus tie at area aθ₀/2 − `deficit`, by
/// bisection on the perimeter difference.
pub fn near_full_tie_angle(dd: DiskDensity, deficit: f64) -> Result<f64, DiskError> {
    if !(deficit > 0.0) {
        return Err(DiskError::InvalidInput(format!("deficit must be positive, got {deficit}")));
    }
    // The bite needs θ₀ above its boundary half-angle; the lens area fixes φ.
    let lens = 2.0 * deficit / dd.a;
    let cap = PI - snell_angle(dd);
    let phi = bite::bite_angle_for_lens(dd.a, lens, cap)
        .ok_or_else(|| DiskError::NoTransition(format!("deficit {deficit} exceeds the largest bite")))?;
    let diff = |theta0: f64| bite_minus_annulus(dd, theta0, dd.full_area(theta0) - deficit);
    let mut lo = phi * (1.0 + 1e-9) + 1e-12;
    if diff(lo)? <= 0.0 {
        return Err(DiskError::NoTransition("bite already wins at the smallest admissible angle".into()));
    }
    let mut hi = 2.0 * lo;
    while diff(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(DiskError::NoTransition("annulus wins at every angle".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if diff(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub a: f64,
    /// Small-area arc/edge-semicircle switch, π/a.
    pub f_theta: f64,
    /// Near-full-area annulus/bite switch.
    pub g_theta: Result<f64, String>,
}

/// Both transition curves over a grid of densities, in grid order.
pub fn transition_curves_sweep(a_grid: &[f64], deficit: f64) -> Result<Vec<CurveRow>, DiskError> {
    let dds: Vec<DiskDensity> = a_grid.iter().map(|&a| DiskDensity::new(a)).collect::<Result<_, _>>()?;
    Ok(dds
        .par_iter()
        .map(|&dd| CurveRow {
            a: dd.a,
            f_theta: PI / dd.a,
            g_theta: near_full_tie_angle(dd, deficit).map_err(|e| e.to_string()),
        })
        .collect())
}

/// Lens geometry of a bite candidate, for inspection.
pub fn bite_of(c: DiskCandidate, dd: DiskDensity) -> Option<bite::BiteGeometry> {
    match c {
        DiskCandidate::Bite { phi } => Some(bite_geometry(dd.a, phi)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dd(a: f64) -> DiskDensity {
        DiskDensity::new(a).unwrap()
    }

    #[test]
    fn rejects_density_at_most_one() {
        assert!(DiskDensity::new(1.0).is_err());
        assert!(DiskDensity::new(f64::NAN).is_err());
    }

    #[test]
    fn candidate_examples() {
        let m = disk_candidate_measures(DiskCandidate::ArcInside { radius: 1.0 }, dd(2.0), 1.0).unwrap();
        assert_eq!((m.area, m.perimeter), (1.0, 2.0));
        let m = disk_candidate_measures(DiskCandidate::EdgeSemicircle { radius: 1.0 }, dd(2.0), 1.0).unwrap();
        assert!((m.area - PI / 2.0).abs() < 1e-15 && (m.perimeter - PI).abs() < 1e-15);
        assert!((m.perimeter * m.perimeter / m.area - 2.0 * PI).abs() < 1e-14);
        let r = perpendicular_semicircle_ratio(dd(2.0), PI / 4.0);
        assert!((r - 2.5 * PI).abs() < 1e-14 && r > 2.0 * PI);
    }

    #[test]
    fn parameter_ranges_enforced() {
        let d = dd(2.0);
        assert!(disk_candidate_measures(DiskCandidate::ArcInside { radius: 1.5 }, d, 1.0).is_err());
        assert!(disk_candidate_measures(DiskCandidate::Annulus { inner_radius: 1.0 }, d, 1.0).is_err());
        assert!(disk_candidate_measures(DiskCandidate::Bite { phi: 1.5 }, d, 1.0).is_err());
        assert!(disk_candidate_measures(DiskCandidate::EnclosingSemicircle { radius: 2.0 }, d, 3.0).is_err());
    }

    #[test]
    fn area_inversion_examples() {
        let d = dd(2.0);
        match solve_candidate_for_area(DiskKind::ArcInside, d, 1.0, 0.5).unwrap() {
            DiskCandidate::ArcInside { radius } => assert!((radius - 0.5f64.sqrt()).abs() < 1e-15),
            c => panic!("{c:?}"),
        }
        match solve_candidate_for_area(DiskKind::Annulus, d, 1.0, 1.0 - 1e-12).unwrap() {
            DiskCandidate::Annulus { inner_radius } => assert!(inner_radius < 1e-5),
            c => panic!("{c:?}"),
        }
        match solve_candidate_for_area(DiskKind::EdgeSemicircle, d, 1.0, PI / 2.0).unwrap() {
            DiskCandidate::EdgeSemicircle { radius } => assert!((radius - 1.0).abs() < 1e-15),
            c => panic!("{c:?}"),
        }
        assert!(matches!(
            solve_candidate_for_area(DiskKind::ArcInside, d, 1.0, 2.0),
            Err(DiskError::AreaUnattainable { .. })
        ));
    }

    #[test]
    fn enclosing_semicircle_matches_arc_in_half_plane() {
        let d = dd(2.0);
        let c = classify_disk(d, PI, 5.0).unwrap();
        let arc = c.perimeter_of(DiskKind::ArcEnclosing).unwrap();
        let semi = c.perimeter_of(DiskKind::EnclosingSemicircle).unwrap();
        assert!((arc - semi).abs() < 1e-14 * arc);
        assert_eq!(c.winners.len(), 2);
    }

    #[test]
    fn classify_examples() {
        let d = dd(2.0);
        for area in [0.01, 1.0, 100.0] {
            assert_eq!(classify_disk(d, 7.0, area).unwrap().winners, vec![DiskKind::EdgeSemicircle]);
        }
        let t = 1.5 * PI;
        let full = d.full_area(t);
        assert_eq!(classify_disk(d, t, full * (1.0 + 1e-3)).unwrap().winners, vec![DiskKind::ArcEnclosing]);
        assert_eq!(classify_disk(d, t, 8.0).unwrap().winners, vec![DiskKind::EdgeSemicircle]);
        let c = classify_disk(d, PI / 2.0, 1e-6).unwrap();
        assert_eq!(c.winners.len(), 2);
        assert!(c.winners.contains(&DiskKind::ArcInside) && c.winners.contains(&DiskKind::EdgeSemicircle));
    }

    #[test]
    fn large_threshold_two_routes() {
        let d = dd(2.0);
        let closed = large_area_threshold(d, 1.5 * PI).unwrap();
        assert!((closed - 9.0 * PI / 4.0).abs() < 1e-12);
        let bis = large_area_threshold_by_bisection(d, 1.5 * PI).unwrap();
        assert!((bis - closed).abs() < 1e-9 * closed);
        assert!(large_area_threshold(d, PI).is_none());
        assert!(large_area_threshold_by_bisection(d, PI).is_err());
    }

    #[test]
    fn small_area_switch() {
        assert_eq!(small_area_winners(dd(2.0), 1.0), vec![DiskKind::ArcInside]);
        assert_eq!(small_area_winners(dd(2.0), 2.0), vec![DiskKind::EdgeSemicircle]);
        assert_eq!(small_area_winners(dd(4.0), PI / 4.0).len(), 2);
    }

    #[test]
    fn bite_realizes_snell_angle_and_area() {
        let d = dd(2.0);
        let theta0 = PI;
        let (lo, hi) = bite_area_range(d, theta0);
        for f in [0.01, 0.3, 0.7, 0.99] {
            let area = lo + f * (hi - lo);
            let c = solve_candidate_for_area(DiskKind::Bite, d, theta0, area).unwrap();
            let m = disk_candidate_measures(c, d, theta0).unwrap();
            assert!((m.area - area).abs() < 1e-10 * area);
            let g = bite_of(c, d).unwrap();
            assert!((bite::contact_angle(&g) - snell_angle(d)).abs() < 1e-8);
        }
    }

    /// At fixed deficit δ the lens area 2δ/a fixes φ, and the tie condition
    /// √(2aθ₀δ) = aργ − φ then gives θ₀ in closed form.
    fn g_curve_oracle(a: f64, deficit: f64) -> f64 {
        let phi = bite::bite_angle_for_lens(a, 2.0 * deficit / a, PI - snell_contact_angle(a)).unwrap();
        let g = bite_geometry(a, phi);
        let gain = a * g.half_arc_length - phi;
        gain * gain / (2.0 * a * deficit)
    }

    #[test]
    fn g_curve_matches_closed_form() {
        let rows = transition_curves_sweep(&[1.5, 2.0, 4.0], 1e-3).unwrap();
        for row in rows {
            let g = row.g_theta.as_ref().unwrap();
            let oracle = g_curve_oracle(row.a, 1e-3);
            assert!((g - oracle).abs() < 1e-9 * oracle, "a={}: {g} vs {oracle}", row.a);
            assert!((row.f_theta - PI / row.a).abs() < 1e-15);
        }
    }

    #[test]
    fn g_curve_frozen_at_two() {
        // (2α − sin α)²/(4(α − sin α cos α)) with α = π/3 is the vanishing
        // deficit limit; the 1e-3 value sits just above it.
        let alpha = PI / 3.0;
        let limit = (2.0 * alpha - alpha.sin()).powi(2) / (4.0 * (alpha - alpha.sin() * alpha.cos()));
        let g = near_full_tie_angle(dd(2.0), 1e-3).unwrap();
        let g_small = near_full_tie_angle(dd(2.0), 1e-8).unwrap();
        assert!((g_small - limit).abs() < 1e-3, "{g_small} vs {limit}");
        assert!((g - limit).abs() < 0.05);
    }

    #[test]
    fn thresholds_at_quarter_turn_with_dense_interior() {
        let t = transition_thresholds(dd(4.0), PI / 4.0).unwrap();
        let first = t.first.unwrap();
        let second = t.second.unwrap();
        assert!(first.area < second.area && second.area < dd(4.0).full_area(PI / 4.0));
        assert_eq!(t.small_area_winners.len(), 2);
        let t = transition_thresholds(dd(2.0), PI).unwrap();
        assert!(t.second.is_none() && t.large.is_none());
    }

    #[test]
    fn known_branches_on_grid() {
        for a in [1.5, 2.0, 4.0] {
            let d = dd(a);
            for theta0 in [PI / 4.0, PI / 2.0, PI, 1.5 * PI, 2.0 * PI, 7.0] {
                let full = d.full_area(theta0);
                let mut samples = vec![(1e-6 * full, true), (full, false), (1.5 * full, false), (10.0 * full, false)];
                if let Some(l) = large_area_threshold(d, theta0) {
                    samples.extend([(0.9 * l, false), (l, false), (1.1 * l, false)]);
                }
                for (area, small) in samples {
                    let c = classify_disk(d, theta0, area).unwrap();
                    if let Some(mut want) = known_winners(d, theta0, area, small) {
                        let mut got = c.winners.clone();
                        want.sort();
                        got.sort();
                        assert_eq!(got, want, "a={a} θ₀={theta0} A={area}");
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bite_annulus_single_switch(a in 1.1f64..6.0, theta0 in 0.2f64..3.1) {
            prop_assert!(bite_annulus_sign_changes(dd(a), theta0, 200).unwrap() <= 1);
        }

        #[test]
        fn solved_areas_round_trip(a in 1.1f64..6.0, theta0 in 0.2f64..7.0, frac in 0.01f64..0.99) {
            let d = dd(a);
            let area = frac * d.full_area(theta0);
            for kind in [DiskKind::ArcInside, DiskKind::Annulus, DiskKind::EdgeSemicircle, DiskKind::Bite] {
                if let Ok(c) = solve_candidate_for_area(kind, d, theta0, area) {
                    let m = disk_candidate_measures(c, d, theta0).unwrap();
                    prop_assert!((m.area - area).abs() < 1e-10 * area);
                }
            }
        }
    }
}
