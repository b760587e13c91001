//! Bite geometry in the doubled cone.
//!
//! The cone is the sector reflected across its θ = 0 edge. A bite removes from
//! the unit disk the lens between the boundary arc of half-angle φ about θ = 0
//! and a circular arc through the same endpoints (cos φ, ±sin φ) that meets the
//! boundary at interior angle α = arccos(1/a). Sector measures are half of the
//! cone measures.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// x − sin x without cancellation for small x.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.2 {
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = 0.0f64;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs().max(f64::MIN_POSITIVE) {
            sum += term;
            term *= -x2 / ((k + 1.0) * (k + 2.0));
            k += 2.0;
        }
        sum
    } else {
        x - x.sin()
    }
}

/// Area of the circular segment of a unit circle cut by a chord subtending
/// half-angle t: t − sin t cos t.
fn unit_segment(t: f64) -> f64 {
    0.5 * x_minus_sin(2.0 * t)
}

/// Realized bite for a given boundary half-angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiteGeometry {
    pub phi: f64,
    /// Half-angle subtended by the internal arc at its own centre.
    pub arc_half_angle: f64,
    /// Radius of the internal arc; infinite when the arc is the straight chord.
    pub arc_radius: f64,
    /// x coordinate of the internal arc's centre (on the symmetry axis).
    pub centre_x: f64,
    /// True when the internal arc bulges toward the origin past the chord.
    pub toward_origin: bool,
    /// Lens area in the cone, Euclidean.
    pub lens_area: f64,
    /// Half the internal arc length (the part inside the sector).
    pub half_arc_length: f64,
}

pub fn snell_contact_angle(a: f64) -> f64 {
    (1.0 / a).acos()
}

/// Largest admissible boundary half-angle: the bite must stay inside the
/// sector and the internal circle must not wrap past the origin side.
pub fn max_bite_angle(a: f64, theta0: f64) -> f64 {
    theta0.min(PI - snell_contact_angle(a))
}

pub fn bite_geometry(a: f64, phi: f64) -> BiteGeometry {
    let alpha = snell_contact_angle(a);
    let gamma = (phi - alpha).abs();
    let toward_origin = phi < alpha;
    let sign = if toward_origin { 1.0 } else { -1.0 };
    let (sin_phi, cos_phi) = phi.sin_cos();
    let (arc_radius, centre_x, seg, half_arc_length) = if gamma < 1e-7 {
        // γ/sin γ ≈ 1 + γ²/6 and (γ − sin γ cos γ)/sin²γ ≈ 2γ/3.
        let centre = if gamma == 0.0 { f64::INFINITY } else { cos_phi + sign * sin_phi / gamma.tan() };
        (sin_phi / gamma.sin(), centre, sin_phi * sin_phi * (2.0 / 3.0) * gamma, sin_phi * (1.0 + gamma * gamma / 6.0))
    } else {
        let rho = sin_phi / gamma.sin();
        (rho, cos_phi + sign * rho * gamma.cos(), rho * rho * unit_segment(gamma), rho * gamma)
    };
    BiteGeometry {
        phi,
        arc_half_angle: gamma,
        arc_radius,
        centre_x,
        toward_origin,
        lens_area: unit_segment(phi) + sign * seg,
        half_arc_length,
    }
}

/// Angle between the boundary and the internal arc at the upper contact
/// point, measured inside the lens and rebuilt from the circle centre.
pub fn contact_angle(g: &BiteGeometry) -> f64 {
    let (s, c) = g.phi.sin_cos();
    // Along the boundary toward the symmetry axis.
    let along_boundary = (s, -c);
    let along_arc = if g.centre_x.is_finite() {
        // Walk the internal circle from the contact point toward the arc's
        // midpoint on the axis: counterclockwise when that midpoint is the
        // circle's leftmost point, clockwise otherwise.
        let t = s.atan2(c - g.centre_x);
        let (st, ct) = t.sin_cos();
        if g.toward_origin {
            (-st, ct)
        } else {
            (st, -ct)
        }
    } else {
        (0.0, -1.0)
    };
    let dot = along_boundary.0 * along_arc.0 + along_boundary.1 * along_arc.1;
    dot.clamp(-1.0, 1.0).acos()
}

/// Weighted (area, perimeter) of the disk sector with the bite removed.
pub fn bite_measures(a: f64, theta0: f64, phi: f64) -> (f64, f64) {
    let g = bite_geometry(a, phi);
    (a * 0.5 * (theta0 - g.lens_area), (theta0 - phi) + a * g.half_arc_length)
}

/// Boundary half-angle whose lens has the given cone area. The lens area is
/// increasing in φ.
pub fn bite_angle_for_lens(a: f64, lens: f64, phi_max: f64) -> Option<f64> {
    if !(lens > 0.0) || !(lens < bite_geometry(a, phi_max).lens_area) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, phi_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if bite_geometry(a, mid).lens_area < lens {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
