//! Curvature-bound validation and executable checkers for the length and
//! containment bounds behind the classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{angle_gap, normalize_angle, Component, Curve, CsCurve, Point2, SampledCurve, EPS_JOIN};

/// Relative slack on the curvature bound.
pub const EPS_REL: f64 = 1e-6;
/// Absolute slack on length comparisons.
pub const LENGTH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    Curvature,
    JointPosition,
    JointTangent,
    /// The following kinds are only reported for homotopy traces.
    InvalidFrame,
    FrameOrder,
    EndpointMotion,
    FrameJump,
    ClassChange,
    LengthIncrease,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Curvature => "curvature",
            ViolationKind::JointPosition => "joint position",
            ViolationKind::JointTangent => "joint tangent",
            ViolationKind::InvalidFrame => "invalid frame",
            ViolationKind::FrameOrder => "frame order",
            ViolationKind::EndpointMotion => "endpoint motion",
            ViolationKind::FrameJump => "frame jump",
            ViolationKind::ClassChange => "class change",
            ViolationKind::LengthIncrease => "length increase",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Arc length along the curve, or the frame parameter `p` for traces.
    pub location: f64,
    pub kind: ViolationKind,
    pub magnitude: f64,
    /// Offending frame index, for traces.
    pub frame: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub max_curvature: f64,
    pub worst_joint_gap: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub(crate) fn empty() -> Self {
        Self { valid: true, max_curvature: 0.0, worst_joint_gap: 0.0, violations: Vec::new() }
    }

    pub(crate) fn push(&mut self, location: f64, kind: ViolationKind, magnitude: f64, frame: Option<usize>) {
        self.violations.push(Violation { location, kind, magnitude, frame });
        self.valid = false;
    }

    /// Folds a per-frame report into a trace report.
    pub(crate) fn absorb(&mut self, frame: usize, p: f64, other: &ValidationReport) {
        self.max_curvature = self.max_curvature.max(other.max_curvature);
        self.worst_joint_gap = self.worst_joint_gap.max(other.worst_joint_gap);
        if !other.valid {
            let worst = other.violations.iter().map(|v| v.magnitude).fold(0.0, f64::max);
            self.push(p, ViolationKind::InvalidFrame, worst, Some(frame));
        }
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Joints must be C1 within `EPS_JOIN` and every arc radius at least
/// `r (1 - EPS_REL)`.
pub fn validate_cs(curve: &CsCurve) -> ValidationReport {
    let mut rep = ValidationReport::empty();
    let r = curve.kappa().radius();
    let offsets = curve.offsets();
    let comps = curve.components();
    for (i, c) in comps.iter().enumerate() {
        if let Component::Arc(a) = c {
            let k = 1.0 / a.radius;
            rep.max_curvature = rep.max_curvature.max(k);
            if a.radius < r * (1.0 - EPS_REL) {
                rep.push(offsets[i], ViolationKind::Curvature, k, None);
            }
        }
    }
    for i in 1..comps.len() {
        let end = comps[i - 1].end_config();
        let start = comps[i].start_config();
        let dp = end.position.dist(start.position);
        let dh = angle_gap(end.heading, start.heading);
        rep.worst_joint_gap = rep.worst_joint_gap.max(dp).max(dh);
        if dp > EPS_JOIN {
            rep.push(offsets[i], ViolationKind::JointPosition, dp, None);
        }
        if dh > EPS_JOIN {
            rep.push(offsets[i], ViolationKind::JointTangent, dh, None);
        }
    }
    rep
}

/// Circumscribed-circle curvature of every interior triple must stay within
/// `kappa (1 + EPS_REL)`.
pub fn validate_sampled(curve: &SampledCurve) -> ValidationReport {
    let mut rep = ValidationReport::empty();
    let bound = curve.kappa().kappa() * (1.0 + EPS_REL);
    let t = curve.cumulative_lengths();
    for (j, k) in curve.curvatures().into_iter().enumerate() {
        let k = k.abs();
        rep.max_curvature = rep.max_curvature.max(k);
        if k > bound {
            rep.push(t[j + 1], ViolationKind::Curvature, k, None);
        }
    }
    rep
}

pub fn validate(curve: &Curve) -> ValidationReport {
    match curve {
        Curve::Cs(c) => validate_cs(c),
        Curve::Sampled(s) => validate_sampled(s),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Domain(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DichotomyResult {
    OnBoundary,
    InteriorDisjoint,
    Violation,
}

fn check_spacing(curve: &Curve) -> f64 {
    curve.kappa().radius() * 1e-3
}

/// Smallest distance from `p` to the curve.
fn min_distance(curve: &Curve, p: Point2) -> f64 {
    match curve {
        Curve::Cs(c) => c.distance_to(p),
        Curve::Sampled(s) => s
            .points()
            .windows(2)
            .map(|w| Component::Segment(crate::geom::SegmentComponent::new(w[0], w[1])).distance_to(p))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Polar angle swept about the origin, unwrapped along the curve, as the
/// largest excursion from the starting angle.
fn max_polar_excursion(points: &[Point2]) -> f64 {
    let mut acc = 0.0f64;
    let mut best = 0.0f64;
    for w in points.windows(2) {
        acc += normalize_angle(w[1].angle() - w[0].angle());
        best = best.max(acc.abs());
    }
    best
}

/// Length lower bound against winding about the origin outside the radius-r
/// disk: a curve starting on the circle of radius `r`, never entering it,
/// that winds through polar angle `eta` is at least `r eta` long. For curves
/// winding several times, `eta` counts accumulated polar angle.
pub fn check_radial_bound(curve: &Curve, eta: f64) -> Result<bool> {
    let r = curve.kappa().radius();
    if eta < 0.0 {
        return Err(Error::Precondition(format!("eta must be non-negative, got {eta}")));
    }
    if eta == 0.0 {
        return Ok(true);
    }
    if (curve.start_point().norm() - r).abs() > 1e-9 * r.max(1.0) {
        return Err(Error::Precondition("curve must start on the radius-r circle about the origin".into()));
    }
    if min_distance(curve, Point2::ORIGIN) < r - 1e-9 * r.max(1.0) {
        return Err(Error::Precondition("curve enters the radius-r disk about the origin".into()));
    }
    let pts = curve.dense_points(check_spacing(curve));
    if max_polar_excursion(&pts) < eta - 1e-9 {
        return Err(Error::Precondition(format!("curve does not wind through polar angle {eta}")));
    }
    Ok(curve.total_length() >= r * eta - LENGTH_TOL)
}

/// A C1 curve from the origin to a point at height `z >= 0` is at least `z`
/// long.
pub fn check_vertical_bound(curve: &Curve) -> Result<bool> {
    if curve.start_point().norm() > EPS_JOIN {
        return Err(Error::Precondition("curve must start at the origin".into()));
    }
    let z = curve.end_point().y;
    if z < 0.0 {
        return Err(Error::Precondition(format!("curve must end at non-negative height, got {z}")));
    }
    Ok(curve.total_length() >= z - LENGTH_TOL)
}

/// Either the curve runs along the disk boundary throughout, or no interior
/// point of it reaches the boundary.
pub fn check_disk_dichotomy(curve: &Curve, disk: &Disk) -> Result<DichotomyResult> {
    let tol = 1e-9 * disk.radius.max(1.0);
    let pts = curve.dense_points(check_spacing(curve));
    let far = pts.iter().map(|p| p.dist(disk.center)).fold(0.0, f64::max);
    let inner = pts.iter().map(|p| p.dist(disk.center)).fold(f64::INFINITY, f64::min);
    let far = match curve {
        Curve::Cs(c) => far.max(cs_max_distance(c, disk.center).0),
        Curve::Sampled(_) => far,
    };
    if far > disk.radius + tol {
        return Err(Error::Precondition(format!("curve leaves the disk by {}", far - disk.radius)));
    }
    let on_boundary = match curve {
        Curve::Cs(c) => c.components().iter().all(|comp| match comp {
            Component::Arc(a) => a.center.dist(disk.center) <= tol && (a.radius - disk.radius).abs() <= tol,
            Component::Segment(_) => false,
        }),
        Curve::Sampled(_) => inner >= disk.radius - tol,
    };
    if on_boundary {
        return Ok(DichotomyResult::OnBoundary);
    }
    let interior_far = match curve {
        Curve::Cs(c) => cs_max_distance(c, disk.center).1,
        Curve::Sampled(s) => {
            let p = s.points();
            p[1..p.len() - 1].iter().map(|q| q.dist(disk.center)).fold(0.0, f64::max)
        }
    };
    if interior_far >= disk.radius - tol {
        Ok(DichotomyResult::Violation)
    } else {
        Ok(DichotomyResult::InteriorDisjoint)
    }
}

/// Largest distance from `c` over the whole curve, and over interior points
/// that are local maxima (joints and arc apexes, endpoints excluded).
fn cs_max_distance(curve: &CsCurve, c: Point2) -> (f64, f64) {
    let comps = curve.components();
    let mut all = curve.start_point().dist(c).max(curve.end_point().dist(c));
    let mut interior = 0.0f64;
    for (i, comp) in comps.iter().enumerate() {
        if i > 0 {
            interior = interior.max(comp.start_point().dist(c));
        }
        if let Component::Arc(a) = comp {
            let v = a.center - c;
            let apex_dir = if v.norm() > 0.0 { v.angle() } else { a.start_angle };
            let hits = a.locals_of_angle(apex_dir, 0.0);
            let len = a.length();
            for u in hits {
                let d = v.norm() + a.radius;
                all = all.max(d);
                if (u > 0.0 || i > 0) && (u < len || i + 1 < comps.len()) {
                    interior = interior.max(d);
                }
            }
            if v.norm() <= 1e-15 {
                // concentric: every point is at the same distance
                interior = interior.max(a.radius);
            }
        }
    }
    (all, interior)
}

/// In the band `-r < X < r, Y >= 0` a curve whose endpoints lie on the
/// x-axis and on a radius-r circle centred on the negative y-axis never rises
/// above that circle.
pub fn check_band_escape(curve: &Curve, circle: &Disk) -> Result<bool> {
    let r = curve.kappa().radius();
    let tol = 1e-9 * r.max(1.0);
    if (circle.radius - r).abs() > tol {
        return Err(Error::Precondition(format!("circle radius must be r = {r}")));
    }
    if circle.center.x.abs() > tol || circle.center.y > tol {
        return Err(Error::Precondition("circle centre must lie on the negative y-axis".into()));
    }
    for p in [curve.start_point(), curve.end_point()] {
        if p.y.abs() > tol {
            return Err(Error::Precondition("endpoints must lie on the x-axis".into()));
        }
        if (p.dist(circle.center) - r).abs() > tol {
            return Err(Error::Precondition("endpoints must lie on the circle".into()));
        }
    }
    let pts = curve.dense_points(check_spacing(curve));
    if pts.iter().any(|p| p.x.abs() >= r || p.y < -tol) {
        return Err(Error::Precondition("curve leaves the band".into()));
    }
    let above = pts.iter().any(|p| {
        let cap = circle.center.y + (r * r - p.x * p.x).max(0.0).sqrt();
        p.y > cap + tol
    });
    Ok(!above)
}
