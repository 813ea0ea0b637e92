use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use super::{wrap_positive, Config, Point2};

/// Circular arc. Positive sweep is counterclockwise (a left turn).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcComponent {
    pub center: Point2,
    pub radius: f64,
    pub start_angle: f64,
    pub sweep: f64,
}

impl ArcComponent {
    pub fn new(center: Point2, radius: f64, start_angle: f64, sweep: f64) -> Self {
        Self { center, radius, start_angle, sweep }
    }

    /// Arc leaving `start` tangentially, turning left for positive `sweep`.
    pub fn from_config(start: Config, radius: f64, sweep: f64) -> Self {
        let side = if sweep >= 0.0 { 1.0 } else { -1.0 };
        let center = start.position + start.direction().perp() * (side * radius);
        let start_angle = (start.position - center).angle();
        Self { center, radius, start_angle, sweep }
    }

    #[inline]
    pub fn orientation(&self) -> f64 {
        if self.sweep >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.radius * self.sweep.abs()
    }

    #[inline]
    pub fn end_angle(&self) -> f64 {
        self.start_angle + self.sweep
    }

    /// Polar angle of the point at local arc length `s`.
    #[inline]
    pub fn angle_at(&self, s: f64) -> f64 {
        self.start_angle + self.orientation() * s / self.radius
    }

    #[inline]
    pub fn point_at_angle(&self, angle: f64) -> Point2 {
        self.center + Point2::from_angle(angle) * self.radius
    }

    /// Angle `a` expressed as local arc length, if the arc passes through it.
    /// Returns every hit for arcs sweeping more than a full turn.
    pub fn locals_of_angle(&self, a: f64, tol: f64) -> Vec<f64> {
        let base = wrap_positive(self.orientation() * (a - self.start_angle));
        let span = self.sweep.abs();
        let mut out = Vec::new();
        let mut u = base;
        // wrap_positive can land just below TAU for angles that sit at the start.
        if TAU - u <= tol {
            u -= TAU;
        }
        while u <= span + tol {
            if u >= -tol {
                out.push((u.clamp(0.0, span)) * self.radius);
            }
            u += TAU;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentComponent {
    pub start: Point2,
    pub end: Point2,
}

impl SegmentComponent {
    pub fn new(start: Point2, end: Point2) -> Self {
        Self { start, end }
    }

    pub fn from_config(start: Config, length: f64) -> Self {
        Self { start: start.position, end: start.position + start.direction() * length }
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.start.dist(self.end)
    }

    #[inline]
    pub fn heading(&self) -> f64 {
        (self.end - self.start).angle()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Component {
    Arc(ArcComponent),
    Segment(SegmentComponent),
}

impl Component {
    pub fn length(&self) -> f64 {
        match self {
            Component::Arc(a) => a.length(),
            Component::Segment(s) => s.length(),
        }
    }

    /// Signed curvature: `1/radius` (left), `-1/radius` (right), 0 for segments.
    pub fn signed_curvature(&self) -> f64 {
        match self {
            Component::Arc(a) => a.orientation() / a.radius,
            Component::Segment(_) => 0.0,
        }
    }

    pub fn point_at(&self, s: f64) -> Point2 {
        match self {
            Component::Arc(a) => a.point_at_angle(a.angle_at(s)),
            Component::Segment(seg) => {
                let len = seg.length();
                if len == 0.0 {
                    seg.start
                } else {
                    seg.start.lerp(seg.end, s / len)
                }
            }
        }
    }

    /// Unwrapped heading at local arc length `s`: continuous across the
    /// component, starting from the heading of its first point.
    pub fn heading_at(&self, s: f64) -> f64 {
        match self {
            Component::Arc(a) => a.angle_at(s) + a.orientation() * FRAC_PI_2,
            Component::Segment(seg) => seg.heading(),
        }
    }

    pub fn start_point(&self) -> Point2 {
        match self {
            Component::Arc(a) => a.point_at_angle(a.start_angle),
            Component::Segment(s) => s.start,
        }
    }

    pub fn end_point(&self) -> Point2 {
        match self {
            Component::Arc(a) => a.point_at_angle(a.end_angle()),
            Component::Segment(s) => s.end,
        }
    }

    pub fn start_config(&self) -> Config {
        Config::new(self.start_point(), self.heading_at(0.0))
    }

    pub fn end_config(&self) -> Config {
        Config::new(self.end_point(), self.heading_at(self.length()))
    }

    /// Total signed turning across the component.
    pub fn turning(&self) -> f64 {
        match self {
            Component::Arc(a) => a.sweep,
            Component::Segment(_) => 0.0,
        }
    }

    pub fn reversed(&self) -> Component {
        match self {
            Component::Arc(a) => Component::Arc(ArcComponent {
                center: a.center,
                radius: a.radius,
                start_angle: a.end_angle(),
                sweep: -a.sweep,
            }),
            Component::Segment(s) => Component::Segment(SegmentComponent { start: s.end, end: s.start }),
        }
    }

    /// Piece between local arc lengths `s0 <= s1`.
    pub fn sub(&self, s0: f64, s1: f64) -> Component {
        match self {
            Component::Arc(a) => {
                let start_angle = a.angle_at(s0);
                Component::Arc(ArcComponent {
                    center: a.center,
                    radius: a.radius,
                    start_angle,
                    sweep: a.orientation() * (s1 - s0) / a.radius,
                })
            }
            Component::Segment(seg) => {
                // keep the exact ends: a short segment's heading depends on them
                let len = seg.length();
                let start = if s0 <= super::EPS_DEGENERATE { seg.start } else { self.point_at(s0) };
                let end = if s1 >= len - super::EPS_DEGENERATE { seg.end } else { self.point_at(s1) };
                Component::Segment(SegmentComponent { start, end })
            }
        }
    }

    /// Rigid translation.
    pub fn translated(&self, v: Point2) -> Component {
        match self {
            Component::Arc(a) => Component::Arc(ArcComponent { center: a.center + v, ..*a }),
            Component::Segment(s) => Component::Segment(SegmentComponent { start: s.start + v, end: s.end + v }),
        }
    }

    /// Rigid rotation by `angle` about `pivot`.
    pub fn rotated_about(&self, pivot: Point2, angle: f64) -> Component {
        let rot = |p: Point2| pivot + (p - pivot).rotate(angle);
        match self {
            Component::Arc(a) => Component::Arc(ArcComponent {
                center: rot(a.center),
                radius: a.radius,
                start_angle: a.start_angle + angle,
                sweep: a.sweep,
            }),
            Component::Segment(s) => Component::Segment(SegmentComponent { start: rot(s.start), end: rot(s.end) }),
        }
    }

    /// Mirror image across the line through `origin` with direction angle `axis`.
    pub fn reflected(&self, origin: Point2, axis: f64) -> Component {
        let refl = |p: Point2| origin + (p - origin).rotate(-axis).conj().rotate(axis);
        match self {
            Component::Arc(a) => Component::Arc(ArcComponent {
                center: refl(a.center),
                radius: a.radius,
                start_angle: 2.0 * axis - a.start_angle,
                sweep: -a.sweep,
            }),
            Component::Segment(s) => Component::Segment(SegmentComponent { start: refl(s.start), end: refl(s.end) }),
        }
    }

    /// Distance from `p` to the closest point of the component.
    pub fn distance_to(&self, p: Point2) -> f64 {
        match self {
            Component::Segment(s) => {
                let d = s.end - s.start;
                let len2 = d.dot(d);
                if len2 == 0.0 {
                    return p.dist(s.start);
                }
                let t = ((p - s.start).dot(d) / len2).clamp(0.0, 1.0);
                p.dist(s.start + d * t)
            }
            Component::Arc(a) => {
                let v = p - a.center;
                if a.sweep.abs() >= TAU || v.norm() == 0.0 {
                    if a.sweep.abs() >= TAU {
                        return (v.norm() - a.radius).abs();
                    }
                    return a.radius;
                }
                if !a.locals_of_angle(v.angle(), 0.0).is_empty() {
                    (v.norm() - a.radius).abs()
                } else {
                    p.dist(self.start_point()).min(p.dist(self.end_point()))
                }
            }
        }
    }
}

trait Conj {
    fn conj(self) -> Self;
}

impl Conj for Point2 {
    fn conj(self) -> Self {
        Point2::new(self.x, -self.y)
    }
}
