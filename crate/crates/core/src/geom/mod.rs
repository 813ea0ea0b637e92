//! Planar kernel for curves built from radius-`r` arcs and line segments.
//!
//! Arcs are stored as `(center, radius, start_angle, sweep)`; endpoints are
//! always derived, never stored, so long arcs do not accumulate drift.

mod component;
mod curve;
mod detect;
mod random;
mod sampled;

pub use component::{ArcComponent, Component, SegmentComponent};
pub use curve::{max_pair_distance, Curve, CsCurve};
pub use detect::{find_cross_section, find_parallel_tangents, self_intersections, Band};
pub use random::random_curve;
pub use sampled::SampledCurve;

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Joint continuity tolerance, used for both lengths and radians.
pub const EPS_JOIN: f64 = 1e-9;
/// Tolerance for antiparallel tangent detection.
pub const EPS_ANGLE: f64 = 1e-6;
/// Components shorter than this are dropped at construction.
pub const EPS_DEGENERATE: f64 = 1e-12;

/// Curvature bound `kappa` and the matching minimum radius `r = 1 / kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaParams {
    kappa: f64,
    r: f64,
}

impl KappaParams {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::Domain(format!("kappa must be positive and finite, got {kappa}")));
        }
        Ok(Self { kappa, r: 1.0 / kappa })
    }

    pub fn from_radius(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive and finite, got {r}")));
        }
        Ok(Self { kappa: 1.0 / r, r })
    }

    /// Unit bound, `kappa = r = 1`.
    pub fn unit() -> Self {
        Self { kappa: 1.0, r: 1.0 }
    }

    #[inline]
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `angle` radians.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Self {
        Self { x: -self.y, y: self.x }
    }

    #[inline]
    pub fn rotate(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: c * self.x - s * self.y, y: s * self.x + c * self.y }
    }

    #[inline]
    pub fn lerp(self, o: Point2, t: f64) -> Self {
        self + (o - self) * t
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Point2 {
    type Output = Point2;
    fn div(self, k: f64) -> Point2 {
        Point2::new(self.x / k, self.y / k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut b = a.rem_euclid(TAU);
    if b > PI {
        b -= TAU;
    }
    b
}

/// Wraps an angle into `[0, 2pi)`.
pub fn wrap_positive(a: f64) -> f64 {
    let b = a.rem_euclid(TAU);
    if b >= TAU {
        0.0
    } else {
        b
    }
}

/// Absolute difference between two directions, in `[0, pi]`.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

/// A position together with a heading in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub position: Point2,
    pub heading: f64,
}

impl Config {
    pub fn new(position: Point2, heading: f64) -> Self {
        Self { position, heading: normalize_angle(heading) }
    }

    #[inline]
    pub fn direction(&self) -> Point2 {
        Point2::from_angle(self.heading)
    }

    /// Same position, opposite heading.
    pub fn reversed(&self) -> Self {
        Self::new(self.position, self.heading + PI)
    }

    /// Position and heading both agree within `tol`.
    pub fn approx_eq(&self, o: &Config, tol: f64) -> bool {
        self.position.dist(o.position) <= tol && angle_gap(self.heading, o.heading) <= tol
    }
}
