//! Lens geometry between two endpoints, region membership and the homotopy
//! class label of a curve.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dubins::csc_chain;
use crate::error::{Error, Result};
use crate::geom::{random_curve, Component, Config, CsCurve, Curve, KappaParams, Point2, EPS_JOIN};
use crate::validation::validate;

/// Boundary tolerance for region membership.
pub const EPS_REGION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensGeometry {
    pub x: Point2,
    pub y: Point2,
    pub kappa: KappaParams,
    pub d: f64,
    /// Centre on the left of the ray from `x` to `y`.
    pub c1: Point2,
    pub c2: Point2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    InteriorLens,
    LensBoundary,
    InteriorE,
    OuterBoundary,
    OutsideU,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Closed,
    InLens,
    NotInLens,
    Unrestricted,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn build_lens(x: Point2, y: Point2, kappa: KappaParams) -> Result<LensGeometry> {
    let r = kappa.radius();
    let d = x.dist(y);
    if d == 0.0 {
        return Err(Error::Domain("x = y: closed curves form a single class and have no lens".into()));
    }
    if d >= 2.0 * r {
        return Err(Error::Domain(format!("d = {d} >= 2r = {}: no lens, a single class", 2.0 * r)));
    }
    let mid = x.lerp(y, 0.5);
    let n = ((y - x) / d).perp();
    let h = (r * r - 0.25 * d * d).sqrt();
    Ok(LensGeometry { x, y, kappa, d, c1: mid + n * h, c2: mid - n * h })
}

impl LensGeometry {
    pub fn radius(&self) -> f64 {
        self.kappa.radius()
    }

    pub fn midpoint(&self) -> Point2 {
        self.x.lerp(self.y, 0.5)
    }

    /// Unit normal of `xy` pointing towards `c1`.
    pub fn normal(&self) -> Point2 {
        ((self.y - self.x) / self.d).perp()
    }

    /// Half the angle between the two boundary arcs at `x`, measured from
    /// the chord.
    pub fn corner_angle(&self) -> f64 {
        (0.5 * self.d / self.radius()).asin()
    }

    /// A point of the lobe of E inside `D1`, on the bisector.
    pub fn lobe_point(&self, first: bool) -> Point2 {
        let s = if first { 1.0 } else { -1.0 };
        self.midpoint() + self.normal() * (s * self.radius())
    }

    /// Longer arc of `C1` (`first`) or `C2` from `x` to `y`.
    pub fn longer_arc(&self, first: bool) -> CsCurve {
        let r = self.radius();
        let (c, side) = if first { (self.c1, -1.0) } else { (self.c2, 1.0) };
        // C1 is left of xy: the long way round is clockwise from x
        let start = (self.x - c).angle();
        let short = 2.0 * self.corner_angle();
        let sweep = side * (2.0 * PI - short);
        CsCurve::new(self.kappa, vec![Component::Arc(crate::geom::ArcComponent::new(c, r, start, sweep))])
            .expect("arc is non-degenerate")
    }

    /// Shorter arc of `C1` (`first`) or `C2` from `x` to `y`.
    pub fn shorter_arc(&self, first: bool) -> CsCurve {
        let r = self.radius();
        let (c, side) = if first { (self.c1, 1.0) } else { (self.c2, -1.0) };
        let start = (self.x - c).angle();
        let sweep = side * 2.0 * self.corner_angle();
        CsCurve::new(self.kappa, vec![Component::Arc(crate::geom::ArcComponent::new(c, r, start, sweep))])
            .expect("arc is non-degenerate")
    }
}

pub fn classify_point(lens: &LensGeometry, p: Point2) -> RegionTag {
    let r = lens.radius();
    let e1 = p.dist(lens.c1) - r;
    let e2 = p.dist(lens.c2) - r;
    let inner = e1.max(e2);
    let outer = e1.min(e2);
    if inner < -EPS_REGION {
        RegionTag::InteriorLens
    } else if inner <= EPS_REGION {
        RegionTag::LensBoundary
    } else if outer < -EPS_REGION {
        RegionTag::InteriorE
    } else if outer <= EPS_REGION {
        RegionTag::OuterBoundary
    } else {
        RegionTag::OutsideU
    }
}

/// Largest distance from `c` to any point of the curve.
pub fn max_distance_from(curve: &Curve, c: Point2) -> f64 {
    match curve {
        Curve::Cs(cs) => cs
            .components()
            .iter()
            .map(|comp| {
                let ends = comp.start_point().dist(c).max(comp.end_point().dist(c));
                match comp {
                    Component::Arc(a) => {
                        let v = a.center - c;
                        let dir = if v.norm() > 0.0 { v.angle() } else { a.start_angle };
                        if a.locals_of_angle(dir, 0.0).is_empty() {
                            ends
                        } else {
                            ends.max(v.norm() + a.radius)
                        }
                    }
                    Component::Segment(_) => ends,
                }
            })
            .fold(0.0, f64::max),
        // distance to a point is convex along each polyline edge
        Curve::Sampled(s) => s.points().iter().map(|p| p.dist(c)).fold(0.0, f64::max),
    }
}

fn check_endpoints(lens: &LensGeometry, curve: &Curve) -> Result<()> {
    if curve.start_point().dist(lens.x) > EPS_JOIN || curve.end_point().dist(lens.y) > EPS_JOIN {
        return Err(Error::Domain("curve endpoints do not match the lens endpoints".into()));
    }
    Ok(())
}

/// Every point of the curve lies in the closed lens, up to `EPS_REGION`.
pub fn curve_in_cl_lens(lens: &LensGeometry, curve: &Curve) -> Result<bool> {
    check_endpoints(lens, curve)?;
    Ok(in_cl_lens_unchecked(lens, curve))
}

fn in_cl_lens_unchecked(lens: &LensGeometry, curve: &Curve) -> bool {
    let r = lens.radius();
    max_distance_from(curve, lens.c1) <= r + EPS_REGION && max_distance_from(curve, lens.c2) <= r + EPS_REGION
}

pub fn class_count(x: Point2, y: Point2, kappa: KappaParams) -> usize {
    let d = x.dist(y);
    if d == 0.0 || d >= 2.0 * kappa.radius() {
        1
    } else {
        2
    }
}

/// Label from the endpoints alone for the degenerate regimes, otherwise from
/// lens containment.
pub fn class_label(curve: &Curve) -> Result<ClassLabel> {
    let rep = validate(curve);
    if !rep.valid {
        let v = &rep.violations[0];
        return Err(Error::Validation(format!("{} of {:.3e} at s = {}", v.kind, v.magnitude, v.location)));
    }
    Ok(label_unchecked(curve))
}

/// Label without validating the curve first.
pub fn label_unchecked(curve: &Curve) -> ClassLabel {
    let (x, y) = (curve.start_point(), curve.end_point());
    let d = x.dist(y);
    let r = curve.kappa().radius();
    if d <= EPS_JOIN {
        return ClassLabel::Closed;
    }
    if d >= 2.0 * r {
        return ClassLabel::Unrestricted;
    }
    let lens = build_lens(x, y, curve.kappa()).expect("0 < d < 2r");
    if in_cl_lens_unchecked(&lens, curve) {
        ClassLabel::InLens
    } else {
        ClassLabel::NotInLens
    }
}

pub fn are_homotopic(a: &Curve, b: &Curve) -> Result<bool> {
    if a.start_point().dist(b.start_point()) > EPS_JOIN || a.end_point().dist(b.end_point()) > EPS_JOIN {
        return Err(Error::Domain("curves do not share endpoints".into()));
    }
    Ok(class_label(a)? == class_label(b)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ERegionReport {
    pub trials: usize,
    /// Curves whose interior lies entirely in E. There are none.
    pub curves_in_e: usize,
    /// Curves with at least one sampled point in E, showing the search did
    /// reach the region.
    pub curves_touching_e: usize,
    pub first_counterexample_seed: Option<u64>,
}

/// Searches for a valid curve from `x` to `y` whose interior stays in E,
/// with walks routed through a point of one of the lobes.
pub fn assert_no_curve_in_e(lens: &LensGeometry, trials: usize, seed: u64) -> ERegionReport {
    let mut report = ERegionReport { trials, curves_in_e: 0, curves_touching_e: 0, first_counterexample_seed: None };
    let r = lens.radius();
    for t in 0..trials {
        let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(t as u64);
        let Ok(curve) = e_biased_curve(lens, s) else { continue };
        // interior samples, endpoints excluded
        let total = curve.total_length();
        let n = ((total / (0.01 * r)).ceil() as usize).max(8);
        let mut all_in = true;
        let mut touched = false;
        for k in 1..n {
            let p = curve.evaluate(total * k as f64 / n as f64).expect("in range");
            if classify_point(lens, p) == RegionTag::InteriorE {
                touched = true;
            } else {
                all_in = false;
                if touched {
                    break;
                }
            }
        }
        if touched {
            report.curves_touching_e += 1;
        }
        if all_in {
            report.curves_in_e += 1;
            report.first_counterexample_seed.get_or_insert(s);
        }
    }
    report
}

fn e_biased_curve(lens: &LensGeometry, seed: u64) -> Result<CsCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = lens.radius();
    let first = rng.gen_bool(0.5);
    let hub = lens.lobe_point(first);
    let mut knots = vec![Config::new(lens.x, rng.gen_range(-PI..PI))];
    for _ in 0..rng.gen_range(1..=3) {
        let jitter = Point2::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)) * r;
        knots.push(Config::new(hub + jitter, rng.gen_range(-PI..PI)));
    }
    knots.push(Config::new(lens.y, rng.gen_range(-PI..PI)));
    csc_chain(&knots, lens.kappa)
}

/// Random valid curve from `x` to `y` inside the closed lens: headings at the
/// ends inside the corner cone, up to two interior knots, joined by minimal
/// CSC words and filtered by containment.
pub fn random_lens_curve(lens: &LensGeometry, seed: u64) -> Result<CsCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chord = (lens.y - lens.x).angle();
    let cone = 0.95 * lens.corner_angle();
    let half_width = lens.radius() - (lens.c1.dist(lens.midpoint()));
    for _ in 0..2000 {
        let mut knots = vec![Config::new(lens.x, chord + rng.gen_range(-cone..cone))];
        let mut inner: Vec<(f64, Config)> = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let along = rng.gen_range(0.1..0.9);
            let across = rng.gen_range(-1.0..1.0) * half_width;
            let p = lens.x.lerp(lens.y, along) + lens.normal() * across;
            if classify_point(lens, p) != RegionTag::InteriorLens {
                continue;
            }
            inner.push((along, Config::new(p, chord + rng.gen_range(-0.5..0.5) * cone)));
        }
        inner.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        knots.extend(inner.into_iter().map(|(_, c)| c));
        knots.push(Config::new(lens.y, chord + rng.gen_range(-cone..cone)));
        let Ok(c) = csc_chain(&knots, lens.kappa) else { continue };
        if in_cl_lens_unchecked(lens, &Curve::Cs(c.clone())) {
            return Ok(c);
        }
    }
    Err(Error::Generation("no lens curve found".into()))
}

/// Random valid curve from `x` to `y` leaving the closed lens.
pub fn random_outside_curve(lens: &LensGeometry, complexity_budget: usize, seed: u64) -> Result<CsCurve> {
    for k in 0..64u64 {
        let c = random_curve(lens.x, lens.y, lens.kappa, complexity_budget, seed.wrapping_mul(64).wrapping_add(k))?;
        if !in_cl_lens_unchecked(lens, &Curve::Cs(c.clone())) {
            return Ok(c);
        }
    }
    Err(Error::Generation("every draw stayed in the lens".into()))
}
