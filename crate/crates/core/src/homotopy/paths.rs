//! Path pieces used by the move families: component surgery, CSC words with
//! continuous sweep selection, and shortest paths from a free start.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::dubins::{solve_word, CscWord, WordKind};
use crate::validation::validate_cs;
use crate::geom::{
    wrap_positive, ArcComponent, Component, Config, CsCurve, KappaParams, Point2, SegmentComponent, EPS_DEGENERATE,
};

const MERGE_TOL: f64 = 1e-10;

/// Merges consecutive arcs of one circle and consecutive collinear segments,
/// and drops degenerate pieces.
pub fn simplify(curve: &CsCurve) -> CsCurve {
    let mut out: Vec<Component> = Vec::with_capacity(curve.complexity());
    for c in curve.components() {
        if c.length() < EPS_DEGENERATE {
            continue;
        }
        let merged = match (out.last(), c) {
            (Some(Component::Arc(a)), Component::Arc(b))
                if a.center.dist(b.center) < MERGE_TOL && a.sweep * b.sweep > 0.0 =>
            {
                Some(Component::Arc(ArcComponent { sweep: a.sweep + b.sweep, ..*a }))
            }
            (Some(Component::Segment(a)), Component::Segment(b)) if (a.heading() - b.heading()).abs() < MERGE_TOL => {
                Some(Component::Segment(SegmentComponent::new(a.start, b.end)))
            }
            _ => None,
        };
        match merged {
            Some(m) => *out.last_mut().unwrap() = m,
            None => out.push(*c),
        }
    }
    if out.is_empty() || out.len() == curve.complexity() {
        return curve.clone();
    }
    let merged = CsCurve::new(curve.kappa(), out).expect("non-empty");
    // a merge may tip a joint of a valid curve over the tolerance
    if !validate_cs(&merged).valid && validate_cs(curve).valid {
        return curve.clone();
    }
    merged
}

/// Joins component lists, dropping degenerate pieces.
pub(crate) fn splice(kappa: KappaParams, parts: &[&[Component]]) -> Option<CsCurve> {
    let comps: Vec<Component> =
        parts.iter().flat_map(|p| p.iter()).copied().filter(|c| c.length() >= EPS_DEGENERATE).collect();
    if comps.is_empty() {
        return None;
    }
    CsCurve::new(kappa, comps).ok()
}

/// Components of `curve` restricted to `[s0, s1]`, empty if the window is.
pub(crate) fn window(curve: &CsCurve, s0: f64, s1: f64) -> Vec<Component> {
    if s1 - s0 < EPS_DEGENERATE {
        return Vec::new();
    }
    curve.sub_curve(s0, s1).map(CsCurve::into_components).unwrap_or_default()
}

/// Sweeps equal to `base` modulo a full turn, with the sign of `side`.
/// Rounding just below a full turn also yields the zero sweep.
fn sweep_variants(side: f64, base: f64) -> impl Iterator<Item = f64> {
    let w = wrap_positive(side * base);
    (-1..2).filter_map(move |k| {
        let v = w + TAU * k as f64;
        if v < -1e-9 || v > 2.0 * TAU {
            None
        } else {
            Some(side * v.max(0.0))
        }
    })
}

fn piece_distance(r: f64, (side_a, a): (f64, f64), (side_b, b): (f64, f64)) -> f64 {
    if side_a == side_b {
        r * (a - b).abs()
    } else {
        r * (a.abs() + b.abs())
    }
}

/// Tangent angle of `w` after arc length `s`, relative to its start.
fn turned_by(w: &CscWord, s: f64) -> f64 {
    let r = w.radius;
    let l1 = r * w.arc1_sweep.abs();
    let on1 = s.min(l1);
    let on2 = (s - l1 - w.seg_length).clamp(0.0, r * w.arc2_sweep.abs());
    (w.arc1_sweep.signum() * on1 + w.arc2_sweep.signum() * on2) / r
}

/// Distance between two words with a common start, used to follow a word
/// continuously as its end configurations move. Tangent angles are compared
/// at matching fractions of length, so that different splittings of one
/// curve into pieces count as equal.
fn word_distance(a: &CscWord, b: &CscWord) -> f64 {
    const SAMPLES: usize = 16;
    let (la, lb) = (a.length(), b.length());
    let worst = (0..=SAMPLES)
        .map(|j| {
            let u = j as f64 / SAMPLES as f64;
            (turned_by(a, u * la) - turned_by(b, u * lb)).abs()
        })
        .fold(0.0, f64::max);
    worst * la.max(lb) + (la - lb).abs()
}

/// A CSC word from `start` to `end`. Without `prev` the shortest word is
/// returned; otherwise the word (any kind, sweeps taken modulo full turns)
/// nearest to `prev`, so that families stay continuous.
pub fn continue_csc(start: Config, end: Config, r: f64, prev: Option<&CscWord>) -> Option<CscWord> {
    let mut best: Option<(f64, CscWord)> = None;
    for kind in WordKind::ALL {
        let Some(base) = solve_word(kind, start, end, r) else {
            continue;
        };
        let (s1, s2) = kind.sides();
        for a1 in sweep_variants(s1, base.arc1_sweep) {
            for a2 in sweep_variants(s2, base.arc2_sweep) {
                let w = CscWord { arc1_sweep: a1, arc2_sweep: a2, ..base };
                let score = match prev {
                    Some(p) => word_distance(&w, p),
                    None => w.length(),
                };
                if best.as_ref().map_or(true, |(b, _)| score < *b) {
                    best = Some((score, w));
                }
            }
        }
    }
    best.map(|(_, w)| w)
}

/// The word reproducing a curve of at most three components, if the curve
/// has arc-segment-arc shape.
pub(crate) fn word_of(curve: &CsCurve) -> Option<CscWord> {
    let r = curve.kappa().radius();
    let comps = curve.components();
    let start = curve.start_config();
    let side = |c: &Component| match c {
        Component::Arc(a) if a.sweep < 0.0 => Some(-1.0),
        Component::Arc(_) => Some(1.0),
        Component::Segment(_) => None,
    };
    let sweep = |c: &Component| match c {
        Component::Arc(a) => a.sweep,
        Component::Segment(_) => 0.0,
    };
    let (mut a1, mut l, mut a2) = (None, 0.0, None);
    let mut stage = 0;
    for c in comps {
        match (stage, c) {
            (0, Component::Arc(_)) => {
                a1 = Some(*c);
                stage = 1;
            }
            (0 | 1, Component::Segment(s)) => {
                l = s.length();
                stage = 2;
            }
            (1 | 2, Component::Arc(_)) => {
                a2 = Some(*c);
                stage = 3;
            }
            _ => return None,
        }
    }
    let s1 = a1.as_ref().and_then(side).unwrap_or(1.0);
    let s2 = a2.as_ref().and_then(side).unwrap_or(s1);
    let kind = match (s1 > 0.0, s2 > 0.0) {
        (true, true) => WordKind::LSL,
        (true, false) => WordKind::LSR,
        (false, true) => WordKind::RSL,
        (false, false) => WordKind::RSR,
    };
    let w = CscWord {
        kind,
        arc1_sweep: a1.as_ref().map_or(0.0, sweep),
        seg_length: l,
        arc2_sweep: a2.as_ref().map_or(0.0, sweep),
        start,
        radius: r,
    };
    Some(w)
}

pub(crate) fn word_components(w: &CscWord) -> Vec<Component> {
    w.pieces().into_iter().filter(|c| c.length() >= EPS_DEGENERATE).collect()
}

/// Segment from a free start point tangent to the turning circle of a
/// target configuration, followed by the arc into the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeStartPath {
    pub side: f64,
    pub seg_length: f64,
    pub sweep: f64,
    pub from: Point2,
    pub heading: f64,
    pub target: Config,
    pub radius: f64,
}

impl FreeStartPath {
    pub fn length(&self) -> f64 {
        self.seg_length + self.radius * self.sweep.abs()
    }

    /// The arc is laid out backwards from the target so the path ends there
    /// exactly; the segment then closes the gap from the start point.
    pub fn components(&self) -> Vec<Component> {
        if self.seg_length == 0.0 {
            // start point on the circle: start there exactly, the end is off
            // by rounding only
            let a = ArcComponent::from_config(Config::new(self.from, self.heading), self.radius, self.sweep);
            return [Component::Arc(a)].into_iter().filter(|c| c.length() >= EPS_DEGENERATE).collect();
        }
        let t = self.target;
        let center = t.position + t.direction().perp() * (self.side * self.radius);
        let end_angle = (t.position - center).angle();
        let arc = ArcComponent::new(center, self.radius, end_angle - self.sweep, self.sweep);
        let seg = SegmentComponent::new(self.from, Component::Arc(arc).start_point());
        [Component::Segment(seg), Component::Arc(arc)].into_iter().filter(|c| c.length() >= EPS_DEGENERATE).collect()
    }
}

/// The free-start path reproducing a curve that is a segment, an arc, or a
/// segment followed by an arc.
pub(crate) fn free_start_of(curve: &CsCurve) -> Option<FreeStartPath> {
    let r = curve.kappa().radius();
    let (seg, arc) = match curve.components() {
        [Component::Segment(s)] => (Some(*s), None),
        [Component::Arc(a)] => (None, Some(*a)),
        [Component::Segment(s), Component::Arc(a)] => (Some(*s), Some(*a)),
        _ => return None,
    };
    let start = curve.start_config();
    let side = match arc {
        Some(a) if a.sweep < 0.0 => -1.0,
        _ => 1.0,
    };
    Some(FreeStartPath {
        side,
        seg_length: seg.map_or(0.0, |s| s.length()),
        sweep: arc.map_or(0.0, |a| a.sweep),
        from: start.position,
        heading: start.heading,
        target: curve.end_config(),
        radius: r,
    })
}

/// Points this close to a turning circle count as lying on it.
const ON_CIRCLE: f64 = 1e-13;

fn free_start_side(x: Point2, target: Config, r: f64, side: f64) -> Option<(f64, f64)> {
    let c = target.position + target.direction().perp() * (side * r);
    let w = c - x;
    let dd = w.norm();
    if dd < r - ON_CIRCLE {
        return None;
    }
    if dd <= r + ON_CIRCLE {
        return Some((0.0, w.angle() - side * FRAC_PI_2));
    }
    let lam = (dd * dd - r * r).sqrt();
    Some((lam, w.angle() - (side * r).atan2(lam)))
}

/// Free-start path from `x` into `target`. Without `prev` the shortest one;
/// otherwise the one nearest to `prev` in parameter space.
pub fn free_start_path(x: Point2, target: Config, r: f64, prev: Option<&FreeStartPath>) -> Option<FreeStartPath> {
    let mut best: Option<(f64, FreeStartPath)> = None;
    for side in [1.0, -1.0] {
        let Some((lam, heading)) = free_start_side(x, target, r, side) else {
            continue;
        };
        for sweep in sweep_variants(side, target.heading - heading) {
            let p = FreeStartPath { side, seg_length: lam, sweep, from: x, heading, target, radius: r };
            let score = match prev {
                Some(q) => {
                    piece_distance(r, (p.side, p.sweep), (q.side, q.sweep)) + (p.seg_length - q.seg_length).abs()
                }
                None => p.length(),
            };
            if best.as_ref().map_or(true, |(b, _)| score < *b) {
                best = Some((score, p));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Segment from `from` tangent onto a circle, an arc around it, and a
/// tangent segment off it to `to`. Either segment may be empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeFreePath {
    pub center: Point2,
    pub radius: f64,
    pub side: f64,
    pub sweep: f64,
    pub from: Point2,
    pub to: Point2,
    entry: f64,
}

impl FreeFreePath {
    pub fn components(&self) -> Vec<Component> {
        let arc = ArcComponent::new(self.center, self.radius, self.entry, self.sweep);
        let arc_c = Component::Arc(arc);
        let (a, b) = (arc_c.start_point(), arc_c.end_point());
        let mut out = Vec::with_capacity(3);
        if self.from.dist(a) > ON_CIRCLE {
            out.push(Component::Segment(SegmentComponent::new(self.from, a)));
        }
        out.push(arc_c);
        if self.to.dist(b) > ON_CIRCLE {
            out.push(Component::Segment(SegmentComponent::new(b, self.to)));
        }
        out.retain(|c| c.length() >= EPS_DEGENERATE);
        out
    }

    pub fn length(&self) -> f64 {
        self.components().iter().map(Component::length).sum()
    }
}

/// Angle on the circle where a tangent through `p` touches it, for travel
/// turning to `side`; `entering` when the path runs from `p` to the circle.
fn tangent_angle(p: Point2, center: Point2, radius: f64, side: f64, entering: bool) -> Option<f64> {
    let w = p - center;
    let dd = w.norm();
    if dd < radius - ON_CIRCLE {
        return None;
    }
    let a = (radius / dd).min(1.0).acos();
    Some(if entering { w.angle() + side * a } else { w.angle() - side * a })
}

/// The path around `center` between two free ends. Without `prev` the
/// sweep is the shortest one; otherwise the one nearest `prev`'s.
pub(crate) fn free_free_path(
    from: Point2,
    to: Point2,
    center: Point2,
    radius: f64,
    side: f64,
    prev: Option<&FreeFreePath>,
) -> Option<FreeFreePath> {
    let entry = tangent_angle(from, center, radius, side, true)?;
    let exit = tangent_angle(to, center, radius, side, false)?;
    let sweep = sweep_variants(side, exit - entry).min_by(|a, b| {
        let key = |v: f64| prev.map_or(v.abs(), |q| (v - q.sweep).abs());
        key(*a).total_cmp(&key(*b))
    })?;
    Some(FreeFreePath { center, radius, side, sweep, from, to, entry })
}

/// The free-free path reproducing a curve made of one arc with optional
/// tangent segments at either end.
pub(crate) fn free_free_of(curve: &CsCurve) -> Option<FreeFreePath> {
    let arc = match curve.components() {
        [Component::Arc(a)]
        | [Component::Segment(_), Component::Arc(a)]
        | [Component::Arc(a), Component::Segment(_)]
        | [Component::Segment(_), Component::Arc(a), Component::Segment(_)] => *a,
        _ => return None,
    };
    Some(FreeFreePath {
        center: arc.center,
        radius: arc.radius,
        side: arc.sweep.signum(),
        sweep: arc.sweep,
        from: curve.start_point(),
        to: curve.end_point(),
        entry: arc.start_angle,
    })
}
