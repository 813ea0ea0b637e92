//! Elementary moves and the curve families behind them.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::family::{sample_family, FamilySpec, Sampled};
use super::paths::{
    continue_csc, free_free_of, free_free_path, free_start_of, free_start_path, splice, window, word_components, word_of,
};
use super::verify::delta_frame;
use super::{params, HomotopyTrace, MoveKind, TraceBuilder};
use crate::dubins::CscWord;
use crate::error::{Error, Result};
use crate::geom::{angle_gap, ArcComponent, Component, Config, CsCurve, Point2, SegmentComponent, EPS_ANGLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

pub(crate) fn default_spec(curve: &CsCurve, steps: usize, monotone: bool) -> FamilySpec {
    FamilySpec { gap: 0.5 * delta_frame(curve.kappa()), monotone, partial: false, min_steps: steps.max(1), ends: None }
}

fn single(frames: Sampled, kind: MoveKind, p: &[(&str, f64)]) -> HomotopyTrace {
    let mut b = TraceBuilder::new(frames.frames[0].clone());
    b.append(frames.frames, kind, params(p));
    b.finish()
}

/// Replaces `[a, b]` by a growing CSC word: frame `q` is
/// `curve[0, a] # W(q) # curve[q, L]` with `W(q)` joining the configurations
/// at `a` and `q`, followed continuously from the empty word.
pub(crate) fn window_family(curve: &CsCurve, a: f64, b: f64, spec: &FamilySpec) -> Option<Sampled> {
    let kappa = curve.kappa();
    let r = kappa.radius();
    let total = curve.total_length();
    let prefix = window(curve, 0.0, a);
    let start = curve.config_at(a).ok()?;
    let zero = CscWord { kind: crate::dubins::WordKind::LSL, arc1_sweep: 0.0, seg_length: 0.0, arc2_sweep: 0.0, start, radius: r };
    sample_family(curve, zero, spec, |p, prev| {
        let q = a + p * (b - a);
        let w = continue_csc(start, curve.config_at(q).ok()?, r, Some(prev))?;
        let rest = window(curve, q, total);
        let c = splice(kappa, &[&prefix, &word_components(&w), &rest])?;
        Some((c, w))
    })
}

/// Turns both end tangents of a CSC curve together towards the chord `xy`,
/// joining them by the nearest CSC word. The last frame is the segment.
pub(crate) fn straighten_family(curve: &CsCurve, spec: &FamilySpec) -> Option<Sampled> {
    let w0 = word_of(curve)?;
    let r = curve.kappa().radius();
    let (x, y) = (curve.start_point(), curve.end_point());
    if x.dist(y) <= crate::geom::EPS_JOIN {
        return None;
    }
    let chord = (y - x).angle();
    let (t0, t1) = (curve.start_config().heading, curve.end_config().heading);
    let (dt0, dt1) = (crate::geom::normalize_angle(chord - t0), crate::geom::normalize_angle(chord - t1));
    sample_family(curve, w0, spec, |p, prev| {
        let start = Config::new(x, t0 + p * dt0);
        let w = continue_csc(start, Config::new(y, t1 + p * dt1), r, Some(prev))?;
        let c = CsCurve::new(curve.kappa(), word_components(&w)).ok()?;
        Some((c, w))
    })
}

/// Frame `q` is the free-start path from `x` into the configuration at `q`,
/// followed by `curve[q, L]`, for `q` up to `b`.
pub(crate) fn free_start_family(curve: &CsCurve, b: f64, spec: &FamilySpec) -> Option<Sampled> {
    let kappa = curve.kappa();
    let r = kappa.radius();
    let total = curve.total_length();
    let x = curve.start_point();
    sample_family(curve, None, spec, |p, prev| {
        let q = p * b;
        let path = free_start_path(x, curve.config_at(q).ok()?, r, prev.as_ref())?;
        let rest = window(curve, q, total);
        let c = splice(kappa, &[&path.components(), &rest])?;
        Some((c, Some(path)))
    })
}

/// Rotates the tangent at `x` by up to `sweep`, re-attaching through a CSC
/// word to the configuration at `b`, which must end an arc-segment-arc prefix.
pub(crate) fn rotate_start_family(curve: &CsCurve, b: f64, sweep: f64, spec: &FamilySpec) -> Option<Sampled> {
    let kappa = curve.kappa();
    let r = kappa.radius();
    let total = curve.total_length();
    let head = curve.sub_curve(0.0, b).ok()?;
    let w0 = word_of(&head)?;
    let start = curve.start_config();
    let target = curve.config_at(b).ok()?;
    let rest = window(curve, b, total);
    sample_family(curve, w0, spec, |p, prev| {
        let from = Config::new(start.position, start.heading + p * sweep);
        let w = continue_csc(from, target, r, Some(prev))?;
        let c = splice(kappa, &[&word_components(&w), &rest])?;
        Some((c, w))
    })
}

/// For a curve that is a free-start path, turns the tangent at the far end
/// by up to `sweep` while the path stays a free-start path.
pub(crate) fn rotate_free_family(curve: &CsCurve, sweep: f64, spec: &FamilySpec) -> Option<Sampled> {
    let kappa = curve.kappa();
    let r = kappa.radius();
    let p0 = free_start_of(curve)?;
    let (x, end) = (curve.start_point(), curve.end_config());
    sample_family(curve, p0, spec, |p, prev| {
        let target = Config::new(end.position, end.heading + p * sweep);
        let path = free_start_path(x, target, r, Some(prev))?;
        Some((splice(kappa, &[&path.components()])?, path))
    })
}

/// For a single arc with tangent segments at the ends, slides the circle's
/// centre towards `target`, keeping the segments tangent.
pub(crate) fn free_free_family(curve: &CsCurve, target: Point2, spec: &FamilySpec) -> Option<Sampled> {
    let kappa = curve.kappa();
    let p0 = free_free_of(curve)?;
    sample_family(curve, p0, spec, |p, prev| {
        let center = p0.center.lerp(target, p);
        let path = free_free_path(p0.from, p0.to, center, p0.radius, p0.side, Some(prev))?;
        Some((splice(kappa, &[&path.components()])?, path))
    })
}

/// Inserts an arc of growing sweep on the pushing disk tangent at `z`,
/// re-attaching at `b` through a CSC word.
fn insert_arc_family(curve: &CsCurve, z: f64, b: f64, sweep: f64, spec: &FamilySpec) -> Option<Sampled> {
    let kappa = curve.kappa();
    let r = kappa.radius();
    let total = curve.total_length();
    let prefix = window(curve, 0.0, z);
    let at = curve.config_at(z).ok()?;
    let w0 = word_of(&curve.sub_curve(z, b).ok()?)?;
    let target = curve.config_at(b).ok()?;
    let rest = window(curve, b, total);
    sample_family(curve, w0, spec, |p, prev| {
        let arc = Component::Arc(ArcComponent::from_config(at, r, p * sweep));
        let w = continue_csc(arc.end_config(), target, r, Some(prev))?;
        let c = splice(kappa, &[&prefix, &[arc], &word_components(&w), &rest])?;
        Some((c, w))
    })
}

/// Frames of `f` applied to the reversed curve, reversed back.
pub(crate) fn on_reversed(curve: &CsCurve, f: impl FnOnce(&CsCurve) -> Option<Sampled>) -> Option<Sampled> {
    let s = f(&curve.reverse())?;
    Some(Sampled { frames: s.frames.iter().map(CsCurve::reverse).collect(), complete: s.complete })
}

/// End of the component containing arc length `z`, skipping a boundary
/// that `z` already sits on.
fn component_end_after(curve: &CsCurve, z: f64) -> f64 {
    let offsets = curve.offsets();
    offsets.iter().copied().find(|&o| o > z + 1e-12).unwrap_or(curve.total_length())
}

/// Twist on the pushing disk tangent at `z`. At an endpoint the disk turns
/// about that endpoint, rotating the tangent there; in the interior an arc
/// of sweep `phi` is wrapped onto the disk. Either way the curve re-attaches
/// by a CSC word at the end of the next component.
pub fn move_type1(curve: &CsCurve, z: f64, side: Side, phi: f64, steps: usize) -> Result<HomotopyTrace> {
    let total = curve.total_length();
    if !(0.0..=total).contains(&z) {
        return Err(Error::Domain(format!("z = {z} outside [0, {total}]")));
    }
    if phi == 0.0 {
        return Ok(HomotopyTrace::identity(curve.clone()));
    }
    let sweep = side.sign() * phi.abs();
    let spec = default_spec(curve, steps, false);
    let tiny = 1e-12;
    let frames = if z <= tiny {
        rotate_start_family(curve, component_end_after(curve, 0.0), sweep, &spec)
    } else if z >= total - tiny {
        // a left turn of the reversed curve is a right turn of the curve
        on_reversed(curve, |rev| rotate_start_family(rev, component_end_after(rev, 0.0), -sweep, &spec))
    } else {
        insert_arc_family(curve, z, component_end_after(curve, z), sweep, &spec)
    };
    let frames = frames.ok_or_else(|| Error::MoveInfeasible(format!("twist of {phi} at z = {z} moves an endpoint or breaks the bound")))?;
    Ok(single(frames, MoveKind::TypeI, &[("z", z), ("side", side.sign()), ("phi", phi)]))
}

/// Partial replacement of the components `window` by their CSC word.
pub fn move_type2(curve: &CsCurve, window: Range<usize>, steps: usize) -> Result<HomotopyTrace> {
    let offsets = curve.offsets();
    if window.start >= window.end || window.end > curve.complexity() {
        return Err(Error::Domain(format!("bad component window {window:?} for {} components", curve.complexity())));
    }
    let (a, b) = (offsets[window.start], offsets[window.end]);
    let spec = default_spec(curve, steps, true);
    let frames = window_family(curve, a, b, &spec)
        .ok_or_else(|| Error::MoveInfeasible(format!("no length-nonincreasing CSC replacement of window {window:?}")))?;
    if frames.frames.iter().all(|f| f.uniform_distance(curve, 256) < 1e-9) {
        return Ok(HomotopyTrace::identity(curve.clone()));
    }
    Ok(single(frames, MoveKind::TypeII, &[("first", window.start as f64), ("end", window.end as f64)]))
}

/// Parallel-tangent stretch: the part between `t1` and `t2` is translated
/// by `l * u` along the tangent `u` at `t1`, and the two gaps are bridged by
/// segments of length `l`.
pub fn move_type3(curve: &CsCurve, t1: f64, t2: f64, ell: f64, steps: usize) -> Result<HomotopyTrace> {
    let (t1, t2) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    let total = curve.total_length();
    if t1 < 0.0 || t2 > total || t2 - t1 < 1e-12 {
        return Err(Error::Domain(format!("bad parameters t1 = {t1}, t2 = {t2} on a curve of length {total}")));
    }
    if !(ell >= 0.0 && ell.is_finite()) {
        return Err(Error::Domain(format!("displacement must be non-negative, got {ell}")));
    }
    let c1 = curve.config_at(t1)?;
    let c2 = curve.config_at(t2)?;
    let gap = angle_gap(c1.heading, c2.heading + std::f64::consts::PI);
    if gap > EPS_ANGLE {
        return Err(Error::Precondition(format!("tangents at t1 and t2 are not antiparallel (off by {gap:.3e})")));
    }
    if ell == 0.0 {
        return Ok(HomotopyTrace::identity(curve.clone()));
    }
    let kappa = curve.kappa();
    let u = c1.direction();
    let prefix = window(curve, 0.0, t1);
    let middle = window(curve, t1, t2);
    let suffix = window(curve, t2, total);
    let stretch = |l: f64| -> Vec<Component> {
        let v = u * l;
        let mut comps = prefix.clone();
        comps.push(Component::Segment(SegmentComponent::new(c1.position, c1.position + v)));
        comps.extend(middle.iter().map(|c| c.translated(v)));
        comps.push(Component::Segment(SegmentComponent::new(c2.position + v, c2.position)));
        comps.extend_from_slice(&suffix);
        comps
    };
    let spec = default_spec(curve, steps, false);
    let frames = sample_family(curve, (), &spec, |p, _| Some((splice(kappa, &[&stretch(p * ell)])?, ())))
        .ok_or_else(|| Error::MoveInfeasible("stretched frames fail validation".into()))?;
    let pp = c1.position + u * ell;
    let qq = c2.position + u * ell;
    Ok(single(
        frames,
        MoveKind::TypeIII,
        &[("t1", t1), ("t2", t2), ("ell", ell), ("px", pp.x), ("py", pp.y), ("qx", qq.x), ("qy", qq.y)],
    ))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, TAU};

    use super::*;
    use crate::geom::{KappaParams, Point2};
    use crate::homotopy::verify_trace;

    fn k() -> KappaParams {
        KappaParams::unit()
    }

    fn circle() -> CsCurve {
        CsCurve::arc(k(), Config::new(Point2::ORIGIN, 0.0), TAU).unwrap()
    }

    fn arc_chain(sweeps: &[f64]) -> CsCurve {
        let mut at = Config::new(Point2::ORIGIN, 0.0);
        let mut comps = Vec::new();
        for &s in sweeps {
            let c = Component::Arc(ArcComponent::from_config(at, 1.0, s));
            at = c.end_config();
            comps.push(c);
        }
        CsCurve::new(k(), comps).unwrap()
    }

    #[test]
    fn stretch_of_zero_is_identity() {
        let t = move_type3(&circle(), 0.0, PI, 0.0, 10).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn circle_stretches_to_stadium() {
        let t = move_type3(&circle(), 0.0, PI, 1.0, 10).unwrap();
        assert!((t.last().total_length() - (TAU + 2.0)).abs() < 1e-9);
        assert!(verify_trace(&t).valid);
        assert_eq!(t.moves[0].kind, MoveKind::TypeIII);
    }

    #[test]
    fn stretch_needs_antiparallel_tangents() {
        assert!(matches!(move_type3(&circle(), 0.0, 1.0, 1.0, 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn replacing_a_csc_window_is_identity() {
        let c = arc_chain(&[0.45, -0.45]);
        let t = move_type2(&c, 0..2, 10).unwrap();
        assert!(t.last().uniform_distance(&c, 256) < 1e-9);
    }

    #[test]
    fn wiggle_window_gets_shorter_monotonically() {
        let c = arc_chain(&[0.25, -0.3, 0.25]);
        let t = move_type2(&c, 0..3, 10).unwrap();
        let ls = t.lengths();
        assert!(ls.windows(2).all(|w| w[1] <= w[0] + 1e-9));
        assert!(*ls.last().unwrap() < c.total_length() - 1e-6);
        assert!(verify_trace(&t).valid);
    }

    #[test]
    fn twists_keep_endpoints() {
        let c = CsCurve::segment(k(), Point2::ORIGIN, Point2::new(3.0, 0.0)).unwrap();
        let t = move_type1(&c, 0.0, Side::Left, 0.3, 10).unwrap();
        assert!(verify_trace(&t).valid);
        assert!(t.last().start_config().heading > 0.29);
        let t = move_type1(&c, 1.0, Side::Right, 0.4, 10).unwrap();
        assert!(verify_trace(&t).valid);
        assert_eq!(move_type1(&c, 1.0, Side::Right, 0.0, 10).unwrap().len(), 1);
    }
}
