//! Homotopies between minimizers: the arc-to-arc homotopy between the two
//! longer arcs of a lens, the closed-curve bridge between circles through
//! `x`, and end-to-end traces between curves of one class.

use std::f64::consts::{PI, TAU};

use super::reduce::{circle_rotation, reduce_with, ReduceOptions};
use super::verify::delta_frame;
use super::{params, HomotopyTrace, MoveKind, TraceBuilder};
use crate::error::{Error, Result};
use crate::geom::{normalize_angle, ArcComponent, Component, CsCurve, Curve, SegmentComponent};
use crate::regions::{class_label, ClassLabel, LensGeometry};

/// Segment to the midpoint `m` of `xy`, a clockwise loop on the circle
/// below `m`, a counter-clockwise loop on the circle above it, and the
/// segment on to `y` ("below" is the side of `C2`). Its image is symmetric
/// about the bisector of `xy`, and the half-turn about `m` composed with
/// reversal maps it to itself.
pub fn middle_curve(lens: &LensGeometry) -> CsCurve {
    let r = lens.radius();
    let m = lens.midpoint();
    let n = lens.normal();
    let below = m - n * r;
    let above = m + n * r;
    let comps = vec![
        Component::Segment(SegmentComponent::new(lens.x, m)),
        Component::Arc(ArcComponent::new(below, r, (m - below).angle(), -TAU)),
        Component::Arc(ArcComponent::new(above, r, (m - above).angle(), TAU)),
        Component::Segment(SegmentComponent::new(m, lens.y)),
    ];
    CsCurve::new(lens.kappa, comps).expect("non-empty")
}

/// Half-turn about the midpoint of the endpoints, then reversal. Maps
/// `Sigma(x, y)` to itself and swaps the longer arcs of `C1` and `C2`.
fn half_turn_reversed(c: &CsCurve) -> CsCurve {
    let m = c.start_point().lerp(c.end_point(), 0.5);
    c.map_components(|k| k.rotated_about(m, PI)).reverse()
}

fn ends_on(c: &CsCurve, target: &CsCurve) -> bool {
    c.uniform_distance(target, 512) < 1e-6
}

/// From the longer arc of `C1` to the longer arc of `C2`, passing through
/// `middle_curve` at `p = 1/2`. The half from `C1` is a reduction of the
/// middle curve run backwards; the other half is its image under the
/// half-turn symmetry.
pub fn homotope_arc_to_arc(lens: &LensGeometry) -> Result<HomotopyTrace> {
    homotope_arc_to_arc_with(lens, &ReduceOptions::default())
}

pub(crate) fn homotope_arc_to_arc_with(lens: &LensGeometry, opts: &ReduceOptions) -> Result<HomotopyTrace> {
    let mid = middle_curve(lens);
    let t = reduce_with(&Curve::Cs(mid), opts)?;
    let image = t.map_curves(half_turn_reversed);
    let to_first = if ends_on(t.last(), &lens.longer_arc(true)) { t } else { image.clone() };
    let to_second = if ends_on(image.last(), &lens.longer_arc(false)) { image } else { to_first.map_curves(half_turn_reversed) };
    to_first.reversed().then(&to_second)
}

/// Rotation about `x` between two circles through `x` of one orientation,
/// or, for opposite orientations, a passage through the figure-eight made
/// of both circles at `x`.
pub fn closed_bridge(a: &CsCurve, b: &CsCurve) -> Result<HomotopyTrace> {
    closed_bridge_with(a, b, &ReduceOptions::default())
}

fn circle_parts(c: &CsCurve) -> Result<ArcComponent> {
    match c.components() {
        [Component::Arc(a)] if (a.sweep.abs() - TAU).abs() < 1e-9 => Ok(*a),
        _ => Err(Error::Domain("closed bridge needs full circles".into())),
    }
}

fn rotation(c: &CsCurve, to: &ArcComponent, opts: &ReduceOptions) -> Result<HomotopyTrace> {
    let a = circle_parts(c)?;
    let x = c.start_point();
    let turn = normalize_angle((to.center - x).angle() - (a.center - x).angle());
    if turn.abs() < 1e-12 {
        return Ok(HomotopyTrace::identity(c.clone()));
    }
    let gap = 0.5 * delta_frame(c.kappa());
    let s = circle_rotation(c, turn, gap, opts.min_steps).ok_or_else(|| Error::Domain("circle rotation failed".into()))?;
    let mut b = TraceBuilder::new(c.clone());
    b.append(s.frames, MoveKind::TypeI, params(&[("z", 0.0), ("phi", turn)]));
    Ok(b.finish())
}

pub(crate) fn closed_bridge_with(a: &CsCurve, b: &CsCurve, opts: &ReduceOptions) -> Result<HomotopyTrace> {
    let ca = circle_parts(a)?;
    let cb = circle_parts(b)?;
    if a.start_point().dist(b.start_point()) > 1e-9 {
        return Err(Error::Domain("circles do not share their base point".into()));
    }
    if ca.sweep.signum() == cb.sweep.signum() {
        return rotation(a, &cb, opts);
    }
    // a and its half-turn about x reversed: that map fixes the figure-eight
    let x = a.start_point();
    let flip = |c: &CsCurve| c.map_components(|k| k.rotated_about(x, PI)).reverse();
    let eight = a.concatenate(&flip(a))?;
    let t = reduce_with(&Curve::Cs(eight), opts)?;
    let (t_a, t_b) = if circle_parts(t.last())?.sweep.signum() == ca.sweep.signum() {
        (t.clone(), t.map_curves(flip))
    } else {
        (t.map_curves(flip), t)
    };
    // t_a ends on a circle of a's orientation, t_b on one of b's
    let head = rotation(a, &circle_parts(t_a.last())?, opts)?.then(&t_a.reversed())?;
    let tail = t_b.then(&rotation(t_b.last(), &cb, opts)?)?;
    head.then(&tail)
}

/// `reduce(a) # bridge # reverse(reduce(b))`.
pub fn build_homotopy(a: &Curve, b: &Curve) -> Result<HomotopyTrace> {
    build_homotopy_with(a, b, &ReduceOptions::default())
}

pub fn build_homotopy_with(a: &Curve, b: &Curve, opts: &ReduceOptions) -> Result<HomotopyTrace> {
    if a.start_point().dist(b.start_point()) > 1e-9 || a.end_point().dist(b.end_point()) > 1e-9 {
        return Err(Error::Domain("curves do not share endpoints".into()));
    }
    let (la, lb) = (class_label(a)?, class_label(b)?);
    if la != lb {
        return Err(Error::ClassMismatch { a: la, b: lb });
    }
    let ta = reduce_with(a, opts)?;
    let tb = reduce_with(b, opts)?;
    let (ma, mb) = (ta.last(), tb.last());
    let bridge = if ma.uniform_distance(mb, 512) < 1e-9 {
        HomotopyTrace::identity(ma.clone())
    } else {
        match la {
            ClassLabel::NotInLens => {
                let lens = crate::regions::build_lens(ma.start_point(), ma.end_point(), ma.kappa())?;
                let t = homotope_arc_to_arc_with(&lens, opts)?;
                if ends_on(ma, t.first()) {
                    t
                } else {
                    t.reversed()
                }
            }
            ClassLabel::Closed => closed_bridge_with(ma, mb, opts)?,
            _ => return Err(Error::Domain("reductions of one class ended on different minimizers".into())),
        }
    };
    ta.then(&bridge_from(ma, bridge)?)?.then(&tb.reversed())
}

/// Replaces the bridge's first and last frames by the exact curves it was
/// built to join, if they agree to rounding.
fn bridge_from(start: &CsCurve, mut t: HomotopyTrace) -> Result<HomotopyTrace> {
    if t.first().uniform_distance(start, 512) > 1e-9 {
        return Err(Error::Domain("bridge does not start on the reduced curve".into()));
    }
    t.frames[0].curve = start.clone();
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Config, KappaParams, Point2};
    use crate::homotopy::verify_trace;
    use crate::regions::build_lens;

    fn lens() -> LensGeometry {
        build_lens(Point2::ORIGIN, Point2::new(1.0, 0.0), KappaParams::unit()).unwrap()
    }

    #[test]
    fn arc_to_arc_runs_from_c1_to_c2() {
        let l = lens();
        let t = homotope_arc_to_arc(&l).unwrap();
        assert!(verify_trace(&t).valid);
        assert!(t.first().hausdorff(&l.longer_arc(true), 1e-3) < 1e-9);
        assert!(t.last().hausdorff(&l.longer_arc(false), 1e-3) < 1e-9);
    }

    #[test]
    fn middle_curve_is_symmetric_and_valid() {
        let l = lens();
        let m = middle_curve(&l);
        let mirrored = m.map_components(|c| c.reflected(l.midpoint(), l.normal().angle()));
        assert!(m.hausdorff(&mirrored, 1e-3) < 1e-9);
        assert_eq!(class_label(&Curve::Cs(m)).unwrap(), ClassLabel::NotInLens);
    }

    #[test]
    fn identical_curves_give_a_loop() {
        let a = lens().shorter_arc(true);
        let t = build_homotopy(&Curve::Cs(a.clone()), &Curve::Cs(a.clone())).unwrap();
        assert!(verify_trace(&t).valid);
        assert!(t.first().uniform_distance(&a, 256) < 1e-12);
        assert!(t.last().uniform_distance(&a, 256) < 1e-12);
    }

    #[test]
    fn segment_and_shorter_arc_are_homotopic() {
        let l = lens();
        let seg = CsCurve::segment(l.kappa, l.x, l.y).unwrap();
        let t = build_homotopy(&Curve::Cs(seg.clone()), &Curve::Cs(l.shorter_arc(true))).unwrap();
        assert!(verify_trace(&t).valid);
        assert!(t.first().uniform_distance(&seg, 256) < 1e-12);
    }

    #[test]
    fn segment_and_longer_arc_are_not() {
        let l = lens();
        let seg = CsCurve::segment(l.kappa, l.x, l.y).unwrap();
        let err = build_homotopy(&Curve::Cs(seg), &Curve::Cs(l.longer_arc(true))).unwrap_err();
        assert_eq!(err, Error::ClassMismatch { a: ClassLabel::InLens, b: ClassLabel::NotInLens });
    }

    #[test]
    fn closed_bridge_between_opposite_circles() {
        let k = KappaParams::unit();
        let ccw = CsCurve::arc(k, Config::new(Point2::ORIGIN, 0.0), TAU).unwrap();
        let cw = CsCurve::arc(k, Config::new(Point2::ORIGIN, 1.0), -TAU).unwrap();
        let t = closed_bridge(&ccw, &cw).unwrap();
        assert!(verify_trace(&t).valid);
        assert!(t.last().hausdorff(&cw, 1e-3) < 1e-6);
    }

    #[test]
    fn closed_bridge_rotates_about_the_base_point() {
        let k = KappaParams::unit();
        let a = CsCurve::arc(k, Config::new(Point2::ORIGIN, 0.0), TAU).unwrap();
        let b = CsCurve::arc(k, Config::new(Point2::ORIGIN, 2.0), TAU).unwrap();
        let t = closed_bridge(&a, &b).unwrap();
        assert!(verify_trace(&t).valid);
        assert!(t.frames.iter().all(|f| (f.curve.total_length() - TAU).abs() < 1e-9));
    }
}
