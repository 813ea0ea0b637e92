use super::HomotopyTrace;
use crate::geom::{CsCurve, Curve, KappaParams, EPS_JOIN};
use crate::regions::label_unchecked;
use crate::validation::{validate_cs, ValidationReport, ViolationKind};

/// Largest Hausdorff distance allowed between consecutive frames.
pub fn delta_frame(kappa: KappaParams) -> f64 {
    0.01 * kappa.radius()
}

/// Upper bound on the Hausdorff distance between two frames. The cheap
/// bound comes from the proportional parameterization: between samples
/// `1/n` apart the pointwise distance grows by at most `(La + Lb) / 2n`.
/// Only if that is inconclusive are the curves compared directly, sampling
/// at spacing `h`, which underestimates by at most `h / 2`.
fn frame_jump_bound(a: &CsCurve, b: &CsCurve, delta: f64) -> f64 {
    let total = a.total_length() + b.total_length();
    let n = ((2.0 * total / delta).ceil() as usize).max(16);
    let bound = a.uniform_distance(b, n) + total / (2.0 * n as f64);
    if bound <= delta {
        return bound;
    }
    let h = 0.5 * delta;
    a.hausdorff(b, h) + 0.5 * h
}

/// Every frame valid, endpoints fixed, `p` running from 0 to 1, consecutive
/// frames within `delta_frame` and one class label throughout.
pub fn verify_trace(trace: &HomotopyTrace) -> ValidationReport {
    let mut rep = ValidationReport::empty();
    let Some(first) = trace.frames.first() else {
        rep.push(0.0, ViolationKind::FrameOrder, 0.0, None);
        return rep;
    };
    let n = trace.frames.len();
    if first.p != 0.0 {
        rep.push(first.p, ViolationKind::FrameOrder, first.p, Some(0));
    }
    if n > 1 && trace.frames[n - 1].p != 1.0 {
        let p = trace.frames[n - 1].p;
        rep.push(p, ViolationKind::FrameOrder, (1.0 - p).abs(), Some(n - 1));
    }
    let delta = delta_frame(trace.kappa());
    let (x, y) = (first.curve.start_point(), first.curve.end_point());
    let label = label_unchecked(&Curve::Cs(first.curve.clone()));
    for (i, f) in trace.frames.iter().enumerate() {
        rep.absorb(i, f.p, &validate_cs(&f.curve));
        let motion = f.curve.start_point().dist(x).max(f.curve.end_point().dist(y));
        if motion > EPS_JOIN {
            rep.push(f.p, ViolationKind::EndpointMotion, motion, Some(i));
        }
        if label_unchecked(&Curve::Cs(f.curve.clone())) != label {
            rep.push(f.p, ViolationKind::ClassChange, 1.0, Some(i));
        }
        if i > 0 {
            let prev = &trace.frames[i - 1];
            if f.p <= prev.p {
                rep.push(f.p, ViolationKind::FrameOrder, prev.p - f.p, Some(i));
            }
            let jump = frame_jump_bound(&prev.curve, &f.curve, delta);
            if jump > delta {
                rep.push(f.p, ViolationKind::FrameJump, jump, Some(i));
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    use crate::geom::{ArcComponent, Component, Point2};
    use crate::homotopy::{reduce, Frame};
    use crate::regions::build_lens;

    fn sample_trace() -> HomotopyTrace {
        let l = build_lens(Point2::ORIGIN, Point2::new(1.0, 0.0), KappaParams::unit()).unwrap();
        reduce(&Curve::Cs(l.shorter_arc(true))).unwrap()
    }

    #[test]
    fn reduce_output_verifies() {
        assert!(verify_trace(&sample_trace()).valid);
    }

    #[test]
    fn tight_frame_is_located() {
        let mut t = sample_trace();
        let k = t.frames.len() / 2;
        // radius 2/3 arc over the same chord
        let h = (4.0f64 / 9.0 - 0.25).sqrt();
        let center = Point2::new(0.5, -h);
        let start = (Point2::ORIGIN - center).angle();
        let sweep = -(PI - 2.0 * h.atan2(0.5));
        let arc = ArcComponent::new(center, 2.0 / 3.0, start, sweep);
        t.frames[k].curve = CsCurve::new(KappaParams::unit(), vec![Component::Arc(arc)]).unwrap();
        assert!(t.frames[k].curve.end_point().dist(Point2::new(1.0, 0.0)) < 1e-12);
        let rep = verify_trace(&t);
        assert!(!rep.valid);
        let v = rep.violations.iter().find(|v| v.kind == ViolationKind::InvalidFrame).unwrap();
        assert_eq!(v.frame, Some(k));
        assert!((rep.max_curvature - 1.5).abs() < 1e-9);
    }

    #[test]
    fn jump_across_the_lens_boundary_changes_class() {
        let l = build_lens(Point2::ORIGIN, Point2::new(1.0, 0.0), KappaParams::unit()).unwrap();
        let t = HomotopyTrace {
            frames: vec![
                Frame { p: 0.0, curve: l.shorter_arc(true) },
                Frame { p: 1.0, curve: l.longer_arc(false) },
            ],
            moves: vec![],
        };
        let rep = verify_trace(&t);
        assert!(rep.violations.iter().any(|v| v.kind == ViolationKind::ClassChange && v.frame == Some(1)));
    }

    #[test]
    fn moving_endpoint_is_reported() {
        let k = KappaParams::unit();
        let a = CsCurve::segment(k, Point2::ORIGIN, Point2::new(1.0, 0.0)).unwrap();
        let b = CsCurve::segment(k, Point2::ORIGIN, Point2::new(1.0, 1e-6)).unwrap();
        let t = HomotopyTrace { frames: vec![Frame { p: 0.0, curve: a }, Frame { p: 1.0, curve: b }], moves: vec![] };
        let rep = verify_trace(&t);
        assert_eq!(rep.first_violation().unwrap().kind, ViolationKind::EndpointMotion);
    }

    #[test]
    fn frame_jump_bound_is_an_upper_bound() {
        let k = KappaParams::unit();
        let a = CsCurve::segment(k, Point2::ORIGIN, Point2::new(1.0, 0.0)).unwrap();
        let l = build_lens(Point2::ORIGIN, Point2::new(1.0, 0.0), k).unwrap();
        let b = l.shorter_arc(true);
        // sagitta of the shorter arc
        let sagitta = 1.0 - (3.0f64).sqrt() / 2.0;
        assert!(frame_jump_bound(&a, &b, 1.0) >= sagitta - 1e-12);
    }
}
