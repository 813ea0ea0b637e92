//! The reduction process: normalization followed by length-decreasing
//! replacements until the curve reaches a length minimizer of its class.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::family::{sample_family, FamilySpec, Sampled};
use super::moves::{
    straighten_family,
    free_free_family, free_start_family, on_reversed, rotate_free_family, rotate_start_family, window_family,
};
use super::paths::{continue_csc, free_free_of, free_free_path, free_start_of, free_start_path, simplify, word_of};
use super::verify::delta_frame;
use super::{params, HomotopyTrace, MoveKind, TraceBuilder};
use crate::dubins::{breakpoint_configs, normalize, DEFAULT_LAMBDA};
use crate::error::{Error, Result};
use crate::geom::{normalize_angle, Component, Config, CsCurve, Curve, KappaParams, Point2, EPS_JOIN};
use crate::regions::{build_lens, label_unchecked, ClassLabel};
use crate::validation::LENGTH_TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReduceOptions {
    pub lambda: f64,
    /// Minimum number of frames per move.
    pub min_steps: usize,
    pub max_iterations: usize,
    /// A step must shorten the curve by more than this fraction of its length.
    pub tol_factor: f64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self { lambda: DEFAULT_LAMBDA, min_steps: 8, max_iterations: 10_000, tol_factor: 1e-10 }
    }
}

fn expected_labels(x: Point2, y: Point2, kappa: KappaParams) -> &'static [ClassLabel] {
    let d = x.dist(y);
    if d <= EPS_JOIN {
        &[ClassLabel::Closed]
    } else if d >= 2.0 * kappa.radius() {
        &[ClassLabel::Unrestricted]
    } else {
        &[ClassLabel::InLens, ClassLabel::NotInLens]
    }
}

fn circle_at(kappa: KappaParams, at: Config, side: f64) -> CsCurve {
    CsCurve::arc(kappa, at, side * TAU).expect("full circle")
}

/// The length minimizer picked for each class: the circle through `x`
/// centred straight above it, the segment, or the longer arc of `C1`.
pub fn canonical_minimizer(x: Point2, y: Point2, kappa: KappaParams, label: ClassLabel) -> Result<CsCurve> {
    if !expected_labels(x, y, kappa).contains(&label) {
        return Err(Error::Domain(format!("label {label} is not a class for d = {}", x.dist(y))));
    }
    Ok(match label {
        ClassLabel::Closed => circle_at(kappa, Config::new(x, 0.0), 1.0),
        ClassLabel::InLens | ClassLabel::Unrestricted => CsCurve::segment(kappa, x, y)?,
        ClassLabel::NotInLens => build_lens(x, y, kappa)?.longer_arc(true),
    })
}

/// Every minimizer a reduction may end on, for open curves: the segment,
/// and for `NotInLens` both longer arcs.
pub fn minimizers(x: Point2, y: Point2, kappa: KappaParams, label: ClassLabel) -> Result<Vec<CsCurve>> {
    Ok(match label {
        ClassLabel::NotInLens => {
            let lens = build_lens(x, y, kappa)?;
            vec![lens.longer_arc(true), lens.longer_arc(false)]
        }
        _ => vec![canonical_minimizer(x, y, kappa, label)?],
    })
}

struct Reducer {
    opts: ReduceOptions,
    gap: f64,
    label: ClassLabel,
    ends: (Point2, Point2),
}

struct Step {
    frames: Vec<CsCurve>,
    kind: MoveKind,
    params: BTreeMap<String, f64>,
}

#[derive(Debug)]
enum Candidate {
    Window { a: f64, b: f64 },
    FreeStart { b: f64 },
    FreeEnd { b: f64 },
    RotateStart { b: f64, sweep: f64 },
    RotateEnd { b: f64, sweep: f64 },
    RotateFree { reversed: bool, sweep: f64 },
    FreeFree { target: Point2 },
    Straighten,
}

impl Reducer {
    fn new(curve: &CsCurve, opts: ReduceOptions) -> Self {
        Self {
            opts,
            gap: 0.5 * delta_frame(curve.kappa()),
            label: label_unchecked(&Curve::Cs(curve.clone())),
            ends: (curve.start_point(), curve.end_point()),
        }
    }

    fn spec(&self) -> FamilySpec {
        FamilySpec { gap: self.gap, monotone: true, partial: true, min_steps: self.opts.min_steps, ends: Some(self.ends) }
    }

    /// A minimizer within half a frame step of `c`, when one exists.
    fn snap_target(&self, c: &CsCurve) -> Option<CsCurve> {
        let kappa = c.kappa();
        let targets = match self.label {
            ClassLabel::Closed => {
                let (s, e) = (c.start_config(), c.end_config());
                vec![circle_at(kappa, s, 1.0), circle_at(kappa, s, -1.0), circle_at(kappa, e, 1.0), circle_at(kappa, e, -1.0)]
            }
            label => minimizers(c.start_point(), c.end_point(), kappa, label).ok()?,
        };
        targets.into_iter().find(|m| {
            m.total_length() <= c.total_length() + LENGTH_TOL
                && super::family::frame_gap(c, m, self.gap) <= self.gap
                && label_unchecked(&Curve::Cs(m.clone())) == self.label
        })
    }

    fn candidates(&self, c: &CsCurve) -> Vec<(f64, Candidate)> {
        let r = c.kappa().radius();
        let o = c.offsets();
        let n = c.complexity();
        let x = c.start_point();
        let rev = c.reverse();
        let ro = rev.offsets();
        let mut out = Vec::new();
        for k in 2..=n {
            for i in 0..=n - k {
                let (a, b) = (o[i], o[i + k]);
                let (Ok(ca), Ok(cb)) = (c.config_at(a), c.config_at(b)) else { continue };
                if let Some(w) = continue_csc(ca, cb, r, None) {
                    out.push(((b - a) - w.length(), Candidate::Window { a, b }));
                }
            }
        }
        for k in 1..=n {
            if let Ok(cb) = c.config_at(o[k]) {
                if let Some(p) = free_start_path(x, cb, r, None) {
                    out.push((o[k] - p.length(), Candidate::FreeStart { b: o[k] }));
                }
            }
            if let Ok(cb) = rev.config_at(ro[k]) {
                if let Some(p) = free_start_path(rev.start_point(), cb, r, None) {
                    out.push((ro[k] - p.length(), Candidate::FreeEnd { b: ro[k] }));
                }
            }
        }
        let tol = self.opts.tol_factor * c.total_length();
        out.retain(|(g, _)| *g > tol);
        out.sort_by(|a, b| b.0.total_cmp(&a.0));
        if word_of(c).is_some() && x.dist(c.end_point()) > EPS_JOIN {
            out.push((c.total_length() - x.dist(c.end_point()), Candidate::Straighten));
        }
        for target in self.free_free_targets(c) {
            out.push((0.0, Candidate::FreeFree { target }));
        }
        out.extend(self.rotations(c, PI, TAU));
        out
    }

    /// End rotations either way, by `sweep` for CSC heads and `free_sweep`
    /// for free-start paths. Only ends whose first few components form a
    /// CSC word qualify, or a whole curve that is a free-start path.
    fn rotations(&self, c: &CsCurve, sweep: f64, free_sweep: f64) -> Vec<(f64, Candidate)> {
        let n = c.complexity();
        let o = c.offsets();
        let rev = c.reverse();
        let ro = rev.offsets();
        let mut out = Vec::new();
        for k in 1..=n.min(3) {
            for sweep in [sweep, -sweep] {
                if c.sub_curve(0.0, o[k]).ok().and_then(|h| word_of(&h)).is_some() {
                    out.push((0.0, Candidate::RotateStart { b: o[k], sweep }));
                }
                if rev.sub_curve(0.0, ro[k]).ok().and_then(|h| word_of(&h)).is_some() {
                    out.push((0.0, Candidate::RotateEnd { b: ro[k], sweep }));
                }
            }
        }
        for (reversed, curve) in [(false, c), (true, &rev)] {
            if free_start_of(curve).is_some() {
                for sweep in [free_sweep, -free_sweep] {
                    out.push((0.0, Candidate::RotateFree { reversed, sweep }));
                }
            }
        }
        out
    }

    /// Where to slide the circle of a one-arc curve: onto a minimizer's
    /// circle when the radius allows, and one radius down the length
    /// gradient.
    fn free_free_targets(&self, c: &CsCurve) -> Vec<Point2> {
        let Some(p) = free_free_of(c) else { return Vec::new() };
        let r = c.kappa().radius();
        let mut out = Vec::new();
        if (p.radius - r).abs() < 1e-9 {
            let (x, y) = (c.start_point(), c.end_point());
            match self.label {
                ClassLabel::Closed => {
                    let w = p.center - x;
                    if w.norm() > 1e-12 {
                        out.push(x + w * (r / w.norm()));
                    }
                }
                ClassLabel::NotInLens => {
                    if let Ok(lens) = build_lens(x, y, c.kappa()) {
                        out.extend([lens.c1, lens.c2]);
                    }
                }
                _ => {}
            }
        }
        let len = |q: Point2| free_free_path(p.from, p.to, q, p.radius, p.side, Some(&p)).map(|f| f.length());
        let h = 1e-7 * p.radius;
        let l0 = p.length();
        // one-sided where the endpoints sit on the circle and one side
        // would swallow them
        let grad = [Point2::new(h, 0.0), Point2::new(0.0, h)].map(|e| match (len(p.center + e), len(p.center - e)) {
            (Some(a), Some(b)) => (a - b) / (2.0 * h),
            (Some(a), None) => ((a - l0) / h).min(0.0),
            (None, Some(b)) => ((l0 - b) / h).max(0.0),
            (None, None) => 0.0,
        });
        let g = Point2::new(grad[0], grad[1]);
        if g.norm() > 1e-12 {
            out.push(p.center - g * (p.radius / g.norm()));
        }
        // nearer targets only nibble at the length one rounding step at a time
        out.retain(|t| t.dist(p.center) > 1e-7 * r);
        out
    }

    fn run(&self, c: &CsCurve, cand: &Candidate, spec: &FamilySpec) -> Option<Step> {
        let (s, kind, p): (Option<Sampled>, _, _) = match *cand {
            Candidate::Window { a, b } => (window_family(c, a, b, spec), MoveKind::TypeII, params(&[("a", a), ("b", b)])),
            Candidate::FreeStart { b } => (free_start_family(c, b, spec), MoveKind::TypeII, params(&[("a", 0.0), ("b", b)])),
            Candidate::FreeEnd { b } => (
                on_reversed(c, |rev| free_start_family(rev, b, spec)),
                MoveKind::TypeII,
                params(&[("a", c.total_length() - b), ("b", c.total_length())]),
            ),
            Candidate::RotateStart { b, sweep } => (
                rotate_start_family(c, b, sweep, spec),
                MoveKind::TypeI,
                params(&[("z", 0.0), ("side", sweep.signum()), ("b", b)]),
            ),
            Candidate::RotateEnd { b, sweep } => (
                on_reversed(c, |rev| rotate_start_family(rev, b, sweep, spec)),
                MoveKind::TypeI,
                params(&[("z", c.total_length()), ("side", -sweep.signum()), ("b", c.total_length() - b)]),
            ),
            Candidate::FreeFree { target } => (
                free_free_family(c, target, spec),
                MoveKind::TypeII,
                params(&[("a", 0.0), ("b", c.total_length()), ("cx", target.x), ("cy", target.y)]),
            ),
            Candidate::Straighten => (
                straighten_family(c, spec),
                MoveKind::TypeII,
                params(&[("a", 0.0), ("b", c.total_length()), ("straighten", 1.0)]),
            ),
            Candidate::RotateFree { reversed, sweep } => {
                let s = if reversed {
                    on_reversed(c, |rev| rotate_free_family(rev, sweep, spec))
                } else {
                    rotate_free_family(c, sweep, spec)
                };
                let z = if reversed { 0.0 } else { c.total_length() };
                (s, MoveKind::TypeI, params(&[("z", z), ("side", sweep.signum())]))
            }
        };
        let mut frames = s?.frames;
        let last = simplify(frames.last().unwrap());
        let tol = self.opts.tol_factor * c.total_length();
        // sliding a circle near a stationary position gains a little on
        // every call without getting anywhere
        let tol = match cand {
            Candidate::FreeFree { .. } => tol.max(1e-7 * c.kappa().radius()),
            _ => tol,
        };
        if last.total_length() >= c.total_length() - tol || last.complexity() > c.complexity() {
            return None;
        }
        *frames.last_mut().unwrap() = last;
        Some(Step { frames, kind, params: p })
    }

    /// The first candidate that shortens the curve along a length
    /// nonincreasing family. Failing that, a full turn of an end tangent,
    /// which may lengthen the curve on the way but ends shorter: this is how
    /// loops that are local length minima get undone.
    fn step(&self, c: &CsCurve) -> Option<Step> {
        let spec = self.spec();
        if let Some(s) = self.candidates(c).iter().find_map(|(_, cand)| self.run(c, cand, &spec)) {
            return Some(s);
        }
        let spec = FamilySpec { monotone: false, partial: false, ..spec };
        self.rotations(c, TAU, TAU).iter().find_map(|(_, cand)| {
            let mut s = self.run(c, cand, &spec)?;
            s.params.insert("escape".into(), 1.0);
            Some(s)
        })
    }
}

/// The best single length-decreasing move from `curve`, if any.
pub fn reduce_step(curve: &CsCurve) -> Option<(CsCurve, HomotopyTrace)> {
    let c = simplify(curve);
    let red = Reducer::new(&c, ReduceOptions::default());
    let step = red.step(&c)?;
    let mut b = TraceBuilder::new(curve.clone());
    b.append(step.frames, step.kind, step.params);
    let t = b.finish();
    Some((t.last().clone(), t))
}

/// Fragment-by-fragment replacement of a cs curve by its normalization.
fn normalize_trace(curve: &CsCurve, opts: &ReduceOptions, b: &mut TraceBuilder) -> Result<()> {
    let cuts = breakpoint_configs(&Curve::Cs(curve.clone()), opts.lambda)?;
    let spec = FamilySpec {
        gap: 0.5 * delta_frame(curve.kappa()),
        monotone: true,
        partial: false,
        min_steps: opts.min_steps,
        ends: Some((curve.start_point(), curve.end_point())),
    };
    let mut cursor = 0.0;
    for w in cuts.windows(2) {
        let len = w[1].0 - w[0].0;
        let cur = b.last().clone();
        match window_family(&cur, cursor, cursor + len, &spec) {
            Some(s) => {
                let done = s.last().total_length() - (cur.total_length() - cursor - len);
                b.append(s.frames, MoveKind::FragmentReplacement, params(&[("t0", w[0].0), ("t1", w[1].0)]));
                cursor = done;
            }
            None => cursor += len,
        }
    }
    Ok(())
}

pub fn reduce(curve: &Curve) -> Result<HomotopyTrace> {
    reduce_with(curve, &ReduceOptions::default())
}

/// Normalizes, then applies length-decreasing moves until the curve is
/// within half a frame step of a minimizer, which becomes the last frame.
/// Closed curves finish by turning their circle about `x` until its centre
/// is straight above `x`.
pub fn reduce_with(curve: &Curve, opts: &ReduceOptions) -> Result<HomotopyTrace> {
    let start = match curve {
        Curve::Cs(c) => c.clone(),
        Curve::Sampled(_) => normalize(curve, opts.lambda)?,
    };
    let mut b = TraceBuilder::new(start.clone());
    let red = Reducer::new(&start, *opts);
    if red.snap_target(&start).is_none() {
        normalize_trace(&start, opts, &mut b)?;
    }
    let mut snapped = false;
    for _ in 0..opts.max_iterations {
        let cur = simplify(b.last());
        if let Some(m) = red.snap_target(&cur) {
            if m.uniform_distance(&cur, 256) > 1e-12 {
                b.append(vec![cur, m], MoveKind::FragmentReplacement, BTreeMap::new());
            }
            snapped = true;
            break;
        }
        match red.step(&cur) {
            Some(s) => b.append(s.frames, s.kind, s.params),
            None => {
                return Err(Error::NonConvergence(format!(
                    "no length-decreasing move from a {} curve of length {} and complexity {}",
                    red.label,
                    cur.total_length(),
                    cur.complexity()
                )))
            }
        }
    }
    if !snapped {
        return Err(Error::NonConvergence(format!("no minimizer after {} moves", opts.max_iterations)));
    }
    if red.label == ClassLabel::Closed {
        turn_circle_upright(&mut b, red.gap, opts.min_steps)?;
    }
    Ok(b.finish())
}

/// Centre of a full-circle curve.
fn circle_center(c: &CsCurve) -> Option<Point2> {
    match c.components() {
        [Component::Arc(a)] => Some(a.center),
        _ => None,
    }
}

fn turn_circle_upright(b: &mut TraceBuilder, gap: f64, min_steps: usize) -> Result<()> {
    let circle = b.last().clone();
    let x = circle.start_point();
    let center = circle_center(&circle).ok_or_else(|| Error::Domain("closed minimizer is not a single circle".into()))?;
    let turn = normalize_angle(FRAC_PI_2 - (center - x).angle());
    if turn.abs() < 1e-12 {
        return Ok(());
    }
    let s = circle_rotation(&circle, turn, gap, min_steps).ok_or_else(|| Error::Domain("circle rotation about x failed".into()))?;
    b.append(s.frames, MoveKind::TypeI, params(&[("z", 0.0), ("phi", turn)]));
    Ok(())
}

/// Rotating a circle through `x` about `x`.
pub(crate) fn circle_rotation(circle: &CsCurve, turn: f64, gap: f64, min_steps: usize) -> Option<Sampled> {
    let x = circle.start_point();
    let spec = FamilySpec { gap, monotone: true, partial: false, min_steps, ends: Some((x, x)) };
    sample_family(circle, (), &spec, |p, _| Some((circle.map_components(|c| c.rotated_about(x, p * turn)), ())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ArcComponent;
    use crate::homotopy::verify_trace;
    use crate::regions::{build_lens, LensGeometry};

    fn lens() -> LensGeometry {
        build_lens(Point2::ORIGIN, Point2::new(1.0, 0.0), KappaParams::unit()).unwrap()
    }

    fn zigzag() -> CsCurve {
        let mut at = Config::new(Point2::ORIGIN, 0.0);
        let mut comps = Vec::new();
        for s in [0.5, -1.0, 1.0, -0.5] {
            let c = Component::Arc(ArcComponent::from_config(at, 1.0, s));
            at = c.end_config();
            comps.push(c);
        }
        CsCurve::new(KappaParams::unit(), comps).unwrap()
    }

    #[test]
    fn minimizer_lengths() {
        let k = KappaParams::unit();
        let (x, y) = (Point2::ORIGIN, Point2::new(1.0, 0.0));
        assert!((canonical_minimizer(x, x, k, ClassLabel::Closed).unwrap().total_length() - TAU).abs() < 1e-12);
        assert!((canonical_minimizer(x, y, k, ClassLabel::InLens).unwrap().total_length() - 1.0).abs() < 1e-12);
        let arc = canonical_minimizer(x, y, k, ClassLabel::NotInLens).unwrap();
        assert!((arc.total_length() - 5.0 * PI / 3.0).abs() < 1e-12);
        assert!(canonical_minimizer(x, y, k, ClassLabel::Closed).is_err());
        assert!(canonical_minimizer(x, Point2::new(3.0, 0.0), k, ClassLabel::InLens).is_err());
    }

    #[test]
    fn closed_minimizer_has_horizontal_tangent() {
        let c = canonical_minimizer(Point2::ORIGIN, Point2::ORIGIN, KappaParams::unit(), ClassLabel::Closed).unwrap();
        assert_eq!(c.start_config().heading, 0.0);
    }

    #[test]
    fn segment_and_longer_arc_admit_no_step() {
        let l = lens();
        assert!(reduce_step(&CsCurve::segment(l.kappa, l.x, l.y).unwrap()).is_none());
        assert!(reduce_step(&l.longer_arc(true)).is_none());
        assert!(reduce_step(&l.longer_arc(false)).is_none());
    }

    #[test]
    fn zigzag_step_is_shorter() {
        let z = zigzag();
        let (next, trace) = reduce_step(&z).expect("a shorter curve exists");
        assert!(next.total_length() < z.total_length() - 1e-6);
        assert!(verify_trace(&trace).valid);
    }

    #[test]
    fn shorter_arc_reduces_to_the_segment() {
        let l = lens();
        let t = reduce(&Curve::Cs(l.shorter_arc(true))).unwrap();
        assert!((t.last().total_length() - 1.0).abs() < 1e-6);
        assert!(verify_trace(&t).valid);
    }

    #[test]
    fn looped_circle_reduces_to_one_turn() {
        let k = KappaParams::unit();
        let twice = CsCurve::arc(k, Config::new(Point2::ORIGIN, 0.3), 2.0 * TAU).unwrap();
        let t = reduce(&Curve::Cs(twice)).unwrap();
        assert!((t.last().total_length() - TAU).abs() < 1e-6);
        assert!(verify_trace(&t).valid);
    }

    #[test]
    fn sampled_input_is_normalized_first() {
        let l = lens();
        let s = l.shorter_arc(false).sample(0.01).unwrap();
        let t = reduce(&Curve::Sampled(s)).unwrap();
        assert!((t.last().total_length() - 1.0).abs() < 1e-6);
    }
}
