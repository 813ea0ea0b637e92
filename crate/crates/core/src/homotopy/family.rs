//! Adaptive sampling of one-parameter curve families into frames.

use crate::geom::{max_pair_distance, CsCurve, Curve, Point2, EPS_JOIN};
use crate::regions::{label_unchecked, ClassLabel};
use crate::validation::{validate_cs, LENGTH_TOL};

#[derive(Debug, Clone, Copy)]
pub(crate) struct FamilySpec {
    /// Bound on the proportional-parameterization distance between frames.
    pub gap: f64,
    /// Reject any frame longer than its predecessor.
    pub monotone: bool,
    /// Keep the frames produced so far when the family breaks down.
    pub partial: bool,
    pub min_steps: usize,
    /// Endpoints every frame must keep, in either order; the first frame's
    /// when unset.
    pub ends: Option<(Point2, Point2)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Sampled {
    /// Starts with the family's first frame.
    pub frames: Vec<CsCurve>,
    pub complete: bool,
}

impl Sampled {
    pub fn last(&self) -> &CsCurve {
        self.frames.last().unwrap()
    }
}

/// Checks shared by every frame of a family.
pub(crate) struct FrameGuard {
    x: Point2,
    y: Point2,
    label: ClassLabel,
}

impl FrameGuard {
    pub fn new(first: &CsCurve, ends: Option<(Point2, Point2)>) -> Self {
        let (mut x, mut y) = ends.unwrap_or((first.start_point(), first.end_point()));
        // families run on reversed curves too
        if first.start_point().dist(y) < first.start_point().dist(x) {
            std::mem::swap(&mut x, &mut y);
        }
        Self { x, y, label: label_unchecked(&Curve::Cs(first.clone())) }
    }

    pub fn accepts(&self, c: &CsCurve) -> bool {
        c.start_point().dist(self.x) <= EPS_JOIN
            && c.end_point().dist(self.y) <= EPS_JOIN
            && validate_cs(c).valid
            && label_unchecked(&Curve::Cs(c.clone())) == self.label
    }
}

/// Sample count for comparing frames of length up to `l`, rounded up so
/// that neighbouring frames usually share it.
fn gap_samples(l: f64, gap: f64) -> usize {
    (((l / gap) as usize).clamp(32, 2000) + 63) / 64 * 64
}

pub(crate) fn frame_gap(a: &CsCurve, b: &CsCurve, gap: f64) -> f64 {
    a.uniform_distance(b, gap_samples(a.total_length().max(b.total_length()), gap))
}

/// [`frame_gap`] against a fixed previous frame, keeping its samples.
struct GapMeter {
    n: usize,
    prev: Vec<Point2>,
    scratch: Vec<Point2>,
}

impl GapMeter {
    fn new() -> Self {
        Self { n: 0, prev: Vec::new(), scratch: Vec::new() }
    }

    fn reset(&mut self) {
        self.n = 0;
    }

    fn gap(&mut self, prev: &CsCurve, c: &CsCurve, gap: f64) -> f64 {
        let n = gap_samples(prev.total_length().max(c.total_length()), gap);
        if n != self.n {
            prev.uniform_points_into(n, &mut self.prev);
            self.n = n;
        }
        c.uniform_points_into(n, &mut self.scratch);
        max_pair_distance(&self.prev, &self.scratch)
    }
}

const MIN_STEP: f64 = 1e-5;

/// Walks `p` from 0 to 1, halving the step whenever a frame is rejected or
/// too far from its predecessor. `f` receives the state of the previous
/// accepted frame so that branch choices stay continuous.
///
/// Returns `None` when the family gives up before producing a second frame,
/// or when it breaks down and `spec.partial` is unset.
pub(crate) fn sample_family<S: Clone>(
    first: &CsCurve,
    state: S,
    spec: &FamilySpec,
    mut f: impl FnMut(f64, &S) -> Option<(CsCurve, S)>,
) -> Option<Sampled> {
    let guard = FrameGuard::new(first, spec.ends);
    let max_step = 1.0 / spec.min_steps.max(1) as f64;
    let mut frames = vec![first.clone()];
    let mut state = state;
    let mut p = 0.0;
    let mut h = max_step;
    let mut complete = false;
    let mut meter = GapMeter::new();
    while p < 1.0 {
        let next = (p + h).min(1.0);
        let prev = frames.last().unwrap();
        let mut increased = false;
        let res = f(next, &state);
        let accepted = match res {
            Some((c, s)) if guard.accepts(&c) && meter.gap(prev, &c, spec.gap) <= spec.gap => {
                if spec.monotone && c.total_length() > prev.total_length() + LENGTH_TOL {
                    increased = true;
                    None
                } else {
                    Some((c, s))
                }
            }
            _ => None,
        };
        match accepted {
            Some((c, s)) => {
                frames.push(c);
                meter.reset();
                state = s;
                p = next;
                h = (2.0 * h).min(max_step);
                if p >= 1.0 {
                    complete = true;
                }
            }
            None if increased && h <= max_step * 0.25 => break,
            None => {
                h *= 0.5;
                if h < MIN_STEP {
                    break;
                }
            }
        }
    }
    if complete || (spec.partial && frames.len() > 1) {
        Some(Sampled { frames, complete })
    } else {
        None
    }
}
