//! Arc-segment-arc paths between configurations, fragmentation and
//! normalization of valid curves into cs curves.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    wrap_positive, ArcComponent, Component, Config, CsCurve, Curve, KappaParams, Point2, SegmentComponent,
    EPS_DEGENERATE,
};

/// Default fragmentation fraction.
pub const DEFAULT_LAMBDA: f64 = 0.9;

/// Bound on how far a replacement may exceed its fragment.
pub const REPLACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WordKind {
    LSL,
    LSR,
    RSL,
    RSR,
}

impl WordKind {
    pub const ALL: [WordKind; 4] = [WordKind::LSL, WordKind::LSR, WordKind::RSL, WordKind::RSR];

    /// Turning sides `(first, second)`, `+1` for left.
    pub fn sides(self) -> (f64, f64) {
        match self {
            WordKind::LSL => (1.0, 1.0),
            WordKind::LSR => (1.0, -1.0),
            WordKind::RSL => (-1.0, 1.0),
            WordKind::RSR => (-1.0, -1.0),
        }
    }
}

impl fmt::Display for WordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One CSC path. Sweeps carry the turning side in their sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CscWord {
    pub kind: WordKind,
    pub arc1_sweep: f64,
    pub seg_length: f64,
    pub arc2_sweep: f64,
    pub start: Config,
    pub radius: f64,
}

impl CscWord {
    pub fn length(&self) -> f64 {
        self.radius * (self.arc1_sweep.abs() + self.arc2_sweep.abs()) + self.seg_length
    }

    /// The three pieces, including degenerate ones.
    pub fn pieces(&self) -> [Component; 3] {
        let a1 = ArcComponent::from_config(self.start, self.radius, self.arc1_sweep);
        let a1 = fix_side(a1, self.start, self.radius, self.kind.sides().0);
        let c1 = Component::Arc(a1).end_config();
        let s = SegmentComponent::from_config(c1, self.seg_length);
        let c2 = Config::new(s.end, c1.heading);
        let a2 = ArcComponent::from_config(c2, self.radius, self.arc2_sweep);
        let a2 = fix_side(a2, c2, self.radius, self.kind.sides().1);
        [Component::Arc(a1), Component::Segment(s), Component::Arc(a2)]
    }

    pub fn end_config(&self) -> Config {
        self.pieces()[2].end_config()
    }

    pub fn to_curve(&self, kappa: KappaParams) -> Result<CsCurve> {
        let pieces: Vec<Component> = self.pieces().into_iter().filter(|c| c.length() >= EPS_DEGENERATE).collect();
        if pieces.is_empty() {
            return Err(Error::Domain("CSC word has zero length".into()));
        }
        CsCurve::new(kappa, pieces)
    }

    /// Both sweeps vanish.
    pub fn is_straight(&self) -> bool {
        self.arc1_sweep == 0.0 && self.arc2_sweep == 0.0
    }
}

// A zero sweep loses the turning side in `from_config`; keep the word's side.
fn fix_side(a: ArcComponent, start: Config, radius: f64, side: f64) -> ArcComponent {
    if a.sweep != 0.0 {
        return a;
    }
    let center = start.position + start.direction().perp() * (side * radius);
    ArcComponent { center, radius, start_angle: (start.position - center).angle(), sweep: 0.0 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CscSolution {
    pub candidates: Vec<CscWord>,
    pub best: CscWord,
}

/// Sweep from heading `from` to heading `to` turning on `side`, in `[0, 2pi)`
/// times the side. Values within rounding of a full turn collapse to 0.
fn side_sweep(side: f64, from: f64, to: f64) -> f64 {
    let mut w = wrap_positive(side * (to - from));
    if TAU - w < 1e-11 || w < 1e-14 {
        w = 0.0;
    }
    side * w
}

/// Tangent-line construction for a single word.
pub fn solve_word(kind: WordKind, start: Config, end: Config, r: f64) -> Option<CscWord> {
    let (s1, s2) = kind.sides();
    let c1 = start.position + start.direction().perp() * (s1 * r);
    let c2 = end.position + end.direction().perp() * (s2 * r);
    let v = c2 - c1;
    let dd = v.dot(v);
    // offset between the tangency points, across the line direction
    let k = (s1 - s2) * r;
    let d = dd.sqrt();
    let (heading, seg) = if k == 0.0 {
        if d <= 1e-12 * r {
            (end.heading, 0.0)
        } else {
            (v.angle(), d)
        }
    } else {
        let l2 = dd - k * k;
        if l2 < -1e-12 * r * r {
            return None;
        }
        // tangent circles: rounding leaves a spurious segment of length
        // about sqrt(eps) whose heading is noise; snapping it moves the end
        // by l^2 / 4r at most
        let l = if l2 < 1e-12 * r * r { 0.0 } else { l2.sqrt() };
        (v.angle() + k.atan2(l), l)
    };
    Some(CscWord {
        kind,
        arc1_sweep: side_sweep(s1, start.heading, heading),
        seg_length: seg,
        arc2_sweep: side_sweep(s2, heading, end.heading),
        start,
        radius: r,
    })
}

/// All feasible CSC words from `start` to `end`, and the shortest.
/// Ties go to the earlier word in `LSL < LSR < RSL < RSR`.
pub fn solve_csc(start: Config, end: Config, kappa: KappaParams) -> Result<CscSolution> {
    let r = kappa.radius();
    let candidates: Vec<CscWord> = WordKind::ALL.iter().filter_map(|&w| solve_word(w, start, end, r)).collect();
    let mut best: Option<CscWord> = None;
    for c in &candidates {
        let tie = 1e-12 * (1.0 + c.length());
        if best.map_or(true, |b| c.length() < b.length() - tie) {
            best = Some(*c);
        }
    }
    match best {
        Some(best) => Ok(CscSolution { candidates, best }),
        None => Err(Error::Infeasible { start, end }),
    }
}

/// Breakpoints `0 = t_0 < ... < t_m = s` of an equal-piece fragmentation.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragmentation {
    pub breakpoints: Vec<f64>,
}

impl Fragmentation {
    pub fn pieces(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn piece_length(&self, i: usize) -> f64 {
        self.breakpoints[i + 1] - self.breakpoints[i]
    }
}

/// `m = ceil(s / (lambda r))` equal pieces.
pub fn fragmentation(curve: &Curve, lambda: f64) -> Result<Fragmentation> {
    fragment_length(curve.total_length(), curve.kappa().radius(), lambda)
}

pub(crate) fn fragment_length(s: f64, r: f64, lambda: f64) -> Result<Fragmentation> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Precondition(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let m = ((s / (lambda * r)).ceil() as usize).max(1);
    let mut breakpoints: Vec<f64> = (0..=m).map(|i| s * i as f64 / m as f64).collect();
    breakpoints[m] = s;
    Ok(Fragmentation { breakpoints })
}

/// Cs curve through a sequence of configurations, joining each consecutive
/// pair with its minimal CSC word.
pub fn csc_chain(configs: &[Config], kappa: KappaParams) -> Result<CsCurve> {
    let mut comps = Vec::new();
    for w in configs.windows(2) {
        let sol = solve_csc(w[0], w[1], kappa)?;
        comps.extend(sol.best.pieces().into_iter().filter(|c| c.length() >= EPS_DEGENERATE));
    }
    CsCurve::new(kappa, comps)
}

/// Endpoint data of a curve piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragment {
    pub start: Config,
    pub end: Config,
    pub length: f64,
}

impl Fragment {
    pub fn of_cs(curve: &CsCurve, t0: f64, t1: f64) -> Result<Self> {
        Ok(Self { start: curve.config_at(t0)?, end: curve.config_at(t1)?, length: t1 - t0 })
    }
}

/// Minimal CSC between the fragment's endpoint configurations.
pub fn replace_fragment(fragment: &Fragment, kappa: KappaParams) -> Result<CsCurve> {
    let r = kappa.radius();
    if fragment.length >= r {
        return Err(Error::Precondition(format!(
            "fragment length {} is not below the minimum radius {r}",
            fragment.length
        )));
    }
    let sol = solve_csc(fragment.start, fragment.end, kappa)?;
    sol.best.to_curve(kappa)
}

/// Breakpoint configurations used when normalizing `curve`.
///
/// Cs curves are cut at equal arc-length pieces. Sampled curves are cut at the
/// samples nearest to those values, with the discrete tangent estimate there,
/// so that breakpoints are genuine curve points.
pub fn breakpoint_configs(curve: &Curve, lambda: f64) -> Result<Vec<(f64, Config)>> {
    let frag = fragmentation(curve, lambda)?;
    match curve {
        Curve::Cs(c) => frag.breakpoints.iter().map(|&t| Ok((t, c.config_at(t)?))).collect(),
        Curve::Sampled(s) => {
            let tangents = s.unwrapped_tangents();
            let mut idx: Vec<usize> = frag.breakpoints.iter().map(|&t| s.nearest_index(t)).collect();
            idx[0] = 0;
            *idx.last_mut().unwrap() = s.points().len() - 1;
            idx.dedup();
            Ok(idx
                .into_iter()
                .map(|i| (s.cumulative_lengths()[i], Config::new(s.points()[i], tangents[i])))
                .collect())
        }
    }
}

/// Concatenation of the minimal CSC replacement of every fragment.
pub fn normalize(curve: &Curve, lambda: f64) -> Result<CsCurve> {
    let kappa = curve.kappa();
    let cuts = breakpoint_configs(curve, lambda)?;
    let mut comps: Vec<Component> = Vec::new();
    for w in cuts.windows(2) {
        let sol = solve_csc(w[0].1, w[1].1, kappa)?;
        comps.extend(sol.best.pieces().into_iter().filter(|c| c.length() >= EPS_DEGENERATE));
    }
    if comps.is_empty() {
        return Err(Error::Domain("normalization produced an empty curve".into()));
    }
    let mut out = CsCurve::new(kappa, comps)?;
    pin_endpoints(&mut out, curve.start_point(), curve.end_point());
    Ok(out)
}

/// Nudges the first and last components so the curve starts and ends exactly
/// at the given points. Only rounding-level corrections are expected.
pub(crate) fn pin_endpoints(curve: &mut CsCurve, start: Point2, end: Point2) {
    let mut comps = curve.components().to_vec();
    if let Some(Component::Segment(s)) = comps.first_mut() {
        s.start = start;
    }
    if let Some(Component::Segment(s)) = comps.last_mut() {
        s.end = end;
    }
    *curve = CsCurve::new(curve.kappa(), comps).expect("pinning keeps the curve non-empty");
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;

    fn cfg(x: f64, y: f64, h: f64) -> Config {
        Config::new(Point2::new(x, y), h)
    }

    #[test]
    fn straight_pair_is_degenerate_lsl() {
        let sol = solve_csc(cfg(0.0, 0.0, 0.0), cfg(4.0, 0.0, 0.0), KappaParams::unit()).unwrap();
        assert_eq!(sol.best.kind, WordKind::LSL);
        assert!(sol.best.is_straight());
        assert!((sol.best.length() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn half_turn_and_quarter_turns() {
        let k = KappaParams::unit();
        let sol = solve_csc(cfg(0.0, 0.0, 0.0), cfg(0.0, 2.0, PI), k).unwrap();
        assert!((sol.best.length() - PI).abs() < 1e-12);
        assert!((sol.best.arc1_sweep.abs() + sol.best.arc2_sweep.abs() - PI).abs() < 1e-12);
        assert!(sol.best.seg_length < 1e-12);
        let sol = solve_csc(cfg(0.0, 0.0, 0.0), cfg(2.0, 2.0, FRAC_PI_2), k).unwrap();
        assert_eq!(sol.best.kind, WordKind::LSL);
        assert!((sol.best.length() - (FRAC_PI_2 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn every_word_reaches_the_goal() {
        let k = KappaParams::from_radius(0.7).unwrap();
        let a = cfg(0.3, -0.2, 1.1);
        let b = cfg(2.5, 1.9, -2.4);
        let sol = solve_csc(a, b, k).unwrap();
        assert_eq!(sol.candidates.len(), 4);
        for w in &sol.candidates {
            assert!(w.end_config().approx_eq(&b, 1e-9), "{:?}", w.kind);
            assert!(w.arc1_sweep.abs() < TAU && w.arc2_sweep.abs() < TAU);
            assert!(sol.best.length() <= w.length());
        }
    }

    #[test]
    fn inner_tangent_words_need_room() {
        // coincident configurations: LSR and RSL circles overlap
        let k = KappaParams::unit();
        let a = cfg(0.0, 0.0, 0.0);
        let b = cfg(0.1, 0.0, PI);
        let sol = solve_csc(a, b, k).unwrap();
        assert!(sol.candidates.iter().all(|w| w.kind == WordKind::LSL || w.kind == WordKind::RSR));
    }

    #[test]
    fn fragmentation_arithmetic() {
        let f = fragment_length(2.5, 1.0, 0.9).unwrap();
        assert_eq!(f.pieces(), 3);
        assert!((f.piece_length(1) - 2.5 / 3.0).abs() < 1e-15);
        assert_eq!(fragment_length(0.5, 1.0, 0.9).unwrap().pieces(), 1);
        assert!(fragment_length(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn replacing_csc_fragments_is_identity() {
        let k = KappaParams::unit();
        let seg = CsCurve::segment(k, Point2::ORIGIN, Point2::new(0.8, 0.0)).unwrap();
        let f = Fragment::of_cs(&seg, 0.0, 0.8).unwrap();
        let r = replace_fragment(&f, k).unwrap();
        assert_eq!(r.complexity(), 1);
        assert!((r.total_length() - 0.8).abs() < 1e-12);

        let arc = CsCurve::arc(k, cfg(0.0, 0.0, 0.3), 0.5).unwrap();
        let f = Fragment::of_cs(&arc, 0.0, 0.5).unwrap();
        let r = replace_fragment(&f, k).unwrap();
        assert!((r.total_length() - 0.5).abs() < 1e-12);
        assert!(r.hausdorff(&arc, 1e-3) < 1e-9);
    }

    fn arc_chain(sweeps: &[f64]) -> CsCurve {
        let mut at = cfg(0.0, 0.0, 0.0);
        let mut comps = Vec::new();
        for &s in sweeps {
            let a = Component::Arc(ArcComponent::from_config(at, 1.0, s));
            at = a.end_config();
            comps.push(a);
        }
        CsCurve::new(KappaParams::unit(), comps).unwrap()
    }

    #[test]
    fn s_curve_is_already_a_word() {
        // two opposite arcs are LSR with an empty segment
        let k = KappaParams::unit();
        let c = arc_chain(&[0.45, -0.45]);
        let f = Fragment::of_cs(&c, 0.0, c.total_length()).unwrap();
        let r = replace_fragment(&f, k).unwrap();
        assert!((r.total_length() - c.total_length()).abs() < 1e-12);
        assert!(r.hausdorff(&c, 1e-3) < 1e-9);
        assert!(replace_fragment(&Fragment { length: 1.0, ..f }, k).is_err());
    }

    #[test]
    fn three_arc_wiggle_gets_shorter() {
        let k = KappaParams::unit();
        let c = arc_chain(&[0.25, -0.3, 0.25]);
        let f = Fragment::of_cs(&c, 0.0, c.total_length()).unwrap();
        let r = replace_fragment(&f, k).unwrap();
        assert!(r.total_length() < c.total_length() - 1e-6);
        assert!(r.end_point().dist(c.end_point()) < 1e-12);
    }

    #[test]
    fn normalizing_a_circle() {
        let k = KappaParams::unit();
        let circle = CsCurve::arc(k, cfg(0.0, 0.0, 0.0), TAU).unwrap();
        let n = normalize(&Curve::Cs(circle.clone()), DEFAULT_LAMBDA).unwrap();
        assert!((n.total_length() - TAU).abs() < 1e-9);
        assert!(n.hausdorff(&circle, 1e-3) < 1e-9);
        let sampled = circle.sample(0.01).unwrap();
        let n = normalize(&Curve::Sampled(sampled), DEFAULT_LAMBDA).unwrap();
        assert!(n.total_length() <= TAU + 1e-6);
        assert!(n.start_point().dist(circle.start_point()) < 1e-12);
    }
}
