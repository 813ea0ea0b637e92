use super::{
    angle_gap, ArcComponent, Component, Config, KappaParams, Point2, SampledCurve, SegmentComponent,
    EPS_DEGENERATE, EPS_JOIN,
};
use crate::error::{Error, Result};

/// Piecewise constant-curvature curve: arcs and segments joined end to end.
///
/// Construction only drops degenerate components; joint continuity and the
/// curvature bound are checked by [`crate::validation::validate_cs`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsCurve {
    kappa: KappaParams,
    components: Vec<Component>,
}

impl CsCurve {
    pub fn new(kappa: KappaParams, components: Vec<Component>) -> Result<Self> {
        let components: Vec<Component> =
            components.into_iter().filter(|c| c.length() >= EPS_DEGENERATE).collect();
        if components.is_empty() {
            return Err(Error::Domain("a curve needs at least one non-degenerate component".into()));
        }
        for c in &components {
            let finite = match c {
                Component::Arc(a) => {
                    a.center.is_finite() && a.radius.is_finite() && a.radius > 0.0 && a.start_angle.is_finite() && a.sweep.is_finite()
                }
                Component::Segment(s) => s.start.is_finite() && s.end.is_finite(),
            };
            if !finite {
                return Err(Error::Domain(format!("component has non-finite or non-positive data: {c:?}")));
            }
        }
        Ok(Self { kappa, components })
    }

    pub fn segment(kappa: KappaParams, start: Point2, end: Point2) -> Result<Self> {
        Self::new(kappa, vec![Component::Segment(SegmentComponent::new(start, end))])
    }

    /// Radius-`r` arc leaving `start`, positive sweep turning left.
    pub fn arc(kappa: KappaParams, start: Config, sweep: f64) -> Result<Self> {
        Self::new(kappa, vec![Component::Arc(ArcComponent::from_config(start, kappa.radius(), sweep))])
    }

    #[inline]
    pub fn kappa(&self) -> KappaParams {
        self.kappa
    }

    #[inline]
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Component> {
        self.components
    }

    #[inline]
    pub fn complexity(&self) -> usize {
        self.components.len()
    }

    pub fn total_length(&self) -> f64 {
        self.components.iter().map(Component::length).sum()
    }

    /// Arc length at which each component starts, plus the total at the end.
    pub fn offsets(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.components.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for c in &self.components {
            acc += c.length();
            out.push(acc);
        }
        out
    }

    /// Component index and local arc length for global arc length `s`.
    pub fn locate(&self, s: f64) -> Result<(usize, f64)> {
        let total = self.total_length();
        let slack = 1e-12 * total.max(1.0);
        if !(s >= -slack && s <= total + slack) {
            return Err(Error::Domain(format!("arc length {s} outside [0, {total}]")));
        }
        let s = s.clamp(0.0, total);
        let mut acc = 0.0;
        for (i, c) in self.components.iter().enumerate() {
            let len = c.length();
            if s <= acc + len || i + 1 == self.components.len() {
                return Ok((i, (s - acc).clamp(0.0, len)));
            }
            acc += len;
        }
        unreachable!("curve has at least one component")
    }

    pub fn evaluate(&self, s: f64) -> Result<Point2> {
        let (i, u) = self.locate(s)?;
        Ok(self.components[i].point_at(u))
    }

    /// Tangent direction at arc length `s`, in `(-pi, pi]`.
    pub fn tangent(&self, s: f64) -> Result<f64> {
        let (i, u) = self.locate(s)?;
        Ok(super::normalize_angle(self.components[i].heading_at(u)))
    }

    pub fn config_at(&self, s: f64) -> Result<Config> {
        let (i, u) = self.locate(s)?;
        let c = &self.components[i];
        Ok(Config::new(c.point_at(u), c.heading_at(u)))
    }

    pub fn start_point(&self) -> Point2 {
        self.components[0].start_point()
    }

    pub fn end_point(&self) -> Point2 {
        self.components[self.components.len() - 1].end_point()
    }

    pub fn start_config(&self) -> Config {
        self.components[0].start_config()
    }

    pub fn end_config(&self) -> Config {
        self.components[self.components.len() - 1].end_config()
    }

    /// Unwrapped heading at the start of every component and at the end,
    /// continuous across C1 joints.
    pub fn unwrapped_headings(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.components.len() + 1);
        let mut h = self.components[0].heading_at(0.0);
        out.push(h);
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                let raw = c.heading_at(0.0);
                h += super::normalize_angle(raw - h);
                *out.last_mut().unwrap() = h;
            }
            h += c.turning();
            out.push(h);
        }
        out
    }

    /// Net turning from start to end.
    pub fn total_turning(&self) -> f64 {
        let h = self.unwrapped_headings();
        h[h.len() - 1] - h[0]
    }

    /// `a` followed by `b`; the end of `a` must match the start of `b`.
    pub fn concatenate(&self, b: &CsCurve) -> Result<CsCurve> {
        let end = self.end_config();
        let start = b.start_config();
        if end.position.dist(start.position) > EPS_JOIN || angle_gap(end.heading, start.heading) > EPS_JOIN {
            return Err(Error::Joint { end, start });
        }
        if (self.kappa.kappa() - b.kappa.kappa()).abs() > 1e-12 * self.kappa.kappa() {
            return Err(Error::Domain("cannot concatenate curves with different kappa".into()));
        }
        let mut comps = self.components.clone();
        comps.extend_from_slice(&b.components);
        CsCurve::new(self.kappa, comps)
    }

    pub fn reverse(&self) -> CsCurve {
        let comps = self.components.iter().rev().map(Component::reversed).collect();
        CsCurve { kappa: self.kappa, components: comps }
    }

    /// Restriction to the arc-length window `[s0, s1]`.
    pub fn sub_curve(&self, s0: f64, s1: f64) -> Result<CsCurve> {
        if s1 < s0 {
            return Err(Error::Domain(format!("empty window [{s0}, {s1}]")));
        }
        let offsets = self.offsets();
        let mut comps = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            let (a, b) = (offsets[i], offsets[i + 1]);
            let lo = s0.max(a);
            let hi = s1.min(b);
            if hi - lo >= EPS_DEGENERATE {
                comps.push(c.sub(lo - a, hi - a));
            }
        }
        CsCurve::new(self.kappa, comps)
    }

    /// Splits at arc length `s`. Either side may be absent when `s` is at an end.
    pub fn split_at(&self, s: f64) -> (Option<CsCurve>, Option<CsCurve>) {
        let total = self.total_length();
        (self.sub_curve(0.0, s).ok(), self.sub_curve(s, total).ok())
    }

    /// Rigid transforms, applied to every component.
    pub fn map_components(&self, f: impl Fn(&Component) -> Component) -> CsCurve {
        CsCurve { kappa: self.kappa, components: self.components.iter().map(f).collect() }
    }

    /// Points at uniform arc-length steps no larger than `spacing`, endpoints included.
    pub fn sample(&self, spacing: f64) -> Result<SampledCurve> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::Domain(format!("sample spacing must be positive, got {spacing}")));
        }
        let total = self.total_length();
        let n = ((total / spacing).ceil() as usize).max(2);
        let step = total / n as f64;
        let mut points = Vec::with_capacity(n + 1);
        let mut lengths = Vec::with_capacity(n + 1);
        points.push(self.start_point());
        lengths.push(0.0);
        for k in 1..n {
            let s = step * k as f64;
            points.push(self.evaluate(s)?);
            lengths.push(s);
        }
        points.push(self.end_point());
        lengths.push(total);
        SampledCurve::with_lengths(self.kappa, points, lengths)
    }

    /// Points at `n + 1` equally spaced arc-length parameters.
    pub fn uniform_points(&self, n: usize) -> Vec<Point2> {
        let mut out = Vec::with_capacity(n.max(1) + 1);
        self.uniform_points_into(n, &mut out);
        out
    }

    /// [`uniform_points`](Self::uniform_points) into a reused buffer. Points
    /// on an arc are stepped by a fixed rotation, resynchronised every few
    /// dozen samples, so the error stays near rounding.
    pub fn uniform_points_into(&self, n: usize, out: &mut Vec<Point2>) {
        out.clear();
        let total = self.total_length();
        let n = n.max(1);
        let offsets = self.offsets();
        let last = self.components.len() - 1;
        let at = |k: usize| total * k as f64 / n as f64;
        let mut idx = 0;
        let mut k = 0;
        while k <= n {
            while idx < last && at(k) > offsets[idx + 1] {
                idx += 1;
            }
            let comp = &self.components[idx];
            let len = comp.length();
            let mut end = k;
            while end < n && (idx == last || at(end + 1) <= offsets[idx + 1]) {
                end += 1;
            }
            match comp {
                Component::Arc(a) => {
                    let (ds, dc) = (a.orientation() * total / n as f64 / a.radius).sin_cos();
                    let mut v = Point2::ORIGIN;
                    for (i, kk) in (k..=end).enumerate() {
                        if i % 32 == 0 {
                            let u = (at(kk) - offsets[idx]).clamp(0.0, len);
                            v = comp.point_at(u) - a.center;
                        } else {
                            v = Point2::new(dc * v.x - ds * v.y, ds * v.x + dc * v.y);
                        }
                        out.push(a.center + v);
                    }
                }
                Component::Segment(_) => {
                    for kk in k..=end {
                        out.push(comp.point_at((at(kk) - offsets[idx]).clamp(0.0, len)));
                    }
                }
            }
            k = end + 1;
        }
    }

    /// Shortest distance from `p` to the curve.
    pub fn distance_to(&self, p: Point2) -> f64 {
        self.components.iter().map(|c| c.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    /// Sup-distance between the two curves under proportional arc-length
    /// parameterization. An upper bound on their Hausdorff distance.
    pub fn uniform_distance(&self, other: &CsCurve, n: usize) -> f64 {
        max_pair_distance(&self.uniform_points(n), &other.uniform_points(n))
    }

    /// Hausdorff distance estimated from samples of each curve against the
    /// exact geometry of the other.
    pub fn hausdorff(&self, other: &CsCurve, spacing: f64) -> f64 {
        let one_sided = |a: &CsCurve, b: &CsCurve| {
            let n = ((a.total_length() / spacing).ceil() as usize).max(8);
            a.uniform_points(n).into_iter().map(|p| b.distance_to(p)).fold(0.0, f64::max)
        };
        one_sided(self, other).max(one_sided(other, self))
    }
}

/// Largest distance between corresponding points.
pub fn max_pair_distance(a: &[Point2], b: &[Point2]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| {
            let v = *p - *q;
            v.x * v.x + v.y * v.y
        })
        .fold(0.0, f64::max)
        .sqrt()
}

/// Either representation of a curve, for operations that accept both.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Cs(CsCurve),
    Sampled(SampledCurve),
}

impl Curve {
    pub fn kappa(&self) -> KappaParams {
        match self {
            Curve::Cs(c) => c.kappa(),
            Curve::Sampled(c) => c.kappa(),
        }
    }

    pub fn total_length(&self) -> f64 {
        match self {
            Curve::Cs(c) => c.total_length(),
            Curve::Sampled(c) => c.total_length(),
        }
    }

    pub fn start_point(&self) -> Point2 {
        match self {
            Curve::Cs(c) => c.start_point(),
            Curve::Sampled(c) => c.points()[0],
        }
    }

    pub fn end_point(&self) -> Point2 {
        match self {
            Curve::Cs(c) => c.end_point(),
            Curve::Sampled(c) => *c.points().last().unwrap(),
        }
    }

    /// Dense point set along the curve, spacing at most `spacing`.
    pub fn dense_points(&self, spacing: f64) -> Vec<Point2> {
        match self {
            Curve::Cs(c) => {
                let n = ((c.total_length() / spacing).ceil() as usize).max(2);
                c.uniform_points(n)
            }
            Curve::Sampled(c) => c.densified(spacing),
        }
    }
}

impl From<CsCurve> for Curve {
    fn from(c: CsCurve) -> Self {
        Curve::Cs(c)
    }
}

impl From<SampledCurve> for Curve {
    fn from(c: SampledCurve) -> Self {
        Curve::Sampled(c)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    use super::*;

    fn unit() -> KappaParams {
        KappaParams::unit()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn half_turn_on_unit_circle() {
        let c = CsCurve::arc(unit(), Config::new(Point2::ORIGIN, 0.0), TAU).unwrap();
        let p = c.evaluate(PI).unwrap();
        assert!(p.dist(Point2::new(0.0, 2.0)) < 1e-12);
        assert!(close(c.tangent(FRAC_PI_2).unwrap(), FRAC_PI_2, 1e-12));
        assert!(close(c.total_length(), TAU, 1e-12));
    }

    #[test]
    fn segment_evaluation() {
        let c = CsCurve::segment(unit(), Point2::ORIGIN, Point2::new(4.0, 0.0)).unwrap();
        assert_eq!(c.evaluate(1.0).unwrap(), Point2::new(1.0, 0.0));
        for s in [0.0, 1.3, 4.0] {
            assert_eq!(c.tangent(s).unwrap(), 0.0);
        }
        assert!(matches!(c.evaluate(4.5), Err(Error::Domain(_))));
        assert!(matches!(c.evaluate(-0.1), Err(Error::Domain(_))));
        let d = CsCurve::segment(unit(), Point2::ORIGIN, Point2::new(3.0, 4.0)).unwrap();
        assert_eq!(d.total_length(), 5.0);
    }

    #[test]
    fn longer_arc_length_over_unit_chord() {
        // Longer arc of a unit circle over chord 1: 2pi - 2 asin(1/2).
        let x = Point2::ORIGIN;
        let center = Point2::new(0.5, (0.75f64).sqrt());
        let start_angle = (x - center).angle();
        let arc = ArcComponent::new(center, 1.0, start_angle, -(TAU - 2.0 * (0.5f64).asin()));
        let c = CsCurve::new(unit(), vec![Component::Arc(arc)]).unwrap();
        assert!(close(c.total_length(), 5.0 * PI / 3.0, 1e-12));
        assert!(c.end_point().dist(Point2::new(1.0, 0.0)) < 1e-12);
        let poly: f64 = c.uniform_points(20_000).windows(2).map(|w| w[0].dist(w[1])).sum();
        assert!(close(poly, 5.0 * PI / 3.0, 1e-7));
    }

    #[test]
    fn concatenation_rules() {
        let a = CsCurve::segment(unit(), Point2::ORIGIN, Point2::new(1.0, 0.0)).unwrap();
        let b = CsCurve::segment(unit(), Point2::new(1.0, 0.0), Point2::new(2.0, 0.0)).unwrap();
        let ab = a.concatenate(&b).unwrap();
        assert_eq!(ab.total_length(), 2.0);

        let q = CsCurve::arc(unit(), Config::new(Point2::ORIGIN, 0.0), FRAC_PI_2).unwrap();
        let tail = CsCurve::new(unit(), vec![Component::Segment(SegmentComponent::from_config(q.end_config(), 1.0))]).unwrap();
        let qt = q.concatenate(&tail).unwrap();
        assert_eq!(qt.complexity(), 2);

        let bad = CsCurve::segment(unit(), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0)).unwrap();
        assert!(matches!(a.concatenate(&bad), Err(Error::Joint { .. })));

        // a # reverse(a) always meets in a heading cusp.
        assert!(matches!(a.concatenate(&a.reverse()), Err(Error::Joint { .. })));
        let circle = CsCurve::arc(unit(), Config::new(Point2::ORIGIN, 0.0), TAU).unwrap();
        let twice = circle.concatenate(&circle).unwrap();
        assert!(close(twice.total_length(), 2.0 * TAU, 1e-12));
    }

    #[test]
    fn reversal() {
        let s = CsCurve::segment(unit(), Point2::ORIGIN, Point2::new(1.0, 0.0)).unwrap();
        let r = s.reverse();
        assert_eq!(r.start_point(), Point2::new(1.0, 0.0));
        assert_eq!(r.end_point(), Point2::ORIGIN);

        let arc = CsCurve::arc(unit(), Config::new(Point2::new(0.3, -0.2), 0.4), 1.2).unwrap();
        let ra = arc.reverse();
        match (&arc.components()[0], &ra.components()[0]) {
            (Component::Arc(a), Component::Arc(b)) => {
                assert_eq!(a.center, b.center);
                assert_eq!(a.sweep, -b.sweep);
            }
            _ => panic!("expected arcs"),
        }
        assert_eq!(ra.reverse(), arc);
        assert!(close(ra.total_length(), arc.total_length(), 1e-15));
    }

    #[test]
    fn sampling() {
        let s = CsCurve::segment(unit(), Point2::ORIGIN, Point2::new(1.0, 0.0)).unwrap();
        let sm = s.sample(0.25).unwrap();
        assert_eq!(sm.points().len(), 5);
        assert_eq!(sm.points()[0], s.start_point());
        assert_eq!(*sm.points().last().unwrap(), s.end_point());

        let circle = CsCurve::arc(unit(), Config::new(Point2::ORIGIN, 0.0), TAU).unwrap();
        let sc = circle.sample(0.01).unwrap();
        let poly: f64 = sc.points().windows(2).map(|w| w[0].dist(w[1])).sum();
        assert!(close(poly, TAU, 1e-4));
        assert!(close(sc.total_length(), TAU, 1e-12));
    }

    #[test]
    fn degenerate_components_are_dropped() {
        let c = CsCurve::new(
            unit(),
            vec![
                Component::Segment(SegmentComponent::new(Point2::ORIGIN, Point2::new(1e-13, 0.0))),
                Component::Segment(SegmentComponent::new(Point2::ORIGIN, Point2::new(1.0, 0.0))),
            ],
        )
        .unwrap();
        assert_eq!(c.complexity(), 1);
        assert!(CsCurve::segment(unit(), Point2::ORIGIN, Point2::ORIGIN).is_err());
    }

    #[test]
    fn sub_curve_and_headings() {
        let q = CsCurve::arc(unit(), Config::new(Point2::ORIGIN, 0.0), 3.0 * FRAC_PI_2).unwrap();
        let part = q.sub_curve(0.5, 2.0).unwrap();
        assert!(close(part.total_length(), 1.5, 1e-12));
        assert!(part.start_point().dist(q.evaluate(0.5).unwrap()) < 1e-12);
        assert!(close(q.total_turning(), 3.0 * FRAC_PI_2, 1e-12));
    }

    #[test]
    fn uniform_points_match_evaluate() {
        let c = crate::geom::random_curve(Point2::ORIGIN, Point2::new(2.0, 1.0), unit(), 6, 11).unwrap();
        let n = 1000;
        let pts = c.uniform_points(n);
        assert_eq!(pts.len(), n + 1);
        let l = c.total_length();
        for (k, p) in pts.iter().enumerate() {
            assert!(p.dist(c.evaluate(l * k as f64 / n as f64).unwrap()) < 1e-13);
        }
        assert_eq!(pts[0], c.start_point());
    }
}
