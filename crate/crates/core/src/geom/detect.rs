use std::f64::consts::{PI, TAU};

use super::{Component, Curve, CsCurve, Point2, EPS_ANGLE, EPS_JOIN};

/// Strip `-r < X < r, Y >= 0` in a frame whose `Y` axis starts at
/// `axis_origin` and points along `axis_direction`. `X` grows to the right of
/// the axis. The band lines `L1`, `L2` are `X = -r` and `X = r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub axis_origin: Point2,
    pub axis_direction: Point2,
    pub half_width: f64,
}

impl Band {
    pub fn new(axis_origin: Point2, axis_direction: Point2, half_width: f64) -> Self {
        let n = axis_direction.norm();
        Self { axis_origin, axis_direction: axis_direction / n, half_width }
    }

    /// `(X, Y)` band coordinates of `p`.
    pub fn coords(&self, p: Point2) -> (f64, f64) {
        let v = p - self.axis_origin;
        let u = self.axis_direction;
        let right = Point2::new(u.y, -u.x);
        (v.dot(right), v.dot(u))
    }

    pub fn contains(&self, p: Point2) -> bool {
        let (x, y) = self.coords(p);
        x.abs() < self.half_width && y >= 0.0
    }
}

/// Parameter pairs `t1 < t2` whose tangents are antiparallel.
///
/// On a cs curve the heading is piecewise linear in arc length, so for each
/// pair of components the solution set of `h(t2) - h(t1) = (2n+1) pi` is a
/// line clipped to a rectangle. Each non-empty clip is reported by its
/// midpoint; continua such as the `t2 = t1 + pi` family on a circle therefore
/// show up as one representative pair per component pair.
pub fn find_parallel_tangents(curve: &Curve) -> Vec<(f64, f64)> {
    match curve {
        Curve::Cs(c) => parallel_tangents_cs(c),
        Curve::Sampled(s) => {
            let h = s.unwrapped_tangents();
            let t = s.cumulative_lengths();
            parallel_tangents_sampled(&h, t)
        }
    }
}

fn parallel_tangents_cs(curve: &CsCurve) -> Vec<(f64, f64)> {
    let comps = curve.components();
    let offsets = curve.offsets();
    let heads = curve.unwrapped_headings();
    let mut out = Vec::new();
    for i in 0..comps.len() {
        for j in i..comps.len() {
            let (li, lj) = (comps[i].length(), comps[j].length());
            let (ki, kj) = (comps[i].signed_curvature(), comps[j].signed_curvature());
            // heading: h_i(u) = heads[i] + ki u,  h_j(v) = heads[j] + kj v
            let base = heads[j] - heads[i];
            // range of kj v - ki u over the rectangle
            let corners = [0.0, -ki * li, kj * lj, kj * lj - ki * li];
            let lo = corners.iter().cloned().fold(f64::INFINITY, f64::min) + base;
            let hi = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + base;
            let n_lo = ((lo - PI) / TAU).ceil() as i64 - 1;
            let n_hi = ((hi - PI) / TAU).floor() as i64 + 1;
            for n in n_lo..=n_hi {
                let target = PI + TAU * n as f64 - base; // kj v - ki u = target
                if let Some((u, v)) = clip_line(ki, kj, target, li, lj, i == j) {
                    out.push((offsets[i] + u, offsets[j] + v));
                }
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
    out
}

/// Midpoint of `{(u, v) in [0,li] x [0,lj] : kj v - ki u = target}`, with
/// `u < v` imposed when both parameters live on the same component.
fn clip_line(ki: f64, kj: f64, target: f64, li: f64, lj: f64, same: bool) -> Option<(f64, f64)> {
    if same {
        // k (v - u) = target with 0 <= u < v <= l
        if ki == 0.0 {
            return None;
        }
        let gap = target / ki;
        if gap <= 0.0 || gap > li + 1e-12 {
            return None;
        }
        let u = 0.5 * (li - gap).max(0.0);
        return Some((u, (u + gap).min(li)));
    }
    if ki == 0.0 && kj == 0.0 {
        if target.abs() <= EPS_ANGLE {
            return Some((0.5 * li, 0.5 * lj));
        }
        return None;
    }
    if kj == 0.0 {
        let u = -target / ki;
        if u >= -1e-12 && u <= li + 1e-12 {
            return Some((u.clamp(0.0, li), 0.5 * lj));
        }
        return None;
    }
    if ki == 0.0 {
        let v = target / kj;
        if v >= -1e-12 && v <= lj + 1e-12 {
            return Some((0.5 * li, v.clamp(0.0, lj)));
        }
        return None;
    }
    // v = (target + ki u) / kj, find the u-interval where v in [0, lj]
    let v_of = |u: f64| (target + ki * u) / kj;
    let u_at_v = |v: f64| (kj * v - target) / ki;
    let (a, b) = {
        let ua = u_at_v(0.0);
        let ub = u_at_v(lj);
        (ua.min(ub), ua.max(ub))
    };
    let lo = a.max(0.0);
    let hi = b.min(li);
    if hi < lo - 1e-12 {
        return None;
    }
    let u = 0.5 * (lo + hi.max(lo));
    Some((u, v_of(u).clamp(0.0, lj)))
}

fn parallel_tangents_sampled(h: &[f64], t: &[f64]) -> Vec<(f64, f64)> {
    let n = h.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n - 1 {
            let a = h[j] - h[i];
            let b = h[j + 1] - h[i];
            let (lo, hi) = (a.min(b), a.max(b));
            let m = ((lo - PI) / TAU).ceil();
            let target = PI + TAU * m;
            if target <= hi && (hi - lo) > 0.0 {
                let f = (target - a) / (b - a);
                out.push((t[i], t[j] + f * (t[j + 1] - t[j])));
            } else if (a - (PI + TAU * ((a - PI) / TAU).round())).abs() <= EPS_ANGLE {
                out.push((t[i], t[j]));
            }
        }
    }
    out
}

/// Two curve points, one strictly left of `L1` and one strictly right of `L2`.
/// Returns `(t_left, t_right)`.
pub fn find_cross_section(curve: &Curve, band: &Band) -> Option<(f64, f64)> {
    let r = band.half_width;
    let (params, points) = match curve {
        Curve::Cs(c) => {
            let total = c.total_length();
            let n = ((total / (r * 1e-3)).ceil() as usize).clamp(64, 200_000);
            let pts = c.uniform_points(n);
            let ts: Vec<f64> = (0..=n).map(|k| total * k as f64 / n as f64).collect();
            (ts, pts)
        }
        Curve::Sampled(s) => (s.cumulative_lengths().to_vec(), s.points().to_vec()),
    };
    let mut left: Option<(f64, f64)> = None;
    let mut right: Option<(f64, f64)> = None;
    for (t, p) in params.iter().zip(&points) {
        let (x, _) = band.coords(*p);
        if x < -r && left.map_or(true, |(_, bx)| x < bx) {
            left = Some((*t, x));
        }
        if x > r && right.map_or(true, |(_, bx)| x > bx) {
            right = Some((*t, x));
        }
    }
    match (left, right) {
        (Some((tl, _)), Some((tr, _))) => Some((tl, tr)),
        _ => None,
    }
}

/// Parameter pairs `t1 < t2` with `curve(t1) = curve(t2)`, one per repeated
/// image point. Joints between consecutive components and, for closed
/// curves, the identification of the two endpoints are not intersections.
pub fn self_intersections(curve: &CsCurve) -> Vec<(f64, f64)> {
    let comps = curve.components();
    let offsets = curve.offsets();
    let total = curve.total_length();
    let closed = curve.start_point().dist(curve.end_point()) <= EPS_JOIN;
    let tol = 1e-9;
    let mut raw = Vec::new();
    for i in 0..comps.len() {
        for j in i..comps.len() {
            for (u, v) in component_hits(&comps[i], &comps[j], i == j) {
                let mut t1 = offsets[i] + u;
                let mut t2 = offsets[j] + v;
                if closed {
                    if (total - t1).abs() <= tol {
                        t1 = 0.0;
                    }
                    if (total - t2).abs() <= tol {
                        t2 = 0.0;
                    }
                }
                if t1 > t2 {
                    std::mem::swap(&mut t1, &mut t2);
                }
                if t2 - t1 <= tol {
                    continue;
                }
                raw.push((t1, t2));
            }
        }
    }
    raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
    raw.dedup_by(|a, b| (a.0 - b.0).abs() <= 1e-7 && (a.1 - b.1).abs() <= 1e-7);
    raw
}

/// Local parameter pairs where two components meet.
fn component_hits(a: &Component, b: &Component, same: bool) -> Vec<(f64, f64)> {
    match (a, b) {
        (Component::Segment(_), Component::Segment(_)) if same => vec![],
        (Component::Segment(s), Component::Segment(t)) => seg_seg(s.start, s.end, t.start, t.end),
        (Component::Segment(_), Component::Arc(_)) => seg_arc(a, b),
        (Component::Arc(_), Component::Segment(_)) => seg_arc(b, a).into_iter().map(|(v, u)| (u, v)).collect(),
        (Component::Arc(x), Component::Arc(_)) => {
            if same {
                // one arc only repeats itself after a full turn
                if x.sweep.abs() > TAU + 1e-12 {
                    let u = 0.5 * (x.length() - TAU * x.radius);
                    vec![(u, u + TAU * x.radius)]
                } else {
                    vec![]
                }
            } else {
                arc_arc(a, b)
            }
        }
    }
}

fn seg_seg(p0: Point2, p1: Point2, q0: Point2, q1: Point2) -> Vec<(f64, f64)> {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let denom = d1.cross(d2);
    let l1 = d1.norm();
    let l2 = d2.norm();
    if denom.abs() <= 1e-14 * l1 * l2 {
        // parallel: only collinear overlaps count
        if (q0 - p0).cross(d1).abs() > 1e-12 * l1 {
            return vec![];
        }
        let e = d1 / l1;
        let (a, b) = ((q0 - p0).dot(e), (q1 - p0).dot(e));
        let lo = a.min(b).max(0.0);
        let hi = a.max(b).min(l1);
        if hi < lo - 1e-12 {
            return vec![];
        }
        let m = 0.5 * (lo + hi);
        let v = (p0 + e * m - q0).norm();
        return vec![(m, v)];
    }
    let w = q0 - p0;
    let t = w.cross(d2) / denom;
    let s = w.cross(d1) / denom;
    let e = 1e-12;
    if (-e..=1.0 + e).contains(&t) && (-e..=1.0 + e).contains(&s) {
        vec![(t.clamp(0.0, 1.0) * l1, s.clamp(0.0, 1.0) * l2)]
    } else {
        vec![]
    }
}

fn seg_arc(seg: &Component, arc: &Component) -> Vec<(f64, f64)> {
    let (Component::Segment(s), Component::Arc(a)) = (seg, arc) else {
        return vec![];
    };
    let d = s.end - s.start;
    let len = d.norm();
    let e = d / len;
    let w = s.start - a.center;
    // |w + e t|^2 = R^2
    let bq = w.dot(e);
    let cq = w.dot(w) - a.radius * a.radius;
    let disc = bq * bq - cq;
    let tol = 1e-9 * a.radius;
    if disc < -tol * a.radius {
        return vec![];
    }
    let root = disc.max(0.0).sqrt();
    let mut ts = vec![-bq - root];
    if root > 1e-12 {
        ts.push(-bq + root);
    }
    let mut out = Vec::new();
    for t in ts {
        if t < -1e-12 || t > len + 1e-12 {
            continue;
        }
        let p = s.start + e * t;
        for u in a.locals_of_angle((p - a.center).angle(), 1e-12) {
            out.push((t.clamp(0.0, len), u));
        }
    }
    out
}

fn arc_arc(x: &Component, y: &Component) -> Vec<(f64, f64)> {
    let (Component::Arc(a), Component::Arc(b)) = (x, y) else {
        return vec![];
    };
    let d = b.center - a.center;
    let dist = d.norm();
    let tol = 1e-9;
    if dist <= 1e-12 && (a.radius - b.radius).abs() <= 1e-12 {
        // same circle: overlapping angular ranges
        let mut out = Vec::new();
        let pa = a.point_at_angle(a.angle_at(0.5 * a.length()));
        for v in b.locals_of_angle((pa - b.center).angle(), 1e-12) {
            out.push((0.5 * a.length(), v));
        }
        for end in [0.0, a.length()] {
            let p = x.point_at(end);
            for v in b.locals_of_angle((p - b.center).angle(), 1e-12) {
                out.push((end, v));
            }
        }
        return out;
    }
    if dist > a.radius + b.radius + tol || dist < (a.radius - b.radius).abs() - tol || dist <= 1e-12 {
        return vec![];
    }
    let along = (dist * dist + a.radius * a.radius - b.radius * b.radius) / (2.0 * dist);
    let h2 = a.radius * a.radius - along * along;
    let h = h2.max(0.0).sqrt();
    let e = d / dist;
    let base = a.center + e * along;
    let mut pts = vec![base + e.perp() * h];
    if h > 1e-9 {
        pts.push(base - e.perp() * h);
    }
    let mut out = Vec::new();
    for p in pts {
        let ua = a.locals_of_angle((p - a.center).angle(), 1e-9);
        let vb = b.locals_of_angle((p - b.center).angle(), 1e-9);
        for u in &ua {
            for v in &vb {
                out.push((*u, *v));
            }
        }
    }
    out
}
