use super::{normalize_angle, KappaParams, Point2, EPS_JOIN};
use crate::error::{Error, Result};

/// Arc-length ordered point sequence standing in for a general curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    kappa: KappaParams,
    points: Vec<Point2>,
    cumulative_lengths: Vec<f64>,
}

impl SampledCurve {
    /// Builds from points, taking cumulative lengths from the chords.
    pub fn new(kappa: KappaParams, points: Vec<Point2>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::Domain(format!("a sampled curve needs at least 3 points, got {}", points.len())));
        }
        let mut lengths = Vec::with_capacity(points.len());
        lengths.push(0.0);
        for (i, w) in points.windows(2).enumerate() {
            if !w[0].is_finite() || !w[1].is_finite() {
                return Err(Error::Domain(format!("point {i} is not finite")));
            }
            let d = w[0].dist(w[1]);
            if d == 0.0 {
                return Err(Error::Domain(format!("points {i} and {} coincide", i + 1)));
            }
            lengths.push(lengths[i] + d);
        }
        Ok(Self { kappa, points, cumulative_lengths: lengths })
    }

    /// Builds with explicit cumulative lengths, which must agree with the
    /// chords up to the true arc-chord excess of the sampled curve.
    pub fn with_lengths(kappa: KappaParams, points: Vec<Point2>, cumulative_lengths: Vec<f64>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::Domain(format!("a sampled curve needs at least 3 points, got {}", points.len())));
        }
        if cumulative_lengths.len() != points.len() {
            return Err(Error::Domain("one cumulative length per point is required".into()));
        }
        if cumulative_lengths[0].abs() > EPS_JOIN {
            return Err(Error::Domain("cumulative lengths must start at 0".into()));
        }
        for i in 1..points.len() {
            let chord = points[i - 1].dist(points[i]);
            let step = cumulative_lengths[i] - cumulative_lengths[i - 1];
            if chord == 0.0 {
                return Err(Error::Domain(format!("points {} and {i} coincide", i - 1)));
            }
            if step + EPS_JOIN < chord {
                return Err(Error::Domain(format!("cumulative length step {i} is shorter than its chord")));
            }
        }
        Ok(Self { kappa, points, cumulative_lengths })
    }

    #[inline]
    pub fn kappa(&self) -> KappaParams {
        self.kappa
    }

    #[inline]
    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    #[inline]
    pub fn cumulative_lengths(&self) -> &[f64] {
        &self.cumulative_lengths
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative_lengths.last().unwrap()
    }

    /// Signed curvature of the circle through points `i-1, i, i+1`.
    pub fn curvature_at(&self, i: usize) -> f64 {
        triple_curvature(self.points[i - 1], self.points[i], self.points[i + 1])
    }

    /// Discrete curvature estimates for interior points.
    pub fn curvatures(&self) -> Vec<f64> {
        (1..self.points.len() - 1).map(|i| self.curvature_at(i)).collect()
    }

    /// Estimated tangent direction at sample `i`, from the circle through the
    /// nearest point triple. Exact for samples of an arc or a line.
    pub fn tangent_at(&self, i: usize) -> f64 {
        let n = self.points.len();
        let p = &self.points;
        if i == 0 {
            let k = triple_curvature(p[0], p[1], p[2]);
            let chord = p[1] - p[0];
            chord.angle() - chord_tangent_offset(chord.norm(), k)
        } else if i == n - 1 {
            let k = triple_curvature(p[n - 3], p[n - 2], p[n - 1]);
            let chord = p[n - 1] - p[n - 2];
            chord.angle() + chord_tangent_offset(chord.norm(), k)
        } else {
            let k = triple_curvature(p[i - 1], p[i], p[i + 1]);
            let back = p[i] - p[i - 1];
            let fwd = p[i + 1] - p[i];
            // tangent at the middle point of the circumscribed circle
            let a = back.angle() + chord_tangent_offset(back.norm(), k);
            let b = fwd.angle() - chord_tangent_offset(fwd.norm(), k);
            a + 0.5 * normalize_angle(b - a)
        }
    }

    /// Unwrapped tangent estimates at every sample.
    pub fn unwrapped_tangents(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.points.len());
        let mut prev = self.tangent_at(0);
        out.push(prev);
        for i in 1..self.points.len() {
            let raw = self.tangent_at(i);
            prev += normalize_angle(raw - prev);
            out.push(prev);
        }
        out
    }

    /// Index of the sample nearest to arc length `s`.
    pub fn nearest_index(&self, s: f64) -> usize {
        match self.cumulative_lengths.binary_search_by(|v| v.partial_cmp(&s).unwrap()) {
            Ok(i) => i,
            Err(i) => {
                if i == 0 {
                    0
                } else if i >= self.points.len() {
                    self.points.len() - 1
                } else if (self.cumulative_lengths[i] - s) < (s - self.cumulative_lengths[i - 1]) {
                    i
                } else {
                    i - 1
                }
            }
        }
    }

    /// Linear interpolation along the polyline at arc length `s`.
    pub fn point_at(&self, s: f64) -> Point2 {
        let cl = &self.cumulative_lengths;
        let s = s.clamp(0.0, self.total_length());
        let i = match cl.binary_search_by(|v| v.partial_cmp(&s).unwrap()) {
            Ok(i) => return self.points[i],
            Err(i) => i.clamp(1, cl.len() - 1),
        };
        let t = (s - cl[i - 1]) / (cl[i] - cl[i - 1]);
        self.points[i - 1].lerp(self.points[i], t)
    }

    /// Polyline resampled so consecutive points are at most `spacing` apart.
    pub fn densified(&self, spacing: f64) -> Vec<Point2> {
        let mut out = vec![self.points[0]];
        for w in self.points.windows(2) {
            let n = ((w[0].dist(w[1]) / spacing).ceil() as usize).max(1);
            for k in 1..=n {
                out.push(w[0].lerp(w[1], k as f64 / n as f64));
            }
        }
        out
    }
}

/// Signed curvature of the circle through three points (0 when collinear).
pub fn triple_curvature(a: Point2, b: Point2, c: Point2) -> f64 {
    let ab = a.dist(b);
    let bc = b.dist(c);
    let ca = c.dist(a);
    let denom = ab * bc * ca;
    if denom == 0.0 {
        return 0.0;
    }
    2.0 * (b - a).cross(c - a) / denom
}

/// Angle between a chord of length `chord` and the tangent at its ends, on a
/// circle of signed curvature `k`.
fn chord_tangent_offset(chord: f64, k: f64) -> f64 {
    (0.5 * chord * k).clamp(-1.0, 1.0).asin()
}
