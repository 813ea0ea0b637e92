//! SVG 1.1 rendering of curves, lens regions and homotopy traces.
//!
//! Coordinates are written with `y` negated so that figures come out the
//! usual way up. Arcs become elliptical-arc commands, split into pieces of
//! at most a half turn so the large-arc flag is never ambiguous.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;

use crate::geom::{ArcComponent, Component, CsCurve, Curve, Point2};
use crate::homotopy::HomotopyTrace;
use crate::regions::{build_lens, LensGeometry};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Draw the lens, the lobes of `E` and the circles `C1`, `C2` when the
    /// endpoints have a lens.
    pub regions: bool,
    /// Width of the image in user units; the height follows the aspect.
    pub width: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { regions: false, width: 600.0 }
    }
}

const LENS_FILL: &str = "#9ecae1";
const LOBE_FILL: &str = "#fdd0a2";
const CIRCLE_STROKE: &str = "#636363";
const CURVE_STROKE: &str = "#08306b";

#[derive(Debug, Clone, Copy)]
struct Bounds {
    min: Point2,
    max: Point2,
}

impl Bounds {
    fn empty() -> Self {
        Self { min: Point2::new(f64::INFINITY, f64::INFINITY), max: Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY) }
    }

    fn add(&mut self, p: Point2) {
        self.min = Point2::new(self.min.x.min(p.x), self.min.y.min(p.y));
        self.max = Point2::new(self.max.x.max(p.x), self.max.y.max(p.y));
    }

    fn add_arc(&mut self, a: &ArcComponent) {
        let c = Component::Arc(*a);
        self.add(c.start_point());
        self.add(c.end_point());
        let (lo, hi) = if a.sweep >= 0.0 {
            (a.start_angle, a.start_angle + a.sweep)
        } else {
            (a.start_angle + a.sweep, a.start_angle)
        };
        // axis extremes inside the swept range
        let mut k = (lo / FRAC_PI_2).ceil();
        while k * FRAC_PI_2 <= hi {
            self.add(a.point_at_angle(k * FRAC_PI_2));
            k += 1.0;
        }
    }

    fn add_components(&mut self, comps: &[Component]) {
        for c in comps {
            match c {
                Component::Arc(a) => self.add_arc(a),
                Component::Segment(s) => {
                    self.add(s.start);
                    self.add(s.end);
                }
            }
        }
    }

    fn add_circle(&mut self, c: Point2, r: f64) {
        self.add(c - Point2::new(r, r));
        self.add(c + Point2::new(r, r));
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" || s.is_empty() {
        "0".into()
    } else {
        s.to_string()
    }
}

fn pt(p: Point2) -> String {
    format!("{} {}", num(p.x), num(-p.y))
}

fn arc_commands(a: &ArcComponent, d: &mut String) {
    let pieces = (a.sweep.abs() / PI).ceil().max(1.0) as usize;
    let step = a.sweep / pieces as f64;
    // y is flipped, so counter-clockwise in the plane is the negative-angle
    // direction of SVG
    let sweep_flag = if a.sweep > 0.0 { 0 } else { 1 };
    for i in 1..=pieces {
        let end = a.point_at_angle(a.start_angle + step * i as f64);
        let r = num(a.radius);
        let _ = write!(d, " A {r} {r} 0 0 {sweep_flag} {}", pt(end));
    }
}

fn path_data(comps: &[Component]) -> String {
    let Some(first) = comps.first() else { return String::new() };
    let mut d = format!("M {}", pt(first.start_point()));
    for c in comps {
        match c {
            Component::Arc(a) => arc_commands(a, &mut d),
            Component::Segment(s) => {
                let _ = write!(d, " L {}", pt(s.end));
            }
        }
    }
    d
}

fn polyline_data(points: &[Point2]) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let _ = write!(d, "{}{}", if i == 0 { "M " } else { " L " }, pt(*p));
    }
    d
}

struct Scene {
    bounds: Bounds,
    body: String,
    stroke: f64,
}

impl Scene {
    fn new() -> Self {
        Self { bounds: Bounds::empty(), body: String::new(), stroke: 0.0 }
    }

    fn path(&mut self, d: &str, attrs: &str) {
        let _ = writeln!(self.body, "  <path d=\"{d}\" {attrs}/>");
    }

    /// Circles, the shaded lens and optionally the lobes of `E`.
    fn lens(&mut self, lens: &LensGeometry, lobes: bool) {
        let r = lens.radius();
        self.bounds.add_circle(lens.c1, r);
        self.bounds.add_circle(lens.c2, r);
        let boundary = |first: bool, longer: bool, reversed: bool| {
            let c = if longer { lens.longer_arc(first) } else { lens.shorter_arc(first) };
            if reversed { c.reverse() } else { c }.into_components()
        };
        let region = |a: Vec<Component>, b: Vec<Component>| {
            let mut comps = a;
            comps.extend(b);
            format!("{} Z", path_data(&comps))
        };
        if lobes {
            for first in [true, false] {
                let d = region(boundary(first, true, false), boundary(!first, false, true));
                self.path(&d, &format!("class=\"lobe\" fill=\"{LOBE_FILL}\" stroke=\"none\""));
            }
        }
        let d = region(boundary(true, false, false), boundary(false, false, true));
        self.path(&d, &format!("class=\"lens\" fill=\"{LENS_FILL}\" stroke=\"none\""));
        for (name, c) in [("c1", lens.c1), ("c2", lens.c2)] {
            let _ = writeln!(
                self.body,
                "  <circle class=\"{name}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{CIRCLE_STROKE}\" stroke-dasharray=\"4 3\" vector-effect=\"non-scaling-stroke\"/>",
                num(c.x),
                num(-c.y),
                num(r)
            );
        }
    }

    fn curve(&mut self, curve: &Curve, opacity: f64) {
        let d = match curve {
            Curve::Cs(c) => {
                self.bounds.add_components(c.components());
                path_data(c.components())
            }
            Curve::Sampled(s) => {
                for p in s.points() {
                    self.bounds.add(*p);
                }
                polyline_data(s.points())
            }
        };
        let attrs = format!(
            "class=\"curve\" fill=\"none\" stroke=\"{CURVE_STROKE}\" stroke-opacity=\"{}\" stroke-width=\"STROKE\" stroke-linejoin=\"round\"",
            num(opacity)
        );
        self.path(&d, &attrs);
    }

    fn endpoints(&mut self, x: Point2, y: Point2) {
        for p in [x, y] {
            self.bounds.add(p);
            let _ = writeln!(self.body, "  <circle class=\"endpoint\" cx=\"{}\" cy=\"{}\" r=\"RADIUS\" fill=\"#000000\"/>", num(p.x), num(-p.y));
        }
    }

    fn finish(mut self, width: f64) -> String {
        let b = self.bounds;
        let (mut w, mut h) = (b.max.x - b.min.x, b.max.y - b.min.y);
        if !(w.is_finite() && h.is_finite()) {
            w = 1.0;
            h = 1.0;
        }
        let extent = w.max(h).max(1e-9);
        let (w, h) = (w.max(1e-3 * extent), h.max(1e-3 * extent));
        let (mx, my) = (0.05 * w, 0.05 * h);
        let (vx, vy, vw, vh) = (b.min.x - mx, -(b.max.y + my), w + 2.0 * mx, h + 2.0 * my);
        self.stroke = 0.004 * extent;
        let body = self.body.replace("STROKE", &num(self.stroke)).replace("RADIUS", &num(2.0 * self.stroke));
        let height = width * vh / vw;
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">\n{body}</svg>\n",
            num(width),
            num(height),
            num(vx),
            num(vy),
            num(vw),
            num(vh)
        )
    }
}

fn regions_for(scene: &mut Scene, x: Point2, y: Point2, curve_kappa: crate::geom::KappaParams, opts: &SvgOptions) {
    if opts.regions {
        if let Ok(lens) = build_lens(x, y, curve_kappa) {
            scene.lens(&lens, true);
        }
    }
}

pub fn render_curve(curve: &Curve, opts: &SvgOptions) -> String {
    let mut s = Scene::new();
    let (x, y) = (curve.start_point(), curve.end_point());
    regions_for(&mut s, x, y, curve.kappa(), opts);
    s.curve(curve, 1.0);
    s.endpoints(x, y);
    s.finish(opts.width)
}

pub fn render_cs(curve: &CsCurve, opts: &SvgOptions) -> String {
    render_curve(&Curve::Cs(curve.clone()), opts)
}

/// Every frame as its own path, fading in from the first to the last.
pub fn render_trace(trace: &HomotopyTrace, opts: &SvgOptions) -> String {
    let mut s = Scene::new();
    let (x, y) = trace.endpoints();
    regions_for(&mut s, x, y, trace.kappa(), opts);
    let n = trace.frames.len();
    for (i, f) in trace.frames.iter().enumerate() {
        let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 1.0 };
        s.curve(&Curve::Cs(f.curve.clone()), 0.1 + 0.9 * t);
    }
    s.endpoints(x, y);
    s.finish(opts.width)
}

/// The circles `C1` and `C2` with the lens shaded, and the lobes of `E`
/// when `opts.regions` is set.
pub fn render_lens(lens: &LensGeometry, opts: &SvgOptions) -> String {
    let mut s = Scene::new();
    s.lens(lens, opts.regions);
    s.endpoints(lens.x, lens.y);
    s.finish(opts.width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Config, KappaParams};

    fn view_box(svg: &str) -> [f64; 4] {
        let i = svg.find("viewBox=\"").unwrap() + 9;
        let j = svg[i..].find('"').unwrap();
        let v: Vec<f64> = svg[i..i + j].split(' ').map(|t| t.parse().unwrap()).collect();
        [v[0], v[1], v[2], v[3]]
    }

    #[test]
    fn lens_has_two_circles_and_a_shaded_lens() {
        let lens = build_lens(Point2::ORIGIN, Point2::new(1.0, 0.0), KappaParams::unit()).unwrap();
        let svg = render_lens(&lens, &SvgOptions::default());
        assert_eq!(svg.matches("<circle class=\"c").count(), 2);
        assert_eq!(svg.matches("class=\"lens\"").count(), 1);
        assert!(svg.contains("version=\"1.1\""));
        let with_lobes = render_lens(&lens, &SvgOptions { regions: true, ..Default::default() });
        assert_eq!(with_lobes.matches("class=\"lobe\"").count(), 2);
    }

    #[test]
    fn view_box_has_five_percent_margin() {
        let c = CsCurve::arc(KappaParams::unit(), Config::new(Point2::ORIGIN, 0.0), PI).unwrap();
        let svg = render_cs(&c, &SvgOptions::default());
        // the half circle spans [0, 1] x [0, 2] before flipping
        let [x, y, w, h] = view_box(&svg);
        assert!((x - (-0.05)).abs() < 1e-6, "{x}");
        assert!((y - (-2.1)).abs() < 1e-6, "{y}");
        assert!((w - 1.1).abs() < 1e-6 && (h - 2.2).abs() < 1e-6);
        assert!(svg.contains(" A 1 1 0 0 0 "));
    }

    #[test]
    fn trace_gets_one_path_per_frame() {
        let k = KappaParams::unit();
        let a = CsCurve::segment(k, Point2::ORIGIN, Point2::new(1.0, 0.0)).unwrap();
        let mut t = HomotopyTrace::identity(a.clone());
        t.frames.push(crate::homotopy::Frame { p: 0.5, curve: a.clone() });
        t.frames.push(crate::homotopy::Frame { p: 1.0, curve: a });
        let svg = render_trace(&t, &SvgOptions::default());
        assert_eq!(svg.matches("class=\"curve\"").count(), 3);
        assert!(svg.contains("stroke-opacity=\"0.1\"") && svg.contains("stroke-opacity=\"1\""));
    }
}
