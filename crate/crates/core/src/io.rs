//! JSON curve and trace documents.
//!
//! Emission is canonical: object keys sorted, every real written with 17
//! significant digits, one trailing newline. Parsing rejects unknown fields
//! and reports which of three categories a failure belongs to.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::geom::{ArcComponent, Component, CsCurve, Curve, KappaParams, Point2, SampledCurve, SegmentComponent};
use crate::homotopy::{ElementaryMove, Frame, HomotopyTrace, MoveKind};
use crate::validation::validate;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Not well-formed JSON or not UTF-8.
    Syntax,
    /// Well-formed, but not a document of the expected shape.
    Schema,
    /// A well-shaped document describing a curve that fails validation.
    Validation,
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCategory::Syntax => "syntax",
            ErrorCategory::Schema => "schema",
            ErrorCategory::Validation => "validation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{category} error{}: {message}", location(*.line, *.column, .field.as_deref()))]
pub struct ParseError {
    pub category: ErrorCategory,
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    /// Dotted path of the offending field, when known.
    pub field: Option<String>,
}

fn location(line: Option<usize>, column: Option<usize>, field: Option<&str>) -> String {
    let mut s = String::new();
    if let (Some(l), Some(c)) = (line, column) {
        s.push_str(&format!(" at line {l} column {c}"));
    }
    if let Some(f) = field {
        s.push_str(&format!(" in `{f}`"));
    }
    s
}

impl ParseError {
    fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { category: ErrorCategory::Schema, message: message.into(), line: None, column: None, field: Some(field.into()) }
    }

    fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            category: ErrorCategory::Validation,
            message: message.into(),
            line: None,
            column: None,
            field: Some(field.into()),
        }
    }

    fn from_json(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        let category = match e.classify() {
            Category::Syntax | Category::Eof | Category::Io => ErrorCategory::Syntax,
            Category::Data => ErrorCategory::Schema,
        };
        let line = (e.line() > 0).then_some(e.line());
        let column = (e.line() > 0).then_some(e.column());
        // serde_json appends its own position; keep the bare message
        let mut message = e.to_string();
        if let Some(i) = message.rfind(" at line ") {
            message.truncate(i);
        }
        Self { category, message, line, column, field: None }
    }
}

pub type ParseResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ComponentDoc {
    Arc { center: [f64; 2], radius: f64, start_angle: f64, sweep: f64 },
    Segment { start: [f64; 2], end: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum CurveKind {
    Cs,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    format_version: String,
    kappa: f64,
    kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    components: Option<Vec<ComponentDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameDoc {
    p: f64,
    components: Vec<ComponentDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveDoc {
    kind: MoveKind,
    p_start: f64,
    p_end: f64,
    params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceDoc {
    format_version: String,
    kappa: f64,
    endpoints: [[f64; 2]; 2],
    frames: Vec<FrameDoc>,
    moves: Vec<MoveDoc>,
}

fn pt(p: Point2) -> [f64; 2] {
    [p.x, p.y]
}

fn from_pt(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

fn component_doc(c: &Component) -> ComponentDoc {
    match c {
        Component::Arc(a) => ComponentDoc::Arc { center: pt(a.center), radius: a.radius, start_angle: a.start_angle, sweep: a.sweep },
        Component::Segment(s) => ComponentDoc::Segment { start: pt(s.start), end: pt(s.end) },
    }
}

fn check_finite(field: &str, values: &[f64]) -> ParseResult<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(ParseError::schema(field, "non-finite number"))
    }
}

fn component_of(field: &str, d: &ComponentDoc) -> ParseResult<Component> {
    match *d {
        ComponentDoc::Arc { center, radius, start_angle, sweep } => {
            check_finite(field, &[center[0], center[1], radius, start_angle, sweep])?;
            if radius <= 0.0 {
                return Err(ParseError::schema(format!("{field}.radius"), "radius must be positive"));
            }
            Ok(Component::Arc(ArcComponent::new(from_pt(center), radius, start_angle, sweep)))
        }
        ComponentDoc::Segment { start, end } => {
            check_finite(field, &[start[0], start[1], end[0], end[1]])?;
            Ok(Component::Segment(SegmentComponent::new(from_pt(start), from_pt(end))))
        }
    }
}

fn kappa_of(k: f64) -> ParseResult<KappaParams> {
    if !(k.is_finite() && k > 0.0) {
        return Err(ParseError::schema("kappa", format!("kappa must be a positive real, got {k}")));
    }
    KappaParams::new(k).map_err(|e| ParseError::schema("kappa", e.to_string()))
}

fn check_version(v: &str) -> ParseResult<()> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(ParseError::schema("format_version", format!("unsupported format version {v:?}")))
    }
}

fn cs_of(kappa: KappaParams, field: &str, comps: &[ComponentDoc]) -> ParseResult<CsCurve> {
    let comps = comps
        .iter()
        .enumerate()
        .map(|(i, d)| component_of(&format!("{field}[{i}]"), d))
        .collect::<ParseResult<Vec<_>>>()?;
    CsCurve::new(kappa, comps).map_err(|e| ParseError::schema(field, e.to_string()))
}

fn from_bytes<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> ParseResult<T> {
    let text = std::str::from_utf8(bytes).map_err(|e| ParseError {
        category: ErrorCategory::Syntax,
        message: format!("invalid UTF-8: {e}"),
        line: None,
        column: None,
        field: None,
    })?;
    serde_json::from_str(text).map_err(ParseError::from_json)
}

/// Structural parse without the curvature and joint checks, for commands
/// that report on invalid curves.
pub fn parse_curve_unchecked(bytes: &[u8]) -> ParseResult<Curve> {
    let doc: CurveDoc = from_bytes(bytes)?;
    check_version(&doc.format_version)?;
    let kappa = kappa_of(doc.kappa)?;
    match (doc.kind, doc.components, doc.points) {
        (CurveKind::Cs, Some(components), None) => Ok(Curve::Cs(cs_of(kappa, "components", &components)?)),
        (CurveKind::Sampled, None, Some(points)) => {
            for (i, p) in points.iter().enumerate() {
                check_finite(&format!("points[{i}]"), p)?;
            }
            let pts = points.iter().map(|&p| from_pt(p)).collect();
            SampledCurve::new(kappa, pts).map(Curve::Sampled).map_err(|e| ParseError::schema("points", e.to_string()))
        }
        (CurveKind::Cs, _, _) => Err(ParseError::schema("components", "a cs document has `components` and no `points`")),
        (CurveKind::Sampled, _, _) => Err(ParseError::schema("points", "a sampled document has `points` and no `components`")),
    }
}

/// Parses and validates a curve document.
pub fn parse_curve(bytes: &[u8]) -> ParseResult<Curve> {
    let curve = parse_curve_unchecked(bytes)?;
    let rep = validate(&curve);
    if let Some(v) = rep.first_violation() {
        let field = match &curve {
            Curve::Cs(_) => "components",
            Curve::Sampled(_) => "points",
        };
        return Err(ParseError::validation(
            field,
            format!("{} violation of magnitude {:e} at arc length {}", v.kind, v.magnitude, v.location),
        ));
    }
    Ok(curve)
}

/// Structural parse of a trace document. Frame validity and continuity are
/// left to [`crate::homotopy::verify_trace`].
pub fn parse_trace(bytes: &[u8]) -> ParseResult<HomotopyTrace> {
    let doc: TraceDoc = from_bytes(bytes)?;
    check_version(&doc.format_version)?;
    let kappa = kappa_of(doc.kappa)?;
    if doc.frames.is_empty() {
        return Err(ParseError::schema("frames", "a trace needs at least one frame"));
    }
    let mut frames = Vec::with_capacity(doc.frames.len());
    for (i, f) in doc.frames.iter().enumerate() {
        check_finite(&format!("frames[{i}].p"), &[f.p])?;
        let curve = cs_of(kappa, &format!("frames[{i}].components"), &f.components)?;
        frames.push(Frame { p: f.p, curve });
    }
    let (x, y) = (from_pt(doc.endpoints[0]), from_pt(doc.endpoints[1]));
    check_finite("endpoints", &[x.x, x.y, y.x, y.y])?;
    let first = &frames[0].curve;
    if first.start_point().dist(x) > 1e-9 || first.end_point().dist(y) > 1e-9 {
        return Err(ParseError::validation("endpoints", "endpoints do not match the first frame"));
    }
    let moves = doc
        .moves
        .into_iter()
        .map(|m| ElementaryMove { kind: m.kind, p_start: m.p_start, p_end: m.p_end, params: m.params })
        .collect();
    Ok(HomotopyTrace { frames, moves })
}

/// Writes every float as `d.dddddddddddddddde±x`, 17 significant digits,
/// which round-trips any finite `f64`.
struct CanonicalFormatter;

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        // -0 and 0 print alike so that ±0 inputs emit one canonical form
        let v = if value == 0.0 { 0.0 } else { value };
        write!(w, "{v:.16e}")
    }
}

fn emit<T: Serialize>(doc: &T) -> Vec<u8> {
    // round through Value so that map keys come out sorted
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    value.serialize(&mut ser).expect("writing to a Vec cannot fail");
    out.push(b'\n');
    out
}

pub fn emit_curve(curve: &Curve) -> Vec<u8> {
    let mut doc = CurveDoc {
        format_version: FORMAT_VERSION.into(),
        kappa: curve.kappa().kappa(),
        kind: CurveKind::Cs,
        components: None,
        points: None,
    };
    match curve {
        Curve::Cs(c) => doc.components = Some(c.components().iter().map(component_doc).collect()),
        Curve::Sampled(s) => {
            doc.kind = CurveKind::Sampled;
            doc.points = Some(s.points().iter().map(|&p| pt(p)).collect());
        }
    }
    emit(&doc)
}

pub fn emit_cs(curve: &CsCurve) -> Vec<u8> {
    emit_curve(&Curve::Cs(curve.clone()))
}

pub fn emit_trace(trace: &HomotopyTrace) -> Vec<u8> {
    let (x, y) = trace.endpoints();
    let doc = TraceDoc {
        format_version: FORMAT_VERSION.into(),
        kappa: trace.kappa().kappa(),
        endpoints: [pt(x), pt(y)],
        frames: trace
            .frames
            .iter()
            .map(|f| FrameDoc { p: f.p, components: f.curve.components().iter().map(component_doc).collect() })
            .collect(),
        moves: trace
            .moves
            .iter()
            .map(|m| MoveDoc { kind: m.kind, p_start: m.p_start, p_end: m.p_end, params: m.params.clone() })
            .collect(),
    };
    emit(&doc)
}

/// Whether a frame sequence mixes curvature bounds. Documents carry one
/// global kappa, so such traces cannot be emitted.
pub fn has_mixed_kappa(trace: &HomotopyTrace) -> bool {
    let k = trace.kappa().kappa();
    trace.frames.iter().any(|f| f.curve.kappa().kappa() != k)
}
