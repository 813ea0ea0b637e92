//! Explicit curvature-bounded homotopies, recorded as frame sequences.
//!
//! Every move is generated as a one-parameter family of cs curves and
//! sampled adaptively: intervals are bisected until consecutive frames are
//! within half the continuity bound, and each frame is checked for validity,
//! fixed endpoints and class on the way out.

mod arcs;
mod family;
mod moves;
mod paths;
mod reduce;
mod verify;

pub use arcs::{build_homotopy, build_homotopy_with, closed_bridge, homotope_arc_to_arc, middle_curve};
pub use moves::{move_type1, move_type2, move_type3, Side};
pub use paths::{continue_csc, free_start_path, simplify};
pub use reduce::{canonical_minimizer, minimizers, reduce, reduce_step, reduce_with, ReduceOptions};
pub use verify::{delta_frame, verify_trace};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{CsCurve, KappaParams, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    TypeI,
    TypeII,
    TypeIII,
    FragmentReplacement,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Annotation for the frames `p_start ..= p_end` of a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementaryMove {
    pub kind: MoveKind,
    pub p_start: f64,
    pub p_end: f64,
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub p: f64,
    pub curve: CsCurve,
}

/// Ordered frames `H(p)` with `p` from 0 to 1, plus move annotations.
/// A single-frame trace is the identity and has only `p = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyTrace {
    pub frames: Vec<Frame>,
    pub moves: Vec<ElementaryMove>,
}

impl HomotopyTrace {
    pub fn identity(curve: CsCurve) -> Self {
        Self { frames: vec![Frame { p: 0.0, curve }], moves: Vec::new() }
    }

    pub fn first(&self) -> &CsCurve {
        &self.frames[0].curve
    }

    pub fn last(&self) -> &CsCurve {
        &self.frames[self.frames.len() - 1].curve
    }

    pub fn kappa(&self) -> KappaParams {
        self.first().kappa()
    }

    pub fn endpoints(&self) -> (Point2, Point2) {
        (self.first().start_point(), self.first().end_point())
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.curve.total_length()).collect()
    }

    /// The same frames in the opposite order.
    pub fn reversed(&self) -> Self {
        let mut b = TraceBuilder::new(self.last().clone());
        let n = self.frames.len();
        let index = |p: f64| ((1.0 - p) * (n - 1) as f64).round() as usize;
        let frames: Vec<CsCurve> = self.frames.iter().rev().map(|f| f.curve.clone()).collect();
        b.frames = frames;
        b.moves = self
            .moves
            .iter()
            .rev()
            .map(|m| (m.kind, m.params.clone(), index(m.p_end), index(m.p_start)))
            .collect();
        b.finish()
    }

    /// `self` followed by `other`, whose first frame must be `self`'s last.
    pub fn then(&self, other: &HomotopyTrace) -> Result<Self> {
        let mut b = TraceBuilder::from_trace(self);
        b.append_trace(other)?;
        Ok(b.finish())
    }

    /// Applies a rigid map to every frame.
    pub fn map_curves(&self, f: impl Fn(&CsCurve) -> CsCurve) -> Self {
        Self {
            frames: self.frames.iter().map(|fr| Frame { p: fr.p, curve: f(&fr.curve) }).collect(),
            moves: self.moves.clone(),
        }
    }
}

/// Accumulates frames and moves; `p` values are assigned at the end.
#[derive(Debug, Clone)]
pub(crate) struct TraceBuilder {
    frames: Vec<CsCurve>,
    moves: Vec<(MoveKind, BTreeMap<String, f64>, usize, usize)>,
}

/// Frames closer than this are the same curve for trace joining.
const SAME_FRAME: f64 = 1e-9;

impl TraceBuilder {
    pub fn new(first: CsCurve) -> Self {
        Self { frames: vec![first], moves: Vec::new() }
    }

    pub fn from_trace(t: &HomotopyTrace) -> Self {
        let n = t.frames.len();
        let index = |p: f64| (p * (n.max(2) - 1) as f64).round() as usize;
        Self {
            frames: t.frames.iter().map(|f| f.curve.clone()).collect(),
            moves: t.moves.iter().map(|m| (m.kind, m.params.clone(), index(m.p_start), index(m.p_end))).collect(),
        }
    }

    pub fn last(&self) -> &CsCurve {
        self.frames.last().unwrap()
    }

    /// Adds a family whose first frame repeats the current last frame.
    pub fn append(&mut self, frames: Vec<CsCurve>, kind: MoveKind, params: BTreeMap<String, f64>) {
        if frames.len() < 2 {
            return;
        }
        let start = self.frames.len() - 1;
        self.frames.extend(frames.into_iter().skip(1));
        let end = self.frames.len() - 1;
        self.moves.push((kind, params, start, end));
    }

    pub fn append_trace(&mut self, t: &HomotopyTrace) -> Result<()> {
        let gap = self.last().uniform_distance(t.first(), 256);
        if gap > SAME_FRAME {
            return Err(Error::Domain(format!("traces do not meet: gap {gap:.3e}")));
        }
        let offset = self.frames.len() - 1;
        let other = TraceBuilder::from_trace(t);
        self.frames.extend(other.frames.into_iter().skip(1));
        for (k, p, a, b) in other.moves {
            self.moves.push((k, p, a + offset, b + offset));
        }
        Ok(())
    }

    pub fn finish(self) -> HomotopyTrace {
        let n = self.frames.len();
        let denom = (n.max(2) - 1) as f64;
        let frames = self
            .frames
            .into_iter()
            .enumerate()
            .map(|(i, curve)| Frame { p: if n == 1 { 0.0 } else { i as f64 / denom }, curve })
            .collect();
        let moves = self
            .moves
            .into_iter()
            .map(|(kind, params, a, b)| ElementaryMove { kind, p_start: a as f64 / denom, p_end: b as f64 / denom, params })
            .collect();
        HomotopyTrace { frames, moves }
    }
}

pub(crate) fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
