//! Curvature-bounded planar curves between two points: validation, region
//! classification, CSC normalization and explicit homotopies between curves
//! of the same class.

pub mod dubins;
pub mod error;
pub mod geom;
pub mod homotopy;
pub mod io;
pub mod regions;
pub mod svg;
pub mod validation;

pub use error::{Error, Result};
