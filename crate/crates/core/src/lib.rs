//! Verification of three-points contraction conditions on finite metric spaces.
//!
//! The crate checks single-valued three-points contractions over three
//! distances `d1, d2, d3` with a comparison function `φ`, their multi-valued
//! counterparts built from the Hausdorff–Pompeiu distance, and the classical
//! Banach and Nadler baselines. It also runs the Picard-type orbits used to
//! reach fixed points and records the error bounds along the way.
//!
//! Everything operates on finite point sets, where infima and suprema are
//! attained and checks are exhaustive. Continuous examples on an interval are
//! handled by grid sampling in [`single::sampled_ratio_scan`].

// `!(x > 0.0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod contraction;
pub mod descriptor;
pub mod error;
pub mod fixtures;
pub mod hausdorff;
pub mod multi;
pub mod numeric;
pub mod phifun;
pub mod single;
pub mod spaces;

pub use contraction::{ContractionReport, Termination, Violation, Witness};
pub use error::{Error, Result};
pub use hausdorff::IndexSubset;
pub use multi::{MultiClass, MultiMap};
pub use phifun::ComparisonFunction;
pub use single::SingleMap;
pub use spaces::{DistanceKind, DistanceTable, PointSpace, TriMetricSpace};
