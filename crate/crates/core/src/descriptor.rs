//! JSON problem descriptors and their conversion into domain types.
//!
//! Every numeric field accepts either a JSON number or a string such as
//! `"23/25"`. A full problem file looks like
//!
//! ```json
//! {
//!   "space": {
//!     "labels": ["w1", "w2", "w3", "w4"],
//!     "coords": [["-9/4", 0], [0, 0], ["175/72", -1.7585], ["-55/24", 0.9991]],
//!     "tables": { "d1": "discrete", "d2": "euclidean", "d3": "euclidean" }
//!   },
//!   "map": { "w1": "w1", "w2": "w2", "w3": "w4", "w4": "w1" },
//!   "phi": { "family": "linear", "lambda": "23/25" }
//! }
//! ```
//!
//! Multi-valued maps use label arrays (`"v3": ["v1", "v3"]`) together with
//! `"lambda"` and `"class"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hausdorff::IndexSubset;
use crate::multi::{MultiClass, MultiMap};
use crate::numeric::Number;
use crate::phifun::ComparisonFunction;
use crate::single::{AffinePiece, LineMetric, LineTriMetric, PiecewiseMap, SingleMap};
use crate::spaces::{
    discrete_table, euclidean_table, DistanceKind, DistanceTable, PointSpace, TriMetricSpace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Validate,
    Verify,
    Fixpoints,
    Iterate,
    Scan,
    Table1,
    Example35,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Validate => "validate",
            Task::Verify => "verify",
            Task::Fixpoints => "fixpoints",
            Task::Iterate => "iterate",
            Task::Scan => "scan",
            Task::Table1 => "table1",
            Task::Example35 => "example35",
        }
    }
}

/// Top-level problem file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub task: Option<Task>,
    #[serde(default)]
    pub space: Option<SpaceDescriptor>,
    #[serde(default)]
    pub map: Option<BTreeMap<String, ImageDescriptor>>,
    #[serde(default)]
    pub phi: Option<PhiDescriptor>,
    #[serde(default)]
    pub lambda: Option<Number>,
    #[serde(default)]
    pub class: Option<MultiClass>,
    #[serde(default)]
    pub scan: Option<ScanDescriptor>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescriptor {
    pub labels: Vec<String>,
    #[serde(default)]
    pub coords: Option<Vec<Vec<Number>>>,
    pub tables: BTreeMap<String, TableDescriptor>,
}

/// `"euclidean"`, `"discrete"`, or `{ "kind": ..., "values": grid | name }`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TableDescriptor {
    Named(String),
    Full {
        #[serde(default = "metric_kind")]
        kind: DistanceKind,
        values: TableValues,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TableValues {
    Grid(Vec<Vec<Number>>),
    Named(String),
}

fn metric_kind() -> DistanceKind {
    DistanceKind::Metric
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ImageDescriptor {
    Point(String),
    Set(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiDescriptor {
    Linear { lambda: Number },
    LogHalf,
    ArctanPiecewise { lambda1: Number, lambda2: Number },
    Tabulated { points: Vec<(Number, Number)> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanDescriptor {
    pub interval: (Number, Number),
    pub map: Vec<PieceDescriptor>,
    pub metrics: LineMetricsDescriptor,
    /// Claimed bound on the ratio; the scan verdict checks `max R ≤ lambda`.
    #[serde(default)]
    pub lambda: Option<Number>,
}

/// One affine piece; omit `upto` for the final, unbounded piece.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDescriptor {
    #[serde(default)]
    pub upto: Option<Number>,
    #[serde(default = "yes")]
    pub closed: bool,
    pub scale: Number,
    #[serde(default)]
    pub offset: Option<Number>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineMetricsDescriptor {
    pub d1: LineMetricDescriptor,
    #[serde(default)]
    pub d2: Option<LineMetricDescriptor>,
    #[serde(default)]
    pub d3: Option<LineMetricDescriptor>,
}

/// `"euclidean"` or `{ "split": c, "across": a }`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LineMetricDescriptor {
    Named(String),
    Split { split: Number, across: Number },
}

/// A point set with its named tables, in file order `d`, `d1`, `d2`, `d3`, ….
#[derive(Debug, Clone)]
pub struct LoadedSpace {
    pub points: PointSpace,
    pub tables: BTreeMap<String, DistanceTable>,
}

impl LoadedSpace {
    pub fn table(&self, name: &str) -> Option<&DistanceTable> {
        self.tables.get(name)
    }

    /// `d1`, with `d2` and `d3` defaulting to `d1` when absent.
    pub fn tri_metric(&self) -> Result<TriMetricSpace> {
        let d1 = self
            .table("d1")
            .or_else(|| self.table("d"))
            .ok_or_else(|| Error::structural("space needs a \"d1\" table"))?;
        let d2 = self.table("d2").unwrap_or(d1);
        let d3 = self.table("d3").unwrap_or(d1);
        TriMetricSpace::new(self.points.clone(), d1.clone(), d2.clone(), d3.clone())
    }

    /// The single metric used by multi-valued checks: `d`, else `d1`.
    pub fn metric(&self) -> Result<&DistanceTable> {
        self.table("d")
            .or_else(|| self.table("d1"))
            .ok_or_else(|| Error::structural("space needs a \"d\" or \"d1\" table"))
    }
}

#[derive(Debug, Clone)]
pub enum LoadedMap {
    Single(SingleMap),
    Multi(MultiMap),
}

impl SpaceDescriptor {
    pub fn load(&self) -> Result<LoadedSpace> {
        let points = match &self.coords {
            Some(coords) => PointSpace::with_coords(
                self.labels.clone(),
                coords
                    .iter()
                    .map(|c| c.iter().map(|x| x.value()).collect())
                    .collect(),
            )?,
            None => PointSpace::new(self.labels.clone())?,
        };
        if self.tables.is_empty() {
            return Err(Error::structural("space declares no distance tables"));
        }
        let mut tables = BTreeMap::new();
        for (name, desc) in &self.tables {
            let table = desc
                .build(&points)
                .map_err(|e| Error::structural(format!("table {name:?}: {e}")))?;
            if table.len() != points.len() {
                return Err(Error::structural(format!(
                    "table {name:?} is {}×{0}, space has {} points",
                    table.len(),
                    points.len()
                )));
            }
            tables.insert(name.clone(), table);
        }
        Ok(LoadedSpace { points, tables })
    }
}

impl TableDescriptor {
    fn build(&self, points: &PointSpace) -> Result<DistanceTable> {
        match self {
            TableDescriptor::Named(name) => named_table(name, points),
            TableDescriptor::Full { kind, values } => {
                let table = match values {
                    TableValues::Named(name) => named_table(name, points)?,
                    TableValues::Grid(rows) => DistanceTable::from_rows(
                        rows.iter()
                            .map(|r| r.iter().map(|x| x.value()).collect())
                            .collect(),
                        *kind,
                    )?,
                };
                Ok(table.with_kind(*kind))
            }
        }
    }
}

fn named_table(name: &str, points: &PointSpace) -> Result<DistanceTable> {
    match name {
        "euclidean" => euclidean_table(points),
        "discrete" => discrete_table(points.len()),
        other => Err(Error::structural(format!(
            "unknown table {other:?} (expected \"euclidean\", \"discrete\" or a grid)"
        ))),
    }
}

/// Resolves a label-keyed map against `points`; every point needs an image and
/// all images must be of one shape (single label or label list).
pub fn load_map(map: &BTreeMap<String, ImageDescriptor>, points: &PointSpace) -> Result<LoadedMap> {
    let n = points.len();
    for key in map.keys() {
        points.require(key)?;
    }
    let images: Vec<&ImageDescriptor> = points
        .labels()
        .iter()
        .map(|l| {
            map.get(l)
                .ok_or_else(|| Error::structural(format!("map has no image for {l:?}")))
        })
        .collect::<Result<_>>()?;
    let all_single = images
        .iter()
        .all(|i| matches!(i, ImageDescriptor::Point(_)));
    let all_multi = images.iter().all(|i| matches!(i, ImageDescriptor::Set(_)));
    if all_single {
        let image = images
            .iter()
            .map(|i| match i {
                ImageDescriptor::Point(l) => points.require(l),
                ImageDescriptor::Set(_) => unreachable!(),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LoadedMap::Single(SingleMap::new(image)?))
    } else if all_multi {
        let sets = images
            .iter()
            .map(|i| match i {
                ImageDescriptor::Set(ls) => {
                    let idx = ls
                        .iter()
                        .map(|l| points.require(l))
                        .collect::<Result<Vec<_>>>()?;
                    IndexSubset::new(idx, n)
                }
                ImageDescriptor::Point(_) => unreachable!(),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LoadedMap::Multi(MultiMap::new(sets)?))
    } else {
        Err(Error::structural(
            "map mixes single labels and label lists; use one form for every point",
        ))
    }
}

impl PhiDescriptor {
    pub fn build(&self) -> Result<ComparisonFunction> {
        match self {
            PhiDescriptor::Linear { lambda } => ComparisonFunction::linear(lambda.value()),
            PhiDescriptor::LogHalf => Ok(ComparisonFunction::log_half()),
            PhiDescriptor::ArctanPiecewise { lambda1, lambda2 } => {
                ComparisonFunction::arctan_piecewise(lambda1.value(), lambda2.value())
            }
            PhiDescriptor::Tabulated { points } => ComparisonFunction::tabulated(
                points.iter().map(|(t, y)| (t.value(), y.value())).collect(),
            ),
        }
    }
}

/// A ready-to-run interval scan.
#[derive(Debug, Clone)]
pub struct ScanSetup {
    pub lo: f64,
    pub hi: f64,
    pub map: PiecewiseMap,
    pub metrics: LineTriMetric,
    pub lambda: Option<f64>,
}

impl ScanDescriptor {
    pub fn build(&self) -> Result<ScanSetup> {
        let pieces = self
            .map
            .iter()
            .map(|p| AffinePiece {
                upper: p.upto.map_or(f64::INFINITY, Number::value),
                upper_closed: p.closed,
                scale: p.scale.value(),
                offset: p.offset.map_or(0.0, Number::value),
            })
            .collect();
        let d1 = self.metrics.d1.build()?;
        let d2 = self
            .metrics
            .d2
            .as_ref()
            .map_or(Ok(d1), LineMetricDescriptor::build)?;
        let d3 = self
            .metrics
            .d3
            .as_ref()
            .map_or(Ok(d1), LineMetricDescriptor::build)?;
        Ok(ScanSetup {
            lo: self.interval.0.value(),
            hi: self.interval.1.value(),
            map: PiecewiseMap::new(pieces)?,
            metrics: LineTriMetric { d1, d2, d3 },
            lambda: self.lambda.map(Number::value),
        })
    }
}

impl LineMetricDescriptor {
    fn build(&self) -> Result<LineMetric> {
        match self {
            LineMetricDescriptor::Named(n) if n == "euclidean" => Ok(LineMetric::Euclidean),
            LineMetricDescriptor::Named(other) => Err(Error::structural(format!(
                "unknown line metric {other:?} (expected \"euclidean\" or a split rule)"
            ))),
            LineMetricDescriptor::Split { split, across } => {
                LineMetric::split(split.value(), across.value())
            }
        }
    }
}
