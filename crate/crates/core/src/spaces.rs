//! Finite point sets carrying one or more distance tables.
//!
//! A [`DistanceTable`] is a dense `n × n` matrix tagged as either a metric or a
//! semimetric (identity of indiscernibles and symmetry only). A
//! [`TriMetricSpace`] bundles three tables over the same labelled points.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::TOL;

/// Labelled points, optionally with Euclidean coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSpace {
    labels: Vec<String>,
    coords: Option<Vec<Vec<f64>>>,
}

impl PointSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::structural(format!("duplicate label {label:?}")));
            }
        }
        Ok(PointSpace {
            labels,
            coords: None,
        })
    }

    pub fn with_coords(labels: Vec<String>, coords: Vec<Vec<f64>>) -> Result<Self> {
        let mut space = Self::new(labels)?;
        if coords.len() != space.len() {
            return Err(Error::structural(format!(
                "{} coordinate vectors for {} labels",
                coords.len(),
                space.len()
            )));
        }
        if let Some(first) = coords.first() {
            let dim = first.len();
            if let Some(i) = coords.iter().position(|c| c.len() != dim) {
                return Err(Error::structural(format!(
                    "point {:?} has dimension {}, expected {dim}",
                    space.labels[i],
                    coords[i].len()
                )));
            }
        }
        if coords.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::structural("non-finite coordinate"));
        }
        space.coords = Some(coords);
        Ok(space)
    }

    /// Points labelled `prefix1 ..= prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        PointSpace {
            labels: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
            coords: None,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Like [`index_of`](Self::index_of) but with a structural error for unknown labels.
    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::structural(format!("unknown point label {label:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Metric,
    Semimetric,
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceKind::Metric => "metric",
            DistanceKind::Semimetric => "semimetric",
        })
    }
}

/// Dense pairwise distance matrix.
///
/// Construction only checks shape and finiteness; the axioms are checked by
/// [`validate_distance_table`] so that invalid input can be reported rather
/// than rejected outright.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    n: usize,
    values: Vec<f64>,
    kind: DistanceKind,
}

impl DistanceTable {
    pub fn from_rows(rows: Vec<Vec<f64>>, kind: DistanceKind) -> Result<Self> {
        let n = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::structural(format!(
                "distance grid is not square: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::structural(
                "distance grid contains a non-finite entry",
            ));
        }
        Ok(DistanceTable { n, values, kind })
    }

    /// Builds a table by evaluating `f` on every ordered pair.
    pub fn from_fn(n: usize, kind: DistanceKind, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::from_rows(rows, kind)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn kind(&self) -> DistanceKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: DistanceKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values
            .chunks(self.n.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Multiplies every entry by `factor` (must be positive to stay a distance).
    pub fn scaled(&self, factor: f64) -> Self {
        DistanceTable {
            n: self.n,
            values: self.values.iter().map(|v| v * factor).collect(),
            kind: self.kind,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    ZeroDiagonal,
    Symmetry,
    Positivity,
    TriangleInequality,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::ZeroDiagonal => "zero diagonal",
            Axiom::Symmetry => "symmetry",
            Axiom::Positivity => "positivity",
            Axiom::TriangleInequality => "triangle inequality",
        })
    }
}

/// A failed axiom with the indices and table entries that witness it.
///
/// For the triangle inequality `witness = [i, j, k]` and
/// `magnitudes = [d(i,k), d(i,j), d(j,k)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
    pub magnitudes: Vec<f64>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at {:?}: {:?}",
            self.axiom, self.witness, self.magnitudes
        )
    }
}

/// Lists every axiom violation of `table` for its declared kind.
///
/// Semimetrics are checked for zero diagonal, symmetry and strict
/// positivity off the diagonal; metrics additionally for all `n³` triangle
/// inequalities `d(i,k) ≤ d(i,j) + d(j,k) + TOL`. Symmetry violations are
/// reported once per unordered pair.
pub fn validate_distance_table(table: &DistanceTable) -> Vec<AxiomViolation> {
    let n = table.len();
    let mut out = Vec::new();
    for i in 0..n {
        let dii = table.get(i, i);
        if dii.abs() > TOL {
            out.push(AxiomViolation {
                axiom: Axiom::ZeroDiagonal,
                witness: vec![i],
                magnitudes: vec![dii],
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (dij, dji) = (table.get(i, j), table.get(j, i));
            if (dij - dji).abs() > TOL {
                out.push(AxiomViolation {
                    axiom: Axiom::Symmetry,
                    witness: vec![i, j],
                    magnitudes: vec![dij, dji],
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && table.get(i, j) <= 0.0 {
                out.push(AxiomViolation {
                    axiom: Axiom::Positivity,
                    witness: vec![i, j],
                    magnitudes: vec![table.get(i, j)],
                });
            }
        }
    }
    if table.kind() == DistanceKind::Metric {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (dik, dij, djk) = (table.get(i, k), table.get(i, j), table.get(j, k));
                    if dik > dij + djk + TOL {
                        out.push(AxiomViolation {
                            axiom: Axiom::TriangleInequality,
                            witness: vec![i, j, k],
                            magnitudes: vec![dik, dij, djk],
                        });
                    }
                }
            }
        }
    }
    out
}

/// Euclidean distances between the coordinates of `space`.
pub fn euclidean_table(space: &PointSpace) -> Result<DistanceTable> {
    let coords = space
        .coords()
        .ok_or_else(|| Error::structural("euclidean table requires coordinates"))?;
    DistanceTable::from_fn(space.len(), DistanceKind::Metric, |i, j| {
        coords[i]
            .iter()
            .zip(&coords[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    })
}

/// The discrete metric: 0 on the diagonal, 1 elsewhere.
pub fn discrete_table(n: usize) -> Result<DistanceTable> {
    if n == 0 {
        return Err(Error::structural(
            "discrete metric needs at least one point",
        ));
    }
    DistanceTable::from_fn(
        n,
        DistanceKind::Metric,
        |i, j| if i == j { 0.0 } else { 1.0 },
    )
}

/// One point set with three distance tables; `d1` must be a metric.
#[derive(Debug, Clone)]
pub struct TriMetricSpace {
    space: PointSpace,
    d1: DistanceTable,
    d2: DistanceTable,
    d3: DistanceTable,
}

impl TriMetricSpace {
    /// Checks dimensions, `n ≥ 3`, that `d1` is declared a metric and that all
    /// three tables satisfy the axioms of their kind.
    pub fn new(
        space: PointSpace,
        d1: DistanceTable,
        d2: DistanceTable,
        d3: DistanceTable,
    ) -> Result<Self> {
        let n = space.len();
        if n < 3 {
            return Err(Error::structural(format!(
                "three-points conditions need at least 3 points, got {n}"
            )));
        }
        if d1.kind() != DistanceKind::Metric {
            return Err(Error::structural("d1 must be a metric"));
        }
        for (name, table) in [("d1", &d1), ("d2", &d2), ("d3", &d3)] {
            if table.len() != n {
                return Err(Error::structural(format!(
                    "{name} has dimension {}, space has {n} points",
                    table.len()
                )));
            }
            if let Some(v) = validate_distance_table(table).first() {
                return Err(Error::structural(format!(
                    "{name} is not a {}: {v}",
                    table.kind()
                )));
            }
        }
        Ok(TriMetricSpace { space, d1, d2, d3 })
    }

    /// All three distances equal to `d`.
    pub fn uniform(space: PointSpace, d: DistanceTable) -> Result<Self> {
        Self::new(space, d.clone(), d.clone(), d)
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn d1(&self) -> &DistanceTable {
        &self.d1
    }

    pub fn d2(&self) -> &DistanceTable {
        &self.d2
    }

    pub fn d3(&self) -> &DistanceTable {
        &self.d3
    }
}

/// Smallest `κ` with `max(d2, d3) ≤ κ·d1` off the diagonal, and a pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparability {
    pub kappa: f64,
    pub pair: (usize, usize),
}

pub fn comparability_kappa(tri: &TriMetricSpace) -> Result<Comparability> {
    let n = tri.len();
    if n < 2 {
        return Err(Error::structural("comparability needs at least two points"));
    }
    let mut best = Comparability {
        kappa: f64::NEG_INFINITY,
        pair: (0, 1),
    };
    for u in 0..n {
        for v in (u + 1)..n {
            let ratio = tri.d2.get(u, v).max(tri.d3.get(u, v)) / tri.d1.get(u, v);
            if ratio > best.kappa {
                best = Comparability {
                    kappa: ratio,
                    pair: (u, v),
                };
            }
        }
    }
    Ok(best)
}
