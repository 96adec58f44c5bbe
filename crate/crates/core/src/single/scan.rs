//! Grid-sampled ratio scans for three-points contractions on a real interval.
//!
//! A scan certifies `R(x,y,z) ≤ λ` only at the grid resolution; it says
//! nothing about the continuum between grid points.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing sample points inside `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledDomain {
    lo: f64,
    hi: f64,
    points: Vec<f64>,
}

impl SampledDomain {
    pub fn new(lo: f64, hi: f64, points: Vec<f64>) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::domain(format!("bad interval [{lo}, {hi}]")));
        }
        if points.len() < 3 {
            return Err(Error::domain(format!(
                "grid needs at least 3 points, got {}",
                points.len()
            )));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("grid points must be strictly increasing"));
        }
        if points.iter().any(|&p| p < lo || p > hi) {
            return Err(Error::domain("grid points must lie inside the interval"));
        }
        Ok(SampledDomain { lo, hi, points })
    }

    /// `lo + k(hi − lo)/steps` for `k = 0..=steps`.
    pub fn uniform(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let points = (0..=steps)
            .map(|k| lo + (hi - lo) * k as f64 / steps as f64)
            .collect();
        Self::new(lo, hi, points)
    }

    /// The grid points satisfying `keep`, over the same interval.
    pub fn restrict(&self, keep: impl Fn(f64) -> bool) -> Result<Self> {
        let points = self.points.iter().copied().filter(|&p| keep(p)).collect();
        Self::new(self.lo, self.hi, points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// `x ↦ scale·x + offset` on the part of the line up to `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub upper: f64,
    pub upper_closed: bool,
    pub scale: f64,
    pub offset: f64,
}

impl AffinePiece {
    fn admits(&self, x: f64) -> bool {
        if self.upper_closed {
            x <= self.upper
        } else {
            x < self.upper
        }
    }
}

/// Piecewise-affine real map; `x` is sent through the first piece that admits it.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseMap {
    pieces: Vec<AffinePiece>,
}

impl PiecewiseMap {
    /// The last piece must be unbounded above so the map is total.
    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self> {
        match pieces.last() {
            None => Err(Error::structural("piecewise map needs at least one piece")),
            Some(p) if p.upper != f64::INFINITY => Err(Error::structural(
                "last piece of a piecewise map must be unbounded above",
            )),
            Some(_) => {
                if pieces.windows(2).any(|w| w[1].upper < w[0].upper) {
                    return Err(Error::structural("piece bounds must be nondecreasing"));
                }
                Ok(PiecewiseMap { pieces })
            }
        }
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn apply(&self, x: f64) -> f64 {
        let piece = self
            .pieces
            .iter()
            .find(|p| p.admits(x))
            .expect("last piece admits every finite x");
        piece.scale * x + piece.offset
    }
}

/// Distance rules on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LineMetric {
    /// `|x − y|`.
    Euclidean,
    /// `|x − y|` when `x, y ≤ cut` or `x, y > cut`, otherwise the constant `across`.
    Split { cut: f64, across: f64 },
}

impl LineMetric {
    pub fn split(cut: f64, across: f64) -> Result<Self> {
        if !(across > 0.0) || !cut.is_finite() || !across.is_finite() {
            return Err(Error::domain(format!(
                "split rule needs a finite cut and positive across distance, got ({cut}, {across})"
            )));
        }
        Ok(LineMetric::Split { cut, across })
    }

    pub fn distance(&self, x: f64, y: f64) -> f64 {
        match *self {
            LineMetric::Euclidean => (x - y).abs(),
            LineMetric::Split { cut, across } => {
                if x == y {
                    0.0
                } else if (x <= cut) == (y <= cut) {
                    (x - y).abs()
                } else {
                    across
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineTriMetric {
    pub d1: LineMetric,
    pub d2: LineMetric,
    pub d3: LineMetric,
}

/// Extremes of `R(x,y,z)` over ordered distinct grid triples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub max_r: f64,
    pub argmax: [f64; 3],
    pub min_r: f64,
    pub argmin: [f64; 3],
    pub triple_count: usize,
}

#[derive(Clone, Copy)]
struct Extremes {
    max: (f64, [usize; 3]),
    min: (f64, [usize; 3]),
    count: usize,
}

impl Extremes {
    fn merge(self, later: Extremes) -> Extremes {
        Extremes {
            max: if later.max.0 > self.max.0 {
                later.max
            } else {
                self.max
            },
            min: if later.min.0 < self.min.0 {
                later.min
            } else {
                self.min
            },
            count: self.count + later.count,
        }
    }
}

/// Scans
///
/// ```text
/// R(x,y,z) = [d1(Fx,Fy) + d2(Fy,Fz) + d3(Fz,Fx)] / [d1(x,y) + d2(y,z) + d3(z,x)]
/// ```
///
/// over all ordered triples of distinct grid points. Threads split the work
/// by first index and merge in index order, so ties resolve to the
/// lexicographically first triple regardless of scheduling.
pub fn sampled_ratio_scan(
    map: &PiecewiseMap,
    grid: &SampledDomain,
    metrics: &LineTriMetric,
) -> Result<ScanResult> {
    let xs = grid.points();
    let n = xs.len();
    let images: Vec<f64> = xs.iter().map(|&x| map.apply(x)).collect();
    let table = |m: &LineMetric, pts: &[f64]| -> Vec<f64> {
        pts.iter()
            .flat_map(|&a| pts.iter().map(move |&b| m.distance(a, b)))
            .collect()
    };
    let base = [
        table(&metrics.d1, xs),
        table(&metrics.d2, xs),
        table(&metrics.d3, xs),
    ];
    let img = [
        table(&metrics.d1, &images),
        table(&metrics.d2, &images),
        table(&metrics.d3, &images),
    ];
    for (k, t) in base.iter().enumerate() {
        let degenerate = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !(t[i * n + j] > 0.0));
        if let Some((i, j)) = degenerate {
            return Err(Error::domain(format!(
                "d{} vanishes between distinct grid points {} and {}",
                k + 1,
                xs[i],
                xs[j]
            )));
        }
    }

    let per_x: Vec<Extremes> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut acc = Extremes {
                max: (f64::NEG_INFINITY, [0; 3]),
                min: (f64::INFINITY, [0; 3]),
                count: 0,
            };
            for y in (0..n).filter(|&y| y != x) {
                let num_xy = img[0][x * n + y];
                let den_xy = base[0][x * n + y];
                for z in (0..n).filter(|&z| z != x && z != y) {
                    let num = num_xy + img[1][y * n + z] + img[2][z * n + x];
                    let den = den_xy + base[1][y * n + z] + base[2][z * n + x];
                    let r = num / den;
                    if r > acc.max.0 {
                        acc.max = (r, [x, y, z]);
                    }
                    if r < acc.min.0 {
                        acc.min = (r, [x, y, z]);
                    }
                    acc.count += 1;
                }
            }
            acc
        })
        .collect();
    let total = per_x
        .into_iter()
        .reduce(Extremes::merge)
        .expect("grid has at least 3 points");
    let at = |t: [usize; 3]| [xs[t[0]], xs[t[1]], xs[t[2]]];
    Ok(ScanResult {
        max_r: total.max.0,
        argmax: at(total.max.1),
        min_r: total.min.0,
        argmin: at(total.min.1),
        triple_count: total.count,
    })
}
