//! Single-valued three-points contractions.
//!
//! A self-map `F` of a [`TriMetricSpace`] is a three-points contraction for a
//! comparison function `φ` when, for every ordered triple of pairwise distinct
//! points,
//!
//! ```text
//! d1(Fx,Fy) + d2(Fy,Fz) + d3(Fz,Fx) ≤ φ(d1(x,y) + d2(y,z) + d3(z,x)).
//! ```
//!
//! The inequality is not symmetric in `(x, y, z)` so all `n(n−1)(n−2)` ordered
//! triples are checked. On a finite space with `d1` a metric every map is
//! continuous, so a passing certificate together with
//! [`check_no_two_cycles`] gives between one and two fixed points.

mod scan;

pub use scan::{
    sampled_ratio_scan, AffinePiece, LineMetric, LineTriMetric, PiecewiseMap, SampledDomain,
    ScanResult,
};

use serde::{Deserialize, Serialize};

use crate::contraction::{
    sweep_pairs, sweep_triples, ContractionReport, Termination, Terms, Witness,
};
use crate::error::{Error, Result};
use crate::numeric::TOL;
use crate::phifun::{phi_tail_bound, ComparisonFunction};
use crate::spaces::{DistanceTable, TriMetricSpace};

/// Horizon used for tail sums of non-linear comparison functions.
const TAIL_HORIZON: usize = 10_000;

/// Default tolerance on the comparison-function tail in [`picard_orbit`].
pub const DEFAULT_ORBIT_TOL: f64 = 1e-12;

/// A total self-map of point indices: `image[i]` is the index of `F(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingleMap {
    image: Vec<usize>,
}

impl SingleMap {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if let Some((i, &j)) = image.iter().enumerate().find(|(_, &j)| j >= n) {
            return Err(Error::structural(format!(
                "image of point {i} is {j}, outside 0..{n}"
            )));
        }
        Ok(SingleMap { image })
    }

    pub fn identity(n: usize) -> Self {
        SingleMap {
            image: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, target: usize) -> Result<Self> {
        Self::new(vec![target; n])
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }
}

/// Both sides of the three-points inequality before `φ` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleTerms {
    pub lhs: f64,
    pub rhs_arg: f64,
}

impl TripleTerms {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs_arg
    }
}

fn check_map(f: &SingleMap, n: usize) -> Result<()> {
    if f.len() != n {
        return Err(Error::structural(format!(
            "map has {} entries, space has {n} points",
            f.len()
        )));
    }
    Ok(())
}

fn check_distinct(n: usize, x: usize, y: usize, z: usize) -> Result<()> {
    if x >= n || y >= n || z >= n {
        return Err(Error::structural(format!(
            "triple ({x},{y},{z}) out of range"
        )));
    }
    if x == y || y == z || z == x {
        return Err(Error::domain(format!(
            "triple ({x},{y},{z}) is not pairwise distinct"
        )));
    }
    Ok(())
}

fn terms_unchecked(
    f: &SingleMap,
    tri: &TriMetricSpace,
    x: usize,
    y: usize,
    z: usize,
) -> TripleTerms {
    let (fx, fy, fz) = (f.apply(x), f.apply(y), f.apply(z));
    TripleTerms {
        lhs: tri.d1().get(fx, fy) + tri.d2().get(fy, fz) + tri.d3().get(fz, fx),
        rhs_arg: tri.d1().get(x, y) + tri.d2().get(y, z) + tri.d3().get(z, x),
    }
}

pub fn triple_lhs_rhs(
    f: &SingleMap,
    tri: &TriMetricSpace,
    x: usize,
    y: usize,
    z: usize,
) -> Result<TripleTerms> {
    check_map(f, tri.len())?;
    check_distinct(tri.len(), x, y, z)?;
    Ok(terms_unchecked(f, tri, x, y, z))
}

/// Checks the three-points inequality on every ordered distinct triple.
///
/// A triple passes when `lhs ≤ φ(rhs_arg) + 1e-9`. For the linear family the
/// report also carries the largest ratio `lhs / rhs_arg`.
pub fn verify_three_point_single(
    f: &SingleMap,
    tri: &TriMetricSpace,
    phi: &ComparisonFunction,
) -> Result<ContractionReport> {
    let n = tri.len();
    if n < 3 {
        return Err(Error::domain("three-points condition needs |M| ≥ 3"));
    }
    check_map(f, n)?;
    let ratio_mode = phi.linear_lambda().is_some();
    Ok(sweep_triples(n, ratio_mode, |x, y, z| {
        let t = terms_unchecked(f, tri, x, y, z);
        Terms {
            lhs: t.lhs,
            base: t.rhs_arg,
            bound: phi.apply(t.rhs_arg),
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCycleCheck {
    pub ok: bool,
    pub witness: Option<usize>,
}

/// No point of exact period two: `F(Fu) ≠ u` whenever `Fu ≠ u`.
pub fn check_no_two_cycles(f: &SingleMap) -> TwoCycleCheck {
    let witness = (0..f.len()).find(|&u| {
        let fu = f.apply(u);
        fu != u && f.apply(fu) == u
    });
    TwoCycleCheck {
        ok: witness.is_none(),
        witness,
    }
}

pub fn enumerate_fixed_points_single(f: &SingleMap) -> Vec<usize> {
    (0..f.len()).filter(|&u| f.apply(u) == u).collect()
}

/// Smallest slope `λ` for which `F` is a three-points contraction with
/// `φ(t) = λt`, or the ratio that rules every `λ < 1` out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LambdaFit {
    Contractive { lambda: f64, triple: [usize; 3] },
    NotContractive { ratio: f64, triple: [usize; 3] },
}

impl LambdaFit {
    pub fn lambda(&self) -> Option<f64> {
        match self {
            LambdaFit::Contractive { lambda, .. } => Some(*lambda),
            LambdaFit::NotContractive { .. } => None,
        }
    }
}

pub fn fit_min_lambda(f: &SingleMap, tri: &TriMetricSpace) -> Result<LambdaFit> {
    let n = tri.len();
    if n < 3 {
        return Err(Error::domain("three-points condition needs |M| ≥ 3"));
    }
    check_map(f, n)?;
    let report = sweep_triples(n, true, |x, y, z| {
        let t = terms_unchecked(f, tri, x, y, z);
        Terms {
            lhs: t.lhs,
            base: t.rhs_arg,
            bound: f64::INFINITY,
        }
    });
    let ratio = report.max_ratio.unwrap_or(0.0);
    let triple = match report.worst {
        Some(Witness::Triple(t)) => t,
        _ => [0, 1, 2],
    };
    Ok(if ratio < 1.0 {
        LambdaFit::Contractive {
            lambda: ratio,
            triple,
        }
    } else {
        LambdaFit::NotContractive { ratio, triple }
    })
}

/// Pairwise Banach condition `d(Fu,Fv) ≤ λ·d(u,v)` over `u ≠ v`.
pub fn verify_banach(f: &SingleMap, d: &DistanceTable, lambda: f64) -> Result<ContractionReport> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::domain(format!(
            "Banach constant must lie in [0,1), got {lambda}"
        )));
    }
    if f.len() != d.len() {
        return Err(Error::structural(format!(
            "map has {} entries, table has {} points",
            f.len(),
            d.len()
        )));
    }
    Ok(sweep_pairs(d.len(), true, |u, v| {
        let base = d.get(u, v);
        Terms {
            lhs: d.get(f.apply(u), f.apply(v)),
            base,
            bound: lambda * base,
        }
    }))
}

/// What the first three orbit points say about the initial perimeter `τ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tau0Status {
    /// `u₀, u₁, u₂` are pairwise distinct.
    Defined,
    /// `u₀` or `u₁` is already fixed.
    FixedPointFirst,
    /// `u₂ = u₀ ≠ u₁`: the map has a 2-cycle, so the no-two-cycle condition fails.
    TwoCycle,
}

/// Picard iteration log with the error bounds `d1(uₖ, uₖ₊₁) ≤ φᵏ(τ₀)`.
///
/// `points[k+1] = F(points[k])`. The orbit stops at the first fixed point
/// without repeating it, so `step_d1` has one entry fewer than `points`.
/// `bounds` is filled only when `τ₀` is defined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub points: Vec<usize>,
    pub step_d1: Vec<f64>,
    pub bounds: Vec<f64>,
    pub tau0: Option<f64>,
    pub tau0_status: Tau0Status,
    pub terminated: Termination,
    pub fixed_point: Option<usize>,
    /// Steps `k` with `step_d1[k] > bounds[k] + 1e-9`.
    pub bound_violations: Vec<usize>,
}

pub fn picard_orbit(
    f: &SingleMap,
    tri: &TriMetricSpace,
    u0: usize,
    phi: &ComparisonFunction,
    max_iter: usize,
    tol: f64,
) -> Result<OrbitTrace> {
    if max_iter == 0 {
        return Err(Error::domain("max_iter must be ≥ 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = tri.len();
    check_map(f, n)?;
    if u0 >= n {
        return Err(Error::structural(format!("start index {u0} out of range")));
    }

    let u1 = f.apply(u0);
    let u2 = f.apply(u1);
    let (tau0_status, tau0) = if u1 == u0 || u2 == u1 {
        (Tau0Status::FixedPointFirst, None)
    } else if u2 == u0 {
        (Tau0Status::TwoCycle, None)
    } else {
        let tau = tri.d1().get(u0, u1) + tri.d2().get(u1, u2) + tri.d3().get(u2, u0);
        (Tau0Status::Defined, Some(tau))
    };

    let mut visited = vec![false; n];
    visited[u0] = true;
    let mut points = vec![u0];
    let mut step_d1 = Vec::new();
    let mut bounds = Vec::new();
    let mut bound_violations = Vec::new();

    let terminated = loop {
        let k = step_d1.len();
        let u = points[k];
        let next = f.apply(u);
        if next == u {
            break Termination::FixedPointReached;
        }
        if let Some(tau) = tau0 {
            if phi_tail_bound(phi, k, tau, TAIL_HORIZON)?.partial_sum < tol {
                break Termination::BoundBelowTolerance;
            }
        }
        if k == max_iter {
            break Termination::MaxIterations;
        }
        let step = tri.d1().get(u, next);
        step_d1.push(step);
        if let Some(tau) = tau0 {
            let bound = phi.apply_n(k, tau);
            if step > bound + TOL {
                bound_violations.push(k);
            }
            bounds.push(bound);
        }
        points.push(next);
        if visited[next] {
            break Termination::Cycle;
        }
        visited[next] = true;
    };

    let last = *points.last().expect("orbit is nonempty");
    Ok(OrbitTrace {
        fixed_point: (f.apply(last) == last).then_some(last),
        points,
        step_d1,
        bounds,
        tau0,
        tau0_status,
        terminated,
        bound_violations,
    })
}
