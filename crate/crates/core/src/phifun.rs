//! Comparison functions: nondecreasing `φ: [0,∞) → [0,∞)` whose iterate series
//! `Σ φⁿ(s)` converges for every `s > 0`.
//!
//! Membership cannot be decided from finitely many evaluations, so
//! [`certify_phi`] only certifies the defining properties at the resolution of
//! the supplied samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Summands below this are treated as the end of a tail sum.
pub const TAIL_EPS: f64 = 1e-15;

/// Default iteration depth for the vanishing-iterates check.
pub const DEFAULT_DEPTH: usize = 64;

/// Relative size `φ^depth(s) < VANISH_FACTOR·s` that counts as vanished.
pub const VANISH_FACTOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum ComparisonFunction {
    /// `φ(t) = λt`, `λ ∈ [0, 1)`.
    Linear { lambda: f64 },
    /// `φ(t) = ½ ln(1 + t)`.
    LogHalf,
    /// `arctan(λ₁t)` on `[0, 1/λ₁]`, `arctan(λ₂t)` beyond; discontinuous at `1/λ₁`.
    ArctanPiecewise { lambda1: f64, lambda2: f64 },
    /// Step function through sample points.
    Tabulated(StepTable),
}

/// Samples `(tᵢ, yᵢ)` with `tᵢ` strictly increasing, `yᵢ` nondecreasing and
/// `0 ≤ yᵢ < tᵢ` whenever `tᵢ > 0`.
///
/// Evaluation returns `yᵢ` for the largest `tᵢ ≤ t`, and 0 below the first
/// abscissa, so the step function stays below the identity between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTable {
    points: Vec<(f64, f64)>,
}

impl StepTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::structural(
                "tabulated function needs at least one sample",
            ));
        }
        for &(t, y) in &points {
            if !t.is_finite() || !y.is_finite() || t < 0.0 || y < 0.0 {
                return Err(Error::domain(format!(
                    "sample ({t}, {y}) must be finite and nonnegative"
                )));
            }
            if t > 0.0 && y >= t {
                return Err(Error::domain(format!(
                    "sample ({t}, {y}) is not below the identity"
                )));
            }
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::domain(
                    "sample abscissae must be strictly increasing",
                ));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::domain("sample ordinates must be nondecreasing"));
            }
        }
        Ok(StepTable { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn eval(&self, t: f64) -> f64 {
        let idx = self.points.partition_point(|&(x, _)| x <= t);
        if idx == 0 {
            0.0
        } else {
            self.points[idx - 1].1
        }
    }
}

impl ComparisonFunction {
    pub fn linear(lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::domain(format!(
                "linear φ needs λ ∈ [0,1), got {lambda}"
            )));
        }
        Ok(ComparisonFunction::Linear { lambda })
    }

    pub fn log_half() -> Self {
        ComparisonFunction::LogHalf
    }

    pub fn arctan_piecewise(lambda1: f64, lambda2: f64) -> Result<Self> {
        if !(0.0 < lambda1 && lambda1 < lambda2 && lambda2 < 1.0) {
            return Err(Error::domain(format!(
                "arctan φ needs 0 < λ1 < λ2 < 1, got λ1 = {lambda1}, λ2 = {lambda2}"
            )));
        }
        Ok(ComparisonFunction::ArctanPiecewise { lambda1, lambda2 })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        StepTable::new(points).map(ComparisonFunction::Tabulated)
    }

    /// The slope for the linear family.
    pub fn linear_lambda(&self) -> Option<f64> {
        match self {
            ComparisonFunction::Linear { lambda } => Some(*lambda),
            _ => None,
        }
    }

    /// `φ(t)` without the domain check; callers guarantee `t ≥ 0`.
    pub(crate) fn apply(&self, t: f64) -> f64 {
        match self {
            ComparisonFunction::Linear { lambda } => lambda * t,
            ComparisonFunction::LogHalf => 0.5 * t.ln_1p(),
            ComparisonFunction::ArctanPiecewise { lambda1, lambda2 } => {
                if t <= 1.0 / lambda1 {
                    (lambda1 * t).atan()
                } else {
                    (lambda2 * t).atan()
                }
            }
            ComparisonFunction::Tabulated(table) => table.eval(t),
        }
    }

    pub(crate) fn apply_n(&self, k: usize, t: f64) -> f64 {
        let mut x = t;
        for _ in 0..k {
            if x == 0.0 {
                break;
            }
            x = self.apply(x);
        }
        x
    }
}

fn check_arg(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain(format!("φ is defined on [0,∞), got {t}")));
    }
    Ok(())
}

pub fn phi_eval(phi: &ComparisonFunction, t: f64) -> Result<f64> {
    check_arg(t)?;
    Ok(phi.apply(t))
}

/// `φᵏ(t)`, with `φ⁰` the identity.
pub fn phi_iterate(phi: &ComparisonFunction, k: usize, t: f64) -> Result<f64> {
    check_arg(t)?;
    Ok(phi.apply_n(k, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub partial_sum: f64,
    pub converged: bool,
}

/// `Σ_{m=n}^{n+horizon−1} φᵐ(t)`.
///
/// The linear family returns the closed-form full tail `λⁿt/(1−λ)` instead.
/// Summation stops early once a summand drops below [`TAIL_EPS`], which also
/// marks the sum as converged.
pub fn phi_tail_bound(
    phi: &ComparisonFunction,
    n: usize,
    t: f64,
    horizon: usize,
) -> Result<TailBound> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::domain(format!("tail bound needs t > 0, got {t}")));
    }
    if horizon == 0 {
        return Err(Error::domain("tail bound needs horizon ≥ 1"));
    }
    if let Some(lambda) = phi.linear_lambda() {
        let exponent = i32::try_from(n).unwrap_or(i32::MAX);
        return Ok(TailBound {
            partial_sum: lambda.powi(exponent) * t / (1.0 - lambda),
            converged: true,
        });
    }
    let mut term = phi.apply_n(n, t);
    let mut sum = 0.0;
    let mut converged = false;
    for _ in 0..horizon {
        sum += term;
        if term < TAIL_EPS {
            converged = true;
            break;
        }
        term = phi.apply(term);
    }
    Ok(TailBound {
        partial_sum: sum,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CertificationWitness {
    Decreasing {
        s: f64,
        s_next: f64,
        phi_s: f64,
        phi_s_next: f64,
    },
    NotBelowIdentity {
        s: f64,
        phi_s: f64,
    },
    IteratesPersist {
        s: f64,
        depth: usize,
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub nondecreasing_ok: bool,
    pub strict_below_identity_ok: bool,
    pub iterates_vanish_ok: bool,
    pub witnesses: Vec<CertificationWitness>,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.nondecreasing_ok && self.strict_below_identity_ok && self.iterates_vanish_ok
    }
}

/// Certifies a comparison function at the resolution of `samples`.
pub fn certify_phi(
    phi: &ComparisonFunction,
    samples: &[f64],
    depth: usize,
) -> Result<CertificationReport> {
    certify_fn(|t| phi.apply(t), samples, depth)
}

/// Checks, on positive `samples`:
///
/// - `φ(s) ≤ φ(s′)` for sorted neighbours `s ≤ s′` (hence for all pairs);
/// - `φ(s) < s`;
/// - `φ^depth(s) < 10⁻⁶·s`, or the first `depth` iterates strictly decrease.
///
/// Each failing check contributes its first witness.
pub fn certify_fn(
    phi: impl Fn(f64) -> f64,
    samples: &[f64],
    depth: usize,
) -> Result<CertificationReport> {
    if samples.is_empty() {
        return Err(Error::domain("certification needs at least one sample"));
    }
    if depth == 0 {
        return Err(Error::domain("certification depth must be ≥ 1"));
    }
    if let Some(&s) = samples.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
        return Err(Error::domain(format!(
            "samples must be positive and finite, got {s}"
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let values: Vec<f64> = sorted.iter().map(|&s| phi(s)).collect();

    let mut witnesses = Vec::new();

    let decreasing = (1..sorted.len()).find(|&i| values[i] < values[i - 1]);
    if let Some(i) = decreasing {
        witnesses.push(CertificationWitness::Decreasing {
            s: sorted[i - 1],
            s_next: sorted[i],
            phi_s: values[i - 1],
            phi_s_next: values[i],
        });
    }

    let above = (0..sorted.len()).find(|&i| values[i] >= sorted[i]);
    if let Some(i) = above {
        witnesses.push(CertificationWitness::NotBelowIdentity {
            s: sorted[i],
            phi_s: values[i],
        });
    }

    let persisting = sorted.iter().find_map(|&s| {
        let mut x = s;
        let mut strictly_decreasing = true;
        for _ in 0..depth {
            let next = phi(x);
            if !(next < x) && x > 0.0 {
                strictly_decreasing = false;
            }
            x = next;
        }
        let vanished = x < VANISH_FACTOR * s;
        (!vanished && !strictly_decreasing).then_some(CertificationWitness::IteratesPersist {
            s,
            depth,
            value: x,
        })
    });
    if let Some(w) = persisting {
        witnesses.push(w);
    }

    Ok(CertificationReport {
        nondecreasing_ok: decreasing.is_none(),
        strict_below_identity_ok: above.is_none(),
        iterates_vanish_ok: persisting.is_none(),
        witnesses,
    })
}

/// `count` logarithmically spaced points covering `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}
