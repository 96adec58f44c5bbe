//! Shared verification plumbing: reports, witnesses and the deterministic
//! parallel sweep over ordered triples and unordered pairs.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numeric::TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Pair([usize; 2]),
    Triple([usize; 3]),
}

impl Witness {
    pub fn indices(&self) -> &[usize] {
        match self {
            Witness::Pair(p) => p,
            Witness::Triple(t) => t,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair([u, v]) => write!(f, "({u},{v})"),
            Witness::Triple([x, y, z]) => write!(f, "({x},{y},{z})"),
        }
    }
}

/// A tuple where `lhs > bound + TOL`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub witness: Witness,
    pub lhs: f64,
    pub bound: f64,
}

/// Outcome of checking a contraction inequality over every admissible tuple.
///
/// `max_ratio` is the largest `lhs / perimeter` and is only populated for
/// linear bounds. `worst` realizes `max_ratio` when it is populated and
/// otherwise the largest `lhs − bound`. Violations are in lexicographic order
/// of their witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub holds: bool,
    pub max_ratio: Option<f64>,
    pub worst: Option<Witness>,
    pub violations: Vec<Violation>,
    pub checked_count: usize,
}

/// Per-tuple terms: the left-hand side, the distance quantity it is compared
/// against (perimeter or pair distance) and the bound already applied to it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Terms {
    pub lhs: f64,
    pub base: f64,
    pub bound: f64,
}

struct Partial {
    best: Option<(f64, Witness)>,
    violations: Vec<Violation>,
    count: usize,
}

impl Partial {
    fn empty() -> Self {
        Partial {
            best: None,
            violations: Vec::new(),
            count: 0,
        }
    }

    fn record(&mut self, witness: Witness, terms: Terms, ratio_mode: bool) {
        self.count += 1;
        let score = if ratio_mode {
            terms.lhs / terms.base
        } else {
            terms.lhs - terms.bound
        };
        if self.best.is_none_or(|(b, _)| score > b) {
            self.best = Some((score, witness));
        }
        if terms.lhs > terms.bound + TOL {
            self.violations.push(Violation {
                witness,
                lhs: terms.lhs,
                bound: terms.bound,
            });
        }
    }

    /// Appends `later`, whose witnesses all sort after ours.
    fn absorb(&mut self, later: Partial) {
        self.count += later.count;
        self.violations.extend(later.violations);
        if let Some((s, w)) = later.best {
            if self.best.is_none_or(|(b, _)| s > b) {
                self.best = Some((s, w));
            }
        }
    }

    fn finish(self, ratio_mode: bool) -> ContractionReport {
        ContractionReport {
            holds: self.violations.is_empty(),
            max_ratio: if ratio_mode {
                self.best.map(|(s, _)| s)
            } else {
                None
            },
            worst: self.best.map(|(_, w)| w),
            violations: self.violations,
            checked_count: self.count,
        }
    }
}

/// Evaluates `eval` on all `n(n−1)(n−2)` ordered triples of distinct indices.
///
/// Work is split by first index across threads; partial results are merged in
/// index order so the report does not depend on scheduling. Ties in the
/// maximum resolve to the lexicographically smallest triple.
pub(crate) fn sweep_triples<F>(n: usize, ratio_mode: bool, eval: F) -> ContractionReport
where
    F: Fn(usize, usize, usize) -> Terms + Sync,
{
    let partials: Vec<Partial> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut acc = Partial::empty();
            for y in (0..n).filter(|&y| y != x) {
                for z in (0..n).filter(|&z| z != x && z != y) {
                    acc.record(Witness::Triple([x, y, z]), eval(x, y, z), ratio_mode);
                }
            }
            acc
        })
        .collect();
    merge(partials).finish(ratio_mode)
}

/// Evaluates `eval` on all unordered pairs `u < v`.
pub(crate) fn sweep_pairs<F>(n: usize, ratio_mode: bool, eval: F) -> ContractionReport
where
    F: Fn(usize, usize) -> Terms,
{
    let mut acc = Partial::empty();
    for u in 0..n {
        for v in (u + 1)..n {
            acc.record(Witness::Pair([u, v]), eval(u, v), ratio_mode);
        }
    }
    acc.finish(ratio_mode)
}

fn merge(partials: Vec<Partial>) -> Partial {
    partials.into_iter().fold(Partial::empty(), |mut acc, p| {
        acc.absorb(p);
        acc
    })
}

/// Why an orbit stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    FixedPointReached,
    BoundBelowTolerance,
    MaxIterations,
    /// A point was revisited before any fixed point appeared.
    Cycle,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::FixedPointReached => "fixed point reached",
            Termination::BoundBelowTolerance => "error bound below tolerance",
            Termination::MaxIterations => "iteration limit reached",
            Termination::Cycle => "cycle, no fixed point reached",
        })
    }
}
