//! Distances between nonempty subsets of a finite space.
//!
//! On a finite space every nonempty subset is closed and bounded, and every
//! infimum or supremum below is attained, so all three quantities are exact
//! minima/maxima over finite products:
//!
//! - `D(A,B) = min d(a,b)` ([`set_distance`]),
//! - `𝒟(A,B) = max d(a,b)` ([`set_diameter_distance`]),
//! - `H(A,B) = max(max_a D(a,B), max_b D(b,A))` ([`hausdorff_distance`]).

use std::fmt;

use crate::error::{Error, Result};
use crate::spaces::DistanceTable;

/// Nonempty set of point indices, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSubset {
    members: Vec<usize>,
}

impl IndexSubset {
    /// Builds the subset of a space with `n` points.
    pub fn new(members: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if members.is_empty() {
            return Err(Error::structural("subset must be nonempty"));
        }
        if let Some(&bad) = members.iter().find(|&&i| i >= n) {
            return Err(Error::structural(format!(
                "subset index {bad} out of range for {n} points"
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(IndexSubset { members })
    }

    pub fn singleton(i: usize) -> Self {
        IndexSubset { members: vec![i] }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &IndexSubset) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.members)
    }
}

/// `D(a, B)`: distance from a point to a set.
pub fn point_set_distance(a: usize, b: &IndexSubset, d: &DistanceTable) -> f64 {
    b.iter().map(|j| d.get(a, j)).fold(f64::INFINITY, f64::min)
}

/// Nearest member of `b` to `a`, lowest index on ties.
pub fn nearest_in(a: usize, b: &IndexSubset, d: &DistanceTable) -> usize {
    let mut best = b.members[0];
    let mut best_d = d.get(a, best);
    for j in b.iter().skip(1) {
        let dj = d.get(a, j);
        if dj < best_d {
            best = j;
            best_d = dj;
        }
    }
    best
}

/// `D(A, B) = min { d(a,b) : a ∈ A, b ∈ B }`.
pub fn set_distance(a: &IndexSubset, b: &IndexSubset, d: &DistanceTable) -> f64 {
    a.iter()
        .map(|i| point_set_distance(i, b, d))
        .fold(f64::INFINITY, f64::min)
}

/// `𝒟(A, B) = max { d(a,b) : a ∈ A, b ∈ B }`.
pub fn set_diameter_distance(a: &IndexSubset, b: &IndexSubset, d: &DistanceTable) -> f64 {
    a.iter()
        .flat_map(|i| b.iter().map(move |j| d.get(i, j)))
        .fold(0.0, f64::max)
}

/// Directed excess `max_{a ∈ A} D(a, B)`.
pub fn excess(a: &IndexSubset, b: &IndexSubset, d: &DistanceTable) -> f64 {
    a.iter()
        .map(|i| point_set_distance(i, b, d))
        .fold(0.0, f64::max)
}

/// Hausdorff–Pompeiu distance `H(A, B)`.
pub fn hausdorff_distance(a: &IndexSubset, b: &IndexSubset, d: &DistanceTable) -> f64 {
    excess(a, b, d).max(excess(b, a, d))
}
