//! Multi-valued three-points contractions `F: M → CB(M)` on a finite metric space.
//!
//! Four classes bound a set-valued "image perimeter" by `λ` times the
//! perimeter `d(x,y) + d(y,z) + d(z,x)` of every ordered distinct triple:
//!
//! | class                | left-hand side                     | λ range    |
//! |----------------------|------------------------------------|------------|
//! | `Tilde`              | `H(Fx,Fy) + H(Fy,Fz) + 𝒟(Fz,Fx)`   | `(0, 1)`   |
//! | `TildePrime`         | `H(Fx,Fy) + 𝒟(Fy,Fz) + 𝒟(Fz,Fx)`   | `(0, 1)`   |
//! | `TildeDoublePrime`   | `𝒟(Fx,Fy) + 𝒟(Fy,Fz) + 𝒟(Fz,Fx)`   | `(0, 1)`   |
//! | `Bar`                | `H(Fx,Fy) + H(Fy,Fz) + H(Fz,Fx)`   | `(0, 1/2)` |
//!
//! Since `H ≤ 𝒟`, the double-prime class sits inside the prime class, which
//! sits inside the tilde class.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::contraction::{sweep_pairs, sweep_triples, ContractionReport, Termination, Terms};
use crate::error::{Error, Result};
use crate::hausdorff::{hausdorff_distance, nearest_in, set_diameter_distance, IndexSubset};
use crate::single::SingleMap;
use crate::spaces::DistanceTable;

/// `images[i]` is the nonempty image set of point `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiMap {
    images: Vec<IndexSubset>,
}

impl MultiMap {
    pub fn new(images: Vec<IndexSubset>) -> Result<Self> {
        let n = images.len();
        if let Some(i) = images
            .iter()
            .position(|s| s.members().iter().any(|&j| j >= n))
        {
            return Err(Error::structural(format!(
                "image of point {i} leaves the {n}-point space"
            )));
        }
        Ok(MultiMap { images })
    }

    /// Builds a map from index lists, e.g. `[[0], [0], [0, 2]]`.
    pub fn from_lists(lists: &[&[usize]]) -> Result<Self> {
        let n = lists.len();
        let images = lists
            .iter()
            .map(|l| IndexSubset::new(l.iter().copied(), n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(images)
    }

    /// Lifts a single-valued map to singleton images.
    pub fn from_single(f: &SingleMap) -> Self {
        MultiMap {
            images: f
                .image()
                .iter()
                .map(|&j| IndexSubset::singleton(j))
                .collect(),
        }
    }

    pub fn image(&self, i: usize) -> &IndexSubset {
        &self.images[i]
    }

    pub fn images(&self) -> &[IndexSubset] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiClass {
    Tilde,
    TildePrime,
    TildeDoublePrime,
    Bar,
}

impl MultiClass {
    pub const ALL: [MultiClass; 4] = [
        MultiClass::Tilde,
        MultiClass::TildePrime,
        MultiClass::TildeDoublePrime,
        MultiClass::Bar,
    ];

    /// Exclusive upper end of the admissible `λ` range.
    pub fn lambda_sup(self) -> f64 {
        match self {
            MultiClass::Bar => 0.5,
            _ => 1.0,
        }
    }

    pub fn check_lambda(self, lambda: f64) -> Result<()> {
        if lambda > 0.0 && lambda < self.lambda_sup() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "class {self} needs λ ∈ (0, {}), got {lambda}",
                self.lambda_sup()
            )))
        }
    }
}

impl fmt::Display for MultiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MultiClass::Tilde => "tilde",
            MultiClass::TildePrime => "tilde_prime",
            MultiClass::TildeDoublePrime => "tilde_double_prime",
            MultiClass::Bar => "bar",
        })
    }
}

fn check_sizes(f: &MultiMap, d: &DistanceTable) -> Result<()> {
    if f.len() != d.len() {
        return Err(Error::structural(format!(
            "map has {} entries, table has {} points",
            f.len(),
            d.len()
        )));
    }
    Ok(())
}

fn lhs_unchecked(
    f: &MultiMap,
    d: &DistanceTable,
    x: usize,
    y: usize,
    z: usize,
    cls: MultiClass,
) -> f64 {
    let (fx, fy, fz) = (f.image(x), f.image(y), f.image(z));
    let h = |a, b| hausdorff_distance(a, b, d);
    let dd = |a, b| set_diameter_distance(a, b, d);
    match cls {
        MultiClass::Tilde => h(fx, fy) + h(fy, fz) + dd(fz, fx),
        MultiClass::TildePrime => h(fx, fy) + dd(fy, fz) + dd(fz, fx),
        MultiClass::TildeDoublePrime => dd(fx, fy) + dd(fy, fz) + dd(fz, fx),
        MultiClass::Bar => h(fx, fy) + h(fy, fz) + h(fz, fx),
    }
}

fn perimeter(d: &DistanceTable, x: usize, y: usize, z: usize) -> f64 {
    d.get(x, y) + d.get(y, z) + d.get(z, x)
}

pub fn multi_triple_lhs(
    f: &MultiMap,
    d: &DistanceTable,
    x: usize,
    y: usize,
    z: usize,
    cls: MultiClass,
) -> Result<f64> {
    check_sizes(f, d)?;
    let n = d.len();
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
    Ok(lhs_unchecked(f, d, x, y, z, cls))
}

/// Checks `lhs ≤ λ·perimeter + 1e-9` on every ordered distinct triple.
pub fn verify_three_point_multi(
    f: &MultiMap,
    d: &DistanceTable,
    lambda: f64,
    cls: MultiClass,
) -> Result<ContractionReport> {
    cls.check_lambda(lambda)?;
    check_sizes(f, d)?;
    if d.len() < 3 {
        return Err(Error::domain("three-points condition needs |M| ≥ 3"));
    }
    Ok(sweep_triples(d.len(), true, |x, y, z| {
        let p = perimeter(d, x, y, z);
        Terms {
            lhs: lhs_unchecked(f, d, x, y, z, cls),
            base: p,
            bound: lambda * p,
        }
    }))
}

/// Reports for the nested classes, innermost first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub tilde_double_prime: ContractionReport,
    pub tilde_prime: ContractionReport,
    pub tilde: ContractionReport,
    /// The verdicts respect `F̃″ ⊆ F̃′ ⊆ F̃`.
    pub chain_ok: bool,
}

pub fn class_inclusion_check(
    f: &MultiMap,
    d: &DistanceTable,
    lambda: f64,
) -> Result<InclusionReport> {
    let tilde_double_prime = verify_three_point_multi(f, d, lambda, MultiClass::TildeDoublePrime)?;
    let tilde_prime = verify_three_point_multi(f, d, lambda, MultiClass::TildePrime)?;
    let tilde = verify_three_point_multi(f, d, lambda, MultiClass::Tilde)?;
    let chain_ok =
        (!tilde_double_prime.holds || tilde_prime.holds) && (!tilde_prime.holds || tilde.holds);
    Ok(InclusionReport {
        tilde_double_prime,
        tilde_prime,
        tilde,
        chain_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionI {
    pub ok: bool,
    pub witness: Option<(usize, usize)>,
}

/// No mutual membership: `v ∈ Fu`, `u ≠ v` implies `u ∉ Fv`.
pub fn check_condition_i_multi(f: &MultiMap) -> ConditionI {
    let witness = (0..f.len()).find_map(|u| {
        f.image(u)
            .iter()
            .find(|&v| v != u && f.image(v).contains(u))
            .map(|v| (u, v))
    });
    ConditionI {
        ok: witness.is_none(),
        witness,
    }
}

/// Pairwise Nadler condition `H(Fu,Fv) ≤ λ·d(u,v)` over `u ≠ v`.
pub fn verify_nadler(f: &MultiMap, d: &DistanceTable, lambda: f64) -> Result<ContractionReport> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!(
            "Nadler constant must lie in (0,1), got {lambda}"
        )));
    }
    check_sizes(f, d)?;
    Ok(sweep_pairs(d.len(), true, |u, v| {
        let base = d.get(u, v);
        Terms {
            lhs: hausdorff_distance(f.image(u), f.image(v), d),
            base,
            bound: lambda * base,
        }
    }))
}

pub fn enumerate_fixed_points_multi(f: &MultiMap) -> Vec<usize> {
    (0..f.len()).filter(|&u| f.image(u).contains(u)).collect()
}

/// One step of the recursion on rolling perimeters, `pₙ ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecursionCheck {
    pub n: usize,
    pub p_n: f64,
    pub bound: f64,
}

impl RecursionCheck {
    pub fn holds(&self) -> bool {
        self.p_n <= self.bound + crate::numeric::TOL
    }
}

/// Orbit `uₙ₊₁ ∈ F(uₙ)` with the quantities of the multi-valued error analysis.
///
/// Each next point is the member of `F(uₙ)` nearest to `uₙ` (lowest index on
/// ties), so `d(uₙ, uₙ₊₁) = D(uₙ, F(uₙ)) ≤ H(F(uₙ₋₁), F(uₙ))`; this meets the
/// selection inequality with slack `εₙ = λⁿ` to spare.
///
/// Per step `k` (from `points[k]` to `points[k+1]`):
/// `eps_schedule[k] = λᵏ`, `step_d[k] = d(uₖ, uₖ₊₁)`,
/// `selection_bound[k] = H(F(uₖ₋₁), F(uₖ)) + λᵏ` (absent for `k = 0`) and
/// `theory_bound[k]` is `λᵏp₀ + k(λᵏ + λᵏ⁺¹)` for the tilde family or
/// `(2λ)ᵏp₀ + 2(2ᵏ − 1)(λᵏ + λᵏ⁺¹)` for the bar class.
///
/// `p_sequence[n] = d(uₙ,uₙ₊₁) + d(uₙ₊₁,uₙ₊₂) + d(uₙ₊₂,uₙ)`. When the orbit
/// ends at a fixed point `u*`, the selection would keep returning `u*`, so the
/// perimeters are computed on the orbit extended by one extra `u*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiOrbitTrace {
    pub lambda: f64,
    pub class: MultiClass,
    pub points: Vec<usize>,
    pub eps_schedule: Vec<f64>,
    pub step_d: Vec<f64>,
    pub selection_bound: Vec<Option<f64>>,
    pub p_sequence: Vec<f64>,
    pub theory_bound: Vec<f64>,
    pub terminated: Termination,
    pub fixed_point: Option<usize>,
}

impl MultiOrbitTrace {
    /// `pₙ` against the one-step recursion of the trace's class, for `n ≥ 1`:
    /// `λpₙ₋₁ + λⁿ + λⁿ⁺¹` (tilde family) or `2λpₙ₋₁ + 2λⁿ + 2λⁿ⁺¹` (bar).
    pub fn recursion_checks(&self) -> Vec<RecursionCheck> {
        let lambda = self.lambda;
        let factor = if self.class == MultiClass::Bar {
            2.0
        } else {
            1.0
        };
        (1..self.p_sequence.len())
            .map(|n| {
                let ln = lambda.powi(n as i32);
                RecursionCheck {
                    n,
                    p_n: self.p_sequence[n],
                    bound: factor * (lambda * self.p_sequence[n - 1] + ln + ln * lambda),
                }
            })
            .collect()
    }

    /// Steps whose observed distance exceeds the closed-form bound.
    pub fn theory_violations(&self) -> Vec<usize> {
        self.theory_bound
            .iter()
            .zip(&self.step_d)
            .enumerate()
            .filter(|(_, (b, s))| **s > **b + crate::numeric::TOL)
            .map(|(k, _)| k)
            .collect()
    }
}

pub fn multi_orbit(
    f: &MultiMap,
    d: &DistanceTable,
    u0: usize,
    lambda: f64,
    cls: MultiClass,
    max_iter: usize,
) -> Result<MultiOrbitTrace> {
    if max_iter == 0 {
        return Err(Error::domain("max_iter must be ≥ 1"));
    }
    cls.check_lambda(lambda)?;
    check_sizes(f, d)?;
    let n = d.len();
    if u0 >= n {
        return Err(Error::structural(format!("start index {u0} out of range")));
    }

    let mut visited = vec![false; n];
    visited[u0] = true;
    let mut points = vec![u0];
    let mut eps_schedule = Vec::new();
    let mut step_d = Vec::new();
    let mut selection_bound = Vec::new();

    let terminated = loop {
        let k = step_d.len();
        let u = points[k];
        if f.image(u).contains(u) {
            break Termination::FixedPointReached;
        }
        if k == max_iter {
            break Termination::MaxIterations;
        }
        let eps = lambda.powi(k as i32);
        let next = nearest_in(u, f.image(u), d);
        eps_schedule.push(eps);
        step_d.push(d.get(u, next));
        selection_bound
            .push((k > 0).then(|| hausdorff_distance(f.image(points[k - 1]), f.image(u), d) + eps));
        points.push(next);
        if visited[next] {
            break Termination::Cycle;
        }
        visited[next] = true;
    };

    let last = *points.last().expect("orbit is nonempty");
    let fixed_point = f.image(last).contains(last).then_some(last);

    let mut extended = points.clone();
    if let Some(p) = fixed_point {
        extended.push(p);
    }
    let p_sequence: Vec<f64> = extended
        .windows(3)
        .map(|w| perimeter(d, w[0], w[1], w[2]))
        .collect();

    let theory_bound = match p_sequence.first() {
        Some(&p0) => (0..step_d.len())
            .map(|k| {
                let lk = lambda.powi(k as i32);
                let tail = lk + lk * lambda;
                match cls {
                    MultiClass::Bar => {
                        (2.0 * lambda).powi(k as i32) * p0
                            + 2.0 * (2f64.powi(k as i32) - 1.0) * tail
                    }
                    _ => lk * p0 + k as f64 * tail,
                }
            })
            .collect(),
        None => Vec::new(),
    };

    Ok(MultiOrbitTrace {
        lambda,
        class: cls,
        points,
        eps_schedule,
        step_d,
        selection_bound,
        p_sequence,
        theory_bound,
        terminated,
        fixed_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::Witness;
    use crate::fixtures;
    use crate::single::verify_banach;
    use crate::spaces::discrete_table;

    #[test]
    fn example_lhs_values() {
        let (_, d, f) = fixtures::example_3_5();
        assert_eq!(
            multi_triple_lhs(&f, &d, 0, 1, 2, MultiClass::Tilde).unwrap(),
            2.0
        );
        assert_eq!(
            multi_triple_lhs(&f, &d, 0, 1, 2, MultiClass::Bar).unwrap(),
            2.0
        );
        assert!(matches!(
            multi_triple_lhs(&f, &d, 0, 1, 1, MultiClass::Tilde),
            Err(Error::Domain(_))
        ));
        let c = MultiMap::from_lists(&[&[0], &[0], &[0]]).unwrap();
        for cls in MultiClass::ALL {
            assert_eq!(multi_triple_lhs(&c, &d, 2, 0, 1, cls).unwrap(), 0.0);
        }
    }

    #[test]
    fn example_tilde_certificate() {
        let (_, d, f) = fixtures::example_3_5();
        let r = verify_three_point_multi(&f, &d, 2.0 / 3.0, MultiClass::Tilde).unwrap();
        assert!(r.holds);
        assert_eq!(r.checked_count, 6);
        assert!((r.max_ratio.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let r = verify_three_point_multi(&f, &d, 0.6, MultiClass::Tilde).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn class_ranges() {
        let (_, d, f) = fixtures::example_3_5();
        assert!(verify_three_point_multi(&f, &d, 0.5, MultiClass::Bar).is_err());
        assert!(verify_three_point_multi(&f, &d, 0.0, MultiClass::Tilde).is_err());
        assert!(verify_three_point_multi(&f, &d, 1.0, MultiClass::TildePrime).is_err());
        assert!(verify_three_point_multi(&f, &d, 0.49, MultiClass::Bar).is_ok());
    }

    #[test]
    fn singleton_embedding_of_single_example() {
        let (_, f) = fixtures::example_2_11();
        let m = MultiMap::from_single(&f);
        let delta = discrete_table(4).unwrap();
        let r = verify_three_point_multi(&m, &delta, 0.99, MultiClass::TildeDoublePrime).unwrap();
        assert!(!r.holds);
        assert_eq!(r.max_ratio, Some(1.0));
        assert!(r
            .violations
            .iter()
            .any(|v| v.witness == Witness::Triple([0, 1, 2])));

        let nadler = verify_nadler(&m, &delta, 0.5).unwrap();
        let banach = verify_banach(&f, &delta, 0.5).unwrap();
        assert_eq!(nadler, banach);
    }

    #[test]
    fn inclusion_chain() {
        let (_, d, f) = fixtures::example_3_5();
        let inc = class_inclusion_check(&f, &d, 2.0 / 3.0).unwrap();
        assert!(inc.chain_ok);
        assert!(inc.tilde.holds);
        // Fv1 = Fv2 and any pair involving Fv3 has H = 𝒟 = 1, so all three
        // variants peak at 2/3.
        assert!((inc.tilde_prime.max_ratio.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((inc.tilde_double_prime.max_ratio.unwrap() - 2.0 / 3.0).abs() < 1e-12);

        let c = MultiMap::from_lists(&[&[1], &[1], &[1]]).unwrap();
        let inc = class_inclusion_check(&c, &d, 0.1).unwrap();
        assert!(inc.tilde.holds && inc.tilde_prime.holds && inc.tilde_double_prime.holds);
    }

    #[test]
    fn condition_i() {
        let (_, _, f) = fixtures::example_3_5();
        assert_eq!(
            check_condition_i_multi(&f),
            ConditionI {
                ok: true,
                witness: None
            }
        );
        let swap = MultiMap::from_lists(&[&[1], &[0], &[2]]).unwrap();
        assert_eq!(
            check_condition_i_multi(&swap),
            ConditionI {
                ok: false,
                witness: Some((0, 1))
            }
        );
        let id = MultiMap::from_lists(&[&[0], &[1], &[2]]).unwrap();
        assert!(check_condition_i_multi(&id).ok);
    }

    #[test]
    fn nadler_examples() {
        let (_, d, f) = fixtures::example_3_5();
        let r = verify_nadler(&f, &d, 0.99).unwrap();
        assert!(!r.holds);
        assert_eq!(r.max_ratio, Some(1.0));
        assert_eq!(r.worst, Some(Witness::Pair([0, 2])));
        let c = MultiMap::from_lists(&[&[0], &[0], &[0]]).unwrap();
        let r = verify_nadler(&c, &d, 0.5).unwrap();
        assert!(r.holds);
        assert_eq!(r.max_ratio, Some(0.0));
    }

    #[test]
    fn fixed_point_sets() {
        let (_, _, f) = fixtures::example_3_5();
        assert_eq!(enumerate_fixed_points_multi(&f), vec![0, 2]);
        let all = MultiMap::from_lists(&[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]]).unwrap();
        assert_eq!(enumerate_fixed_points_multi(&all), vec![0, 1, 2]);
        let cyc = MultiMap::from_lists(&[&[1], &[2], &[0]]).unwrap();
        assert!(enumerate_fixed_points_multi(&cyc).is_empty());
    }

    #[test]
    fn orbit_examples() {
        let (_, d, f) = fixtures::example_3_5();
        let tr = multi_orbit(&f, &d, 1, 2.0 / 3.0, MultiClass::Tilde, 50).unwrap();
        assert_eq!(tr.points, vec![1, 0]);
        assert_eq!(tr.fixed_point, Some(0));
        assert_eq!(tr.terminated, Termination::FixedPointReached);
        assert_eq!(tr.step_d, vec![1.0]);
        assert_eq!(tr.eps_schedule, vec![1.0]);
        assert_eq!(tr.selection_bound, vec![None]);
        assert_eq!(tr.p_sequence, vec![2.0]);
        assert_eq!(tr.theory_bound, vec![2.0]);

        let tr = multi_orbit(&f, &d, 2, 2.0 / 3.0, MultiClass::Tilde, 50).unwrap();
        assert_eq!(tr.points, vec![2]);
        assert_eq!(tr.fixed_point, Some(2));
        let tr = multi_orbit(&f, &d, 0, 2.0 / 3.0, MultiClass::Tilde, 50).unwrap();
        assert_eq!(tr.points, vec![0]);
        assert!(multi_orbit(&f, &d, 0, 2.0 / 3.0, MultiClass::Tilde, 0).is_err());
        assert!(multi_orbit(&f, &d, 0, 0.7, MultiClass::Bar, 5).is_err());
    }

    #[test]
    fn orbit_selection_and_cycles() {
        let d = discrete_table(4).unwrap();
        let cyc = MultiMap::from_lists(&[&[1, 2], &[2], &[3], &[0]]).unwrap();
        let tr = multi_orbit(&cyc, &d, 0, 0.5, MultiClass::Tilde, 50).unwrap();
        // Ties in distance pick the lowest index.
        assert_eq!(tr.points, vec![0, 1, 2, 3, 0]);
        assert_eq!(tr.terminated, Termination::Cycle);
        assert_eq!(tr.fixed_point, None);
        assert_eq!(tr.p_sequence.len(), 3);
        assert!(tr.selection_bound[1].is_some());

        let tr = multi_orbit(&cyc, &d, 0, 0.5, MultiClass::Tilde, 2).unwrap();
        assert_eq!(tr.terminated, Termination::MaxIterations);
        assert_eq!(tr.points, vec![0, 1, 2]);
    }
}
