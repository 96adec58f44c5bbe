#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tripoint::{DistanceKind, DistanceTable, IndexSubset, MultiMap};

/// Shortest-path closure of random symmetric weights in `[1, 10)`: always a metric.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> DistanceTable {
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let x: f64 = rng.gen_range(1.0..10.0);
            w[i][j] = x;
            w[j][i] = x;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if w[i][k] + w[k][j] < w[i][j] {
                    w[i][j] = w[i][k] + w[k][j];
                }
            }
        }
    }
    DistanceTable::from_rows(w, DistanceKind::Metric).unwrap()
}

/// A uniformly random nonempty subset of `0..n`.
pub fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> IndexSubset {
    let mask = rng.gen_range(1..(1u32 << n));
    IndexSubset::new((0..n).filter(|i| mask >> i & 1 == 1), n).unwrap()
}

pub fn random_multi_map(rng: &mut ChaCha8Rng, n: usize) -> MultiMap {
    MultiMap::new((0..n).map(|_| random_subset(rng, n)).collect()).unwrap()
}

/// Every nonempty subset of `0..n`.
pub fn all_subsets(n: usize) -> Vec<IndexSubset> {
    (1..(1u32 << n))
        .map(|mask| IndexSubset::new((0..n).filter(|i| mask >> i & 1 == 1), n).unwrap())
        .collect()
}

/// Hausdorff distance straight from the definition.
pub fn brute_hausdorff(a: &[usize], b: &[usize], d: &DistanceTable) -> f64 {
    let directed = |x: &[usize], y: &[usize]| {
        x.iter()
            .map(|&p| y.iter().map(|&q| d.get(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

pub fn ordered_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n)
        .flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
        .filter(|&(x, y, z)| x != y && y != z && z != x)
}

/// Points on a line whose gaps grow geometrically, so maps that step down
/// the chain tend to contract perimeters. Returns the Euclidean table.
pub fn chain_metric(rng: &mut ChaCha8Rng, n: usize) -> DistanceTable {
    let growth: f64 = rng.gen_range(1.5..4.0);
    let mut pos = vec![0.0f64; n];
    for k in 1..n {
        pos[k] = pos[k - 1] + growth.powi(k as i32) * rng.gen_range(0.5..1.5);
    }
    DistanceTable::from_fn(n, DistanceKind::Metric, |i, j| (pos[i] - pos[j]).abs()).unwrap()
}

/// `fixed` fixed points at the bottom of the chain; every other point maps
/// to one of the two points just below it.
pub fn chain_map(rng: &mut ChaCha8Rng, n: usize, fixed: usize) -> Vec<usize> {
    (0..n)
        .map(|k| {
            if k < fixed {
                k
            } else {
                k - rng.gen_range(1..=2.min(k))
            }
        })
        .collect()
}

/// Like [`chain_map`] but each point maps to a nonempty subset of the two
/// points below it; point 0 keeps itself.
pub fn chain_multi_map(rng: &mut ChaCha8Rng, n: usize) -> MultiMap {
    let images = (0..n)
        .map(|k| match k {
            0 => IndexSubset::singleton(0),
            1 => IndexSubset::singleton(0),
            _ => {
                let pick: u8 = rng.gen_range(1..4);
                let members = [k - 1, k - 2]
                    .into_iter()
                    .enumerate()
                    .filter(|(b, _)| pick >> b & 1 == 1)
                    .map(|(_, m)| m);
                IndexSubset::new(members, n).unwrap()
            }
        })
        .collect();
    MultiMap::new(images).unwrap()
}
