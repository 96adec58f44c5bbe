//! Built-in worked examples.

use crate::multi::MultiMap;
use crate::single::{AffinePiece, LineMetric, LineTriMetric, PiecewiseMap, SingleMap};
use crate::spaces::{discrete_table, euclidean_table, DistanceTable, PointSpace, TriMetricSpace};

/// The four planar points `w1..w4`.
pub fn example_2_11_points() -> PointSpace {
    let w3_y = -(9.0f64 - (175.0f64 / 72.0).powi(2)).sqrt();
    PointSpace::with_coords(
        vec!["w1".into(), "w2".into(), "w3".into(), "w4".into()],
        vec![
            vec![-9.0 / 4.0, 0.0],
            vec![0.0, 0.0],
            vec![175.0 / 72.0, w3_y],
            vec![-55.0 / 24.0, 5.0 * 23f64.sqrt() / 24.0],
        ],
    )
    .expect("fixture coordinates are well formed")
}

/// `w1 → w1, w2 → w2, w3 → w4, w4 → w1`.
pub fn example_2_11_map() -> SingleMap {
    SingleMap::new(vec![0, 1, 3, 0]).expect("fixture map is total")
}

/// `d1` discrete, `d2 = d3` Euclidean on `w1..w4`, with the map above.
pub fn example_2_11() -> (TriMetricSpace, SingleMap) {
    let space = example_2_11_points();
    let euclid = euclidean_table(&space).expect("fixture has coordinates");
    let delta = discrete_table(space.len()).expect("fixture is nonempty");
    let tri = TriMetricSpace::new(space, delta, euclid.clone(), euclid).expect("fixture is valid");
    (tri, example_2_11_map())
}

/// The same points and map with all three distances discrete.
pub fn example_2_11_discrete() -> (TriMetricSpace, SingleMap) {
    let space = example_2_11_points();
    let delta = discrete_table(space.len()).expect("fixture is nonempty");
    let tri = TriMetricSpace::uniform(space, delta).expect("fixture is valid");
    (tri, example_2_11_map())
}

/// The twelve triples `(i,j,k)`, `(i,k,j)`, `(j,k,i)` for `i < j < k`, 0-based.
pub const TABLE1_TRIPLES: [[usize; 3]; 12] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 2, 0],
    [0, 1, 3],
    [0, 3, 1],
    [1, 3, 0],
    [0, 2, 3],
    [0, 3, 2],
    [2, 3, 0],
    [1, 2, 3],
    [1, 3, 2],
    [2, 3, 1],
];

/// Three points under the discrete metric with
/// `Fv1 = {v1}`, `Fv2 = {v1}`, `Fv3 = {v1, v3}`.
pub fn example_3_5() -> (PointSpace, DistanceTable, MultiMap) {
    let space = PointSpace::numbered("v", 3);
    let d = discrete_table(3).expect("fixture is nonempty");
    let f = MultiMap::from_lists(&[&[0], &[0], &[0, 2]]).expect("fixture map is valid");
    (space, d, f)
}

/// On `[0, 1]`: `F(x) = x/3` on `[0, ½]`, `x/2` on `(½, 1]`; `d1` Euclidean and
/// `d2 = d3` Euclidean within each half, 1 across the halves.
pub fn interval_example() -> (PiecewiseMap, LineTriMetric) {
    let map = PiecewiseMap::new(vec![
        AffinePiece {
            upper: 0.5,
            upper_closed: true,
            scale: 1.0 / 3.0,
            offset: 0.0,
        },
        AffinePiece {
            upper: f64::INFINITY,
            upper_closed: false,
            scale: 0.5,
            offset: 0.0,
        },
    ])
    .expect("fixture map is total");
    let split = LineMetric::Split {
        cut: 0.5,
        across: 1.0,
    };
    let metrics = LineTriMetric {
        d1: LineMetric::Euclidean,
        d2: split,
        d3: split,
    };
    (map, metrics)
}
