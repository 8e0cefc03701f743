//! Five canonical 2-D configurations in the unit square, Euclidean distance.

use dispersive_core::geometry::DistanceMatrix;
use dispersive_core::metrics::{
    chamfer, grid_entropy, mst_dispersion, remote_clique, span_from_distances, sparseness,
    EntropyConfig, GridBounds, SpanConfig,
};

pub const METRICS: [&str; 6] = [
    "remote_clique",
    "chamfer",
    "mst_dispersion",
    "span",
    "sparseness",
    "entropy",
];

pub fn fixtures() -> Vec<(&'static str, Vec<[f64; 2]>)> {
    let tight: Vec<[f64; 2]> = (0..16)
        .map(|k| {
            let a = k as f64 * std::f64::consts::TAU / 16.0;
            [
                0.5 + 0.01 * (k % 4) as f64 * a.cos() / 3.0,
                0.5 + 0.01 * (k % 4) as f64 * a.sin() / 3.0,
            ]
        })
        .collect();
    let two: Vec<[f64; 2]> = (0..16)
        .map(|k| {
            let cx = if k < 8 { 0.3 } else { 0.7 };
            [cx + 0.005 * (k % 3) as f64, 0.5 + 0.005 * (k % 4) as f64]
        })
        .collect();
    let ring: Vec<[f64; 2]> = (0..16)
        .map(|k| {
            let a = k as f64 * std::f64::consts::TAU / 16.0;
            [0.5 + 0.25 * a.cos(), 0.5 + 0.25 * a.sin()]
        })
        .collect();
    let mut outlier: Vec<[f64; 2]> = tight[..15].to_vec();
    outlier.push([0.95, 0.9]);
    let lattice = [0.05, 0.35, 0.65, 0.95];
    let uniform: Vec<[f64; 2]> = lattice
        .iter()
        .flat_map(|&x| lattice.iter().map(move |&y| [x, y]))
        .collect();
    vec![
        ("tight_cluster", tight),
        ("two_clusters", two),
        ("ring", ring),
        ("cluster_with_outlier", outlier),
        ("uniform", uniform),
    ]
}

fn euclid(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// The six collective metrics on one fixture, in [`METRICS`] order.
pub fn evaluate(points: &[[f64; 2]]) -> [f64; 6] {
    let m = DistanceMatrix::from_fn(points.len(), |i, j| euclid(points[i], points[j]));
    let n = points.len() as f64;
    let c = [
        points.iter().map(|p| p[0]).sum::<f64>() / n,
        points.iter().map(|p| p[1]).sum::<f64>() / n,
    ];
    let to_centre: Vec<f64> = points.iter().map(|&p| euclid(p, c)).collect();
    let cfg = EntropyConfig {
        grid: 5,
        bounds: Some(GridBounds {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
        }),
    };
    [
        remote_clique(&m).unwrap(),
        chamfer(&m).unwrap(),
        mst_dispersion(&m).unwrap(),
        span_from_distances(&to_centre, &SpanConfig::default()).unwrap(),
        sparseness(&m).unwrap(),
        grid_entropy(points, &cfg).unwrap(),
    ]
}
