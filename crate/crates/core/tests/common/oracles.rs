//! Naive reference implementations, written without the library's helpers.

use std::collections::HashMap;

use dispersive_core::geometry::UnitVector;

use super::{angle_oracle, full_matrix, kruskal};

pub fn remote_clique(d: &[Vec<f64>]) -> f64 {
    let n = d.len() as f64;
    d.iter().flatten().sum::<f64>() / (n * n)
}

pub fn chamfer(d: &[Vec<f64>]) -> f64 {
    if d.len() == 1 {
        return 0.0;
    }
    let mut total = 0.0;
    for (i, row) in d.iter().enumerate() {
        let mut best = f64::INFINITY;
        for (j, &x) in row.iter().enumerate() {
            if i != j && x < best {
                best = x;
            }
        }
        total += best;
    }
    total / d.len() as f64
}

pub fn mst_dispersion(d: &[Vec<f64>]) -> f64 {
    let edges = kruskal(d);
    if edges.is_empty() {
        return 0.0;
    }
    edges.iter().map(|e| e.2).sum::<f64>() / edges.len() as f64
}

pub fn sparseness(d: &[Vec<f64>]) -> f64 {
    let totals: Vec<f64> = d.iter().map(|r| r.iter().sum()).collect();
    let mut m = 0;
    for i in 1..totals.len() {
        if totals[i] < totals[m] {
            m = i;
        }
    }
    totals[m] / d.len() as f64
}

/// Linear-interpolated percentile at rank p/100·(N-1).
pub fn percentile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = p / 100.0 * (v.len() - 1) as f64;
    let k = pos as usize;
    if k + 1 >= v.len() {
        return v[v.len() - 1];
    }
    v[k] * (1.0 - (pos - k as f64)) + v[k + 1] * (pos - k as f64)
}

pub fn span(points: &[UnitVector], p: f64) -> f64 {
    let dim = points[0].as_slice().len();
    let mut c = vec![0.0; dim];
    for x in points {
        for (ci, xi) in c.iter_mut().zip(x.as_slice()) {
            *ci += xi;
        }
    }
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    c.iter_mut().for_each(|x| *x /= norm);
    let d: Vec<f64> = points
        .iter()
        .map(|x| angle_oracle(x.as_slice(), &c))
        .collect();
    percentile(&d, p)
}

/// Shannon entropy of grid occupancy; bounds default to the bounding box.
pub fn entropy(coords: &[[f64; 2]], grid: usize, bounds: Option<[f64; 4]>) -> f64 {
    let [x0, x1, y0, y1] = bounds.unwrap_or_else(|| {
        let xs = coords.iter().map(|c| c[0]);
        let ys = coords.iter().map(|c| c[1]);
        [
            xs.clone().fold(f64::INFINITY, f64::min),
            xs.fold(f64::NEG_INFINITY, f64::max),
            ys.clone().fold(f64::INFINITY, f64::min),
            ys.fold(f64::NEG_INFINITY, f64::max),
        ]
    });
    let cell = |v: f64, lo: f64, hi: f64| -> usize {
        if hi <= lo {
            return 0;
        }
        let k = ((v - lo) / (hi - lo) * grid as f64).floor();
        (k.max(0.0) as usize).min(grid - 1)
    };
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for c in coords {
        *counts
            .entry((cell(c[0], x0, x1), cell(c[1], y0, y1)))
            .or_default() += 1;
    }
    let n = coords.len() as f64;
    -counts
        .values()
        .map(|&k| (k as f64 / n) * (k as f64 / n).ln())
        .sum::<f64>()
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations: (values, columns).
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i][i]).collect();
    let columns = (0..n)
        .map(|j| v.iter().map(|row| row[j]).collect())
        .collect();
    (values, columns)
}

/// Top-two principal coordinates from the eigenvectors of the centred Gram
/// matrix, with the smaller of the gaps around the second eigenvalue.
pub fn pca_gram(points: &[UnitVector]) -> (Vec<[f64; 2]>, f64) {
    let n = points.len();
    let dim = points[0].as_slice().len();
    let mean: Vec<f64> = (0..dim)
        .map(|j| points.iter().map(|p| p.as_slice()[j]).sum::<f64>() / n as f64)
        .collect();
    let x: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.as_slice().iter().zip(&mean).map(|(a, m)| a - m).collect())
        .collect();
    let gram: Vec<Vec<f64>> = x
        .iter()
        .map(|a| {
            x.iter()
                .map(|b| a.iter().zip(b).map(|(p, q)| p * q).sum())
                .collect()
        })
        .collect();
    let (values, vectors) = jacobi_eigen(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let lam = |k: usize| order.get(k).map_or(0.0, |&i| values[i].max(0.0));
    let gap = (lam(0) - lam(1)).min(lam(1) - lam(2));
    // principal coordinate k of point i is u_k[i] · sqrt(lambda_k)
    let coord = |i: usize, k: usize| {
        order
            .get(k)
            .map_or(0.0, |&j| vectors[j][i] * values[j].max(0.0).sqrt())
    };
    ((0..n).map(|i| [coord(i, 0), coord(i, 1)]).collect(), gap)
}

pub fn matrix(points: &[UnitVector]) -> Vec<Vec<f64>> {
    full_matrix(points)
}

pub mod thematic {
    use std::collections::BTreeSet;

    use dispersive_core::metrics::MessageCodes;
    use rand::seq::IndexedRandom;
    use rand::Rng;

    /// Random messages drawing 0-3 categories and themes from small vocabularies.
    pub fn dataset(rng: &mut impl Rng, n: usize) -> Vec<MessageCodes> {
        let cats = ["Goals", "Diet", "Sleep", "Social", "Habit", "Mood", "Rest"];
        let themes = ["stress", "family", "work", "travel", "pets"];
        (0..n)
            .map(|k| MessageCodes {
                id: format!("m{k:04}"),
                categories: (0..rng.random_range(0..4))
                    .map(|_| cats.choose(rng).unwrap().to_string())
                    .collect(),
                themes: (0..rng.random_range(0..3))
                    .map(|_| themes.choose(rng).unwrap().to_string())
                    .collect(),
            })
            .collect()
    }

    /// Distinct labels and the per-message count of one label, by direct scanning.
    pub fn labels(msgs: &[MessageCodes], theme: bool) -> BTreeSet<String> {
        msgs.iter()
            .flat_map(|m| {
                if theme {
                    m.themes.clone()
                } else {
                    m.categories.clone()
                }
            })
            .collect()
    }

    pub fn messages_with(msgs: &[MessageCodes], theme: bool, label: &str) -> usize {
        msgs.iter()
            .filter(|m| {
                if theme { &m.themes } else { &m.categories }
                    .iter()
                    .any(|l| l == label)
            })
            .count()
    }

    /// Instance-weighted mean of 1 - f/N over the distinct labels of each message.
    pub fn mean_originality(msgs: &[MessageCodes], theme: bool, np: usize) -> f64 {
        let (mut sum, mut count) = (0.0, 0usize);
        for m in msgs {
            let own: BTreeSet<&String> = if theme { &m.themes } else { &m.categories }
                .iter()
                .collect();
            for l in own {
                sum += 1.0 - messages_with(msgs, theme, l) as f64 / np as f64;
                count += 1;
            }
        }
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }
}
