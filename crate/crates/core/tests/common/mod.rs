#![allow(dead_code)]

use dispersive_core::geometry::{normalize, UnitVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut impl Rng, dim: usize) -> UnitVector {
    loop {
        let raw: Vec<f64> = (0..dim)
            .map(|_| -> f64 { StandardNormal.sample(&mut *rng) })
            .collect();
        if let Ok(v) = normalize(&raw) {
            return v;
        }
    }
}

pub fn units(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<UnitVector> {
    (0..n).map(|_| unit(rng, dim)).collect()
}

/// Exact-ish dot product: error-free products and compensated summation.
pub fn dot_dd(a: &[f64], b: &[f64]) -> f64 {
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(b) {
        let p = x * y;
        let pe = x.mul_add(*y, -p);
        let s = hi + p;
        let bb = s - hi;
        let se = (hi - (s - bb)) + (p - bb);
        hi = s;
        lo += se + pe;
    }
    hi + lo
}

/// Angle from the chord length, accurate at both ends of [0, π].
pub fn angle_oracle(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x + y) * (x + y))
        .sum::<f64>()
        .sqrt();
    2.0 * diff.atan2(sum)
}

pub fn full_matrix(points: &[UnitVector]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| {
                    if a == b {
                        0.0
                    } else {
                        angle_oracle(a.as_slice(), b.as_slice())
                    }
                })
                .collect()
        })
        .collect()
}

/// Union-find with path halving.
pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Kruskal MST edge weights in the order they are accepted.
pub fn kruskal(d: &[Vec<f64>]) -> Vec<(usize, usize, f64)> {
    let n = d.len();
    let mut pairs: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, d[i][j]))
        .collect();
    pairs.sort_by(|a, b| a.2.total_cmp(&b.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    let mut dsu = Dsu::new(n);
    pairs
        .into_iter()
        .filter(|&(i, j, _)| dsu.union(i, j))
        .collect()
}

/// Single-linkage clusters at `k`: components after the `n - k` lightest MST edges.
pub fn kruskal_clusters(d: &[Vec<f64>], k: usize) -> Vec<Vec<usize>> {
    let n = d.len();
    let mut dsu = Dsu::new(n);
    for (i, j, _) in kruskal(d).into_iter().take(n - k) {
        dsu.union(i, j);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = dsu.find(i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

pub mod oracles;
pub mod table4;
