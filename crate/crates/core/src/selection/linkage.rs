//! Single-linkage clustering via the minimum spanning tree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;

/// An edge of the minimum spanning tree, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MstEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// One agglomeration step. Leaves are clusters `0..n`; the cluster created by
/// merge `m` has id `n + m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub cluster_a: usize,
    pub cluster_b: usize,
    pub distance: f64,
    pub size: usize,
}

/// Single-linkage dendrogram: `n - 1` merges in nondecreasing distance
/// order, together with the MST edge that caused each merge.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeTree {
    n: usize,
    merges: Vec<Merge>,
    edges: Vec<MstEdge>,
}

impl MergeTree {
    pub fn leaves(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// MST edges, aligned with [`MergeTree::merges`].
    pub fn edges(&self) -> &[MstEdge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.merges.iter().map(|m| m.distance).sum()
    }
}

/// Union-find with path halving; the root of a set is its smallest member.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Minimum spanning tree of the complete graph by dense Prim, O(n²).
/// Ties pick the smallest vertex index.
pub fn minimum_spanning_tree(matrix: &DistanceMatrix) -> Vec<MstEdge> {
    let n = matrix.len();
    if n < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut via = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let mut next = usize::MAX;
        let mut next_d = f64::INFINITY;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let d = matrix.get(current, j);
            if d < best[j] {
                best[j] = d;
                via[j] = current;
            }
            if next == usize::MAX || best[j] < next_d {
                next = j;
                next_d = best[j];
            }
        }
        in_tree[next] = true;
        let (i, j) = if via[next] < next {
            (via[next], next)
        } else {
            (next, via[next])
        };
        edges.push(MstEdge {
            i,
            j,
            weight: next_d,
        });
        current = next;
    }
    edges
}

/// Agglomerative single-linkage clustering. Merges are ordered by distance,
/// then by the smaller endpoint index of the MST edge, then the larger.
pub fn single_linkage(matrix: &DistanceMatrix) -> Result<MergeTree> {
    let n = matrix.len();
    if n < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            actual: n,
        });
    }
    let mut edges = minimum_spanning_tree(matrix);
    edges.sort_by(|a, b| {
        a.weight
            .total_cmp(&b.weight)
            .then(a.i.cmp(&b.i))
            .then(a.j.cmp(&b.j))
    });

    let mut sets = DisjointSets::new(n);
    // Cluster id currently labelling each set root, and that cluster's size.
    let mut label: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut merges = Vec::with_capacity(n - 1);
    for (m, e) in edges.iter().enumerate() {
        let (ra, rb) = (sets.find(e.i), sets.find(e.j));
        let (a, b) = (label[ra].min(label[rb]), label[ra].max(label[rb]));
        let merged = size[ra] + size[rb];
        sets.union(ra, rb);
        let root = ra.min(rb);
        label[root] = n + m;
        size[root] = merged;
        merges.push(Merge {
            cluster_a: a,
            cluster_b: b,
            distance: e.weight,
            size: merged,
        });
    }
    Ok(MergeTree { n, merges, edges })
}

/// Point → cluster labels in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub labels: Vec<usize>,
    pub k: usize,
}

impl ClusterAssignment {
    /// Member indices of each cluster, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &c) in self.labels.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

/// Cuts the dendrogram into `k` clusters by undoing its last `k - 1` merges.
/// Clusters are numbered by their smallest member.
pub fn cut_clusters(tree: &MergeTree, k: usize) -> Result<ClusterAssignment> {
    let n = tree.n;
    if k < 1 || k > n {
        return Err(Error::BadK { k, n });
    }
    let mut sets = DisjointSets::new(n);
    for e in &tree.edges[..n - k] {
        sets.union(e.i, e.j);
    }
    let mut id_of_root = vec![usize::MAX; n];
    let mut next = 0;
    let labels = (0..n)
        .map(|i| {
            let r = sets.find(i);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = next;
                next += 1;
            }
            id_of_root[r]
        })
        .collect();
    debug_assert_eq!(next, k);
    Ok(ClusterAssignment { labels, k })
}
