//! Independent reference computations shared by the integration tests.
//!
//! Everything here works from the adjacency matrix and plain set arithmetic,
//! never from the Möbius coefficients the library stores.

#![allow(dead_code)]

use std::collections::BTreeSet;

use modmle::mle::MembershipDistribution;
use modmle::{ClusterScore, FuzzyCover, NodeSet, WeightedGraph};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph; retries until it has at least one edge.
pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> WeightedGraph {
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        if !edges.is_empty() {
            return WeightedGraph::simple(n, &edges).unwrap();
        }
    }
}

pub fn adjacency(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut a = vec![vec![0.0; n]; n];
    for (i, j, w) in g.edges() {
        a[i][j] = w;
        a[j][i] = w;
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kind {
    Modularity,
    DualWeight,
    CommonNeighbor,
    Cubic(f64),
}

pub const QUADRATIC: [Kind; 3] = [Kind::Modularity, Kind::DualWeight, Kind::CommonNeighbor];

impl Kind {
    pub fn build(self, g: &WeightedGraph) -> ClusterScore {
        match self {
            Kind::Modularity => ClusterScore::modularity(g).unwrap(),
            Kind::DualWeight => ClusterScore::dual_weight(g).unwrap(),
            Kind::CommonNeighbor => ClusterScore::common_neighbor(g).unwrap(),
            Kind::Cubic(beta) => ClusterScore::cubic_triangle(g, beta).unwrap(),
        }
    }
}

/// Cluster score of `a` computed from the definitions.
pub struct Oracle {
    kind: Kind,
    adj: Vec<Vec<f64>>,
    strength: Vec<f64>,
    neighbors: Vec<BTreeSet<usize>>,
}

impl Oracle {
    pub fn new(kind: Kind, g: &WeightedGraph) -> Self {
        let adj = adjacency(g);
        let n = adj.len();
        let strength = adj.iter().map(|row| row.iter().sum()).collect();
        let neighbors = (0..n).map(|i| (0..n).filter(|&j| adj[i][j] > 0.0).collect()).collect();
        Self { kind, adj, strength, neighbors }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    fn strength(&self, i: usize) -> f64 {
        self.strength[i]
    }

    fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.neighbors[i]
    }

    pub fn value(&self, a: &[usize]) -> f64 {
        match self.kind {
            Kind::Modularity => self.modularity(a),
            Kind::DualWeight => self.dual(a),
            Kind::CommonNeighbor => self.common_neighbor(a),
            Kind::Cubic(beta) => self.dual(a) + beta * self.triangle_balance(a),
        }
    }

    /// Block term of `Q = (1/2m) sum_{i,j in A} (a_ij - d_i d_j / 2m)`.
    fn modularity(&self, a: &[usize]) -> f64 {
        let two_m: f64 = (0..self.n()).map(|i| self.strength(i)).sum();
        let mut q = 0.0;
        for &i in a {
            for &j in a {
                q += self.adj[i][j] - self.strength(i) * self.strength(j) / two_m;
            }
        }
        q / two_m
    }

    /// `|A|/2 + d_A (|A|-2) / (2(n-1)) - (C(|A|,2) - |E(A)|)`.
    fn dual(&self, a: &[usize]) -> f64 {
        let k = a.len() as f64;
        let n = self.n() as f64;
        let d_a: f64 = a.iter().map(|&i| self.strength(i)).sum();
        let mut inside = 0.0;
        for (x, &i) in a.iter().enumerate() {
            for &j in &a[x + 1..] {
                inside += self.adj[i][j];
            }
        }
        k / 2.0 + d_a * (k - 2.0) / (2.0 * (n - 1.0)) - (k * (k - 1.0) / 2.0 - inside)
    }

    fn common_neighbor(&self, a: &[usize]) -> f64 {
        let mut v: f64 = a.iter().map(|&i| 1.0 / (1.0 + self.neighbors(i).len() as f64)).sum();
        for (x, &i) in a.iter().enumerate() {
            for &j in &a[x + 1..] {
                let (ni, nj) = (self.neighbors(i), self.neighbors(j));
                let union = ni.union(nj).count() as f64;
                let inter = ni.intersection(nj).count() as f64;
                let sym = ni.symmetric_difference(nj).count() as f64;
                v += self.adj[i][j] + if union == 0.0 { 0.0 } else { (inter - sym) / union };
            }
        }
        v
    }

    /// Triangles minus edgeless triples inside `a`.
    fn triangle_balance(&self, a: &[usize]) -> f64 {
        let mut t = 0.0;
        for x in 0..a.len() {
            for y in x + 1..a.len() {
                for z in y + 1..a.len() {
                    let (i, j, k) = (a[x], a[y], a[z]);
                    let e = [self.adj[i][j], self.adj[i][k], self.adj[j][k]].iter().filter(|&&w| w > 0.0).count();
                    match e {
                        3 => t += 1.0,
                        0 | 1 => t -= 1.0,
                        _ => {}
                    }
                }
            }
        }
        t
    }

    pub fn partition_value(&self, blocks: &[Vec<usize>]) -> f64 {
        blocks.iter().map(|b| self.value(b)).sum()
    }

    /// Best and worst partition values with the number of optimal partitions.
    pub fn extremes(&self) -> (f64, Vec<Vec<usize>>, usize, f64) {
        let mut best = f64::NEG_INFINITY;
        let mut best_p = Vec::new();
        let mut ties = 0;
        let mut worst = f64::INFINITY;
        for p in set_partitions(self.n()) {
            let v = self.partition_value(&p);
            if v > best + 1e-9 {
                best = v;
                best_p = p.clone();
                ties = 1;
            } else if v >= best - 1e-9 {
                ties += 1;
            }
            worst = worst.min(v);
        }
        (best, best_p, ties, worst)
    }

    /// No single member of a block scores better alone.
    pub fn is_local_optimum(&self, blocks: &[Vec<usize>]) -> bool {
        blocks.iter().all(|b| {
            let vb = self.value(b);
            b.iter().all(|&i| {
                let rest: Vec<usize> = b.iter().copied().filter(|&j| j != i).collect();
                vb >= self.value(&rest) + self.value(&[i]) - 1e-9
            })
        })
    }
}

/// Every set partition of `0..n`, blocks as sorted lists.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn grow(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..cur.len() {
            cur[k].push(i);
            grow(i + 1, n, cur, out);
            cur[k].pop();
        }
        cur.push(vec![i]);
        grow(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    grow(0, n, &mut Vec::new(), &mut out);
    out
}

/// Random fuzzy cover: every node spreads over 1 to `max_sets` random sets containing it.
pub fn random_cover(n: usize, max_sets: usize, rng: &mut ChaCha8Rng) -> FuzzyCover {
    let dists = (0..n)
        .map(|i| {
            let k = rng.gen_range(1..=max_sets);
            let mut entries: Vec<(NodeSet, f64)> = Vec::new();
            for _ in 0..k {
                let mut a: NodeSet = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                a.insert(i);
                entries.push((a, rng.gen_range(0.05..1.0)));
            }
            entries.sort_by(|x, y| x.0.cmp(&y.0));
            entries.dedup_by(|x, y| x.0 == y.0);
            let total: f64 = entries.iter().map(|e| e.1).sum();
            let entries: Vec<(NodeSet, f64)> = entries.into_iter().map(|(a, w)| (a, w / total)).collect();
            MembershipDistribution::new(i, entries).unwrap()
        })
        .collect();
    FuzzyCover::new(n, dists).unwrap()
}

pub fn members(a: &NodeSet) -> Vec<usize> {
    a.iter().collect()
}

pub fn lists(blocks: &[NodeSet]) -> Vec<Vec<usize>> {
    blocks.iter().map(members).collect()
}
