//! Cluster-score set functions in Möbius-coefficient form.
//!
//! A score `v` on vertex subsets is stored through the coefficients
//! `mu(A)` of its Möbius inversion on singletons, pairs and (optionally)
//! triples, so that `v(B) = sum over A ⊆ B of mu(A)` and `v(∅) = 0`.
//! The additive partition function is `V(P) = sum over blocks of v`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::nodeset::NodeSet;
use crate::partition::Partition;
use crate::TOL;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ScoreKind {
    Modularity,
    DualWeight,
    CommonNeighbor,
    CubicTriangle { beta: f64 },
    /// Singleton coefficients replaced by their mean.
    Equalized,
    Custom,
}

impl fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreKind::Modularity => write!(f, "modularity"),
            ScoreKind::DualWeight => write!(f, "dual-weight"),
            ScoreKind::CommonNeighbor => write!(f, "common-neighbor"),
            ScoreKind::CubicTriangle { beta } => write!(f, "cubic-triangle(beta={beta})"),
            ScoreKind::Equalized => write!(f, "equalized"),
            ScoreKind::Custom => write!(f, "custom"),
        }
    }
}

pub type Pair = (usize, usize);
pub type Triple = (usize, usize, usize);

fn pair(i: usize, j: usize) -> Pair {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn triple(i: usize, j: usize, k: usize) -> Triple {
    let mut t = [i, j, k];
    t.sort_unstable();
    (t[0], t[1], t[2])
}

/// Set function of degree at most three given by its Möbius coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterScore {
    n: usize,
    mu1: Vec<f64>,
    mu2: BTreeMap<Pair, f64>,
    mu3: Option<BTreeMap<Triple, f64>>,
    kind: ScoreKind,
}

impl ClusterScore {
    /// Builds a score from explicit coefficients. Zero coefficients are dropped.
    pub fn from_coefficients(
        n: usize,
        mu1: Vec<f64>,
        mu2: impl IntoIterator<Item = (Pair, f64)>,
        mu3: Option<Vec<(Triple, f64)>>,
        kind: ScoreKind,
    ) -> Result<Self> {
        if mu1.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} singleton coefficients for {n} nodes",
                mu1.len()
            )));
        }
        let mut m2 = BTreeMap::new();
        for ((i, j), c) in mu2 {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidArgument(format!("bad pair ({i},{j})")));
            }
            if c != 0.0 {
                *m2.entry(pair(i, j)).or_insert(0.0) += c;
            }
        }
        let m3 = match mu3 {
            None => None,
            Some(list) => {
                let mut m = BTreeMap::new();
                for ((i, j, k), c) in list {
                    let t = triple(i, j, k);
                    if t.0 == t.1 || t.1 == t.2 || t.2 >= n {
                        return Err(Error::InvalidArgument(format!("bad triple ({i},{j},{k})")));
                    }
                    if c != 0.0 {
                        *m.entry(t).or_insert(0.0) += c;
                    }
                }
                Some(m)
            }
        };
        Ok(Self { n, mu1, mu2: m2, mu3: m3, kind })
    }

    /// Modularity score: `mu({i}) = -(w_i / 2w_N)^2`,
    /// `mu({i,j}) = (w_ij - w_i w_j / 2w_N) / w_N`.
    pub fn modularity(g: &WeightedGraph) -> Result<Self> {
        let n = g.n();
        let wn = g.total_weight();
        if wn <= 0.0 {
            return Err(Error::Undefined("modularity of a graph without edges".into()));
        }
        let mu1 = (0..n)
            .map(|i| {
                let r = g.strength(i) / (2.0 * wn);
                -r * r
            })
            .collect();
        let mu2 = all_pairs(n).map(|(i, j)| {
            let c = (g.weight(i, j) - g.strength(i) * g.strength(j) / (2.0 * wn)) / wn;
            ((i, j), c)
        });
        Self::from_coefficients(n, mu1, mu2, None, ScoreKind::Modularity)
    }

    /// Dual-weight score: pairs score their weight, singletons the mean of
    /// their halved dual weights `(1 - w_ij) / 2`.
    pub fn dual_weight(g: &WeightedGraph) -> Result<Self> {
        let n = g.n();
        if n < 2 {
            return Err(Error::InvalidArgument("dual-weight score needs n >= 2".into()));
        }
        let d = 2.0 * (n as f64 - 1.0);
        let mu1 = (0..n).map(|i| (n as f64 - 1.0 - g.strength(i)) / d).collect();
        let mu2 = all_pairs(n).map(|(i, j)| {
            let c = g.weight(i, j) - (1.0 - (g.strength(i) + g.strength(j)) / d);
            ((i, j), c)
        });
        Self::from_coefficients(n, mu1, mu2, None, ScoreKind::DualWeight)
    }

    /// Common-neighbor score: `mu({i}) = 1 / (1 + |N_i|)` and
    /// `mu({i,j}) = a_ij + (|N_i ∩ N_j| - |N_i Δ N_j|) / |N_i ∪ N_j|`,
    /// with `mu({i,j}) = a_ij` when both neighborhoods are empty.
    pub fn common_neighbor(g: &WeightedGraph) -> Result<Self> {
        if !g.is_simple() {
            return Err(Error::NotSimple);
        }
        let n = g.n();
        let nb: Vec<NodeSet> = (0..n).map(|i| g.neighborhood(i)).collect::<Result<_>>()?;
        let mu1 = nb.iter().map(|s| 1.0 / (1.0 + s.len() as f64)).collect();
        let mu2 = all_pairs(n).map(|(i, j)| {
            let a = g.weight(i, j);
            let union = nb[i].union(&nb[j]).len();
            let c = if union == 0 {
                a
            } else {
                let common = nb[i].intersection(&nb[j]).len() as f64;
                let sym = nb[i].symmetric_difference(&nb[j]).len() as f64;
                a + (common - sym) / union as f64
            };
            ((i, j), c)
        });
        Self::from_coefficients(n, mu1, mu2, None, ScoreKind::CommonNeighbor)
    }

    /// Dual-weight singletons and pairs plus a triple term that rewards
    /// triangles (`+beta`), ignores paths (`0`) and penalises disconnected
    /// triples (`-beta`).
    pub fn cubic_triangle(g: &WeightedGraph, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidArgument(format!("beta = {beta} outside (0,1]")));
        }
        if !g.is_simple() {
            return Err(Error::NotSimple);
        }
        let base = Self::dual_weight(g)?;
        let n = g.n();
        let mut mu3 = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let edges = [(i, j), (i, k), (j, k)]
                        .iter()
                        .filter(|&&(a, b)| g.weight(a, b) == 1.0)
                        .count();
                    match edges {
                        3 => mu3.push(((i, j, k), beta)),
                        2 => {}
                        _ => mu3.push(((i, j, k), -beta)),
                    }
                }
            }
        }
        Ok(Self {
            mu3: Some(mu3.into_iter().collect()),
            kind: ScoreKind::CubicTriangle { beta },
            ..base
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    /// 3 if any triple coefficient is nonzero, otherwise 2 (or 1 for a valuation).
    pub fn degree(&self) -> usize {
        if self.mu3.as_ref().is_some_and(|m| !m.is_empty()) {
            3
        } else if !self.mu2.is_empty() {
            2
        } else {
            1
        }
    }

    pub fn is_quadratic(&self) -> bool {
        self.degree() <= 2
    }

    /// `mu({i}) = v({i})`.
    pub fn mu1(&self, i: usize) -> f64 {
        self.mu1[i]
    }

    pub fn mu2(&self, i: usize, j: usize) -> f64 {
        self.mu2.get(&pair(i, j)).copied().unwrap_or(0.0)
    }

    pub fn mu3(&self, i: usize, j: usize, k: usize) -> f64 {
        self.mu3
            .as_ref()
            .and_then(|m| m.get(&triple(i, j, k)))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn singletons(&self) -> &[f64] {
        &self.mu1
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Pair, f64)> + '_ {
        self.mu2.iter().map(|(&p, &c)| (p, c))
    }

    pub fn triples(&self) -> impl Iterator<Item = (Triple, f64)> + '_ {
        self.mu3.iter().flat_map(|m| m.iter().map(|(&t, &c)| (t, c)))
    }

    fn check_set(&self, a: &NodeSet) -> Result<()> {
        match a.last() {
            Some(m) if m >= self.n => Err(Error::NodeOutOfRange { node: m, n: self.n }),
            _ => Ok(()),
        }
    }

    /// `v(A)`.
    pub fn eval_set(&self, a: &NodeSet) -> Result<f64> {
        self.check_set(a)?;
        Ok(self.value(a))
    }

    /// `v(A)` without the range check.
    pub(crate) fn value(&self, a: &NodeSet) -> f64 {
        let m = a.to_vec();
        let mut v: f64 = m.iter().map(|&i| self.mu1[i]).sum();
        for (x, &i) in m.iter().enumerate() {
            for &j in &m[x + 1..] {
                v += self.mu2(i, j);
            }
        }
        if self.mu3.is_some() {
            for (x, &i) in m.iter().enumerate() {
                for (y, &j) in m.iter().enumerate().skip(x + 1) {
                    for &k in &m[y + 1..] {
                        v += self.mu3(i, j, k);
                    }
                }
            }
        }
        v
    }

    /// `V(P)`, the sum of block scores.
    pub fn eval_partition(&self, p: &Partition) -> Result<f64> {
        if p.n() != self.n {
            return Err(Error::InvalidPartition(format!(
                "partition of {} nodes for a score on {}",
                p.n(),
                self.n
            )));
        }
        Ok(p.blocks().iter().map(|b| self.value(b)).sum())
    }

    /// Score with every singleton coefficient replaced by their mean and pair
    /// coefficients adjusted so that `v'({i,j}) = v({i,j})`.
    ///
    /// `V'` agrees with `V` on the bottom partition, and everywhere when the
    /// singleton coefficients are already equal. In general it does not: on
    /// the star `0-1, 0-2` the two disagree by `1/16` on `{{0,1},{2}}`.
    pub fn equalize_singletons(&self) -> Result<Self> {
        if !self.is_quadratic() || matches!(self.kind, ScoreKind::CubicTriangle { .. }) {
            return Err(Error::Unsupported(
                "singleton equalization is defined for quadratic scores".into(),
            ));
        }
        let n = self.n;
        let mean = self.mu1.iter().sum::<f64>() / n as f64;
        let mu2 = all_pairs(n).map(|(i, j)| {
            let vij = self.mu1[i] + self.mu1[j] + self.mu2(i, j);
            ((i, j), vij - 2.0 * mean)
        });
        Self::from_coefficients(n, vec![mean; n], mu2, None, ScoreKind::Equalized)
    }

    /// True when no single node can be split off a block with a gain:
    /// `v(A) >= v(A \ i) + v({i})` for every block `A` and member `i`.
    pub fn is_local_optimum(&self, p: &Partition) -> bool {
        p.blocks().iter().all(|a| {
            a.len() == 1 || {
                let va = self.value(a);
                a.iter().all(|i| va >= self.value(&a.without(i)) + self.mu1[i] - TOL)
            }
        })
    }
}

fn all_pairs(n: usize) -> impl Iterator<Item = Pair> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}
