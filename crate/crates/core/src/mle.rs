//! Fuzzy covers and the multilinear-extension objective.
//!
//! Every node spreads a unit of membership over the subsets that contain
//! it. Only positive masses are stored. The objective sums, over every
//! supported subset `A`, the multilinear extension of the score evaluated at
//! the vector of masses the members of `A` put on `A`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::partition::Partition;
use crate::scores::ClusterScore;
use crate::TOL;

/// Masses below this are dropped after arithmetic.
pub const PRUNE: f64 = 1e-12;
/// Largest `n` accepted by [`uniform_cover`]; it stores `n * 2^(n-1)` masses.
pub const MAX_UNIFORM_N: usize = 14;

/// One node's membership distribution over subsets containing it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipDistribution {
    node: usize,
    mass: BTreeMap<NodeSet, f64>,
}

impl MembershipDistribution {
    /// Validates key membership, positivity and unit total within `tol`,
    /// then rescales to an exact unit total.
    pub fn with_tolerance(node: usize, entries: impl IntoIterator<Item = (NodeSet, f64)>, tol: f64) -> Result<Self> {
        let mut mass = BTreeMap::new();
        for (a, m) in entries {
            if !a.contains(node) {
                return Err(Error::InvalidCover(format!("node {node} puts mass on {a} which omits it")));
            }
            if !(m >= 0.0 && m <= 1.0 + tol) {
                return Err(Error::InvalidCover(format!("node {node}: mass {m} on {a} outside [0,1]")));
            }
            if m > 0.0 {
                *mass.entry(a).or_insert(0.0) += m;
            }
        }
        let total: f64 = mass.values().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidCover(format!("node {node}: masses sum to {total}")));
        }
        let mut d = Self { node, mass };
        d.normalize();
        Ok(d)
    }

    pub fn new(node: usize, entries: impl IntoIterator<Item = (NodeSet, f64)>) -> Result<Self> {
        Self::with_tolerance(node, entries, TOL)
    }

    /// All mass on `a`.
    pub fn point(node: usize, a: NodeSet) -> Self {
        assert!(a.contains(node), "point mass on a set without its node");
        Self { node, mass: BTreeMap::from([(a, 1.0)]) }
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn get(&self, a: &NodeSet) -> f64 {
        self.mass.get(a).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeSet, f64)> {
        self.mass.iter().map(|(a, &m)| (a, m))
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.mass.values().sum()
    }

    pub(crate) fn from_raw(node: usize, mut mass: BTreeMap<NodeSet, f64>) -> Self {
        mass.retain(|_, m| *m > PRUNE);
        let mut d = Self { node, mass };
        if d.mass.is_empty() {
            d.mass.insert(NodeSet::singleton(node), 1.0);
        }
        d.normalize();
        d
    }

    pub(crate) fn into_raw(self) -> BTreeMap<NodeSet, f64> {
        self.mass
    }

    fn normalize(&mut self) {
        let total: f64 = self.mass.values().sum();
        if total > 0.0 && total != 1.0 {
            for m in self.mass.values_mut() {
                *m /= total;
            }
        }
    }
}

/// An `n`-tuple of membership distributions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzyCover {
    n: usize,
    dists: Vec<MembershipDistribution>,
}

impl FuzzyCover {
    pub fn new(n: usize, dists: Vec<MembershipDistribution>) -> Result<Self> {
        if dists.len() != n {
            return Err(Error::InvalidCover(format!("{} distributions for {n} nodes", dists.len())));
        }
        for (i, d) in dists.iter().enumerate() {
            if d.node != i {
                return Err(Error::InvalidCover(format!("distribution {i} belongs to node {}", d.node)));
            }
            if let Some(m) = d.mass.keys().filter_map(NodeSet::last).max().filter(|&m| m >= n) {
                return Err(Error::InvalidCover(format!("node {m} out of range 0..{n}")));
            }
        }
        Ok(Self { n, dists })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, i: usize) -> &MembershipDistribution {
        &self.dists[i]
    }

    pub fn dists(&self) -> &[MembershipDistribution] {
        &self.dists
    }

    /// `q_i^A`.
    pub fn mass(&self, i: usize, a: &NodeSet) -> f64 {
        self.dists[i].get(a)
    }

    pub fn entry_count(&self) -> usize {
        self.dists.iter().map(MembershipDistribution::len).sum()
    }

    /// Subsets receiving positive mass, each with the `(member, mass)` pairs
    /// of its positive members.
    pub fn groups(&self) -> BTreeMap<NodeSet, Vec<(usize, f64)>> {
        let mut groups: BTreeMap<NodeSet, Vec<(usize, f64)>> = BTreeMap::new();
        for d in &self.dists {
            for (a, m) in d.iter() {
                groups.entry(a.clone()).or_default().push((d.node, m));
            }
        }
        groups
    }

    pub fn support(&self) -> Vec<NodeSet> {
        self.groups().into_keys().collect()
    }

    /// Every supported subset is carried by all of its members.
    pub fn is_fuzzy_clustering(&self) -> bool {
        self.groups().iter().all(|(a, members)| members.len() == a.len())
    }

    /// The crisp cover of a partition, or `None` if some node is fractional
    /// or the supported sets are not blocks.
    pub fn as_partition(&self) -> Option<Partition> {
        let mut blocks = Vec::new();
        for (a, members) in self.groups() {
            if members.len() != a.len() || members.iter().any(|&(_, m)| (m - 1.0).abs() > TOL) {
                return None;
            }
            blocks.push(a);
        }
        Partition::new(self.n, blocks).ok()
    }

    /// Applies `f` to each distribution and rebuilds (pruning, renormalizing).
    pub fn map_masses(&self, mut f: impl FnMut(usize, &NodeSet, f64) -> f64) -> FuzzyCover {
        let dists = self
            .dists
            .iter()
            .map(|d| {
                let raw = d.iter().map(|(a, m)| (a.clone(), f(d.node, a, m))).collect();
                MembershipDistribution::from_raw(d.node, raw)
            })
            .collect();
        FuzzyCover { n: self.n, dists }
    }
}

/// Each node puts all its mass on its own block.
pub fn partition_to_cover(p: &Partition) -> FuzzyCover {
    let mut dists: Vec<Option<MembershipDistribution>> = vec![None; p.n()];
    for b in p.blocks() {
        for i in b {
            dists[i] = Some(MembershipDistribution::point(i, b.clone()));
        }
    }
    FuzzyCover { n: p.n(), dists: dists.into_iter().map(Option::unwrap).collect() }
}

/// Every node uniform over all `2^(n-1)` subsets containing it.
pub fn uniform_cover(n: usize) -> Result<FuzzyCover> {
    if n > MAX_UNIFORM_N {
        return Err(Error::CapExceeded { what: "uniform cover", cap: MAX_UNIFORM_N, n });
    }
    if n == 0 {
        return Ok(FuzzyCover { n, dists: vec![] });
    }
    let m = 1.0 / (1u64 << (n - 1)) as f64;
    let dists = (0..n)
        .map(|i| {
            let mass = (0..1u64 << n)
                .filter(|mask| mask & (1 << i) != 0)
                .map(|mask| (NodeSet::from_mask(mask), m))
                .collect();
            MembershipDistribution { node: i, mass }
        })
        .collect();
    Ok(FuzzyCover { n, dists })
}

/// Every node uniform over the `n - 1` pairs containing it.
pub fn pairs_cover(n: usize) -> Result<FuzzyCover> {
    if n < 2 {
        return Err(Error::InvalidArgument("pair cover needs n >= 2".into()));
    }
    let m = 1.0 / (n - 1) as f64;
    let dists = (0..n)
        .map(|i| {
            let mass = (0..n)
                .filter(|&j| j != i)
                .map(|j| ([i, j].into_iter().collect(), m))
                .collect();
            MembershipDistribution { node: i, mass }
        })
        .collect();
    Ok(FuzzyCover { n, dists })
}

/// Multilinear extension `f(x) = sum_i x_i mu_i + sum_{i<j} x_i x_j mu_ij + ...`.
pub fn mle_point(s: &ClusterScore, x: &[f64]) -> Result<f64> {
    if x.len() != s.n() {
        return Err(Error::InvalidArgument(format!("point of dimension {} for n = {}", x.len(), s.n())));
    }
    if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidArgument(format!("coordinate {i} = {v} outside [0,1]")));
    }
    let mut f: f64 = x.iter().zip(s.singletons()).map(|(a, b)| a * b).sum();
    f += s.pairs().map(|((i, j), c)| x[i] * x[j] * c).sum::<f64>();
    f += s.triples().map(|((i, j, k), c)| x[i] * x[j] * x[k] * c).sum::<f64>();
    Ok(f)
}

/// Extension evaluated at the masses `(member, q_member^A)` of one subset.
fn mle_sparse(s: &ClusterScore, members: &[(usize, f64)]) -> f64 {
    let mut f = 0.0;
    for (x, &(i, qi)) in members.iter().enumerate() {
        f += qi * s.mu1(i);
        for (y, &(j, qj)) in members.iter().enumerate().skip(x + 1) {
            f += qi * qj * s.mu2(i, j);
            if s.degree() == 3 {
                for &(k, qk) in &members[y + 1..] {
                    f += qi * qj * qk * s.mu3(i, j, k);
                }
            }
        }
    }
    f
}

fn check_cover(s: &ClusterScore, q: &FuzzyCover) -> Result<()> {
    if q.n != s.n() {
        return Err(Error::InvalidCover(format!("cover on {} nodes for a score on {}", q.n, s.n())));
    }
    Ok(())
}

/// Global objective: sum over supported subsets of the extension at their
/// member masses.
pub fn big_f(s: &ClusterScore, q: &FuzzyCover) -> Result<f64> {
    check_cover(s, q)?;
    Ok(q.groups().values().map(|m| mle_sparse(s, m)).sum())
}

/// The objective of a quadratic score regrouped by pairs:
/// `sum_i v({i}) + sum_{i<j} mu_ij * sum_{A ⊇ {i,j}} q_i^A q_j^A`.
pub fn big_f_quadratic(s: &ClusterScore, q: &FuzzyCover) -> Result<f64> {
    check_cover(s, q)?;
    if !s.is_quadratic() {
        return Err(Error::Unsupported("pair form needs a quadratic score".into()));
    }
    let mut co = BTreeMap::<(usize, usize), f64>::new();
    for members in q.groups().values() {
        for (x, &(i, qi)) in members.iter().enumerate() {
            for &(j, qj) in &members[x + 1..] {
                *co.entry((i.min(j), i.max(j))).or_insert(0.0) += qi * qj;
            }
        }
    }
    let singles: f64 = s.singletons().iter().sum();
    Ok(singles + co.iter().map(|(&(i, j), c)| c * s.mu2(i, j)).sum::<f64>())
}

/// Score `i` obtains from `A` given everyone else's masses on `A`:
/// `sum over B ⊆ A \ i of (prod_{j in B} q_j^A) mu(B ∪ i)`.
pub fn conditional_score(s: &ClusterScore, q: &FuzzyCover, i: usize, a: &NodeSet) -> Result<f64> {
    check_cover(s, q)?;
    if !a.contains(i) {
        return Err(Error::InvalidArgument(format!("node {i} is not in {a}")));
    }
    Ok(conditional_unchecked(s, q, i, a))
}

pub(crate) fn conditional_unchecked(s: &ClusterScore, q: &FuzzyCover, i: usize, a: &NodeSet) -> f64 {
    let others: Vec<(usize, f64)> = a
        .iter()
        .filter(|&j| j != i)
        .map(|j| (j, q.mass(j, a)))
        .filter(|&(_, m)| m > 0.0)
        .collect();
    conditional_from_masses(s, i, &others)
}

pub(crate) fn conditional_from_masses(s: &ClusterScore, i: usize, others: &[(usize, f64)]) -> f64 {
    let mut v = s.mu1(i);
    for (x, &(j, qj)) in others.iter().enumerate() {
        v += qj * s.mu2(i, j);
        if s.degree() == 3 {
            for &(k, qk) in &others[x + 1..] {
                v += qj * qk * s.mu3(i, j, k);
            }
        }
    }
    v
}

/// The `i_A`-derivative: change of the objective when `i` moves from no
/// membership at all to a point mass on `A`. Equal to [`conditional_score`].
pub fn derivative_ia(s: &ClusterScore, q: &FuzzyCover, i: usize, a: &NodeSet) -> Result<f64> {
    conditional_score(s, q, i, a)
}

/// Mean of the `i_A`-derivatives over the members of `A`.
pub fn average_derivative(s: &ClusterScore, q: &FuzzyCover, a: &NodeSet) -> Result<f64> {
    check_cover(s, q)?;
    if a.is_empty() {
        return Err(Error::InvalidArgument("average derivative of the empty set".into()));
    }
    if let Some(m) = a.last().filter(|&m| m >= s.n()) {
        return Err(Error::NodeOutOfRange { node: m, n: s.n() });
    }
    Ok(average_unchecked(s, q, a))
}

pub(crate) fn average_unchecked(s: &ClusterScore, q: &FuzzyCover, a: &NodeSet) -> f64 {
    let masses: Vec<(usize, f64)> = a.iter().map(|j| (j, q.mass(j, a))).collect();
    average_from_masses(s, &masses)
}

/// Average derivative from the full `(member, q_member^A)` list of `A`.
pub(crate) fn average_from_masses(s: &ClusterScore, masses: &[(usize, f64)]) -> f64 {
    let k = masses.len() as f64;
    if s.is_quadratic() {
        let mut total: f64 = masses.iter().map(|&(i, _)| s.mu1(i)).sum();
        for (x, &(i, qi)) in masses.iter().enumerate() {
            for &(j, qj) in &masses[x + 1..] {
                total += (qi + qj) * s.mu2(i, j);
            }
        }
        return total / k;
    }
    let mut total = 0.0;
    for &(i, _) in masses {
        let others: Vec<(usize, f64)> = masses.iter().copied().filter(|&(j, m)| j != i && m > 0.0).collect();
        total += conditional_from_masses(s, i, &others);
    }
    total / k
}

/// Moves the mass two nodes place on a larger set `A` onto `{i}`, `{j}` and
/// `{i, j}` without changing the objective (the closed-form two-member case).
///
/// `A` must receive positive mass from exactly two of its members. If no
/// member puts mass on `A`, the cover is returned unchanged.
pub fn saturate_pair(s: &ClusterScore, q: &FuzzyCover, a: &NodeSet) -> Result<FuzzyCover> {
    check_cover(s, q)?;
    let positive: Vec<usize> = a.iter().filter(|&i| q.mass(i, a) > 0.0).collect();
    if positive.is_empty() {
        return Ok(q.clone());
    }
    if positive.len() != 2 || positive.len() == a.len() {
        return Err(Error::Unsupported(format!(
            "saturation implemented for two positive members in a larger set; {a} has {} of {}",
            positive.len(),
            a.len()
        )));
    }
    let (i, j) = (positive[0], positive[1]);
    let ij: NodeSet = [i, j].into_iter().collect();
    let shared = (q.mass(i, &ij) * q.mass(j, &ij) + q.mass(i, a) * q.mass(j, a)).sqrt();

    let mut dists = q.dists.clone();
    for node in [i, j] {
        let one = NodeSet::singleton(node);
        let alone = q.mass(node, &ij) + q.mass(node, &one) + q.mass(node, a) - shared;
        if alone < -TOL {
            return Err(Error::Unsupported(format!(
                "saturation would give node {node} negative singleton mass {alone}"
            )));
        }
        let mut raw = std::mem::take(&mut dists[node].mass);
        raw.remove(a);
        raw.insert(ij.clone(), shared);
        raw.insert(one, alone.max(0.0));
        dists[node] = MembershipDistribution::from_raw(node, raw);
    }
    Ok(FuzzyCover { n: q.n, dists })
}
