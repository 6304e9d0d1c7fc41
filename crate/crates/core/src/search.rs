//! Greedy searches over partitions and fuzzy covers, plus the exhaustive oracle.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mle::{average_from_masses, FuzzyCover, MembershipDistribution, MAX_UNIFORM_N, PRUNE};
use crate::mobius::SetFunction;
use crate::nodeset::NodeSet;
use crate::partition::{for_each_rgs, Partition};
use crate::scores::ClusterScore;
use crate::TOL;

/// Offset used when shifting non-positive redistribution weights.
pub const SHIFT_EPS: f64 = 1e-9;
/// Largest `n` for [`brute_force_optimum`].
pub const MAX_ORACLE_N: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    Merge,
    FixBlock,
    Split,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub t: usize,
    pub action: Action,
    pub sets: Vec<NodeSet>,
    /// Objective after the step.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub seed: u64,
    pub steps: Vec<Step>,
}

impl SearchTrace {
    fn new(seed: u64) -> Self {
        Self { seed, steps: Vec::new() }
    }

    fn push(&mut self, action: Action, sets: Vec<NodeSet>, value: f64) {
        let t = self.steps.len() + 1;
        self.steps.push(Step { t, action, sets, value });
    }

    pub fn of(&self, action: Action) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(move |s| s.action == action)
    }

    /// One JSON record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("trace steps serialize"));
            out.push('\n');
        }
        out
    }

    /// Like [`to_jsonl`](Self::to_jsonl) with a leading `run` field on each record.
    pub fn to_jsonl_for_run(&self, run: usize) -> String {
        #[derive(Serialize)]
        struct Tagged<'a> {
            run: usize,
            #[serde(flatten)]
            step: &'a Step,
        }
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(&Tagged { run, step }).expect("trace steps serialize"));
            out.push('\n');
        }
        out
    }
}

/// Subsets allowed to carry initial membership.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateFamily {
    subsets: Vec<NodeSet>,
}

impl CandidateFamily {
    pub fn new(subsets: impl IntoIterator<Item = NodeSet>) -> Self {
        let mut subsets: Vec<NodeSet> = subsets.into_iter().filter(|s| !s.is_empty()).collect();
        subsets.sort();
        subsets.dedup();
        Self { subsets }
    }

    /// Every nonempty subset of `0..n`.
    pub fn all_subsets(n: usize) -> Result<Self> {
        if n > MAX_UNIFORM_N {
            return Err(Error::CapExceeded { what: "all-subsets candidate family", cap: MAX_UNIFORM_N, n });
        }
        Ok(Self::new((1..1u64 << n).map(NodeSet::from_mask)))
    }

    pub fn singletons(n: usize) -> Self {
        Self::new((0..n).map(NodeSet::singleton))
    }

    pub fn pairs(n: usize) -> Self {
        Self::new((0..n).flat_map(|i| (i + 1..n).map(move |j| [i, j].into_iter().collect())))
    }

    /// Every nonempty subset with at most `k` members.
    pub fn up_to(n: usize, k: usize) -> Self {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<NodeSet>) {
            if !cur.is_empty() {
                out.push(cur.iter().copied().collect());
            }
            if cur.len() == k {
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        Self::new(out)
    }

    pub fn subsets(&self) -> &[NodeSet] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }
}

/// `v(A) / |A|`.
pub fn per_member_score(s: &ClusterScore, a: &NodeSet) -> f64 {
    s.value(a) / a.len() as f64
}

/// Redistribution weights: the values themselves when all are positive,
/// otherwise shifted so the smallest becomes [`SHIFT_EPS`].
pub fn positive_weights(values: &[f64]) -> Vec<f64> {
    if values.iter().all(|&v| v > 0.0) {
        return values.to_vec();
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    values.iter().map(|v| v - min + SHIFT_EPS).collect()
}

/// Normalizes `(set, weight)` lists into a distribution for `node`,
/// falling back to the singleton when nothing survives.
fn weighted_distribution(node: usize, sets: Vec<(NodeSet, f64)>) -> MembershipDistribution {
    if sets.is_empty() {
        return MembershipDistribution::point(node, NodeSet::singleton(node));
    }
    let w = positive_weights(&sets.iter().map(|(_, v)| *v).collect::<Vec<_>>());
    let total: f64 = w.iter().sum();
    let raw = sets.into_iter().zip(w).map(|((a, _), w)| (a, w / total)).collect();
    MembershipDistribution::from_raw(node, raw)
}

/// Thresholded initial cover: node `i` spreads its mass over the candidate
/// sets containing it whose per-member score `v(A)/|A|` exceeds `theta`,
/// in proportion to that score. Nodes left without candidates sit alone.
pub fn init_threshold(s: &ClusterScore, fam: &CandidateFamily, theta: f64) -> FuzzyCover {
    init_weighted(s.n(), fam.subsets().iter().filter_map(|a| {
        let vh = per_member_score(s, a);
        (vh > theta).then(|| (a.clone(), vh))
    }))
}

/// Cover where each node spreads mass over the given sets containing it,
/// proportionally to the (shifted) weights.
pub(crate) fn init_weighted(n: usize, sets: impl Iterator<Item = (NodeSet, f64)>) -> FuzzyCover {
    let mut per_node: Vec<Vec<(NodeSet, f64)>> = vec![Vec::new(); n];
    for (a, w) in sets {
        for i in &a {
            per_node[i].push((a.clone(), w));
        }
    }
    let dists = per_node
        .into_iter()
        .enumerate()
        .map(|(i, sets)| weighted_distribution(i, sets))
        .collect();
    FuzzyCover::new(n, dists).expect("weighted cover is well formed")
}

fn pick<T: Clone>(rng: &mut ChaCha8Rng, scored: &[(T, f64)]) -> Option<(T, f64)> {
    let best = scored.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<&(T, f64)> = scored.iter().filter(|(_, v)| *v >= best - TOL).collect();
    if tied.is_empty() {
        return None;
    }
    let k = if tied.len() == 1 { 0 } else { rng.gen_range(0..tied.len()) };
    Some(tied[k].clone())
}

/// Agglomerative baseline: repeatedly merge the two blocks with the largest
/// positive gain `v(A ∪ B) - v(A) - v(B)`, breaking ties uniformly at random.
pub fn greedy_merging(s: &ClusterScore, start: &Partition, seed: u64) -> Result<(Partition, SearchTrace)> {
    if start.n() != s.n() {
        return Err(Error::InvalidPartition("start partition size differs from score".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = SearchTrace::new(seed);
    let mut blocks: Vec<NodeSet> = start.blocks().to_vec();
    let mut values: Vec<f64> = blocks.iter().map(|b| s.value(b)).collect();
    let gain = |a: &NodeSet, va: f64, b: &NodeSet, vb: f64| s.value(&a.union(b)) - va - vb;
    let mut gains: HashMap<(NodeSet, NodeSet), f64> = HashMap::new();
    for x in 0..blocks.len() {
        for y in x + 1..blocks.len() {
            let g = gain(&blocks[x], values[x], &blocks[y], values[y]);
            gains.insert((blocks[x].clone(), blocks[y].clone()), g);
        }
    }
    loop {
        let mut scored: Vec<((usize, usize), f64)> = Vec::new();
        for x in 0..blocks.len() {
            for y in x + 1..blocks.len() {
                let g = gains[&(blocks[x].clone(), blocks[y].clone())];
                if g > TOL {
                    scored.push(((x, y), g));
                }
            }
        }
        let Some(((x, y), _)) = pick(&mut rng, &scored) else {
            break;
        };
        let merged = blocks[x].union(&blocks[y]);
        let (bx, by) = (blocks[x].clone(), blocks[y].clone());
        blocks.remove(y);
        values.remove(y);
        blocks.remove(x);
        values.remove(x);
        let vm = s.value(&merged);
        let pos = blocks.binary_search(&merged).unwrap_err();
        blocks.insert(pos, merged.clone());
        values.insert(pos, vm);
        for (k, b) in blocks.iter().enumerate() {
            if k != pos {
                let key = if *b < merged { (b.clone(), merged.clone()) } else { (merged.clone(), b.clone()) };
                gains.insert(key, gain(b, values[k], &merged, vm));
            }
        }
        trace.push(Action::Merge, vec![bx, by], values.iter().sum());
    }
    Ok((Partition::new(s.n(), blocks)?, trace))
}

struct ClusteringState<'a> {
    s: &'a ClusterScore,
    masses: Vec<BTreeMap<NodeSet, f64>>,
    finalized: Vec<bool>,
    blocks: Vec<NodeSet>,
    vhat: HashMap<NodeSet, f64>,
}

impl<'a> ClusteringState<'a> {
    fn new(s: &'a ClusterScore, init: &FuzzyCover) -> Self {
        let n = s.n();
        Self {
            s,
            masses: init.dists().iter().map(|d| d.clone().into_raw()).collect(),
            finalized: vec![false; n],
            blocks: Vec::new(),
            vhat: HashMap::new(),
        }
    }

    fn vhat(&mut self, a: &NodeSet) -> f64 {
        if let Some(&v) = self.vhat.get(a) {
            return v;
        }
        let v = per_member_score(self.s, a);
        self.vhat.insert(a.clone(), v);
        v
    }

    /// Supported sets of unfinalized nodes with their positive `(member, mass)` pairs.
    fn groups(&self) -> BTreeMap<NodeSet, Vec<(usize, f64)>> {
        let mut groups: BTreeMap<NodeSet, Vec<(usize, f64)>> = BTreeMap::new();
        for (i, m) in self.masses.iter().enumerate() {
            if self.finalized[i] {
                continue;
            }
            for (a, &q) in m {
                groups.entry(a.clone()).or_default().push((i, q));
            }
        }
        groups
    }

    fn objective(&self) -> f64 {
        let mut groups: BTreeMap<&NodeSet, Vec<(usize, f64)>> = BTreeMap::new();
        for (i, m) in self.masses.iter().enumerate() {
            for (a, &q) in m {
                groups.entry(a).or_default().push((i, q));
            }
        }
        groups
            .values()
            .map(|members| {
                let mut f = 0.0;
                for (x, &(i, qi)) in members.iter().enumerate() {
                    f += qi * self.s.mu1(i);
                    for (y, &(j, qj)) in members.iter().enumerate().skip(x + 1) {
                        f += qi * qj * self.s.mu2(i, j);
                        if self.s.degree() == 3 {
                            for &(k, qk) in &members[y + 1..] {
                                f += qi * qj * qk * self.s.mu3(i, j, k);
                            }
                        }
                    }
                }
                f
            })
            .sum()
    }

    /// Makes `a` a block: its members move all mass onto it and every other
    /// node moves the mass it held on sets meeting `a` onto its remaining
    /// sets, proportionally to their per-member scores.
    fn fix(&mut self, a: &NodeSet) {
        for i in a {
            self.masses[i] = BTreeMap::from([(a.clone(), 1.0)]);
            self.finalized[i] = true;
        }
        self.blocks.push(a.clone());
        for j in 0..self.masses.len() {
            if self.finalized[j] {
                continue;
            }
            let lost: f64 = self.masses[j].iter().filter(|(b, _)| b.intersects(a)).map(|(_, q)| q).sum();
            if lost == 0.0 {
                continue;
            }
            let mut kept = std::mem::take(&mut self.masses[j]);
            kept.retain(|b, _| !b.intersects(a));
            if kept.is_empty() {
                self.masses[j] = BTreeMap::from([(NodeSet::singleton(j), 1.0)]);
                continue;
            }
            let keys: Vec<NodeSet> = kept.keys().cloned().collect();
            let scores: Vec<f64> = keys.iter().map(|b| self.vhat(b)).collect();
            let w = positive_weights(&scores);
            let total: f64 = w.iter().sum();
            for (b, wb) in keys.iter().zip(w) {
                *kept.get_mut(b).unwrap() += lost * wb / total;
            }
            kept.retain(|_, q| *q > PRUNE);
            let sum: f64 = kept.values().sum();
            for q in kept.values_mut() {
                *q /= sum;
            }
            self.masses[j] = kept;
        }
        debug_assert!(self.conserved(), "membership lost after fixing {a}");
    }

    /// Open nodes hold unit mass; fixed nodes sit entirely on their block.
    fn conserved(&self) -> bool {
        self.masses.iter().enumerate().all(|(i, m)| {
            let total: f64 = m.values().sum();
            if self.finalized[i] {
                m.len() == 1 && total == 1.0
            } else {
                (total - 1.0).abs() <= TOL
            }
        })
    }

    /// Fixes every supported set already carried in full by all its members.
    fn absorb_crisp(&mut self, trace: &mut SearchTrace) {
        loop {
            let crisp = self.groups().into_iter().find(|(a, members)| {
                members.len() == a.len() && members.iter().all(|&(_, q)| q >= 1.0 - TOL)
            });
            let Some((a, _)) = crisp else { return };
            self.fix(&a);
            let v = self.objective();
            trace.push(Action::FixBlock, vec![a], v);
        }
    }
}

/// Greedy local search over fuzzy covers.
///
/// Each round picks, among supported sets that are neither empty nor crisp,
/// one maximizing the average derivative (ties broken with the seeded RNG),
/// fixes it as a block and hands the mass other nodes held on overlapping
/// sets to their remaining sets. When only crisp sets remain, blocks whose
/// single-node split improves the score are split until none does.
pub fn greedy_clustering(s: &ClusterScore, init: &FuzzyCover, seed: u64) -> Result<(Partition, SearchTrace)> {
    if init.n() != s.n() {
        return Err(Error::InvalidCover("initial cover size differs from score".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = SearchTrace::new(seed);
    let mut st = ClusteringState::new(s, init);

    loop {
        st.absorb_crisp(&mut trace);
        let groups = st.groups();
        let scored: Vec<(NodeSet, f64)> = groups
            .iter()
            .filter(|(a, members)| {
                let group: f64 = members.iter().map(|(_, q)| q).sum();
                group > 0.0 && group < a.len() as f64 - TOL
            })
            .map(|(a, members)| {
                let mut full: Vec<(usize, f64)> = a.iter().map(|j| (j, 0.0)).collect();
                for &(j, q) in members {
                    full.iter_mut().find(|(k, _)| *k == j).unwrap().1 = q;
                }
                (a.clone(), average_from_masses(s, &full))
            })
            .collect();
        let Some((chosen, _)) = pick(&mut rng, &scored) else { break };
        st.fix(&chosen);
        let v = st.objective();
        trace.push(Action::FixBlock, vec![chosen], v);
    }
    debug_assert!(st.finalized.iter().all(|&f| f));

    let mut blocks = std::mem::take(&mut st.blocks);
    blocks.sort();
    check_loop(s, &mut blocks, &mut trace);
    Ok((Partition::new(s.n(), blocks)?, trace))
}

/// Splits `{i}` off a block while `v(A) < v({i}) + v(A \ i)`. Scans blocks in
/// canonical order and members ascending; restarts after each split.
fn check_loop(s: &ClusterScore, blocks: &mut Vec<NodeSet>, trace: &mut SearchTrace) {
    'scan: loop {
        for k in 0..blocks.len() {
            let a = &blocks[k];
            if a.len() < 2 {
                continue;
            }
            let va = s.value(a);
            for i in a.iter() {
                let rest = a.without(i);
                if va < s.mu1(i) + s.value(&rest) - TOL {
                    let single = NodeSet::singleton(i);
                    blocks.remove(k);
                    blocks.push(single.clone());
                    blocks.push(rest.clone());
                    blocks.sort();
                    let total = blocks.iter().map(|b| s.value(b)).sum();
                    trace.push(Action::Split, vec![single, rest], total);
                    continue 'scan;
                }
            }
        }
        return;
    }
}

/// True when no single-node split of a block increases the score.
pub fn is_local_optimum(s: &ClusterScore, p: &Partition) -> bool {
    s.is_local_optimum(p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    pub partition: Partition,
    pub value: f64,
    /// Partitions within [`TOL`] of the optimum.
    pub ties: usize,
}

fn scan_partitions(s: &ClusterScore, maximize: bool) -> Result<Optimum> {
    let n = s.n();
    if n > MAX_ORACLE_N {
        return Err(Error::CapExceeded { what: "exhaustive partition search", cap: MAX_ORACLE_N, n });
    }
    let table = SetFunction::from_score(s)?;
    let sign = if maximize { 1.0 } else { -1.0 };
    let mut best = f64::NEG_INFINITY;
    let mut best_labels = Vec::new();
    let mut ties = 0;
    let mut masks = vec![0u64; n.max(1)];
    for_each_rgs(n, |labels, k| {
        masks[..k].iter_mut().for_each(|m| *m = 0);
        for (i, &l) in labels.iter().enumerate() {
            masks[l] |= 1 << i;
        }
        let v = sign * masks[..k].iter().map(|&m| table.by_mask(m)).sum::<f64>();
        if v > best + TOL {
            best = v;
            best_labels = labels.to_vec();
            ties = 1;
        } else if v >= best - TOL {
            ties += 1;
        }
    });
    Ok(Optimum {
        partition: Partition::from_labels(&best_labels),
        value: sign * best,
        ties,
    })
}

/// Exact maximizer of `V` by enumerating all partitions (first in
/// restricted-growth order on ties).
pub fn brute_force_optimum(s: &ClusterScore) -> Result<Optimum> {
    scan_partitions(s, true)
}

/// Exact minimizer of `V`.
pub fn brute_force_worst(s: &ClusterScore) -> Result<Optimum> {
    scan_partitions(s, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{half_regular, half_regular_halves, half_regular_matching, WeightedGraph};
    use crate::mle::{partition_to_cover, uniform_cover};
    use crate::nodeset::set;

    #[test]
    fn positive_weight_shift() {
        assert_eq!(positive_weights(&[1.0, 2.0]), vec![1.0, 2.0]);
        let w = positive_weights(&[-1.0, 0.0, 1.0]);
        assert!((w[0] - SHIFT_EPS).abs() < 1e-15);
        assert!((w[2] - (2.0 + SHIFT_EPS)).abs() < 1e-15);
    }

    #[test]
    fn threshold_init_examples() {
        let s = ClusterScore::dual_weight(&WeightedGraph::complete(2)).unwrap();
        let q = init_threshold(&s, &CandidateFamily::all_subsets(2).unwrap(), 0.0);
        assert_eq!(q.mass(0, &set(&[0, 1])), 1.0);
        assert_eq!(q.mass(1, &set(&[0, 1])), 1.0);

        let h = ClusterScore::modularity(&half_regular(6).unwrap()).unwrap();
        let q = init_threshold(&h, &CandidateFamily::singletons(6), 0.0);
        assert_eq!(q, partition_to_cover(&Partition::bottom(6)));

        let d = ClusterScore::dual_weight(&half_regular(6).unwrap()).unwrap();
        let fam = CandidateFamily::all_subsets(6).unwrap();
        let q = init_threshold(&d, &fam, 0.0);
        let (a, b) = (set(&[0, 1, 2]), set(&[0, 3]));
        let ratio = q.mass(0, &a) / q.mass(0, &b);
        assert!((ratio - per_member_score(&d, &a) / per_member_score(&d, &b)).abs() < 1e-9);
    }

    #[test]
    fn candidate_families() {
        assert_eq!(CandidateFamily::pairs(4).len(), 6);
        assert_eq!(CandidateFamily::up_to(5, 2).len(), 15);
        assert_eq!(CandidateFamily::up_to(4, 4).len(), 15);
        assert!(CandidateFamily::all_subsets(20).is_err());
    }

    #[test]
    fn merging_single_block_is_fixed_point() {
        let s = ClusterScore::modularity(&half_regular(6).unwrap()).unwrap();
        let (p, trace) = greedy_merging(&s, &Partition::top(6), 3).unwrap();
        assert_eq!(p, Partition::top(6));
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn merging_common_neighbor_finds_halves() {
        let s = ClusterScore::common_neighbor(&half_regular(6).unwrap()).unwrap();
        let (n1, n2) = half_regular_halves(6);
        let star = Partition::new(6, vec![n1, n2]).unwrap();
        for seed in 0..20 {
            let (p, trace) = greedy_merging(&s, &Partition::bottom(6), seed).unwrap();
            assert_eq!(p, star);
            assert!(trace.steps.windows(2).all(|w| w[1].value >= w[0].value));
        }
    }

    #[test]
    fn clustering_recovers_halves() {
        let s = ClusterScore::modularity(&half_regular(6).unwrap()).unwrap();
        let (n1, n2) = half_regular_halves(6);
        let (p, trace) = greedy_clustering(&s, &uniform_cover(6).unwrap(), 0).unwrap();
        assert_eq!(p, Partition::new(6, vec![n1.clone(), n2.clone()]).unwrap());
        let first = &trace.steps[0].sets[0];
        assert!(*first == n1 || *first == n2);
        assert!((trace.steps.last().unwrap().value - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn clustering_from_partitions() {
        let s = ClusterScore::modularity(&half_regular(6).unwrap()).unwrap();
        let bottom = Partition::bottom(6);
        let (p, _) = greedy_clustering(&s, &partition_to_cover(&bottom), 1).unwrap();
        assert_eq!(p, bottom);
        let hat = Partition::new(6, half_regular_matching(6)).unwrap();
        let (p, trace) = greedy_clustering(&s, &partition_to_cover(&hat), 1).unwrap();
        assert_eq!(p, hat);
        assert!(trace.of(Action::Split).next().is_none());
    }

    #[test]
    fn check_loop_splits_bad_top_block() {
        let s = ClusterScore::dual_weight(&WeightedGraph::empty(4)).unwrap();
        let (p, trace) = greedy_clustering(&s, &partition_to_cover(&Partition::top(4)), 0).unwrap();
        assert_eq!(p, Partition::bottom(4));
        let splits: Vec<f64> = trace.of(Action::Split).map(|s| s.value).collect();
        assert_eq!(splits.len(), 3);
        assert!(splits.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn oracle_examples() {
        let s = ClusterScore::modularity(&half_regular(6).unwrap()).unwrap();
        let opt = brute_force_optimum(&s).unwrap();
        let (n1, n2) = half_regular_halves(6);
        assert_eq!(opt.partition, Partition::new(6, vec![n1, n2]).unwrap());
        assert!((opt.value - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(opt.ties, 1);

        let k4 = ClusterScore::dual_weight(&WeightedGraph::complete(4)).unwrap();
        let opt = brute_force_optimum(&k4).unwrap();
        assert_eq!(opt.partition, Partition::top(4));
        assert!((opt.value - 6.0).abs() < 1e-12);

        let e4 = ClusterScore::dual_weight(&WeightedGraph::empty(4)).unwrap();
        let opt = brute_force_optimum(&e4).unwrap();
        assert_eq!(opt.partition, Partition::bottom(4));
        assert!((opt.value - 2.0).abs() < 1e-12);
        assert!(brute_force_worst(&e4).unwrap().value < 2.0);

        let big = ClusterScore::dual_weight(&WeightedGraph::empty(13)).unwrap();
        assert!(matches!(brute_force_optimum(&big), Err(Error::CapExceeded { .. })));
    }
}
