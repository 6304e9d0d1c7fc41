//! Overlapping modules from many clustering runs.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mle::FuzzyCover;
use crate::nodeset::NodeSet;
use crate::partition::Partition;
use crate::scores::ClusterScore;
use crate::search::{greedy_clustering, init_threshold, init_weighted, per_member_score, CandidateFamily, SearchTrace};

pub const DEFAULT_MAX_OMEGA_MEMBERS: usize = 10_000;
/// Half-width of the log-uniform factor applied by [`jitter`].
pub const JITTER: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub score: f64,
    pub runs: Vec<usize>,
}

/// Union of the blocks found across runs, each weighted by its cluster score
/// and tagged with the runs that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFamily {
    n: usize,
    entries: BTreeMap<NodeSet, FamilyEntry>,
}

impl WeightedFamily {
    pub fn new(n: usize) -> Self {
        Self { n, entries: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn record(&mut self, s: &ClusterScore, run: usize, p: &Partition) {
        for b in p.blocks() {
            let e = self
                .entries
                .entry(b.clone())
                .or_insert_with(|| FamilyEntry { score: s.value(b), runs: Vec::new() });
            if !e.runs.contains(&run) {
                e.runs.push(run);
                e.runs.sort_unstable();
            }
        }
    }

    pub fn merge(&mut self, other: &WeightedFamily) {
        for (a, e) in &other.entries {
            let mine = self
                .entries
                .entry(a.clone())
                .or_insert_with(|| FamilyEntry { score: e.score, runs: Vec::new() });
            mine.runs.extend(&e.runs);
            mine.runs.sort_unstable();
            mine.runs.dedup();
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, a: &NodeSet) -> bool {
        self.entries.contains_key(a)
    }

    pub fn get(&self, a: &NodeSet) -> Option<&FamilyEntry> {
        self.entries.get(a)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&NodeSet, &FamilyEntry)> {
        self.entries.iter()
    }

    pub fn sets(&self) -> impl Iterator<Item = &NodeSet> {
        self.entries.keys()
    }

    pub fn is_pairwise_disjoint(&self) -> bool {
        let sets: Vec<&NodeSet> = self.sets().collect();
        sets.iter()
            .enumerate()
            .all(|(k, a)| sets[k + 1..].iter().all(|b| a.is_disjoint(b)))
    }

    /// Members not strictly contained in another member.
    pub fn maximal(&self) -> Vec<NodeSet> {
        self.sets()
            .filter(|a| !self.sets().any(|b| b != *a && a.is_subset(b)))
            .cloned()
            .collect()
    }

    /// For each node, the members containing it.
    pub fn membership_index(&self) -> Vec<Vec<NodeSet>> {
        let mut index = vec![Vec::new(); self.n];
        for a in self.sets() {
            for i in a {
                index[i].push(a.clone());
            }
        }
        index
    }
}

/// Runs greedy clustering once per init, in parallel, with seed
/// `base_seed + k` for the `k`-th init. Results are in init order.
pub fn run_all(s: &ClusterScore, inits: &[FuzzyCover], base_seed: u64) -> Result<Vec<(Partition, SearchTrace)>> {
    inits
        .par_iter()
        .enumerate()
        .map(|(k, q)| greedy_clustering(s, q, base_seed.wrapping_add(k as u64)))
        .collect()
}

fn collect_family(s: &ClusterScore, outputs: &[(Partition, SearchTrace)], run_offset: usize) -> WeightedFamily {
    let mut fam = WeightedFamily::new(s.n());
    for (k, (p, _)) in outputs.iter().enumerate() {
        fam.record(s, run_offset + k, p);
    }
    fam
}

/// Family of all blocks output by greedy clustering from each init.
pub fn multi_run(s: &ClusterScore, inits: &[FuzzyCover], base_seed: u64) -> Result<WeightedFamily> {
    if inits.is_empty() {
        return Err(Error::InvalidArgument("multi_run needs at least one init".into()));
    }
    Ok(collect_family(s, &run_all(s, inits, base_seed)?, 0))
}

/// Distinct unions of one or more family members, smallest first, keeping
/// unions of at most `max_size` nodes and at most `max_members` results.
pub fn omega(f: &WeightedFamily, max_size: usize, max_members: usize) -> Vec<NodeSet> {
    let base: Vec<&NodeSet> = f.sets().filter(|a| a.len() <= max_size).collect();
    let mut seen: HashSet<NodeSet> = base.iter().map(|a| (*a).clone()).collect();
    let mut queue: BinaryHeap<Reverse<(usize, NodeSet)>> =
        base.iter().map(|a| Reverse((a.len(), (*a).clone()))).collect();
    let mut out = Vec::new();
    while let Some(Reverse((_, cur))) = queue.pop() {
        if out.len() == max_members {
            break;
        }
        for b in &base {
            let u = cur.union(b);
            if u.len() <= max_size && !seen.contains(&u) {
                seen.insert(u.clone());
                queue.push(Reverse((u.len(), u)));
            }
        }
        out.push(cur);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LargeInit {
    Uniform,
    ScoreWeighted,
}

/// Cover spreading each node over the sets of `omega_sets` containing it
/// with more than `vartheta` members, uniformly or by shifted per-member
/// score. Nodes with no such set sit alone.
pub fn large_module_init(s: &ClusterScore, omega_sets: &[NodeSet], vartheta: usize, mode: LargeInit) -> FuzzyCover {
    let large = omega_sets.iter().filter(|b| b.len() > vartheta).map(|b| {
        let w = match mode {
            LargeInit::Uniform => 1.0,
            LargeInit::ScoreWeighted => per_member_score(s, b),
        };
        (b.clone(), w)
    });
    init_weighted(s.n(), large)
}

/// Multiplies every mass by `exp(u)`, `u` uniform in `[-JITTER, JITTER]`,
/// then renormalizes.
pub fn jitter(q: &FuzzyCover, seed: u64) -> FuzzyCover {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // keep the perturbation stream apart from the search stream of the same seed
    rng.set_stream(1);
    q.map_masses(|_, _, m| m * rng.gen_range(-JITTER..=JITTER).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaCaps {
    pub max_size: usize,
    pub max_members: usize,
}

impl OmegaCaps {
    pub fn for_n(n: usize) -> Self {
        Self { max_size: n, max_members: DEFAULT_MAX_OMEGA_MEMBERS }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoStageConfig {
    pub theta: f64,
    pub vartheta: usize,
    pub runs: usize,
    pub base_seed: u64,
    pub caps: OmegaCaps,
    pub mode: LargeInit,
}

/// Small modules first, then large ones.
///
/// Stage 1 runs greedy clustering from jittered copies of the thresholded
/// init over `small_fam` (run ids `0..runs`, seeds `base_seed + r`). Stage 2
/// builds Ω of the stage-1 family, spreads mass over its sets larger than
/// `vartheta`, and runs again from jittered copies (run ids `runs..2 runs`,
/// seeds `base_seed + runs + r`). Returns the union of both families.
pub fn two_stage(s: &ClusterScore, small_fam: &CandidateFamily, cfg: &TwoStageConfig) -> Result<WeightedFamily> {
    let (family, _) = two_stage_traced(s, small_fam, cfg)?;
    Ok(family)
}

/// [`two_stage`] also returning every run's partition and trace in run-id order.
pub fn two_stage_traced(
    s: &ClusterScore,
    small_fam: &CandidateFamily,
    cfg: &TwoStageConfig,
) -> Result<(WeightedFamily, Vec<(Partition, SearchTrace)>)> {
    if cfg.runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let seeds = |offset: usize| (0..cfg.runs).map(move |r| cfg.base_seed.wrapping_add((offset + r) as u64));

    let small = init_threshold(s, small_fam, cfg.theta);
    let inits: Vec<FuzzyCover> = seeds(0).map(|seed| jitter(&small, seed)).collect();
    let mut outputs = run_all(s, &inits, cfg.base_seed)?;
    let mut family = collect_family(s, &outputs, 0);

    let sets = omega(&family, cfg.caps.max_size, cfg.caps.max_members);
    let large = large_module_init(s, &sets, cfg.vartheta, cfg.mode);
    let inits: Vec<FuzzyCover> = seeds(cfg.runs).map(|seed| jitter(&large, seed)).collect();
    let second = run_all(s, &inits, cfg.base_seed.wrapping_add(cfg.runs as u64))?;
    family.merge(&collect_family(s, &second, cfg.runs));
    outputs.extend(second);
    Ok((family, outputs))
}
