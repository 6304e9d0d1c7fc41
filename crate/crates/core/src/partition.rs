//! Partitions of the node set and their enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Nonempty, pairwise disjoint blocks covering `0..n`, sorted by smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    blocks: Vec<NodeSet>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<NodeSet>) -> Result<Self> {
        let mut seen = NodeSet::new();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if let Some(m) = b.last().filter(|&m| m >= n) {
                return Err(Error::InvalidPartition(format!("node {m} out of range 0..{n}")));
            }
            if b.intersects(&seen) {
                let shared = b.intersection(&seen);
                return Err(Error::InvalidPartition(format!("blocks overlap on {shared}")));
            }
            seen = seen.union(b);
        }
        if seen.len() != n {
            let missing = (0..n).find(|&i| !seen.contains(i)).unwrap();
            return Err(Error::InvalidPartition(format!("node {missing} not covered")));
        }
        blocks.sort();
        Ok(Self { n, blocks })
    }

    /// Builds a partition from a block label per node (labels need not be contiguous).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by_label = std::collections::BTreeMap::<usize, NodeSet>::new();
        for (i, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().insert(i);
        }
        let mut blocks: Vec<NodeSet> = by_label.into_values().collect();
        blocks.sort();
        Self { n: labels.len(), blocks }
    }

    /// The finest partition, all singletons.
    pub fn bottom(n: usize) -> Self {
        Self { n, blocks: (0..n).map(NodeSet::singleton).collect() }
    }

    /// The coarsest partition, one block (no blocks when `n == 0`).
    pub fn top(n: usize) -> Self {
        let blocks = if n == 0 { vec![] } else { vec![NodeSet::full(n)] };
        Self { n, blocks }
    }

    /// `{A} ∪ {{i} : i ∉ A}`.
    pub fn with_block(n: usize, a: &NodeSet) -> Result<Self> {
        let mut blocks = vec![a.clone()];
        blocks.extend((0..n).filter(|&i| !a.contains(i)).map(NodeSet::singleton));
        Self::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[NodeSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block position of every node.
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for i in b {
                idx[i] = k;
            }
        }
        idx
    }

    /// True when every block of `self` lies inside some block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let idx = other.block_index();
        self.blocks.iter().all(|b| {
            let mut it = b.iter();
            let first = idx[it.next().unwrap()];
            it.all(|i| idx[i] == first)
        })
    }

    pub fn non_singleton_blocks(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() > 1).count()
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(NodeSet::to_vec).collect()
    }
}

/// Visits every partition of `0..n` as a restricted growth string, in lexicographic order.
///
/// The callback receives the label vector and the current block count.
pub fn for_each_rgs(n: usize, mut visit: impl FnMut(&[usize], usize)) {
    if n == 0 {
        visit(&[], 0);
        return;
    }
    let mut labels = vec![0usize; n];
    // prefix_max[k] = number of blocks used by labels[..=k]
    let mut blocks = vec![1usize; n];
    loop {
        visit(&labels, blocks[n - 1]);
        // find the rightmost position that can be incremented
        let mut k = n - 1;
        loop {
            if k == 0 {
                return;
            }
            if labels[k] < blocks[k - 1] {
                break;
            }
            k -= 1;
        }
        labels[k] += 1;
        blocks[k] = blocks[k - 1].max(labels[k] + 1);
        for j in k + 1..n {
            labels[j] = 0;
            blocks[j] = blocks[k];
        }
    }
}

/// All partitions of `0..n` in restricted-growth order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for_each_rgs(n, |labels, _| out.push(Partition::from_labels(labels)));
    out
}

/// Bell numbers `B_0..=B_max`.
pub fn bell_numbers(max: usize) -> Vec<u64> {
    // Bell triangle
    let mut bells = vec![1u64];
    let mut row = vec![1u64];
    for _ in 0..max {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        bells.push(next[0]);
        row = next;
    }
    bells
}
