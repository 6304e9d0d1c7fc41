//! Explicit set and partition functions on small ground sets and their
//! Möbius inversions, used to cross-check the coefficient form of scores.

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::partition::{all_partitions, Partition};
use crate::scores::ClusterScore;

pub const MAX_SET_FUNCTION_N: usize = 12;
pub const MAX_PARTITION_FUNCTION_N: usize = 7;

/// Values on all `2^n` subsets of `0..n`, indexed by bitmask.
#[derive(Clone, Debug, PartialEq)]
pub struct SetFunction {
    n: usize,
    values: Vec<f64>,
}

impl SetFunction {
    pub fn from_fn(n: usize, f: impl Fn(&NodeSet) -> f64) -> Result<Self> {
        if n > MAX_SET_FUNCTION_N {
            return Err(Error::CapExceeded { what: "explicit set functions", cap: MAX_SET_FUNCTION_N, n });
        }
        let values = (0..1u64 << n).map(|m| f(&NodeSet::from_mask(m))).collect();
        Ok(Self { n, values })
    }

    pub fn from_score(s: &ClusterScore) -> Result<Self> {
        Self::from_fn(s.n(), |a| s.value(a))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: &NodeSet) -> f64 {
        let m = a.to_mask().expect("set function index below 64");
        self.values[m as usize]
    }

    pub fn by_mask(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `mu(A) = sum over B ⊆ A of (-1)^{|A \ B|} v(B)`, computed one
    /// coordinate at a time.
    pub fn mobius(&self) -> SetFunction {
        let mut mu = self.values.clone();
        for bit in 0..self.n {
            let step = 1usize << bit;
            for m in 0..mu.len() {
                if m & step != 0 {
                    mu[m] -= mu[m ^ step];
                }
            }
        }
        SetFunction { n: self.n, values: mu }
    }

    /// Inverse of [`mobius`](Self::mobius): `v(B) = sum over A ⊆ B of mu(A)`.
    pub fn zeta(&self) -> SetFunction {
        let mut v = self.values.clone();
        for bit in 0..self.n {
            let step = 1usize << bit;
            for m in 0..v.len() {
                if m & step != 0 {
                    v[m] += v[m ^ step];
                }
            }
        }
        SetFunction { n: self.n, values: v }
    }
}

/// Möbius inversion of an explicit set function given on all subsets.
pub fn mobius_inversion(v: &SetFunction) -> Result<SetFunction> {
    if v.values[0] != 0.0 {
        return Err(Error::InvalidArgument("set function must vanish on the empty set".into()));
    }
    Ok(v.mobius())
}

/// Values on every partition of `0..n`, listed finest-last in
/// restricted-growth order.
#[derive(Clone, Debug)]
pub struct PartitionFunction {
    partitions: Vec<Partition>,
    values: Vec<f64>,
}

impl PartitionFunction {
    pub fn from_fn(n: usize, f: impl Fn(&Partition) -> f64) -> Result<Self> {
        if n > MAX_PARTITION_FUNCTION_N {
            return Err(Error::CapExceeded {
                what: "explicit partition functions",
                cap: MAX_PARTITION_FUNCTION_N,
                n,
            });
        }
        let partitions = all_partitions(n);
        let values = partitions.iter().map(f).collect();
        Ok(Self { partitions, values })
    }

    /// `V(P) = sum of v over the blocks of P`.
    pub fn additive(s: &ClusterScore) -> Result<Self> {
        Self::from_fn(s.n(), |p| p.blocks().iter().map(|b| s.value(b)).sum())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, f64)> {
        self.partitions.iter().zip(self.values.iter().copied())
    }

    pub fn get(&self, p: &Partition) -> Option<f64> {
        self.partitions.iter().position(|q| q == p).map(|k| self.values[k])
    }

    /// `mu(P) = V(P) - sum over Q < P of mu(Q)`, with `Q < P` meaning `Q`
    /// properly refines `P`.
    pub fn mobius(&self) -> PartitionFunction {
        // finer partitions have more blocks, so visit them first
        let mut order: Vec<usize> = (0..self.partitions.len()).collect();
        order.sort_by_key(|&k| std::cmp::Reverse(self.partitions[k].len()));
        let mut mu = vec![0.0; self.values.len()];
        for (pos, &k) in order.iter().enumerate() {
            let p = &self.partitions[k];
            let below: f64 = order[..pos]
                .iter()
                .filter(|&&q| self.partitions[q].len() > p.len() && self.partitions[q].refines(p))
                .map(|&q| mu[q])
                .sum();
            mu[k] = self.values[k] - below;
        }
        PartitionFunction { partitions: self.partitions.clone(), values: mu }
    }
}

pub fn partition_mobius(v: &PartitionFunction) -> PartitionFunction {
    v.mobius()
}

/// Modular elements of the partition lattice: partitions with at most one
/// non-singleton block.
pub fn is_modular_element(p: &Partition) -> bool {
    p.non_singleton_blocks() <= 1
}
