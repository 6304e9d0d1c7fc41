//! JSON documents for partitions, covers and families.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mle::{FuzzyCover, MembershipDistribution};
use crate::nodeset::NodeSet;
use crate::overlap::WeightedFamily;
use crate::partition::Partition;
use crate::scores::ClusterScore;

/// Tolerance on the total mass of each node when reading a cover.
pub const COVER_LOAD_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub n: usize,
    pub score: String,
    pub value: f64,
    pub local_optimum: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of optimal partitions, for exhaustive searches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ties: Option<usize>,
    pub blocks: Vec<Vec<usize>>,
}

impl PartitionReport {
    pub fn new(s: &ClusterScore, p: &Partition, seed: Option<u64>) -> Result<Self> {
        Ok(Self {
            n: p.n(),
            score: s.label(),
            value: s.eval_partition(p)?,
            local_optimum: s.is_local_optimum(p),
            seed,
            ties: None,
            blocks: p.to_lists(),
        })
    }

    pub fn partition(&self) -> Result<Partition> {
        Partition::new(self.n, self.blocks.iter().map(|b| b.iter().copied().collect()).collect())
    }
}

#[derive(Deserialize)]
struct PartitionDoc {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

/// Reads the `n` and `blocks` fields of a partition document.
pub fn parse_partition(text: &str) -> Result<Partition> {
    let doc: PartitionDoc = serde_json::from_str(text).map_err(json_error)?;
    Partition::new(doc.n, doc.blocks.into_iter().map(|b| b.into_iter().collect()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassEntry {
    pub set: Vec<usize>,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverDoc {
    pub n: usize,
    /// One list of entries per node.
    pub memberships: Vec<Vec<MassEntry>>,
}

pub fn cover_to_json(q: &FuzzyCover) -> String {
    let doc = CoverDoc {
        n: q.n(),
        memberships: q
            .dists()
            .iter()
            .map(|d| d.iter().map(|(a, m)| MassEntry { set: a.to_vec(), mass: m }).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("cover serializes")
}

/// Reads a cover, accepting per-node totals within [`COVER_LOAD_TOL`] of 1.
pub fn parse_cover(text: &str) -> Result<FuzzyCover> {
    let doc: CoverDoc = serde_json::from_str(text).map_err(json_error)?;
    let dists = doc
        .memberships
        .into_iter()
        .enumerate()
        .map(|(i, entries)| {
            let entries = entries.into_iter().map(|e| (e.set.into_iter().collect::<NodeSet>(), e.mass));
            MembershipDistribution::with_tolerance(i, entries, COVER_LOAD_TOL)
        })
        .collect::<Result<Vec<_>>>()?;
    FuzzyCover::new(doc.n, dists)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntryDoc {
    pub set: Vec<usize>,
    pub score: f64,
    pub runs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub n: usize,
    pub score: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub entries: Vec<FamilyEntryDoc>,
    /// For each node, indices into `entries` of the modules containing it.
    pub membership: Vec<Vec<usize>>,
}

impl FamilyDoc {
    pub fn new(s: &ClusterScore, f: &WeightedFamily, seed: Option<u64>) -> Self {
        let sets: Vec<&NodeSet> = f.sets().collect();
        let mut membership = vec![Vec::new(); f.n()];
        for (k, a) in sets.iter().enumerate() {
            for i in a.iter() {
                membership[i].push(k);
            }
        }
        Self {
            n: f.n(),
            score: s.label(),
            seed,
            entries: f
                .entries()
                .map(|(a, e)| FamilyEntryDoc { set: a.to_vec(), score: e.score, runs: e.runs.clone() })
                .collect(),
            membership,
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), msg: e.to_string() }
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let result = fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(contents.as_bytes())?;
        f.sync_all()
    });
    match result.and_then(|_| fs::rename(&tmp, path)) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}
