//! Weighted undirected graphs, derived statistics and benchmark generators.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::partition::Partition;

/// Undirected graph on nodes `0..n` with edge weights in `[0, 1]`.
///
/// Absent pairs have weight zero; zero weights are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    adj: Vec<BTreeMap<usize, f64>>,
    strength: Vec<f64>,
    total: f64,
}

fn check_weight(w: f64) -> Result<()> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("weight {w} outside [0,1]")))
    }
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples. Duplicates and self-loops are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut adj = vec![BTreeMap::new(); n];
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop on node {u}")));
            }
            check_weight(w)?;
            if adj[u].contains_key(&v) {
                return Err(Error::InvalidArgument(format!("duplicate pair {u} {v}")));
            }
            if w > 0.0 {
                adj[u].insert(v, w);
                adj[v].insert(u, w);
            }
        }
        Ok(Self::finish(n, adj))
    }

    fn finish(n: usize, adj: Vec<BTreeMap<usize, f64>>) -> Self {
        let strength: Vec<f64> = adj.iter().map(|m| m.values().sum()).collect();
        let total = adj
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.range(i + 1..).map(|(_, w)| *w))
            .sum();
        Self { n, adj, strength, total }
    }

    /// Unweighted graph from a list of edges.
    pub fn simple(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges(n, edges.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    pub fn empty(n: usize) -> Self {
        Self::finish(n, vec![BTreeMap::new(); n])
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0)));
        Self::from_edges(n, edges).expect("complete graph edges are valid")
    }

    /// Parses the edge-list text format.
    ///
    /// Each data line is `u v` or `u v w`. Lines starting with `#` are
    /// comments, except that a `# nodes: N` comment fixes the node count so
    /// isolated nodes can be represented. Without it, `n` is one more than the
    /// largest id and every id below it must occur in some edge.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut declared: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.trim();
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(rest) = comment.trim().strip_prefix("nodes:") {
                    let n = rest
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| perr(format!("bad node count: {e}")))?;
                    if declared.is_some() {
                        return Err(perr("node count declared twice".into()));
                    }
                    declared = Some((n, line_no));
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(perr(format!("expected 'u v [w]', got {line:?}")));
            }
            let u: usize = fields[0]
                .parse()
                .map_err(|_| perr(format!("bad node id {:?}", fields[0])))?;
            let v: usize = fields[1]
                .parse()
                .map_err(|_| perr(format!("bad node id {:?}", fields[1])))?;
            let w: f64 = match fields.get(2) {
                Some(s) => s.parse().map_err(|_| perr(format!("bad weight {s:?}")))?,
                None => 1.0,
            };
            if u == v {
                return Err(perr(format!("self-loop on node {u}")));
            }
            if !(0.0..=1.0).contains(&w) {
                return Err(perr(format!("weight {w} outside [0,1]")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(perr(format!("duplicate pair {u} {v}")));
            }
            edges.push((u, v, w, line_no));
        }
        let max_id = edges.iter().map(|e| e.0.max(e.1)).max();
        let n = match (declared, max_id) {
            (Some((n, line)), Some(m)) if m >= n => {
                return Err(Error::Parse {
                    line,
                    msg: format!("node id {m} exceeds declared count {n}"),
                })
            }
            (Some((n, _)), _) => n,
            (None, Some(m)) => {
                let mut present = vec![false; m + 1];
                for e in &edges {
                    present[e.0] = true;
                    present[e.1] = true;
                }
                if let Some(gap) = present.iter().position(|p| !p) {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("node id {gap} never appears; declare '# nodes: N' for isolated nodes"),
                    });
                }
                m + 1
            }
            (None, None) => 0,
        };
        Self::from_edges(n, edges.into_iter().map(|(u, v, w, _)| (u, v, w)))
    }

    /// Edge-list text with a `# nodes:` header; parses back to an equal graph.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# nodes: {}\n", self.n);
        for (i, j, w) in self.edges() {
            if w == 1.0 {
                writeln!(out, "{i} {j}").unwrap();
            } else {
                writeln!(out, "{i} {j} {w}").unwrap();
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adj.get(i).and_then(|m| m.get(&j)).copied().unwrap_or(0.0)
    }

    /// `w_i`, the sum of weights on pairs containing `i` (the degree on simple graphs).
    pub fn strength(&self, i: usize) -> f64 {
        self.strength[i]
    }

    /// `w_N`, the sum of all pair weights (the edge count on simple graphs).
    pub fn total_weight(&self) -> f64 {
        self.total
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Stored pairs `(i, j, w)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.range(i + 1..).map(move |(&j, &w)| (i, j, w)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn is_simple(&self) -> bool {
        self.edges().all(|(_, _, w)| w == 1.0)
    }

    fn check_set(&self, a: &NodeSet) -> Result<()> {
        match a.last() {
            Some(m) if m >= self.n => Err(Error::NodeOutOfRange { node: m, n: self.n }),
            _ => Ok(()),
        }
    }

    /// Total weight of pairs inside `a`; `|E(A)|` on simple graphs.
    pub fn spanned_edge_weight(&self, a: &NodeSet) -> Result<f64> {
        self.check_set(a)?;
        Ok(a.iter()
            .flat_map(|i| self.adj[i].range(i + 1..).filter(|(j, _)| a.contains(**j)))
            .map(|(_, w)| *w)
            .sum())
    }

    /// Open neighborhood of `i`. Only defined for simple graphs.
    pub fn neighborhood(&self, i: usize) -> Result<NodeSet> {
        if i >= self.n {
            return Err(Error::NodeOutOfRange { node: i, n: self.n });
        }
        if !self.is_simple() {
            return Err(Error::NotSimple);
        }
        Ok(self.adj[i].keys().copied().collect())
    }

    fn neighborhoods(&self) -> Result<Vec<NodeSet>> {
        if !self.is_simple() {
            return Err(Error::NotSimple);
        }
        Ok(self.adj.iter().map(|m| m.keys().copied().collect()).collect())
    }

    pub fn triangle_count(&self) -> Result<usize> {
        let nb = self.neighborhoods()?;
        let mut count = 0;
        for (i, j, _) in self.edges() {
            count += nb[i].intersection(&nb[j]).iter().filter(|&k| k > j).count();
        }
        Ok(count)
    }

    /// `3 * triangles / connected triples`.
    pub fn clustering_coefficient(&self) -> Result<f64> {
        let triangles = self.triangle_count()?;
        let triples: usize = (0..self.n).map(|i| choose2(self.degree(i))).sum();
        if triples == 0 {
            return Err(Error::Undefined("graph has no connected triples".into()));
        }
        Ok(3.0 * triangles as f64 / triples as f64)
    }

    /// Connected components, each as a node set, ordered by smallest member.
    pub fn components(&self) -> Vec<NodeSet> {
        let mut label = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            let mut comp = NodeSet::new();
            let mut stack = vec![s];
            label[s] = out.len();
            while let Some(u) = stack.pop() {
                comp.insert(u);
                for &v in self.adj[u].keys() {
                    if label[v] == usize::MAX {
                        label[v] = out.len();
                        stack.push(v);
                    }
                }
            }
            out.push(comp);
        }
        out
    }
}

pub(crate) fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Two cliques on `{0..n/2-1}` and `{n/2..n-1}` joined by the perfect
/// matching `k -- k + n/2`. Every degree is `n/2` and there are `n^2/4` edges.
pub fn half_regular(n: usize) -> Result<WeightedGraph> {
    if n % 2 == 1 || n <= 4 {
        return Err(Error::InvalidArgument(format!(
            "half-regular graph needs an even n > 4, got {n}"
        )));
    }
    let h = n / 2;
    let mut edges = Vec::with_capacity(n * n / 4);
    for base in [0, h] {
        for i in 0..h {
            for j in i + 1..h {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.extend((0..h).map(|k| (k, k + h)));
    WeightedGraph::simple(n, &edges)
}

/// The two halves of [`half_regular`]`(n)`.
pub fn half_regular_halves(n: usize) -> (NodeSet, NodeSet) {
    ((0..n / 2).collect(), (n / 2..n).collect())
}

/// The matched pairs `{k, k + n/2}` of [`half_regular`]`(n)`.
pub fn half_regular_matching(n: usize) -> Vec<NodeSet> {
    (0..n / 2).map(|k| [k, k + n / 2].into_iter().collect()).collect()
}

/// Disjoint union of complete graphs on the blocks of `p`.
pub fn partition_graph(p: &Partition) -> WeightedGraph {
    let mut edges = Vec::new();
    for b in p.blocks() {
        let m = b.to_vec();
        for (x, &i) in m.iter().enumerate() {
            edges.extend(m[x + 1..].iter().map(|&j| (i, j)));
        }
    }
    WeightedGraph::simple(p.n(), &edges).expect("partition blocks are in range")
}

/// [`partition_graph`] with independent noise: each missing pair is added
/// with probability `p_add`, each present edge dropped with probability `p_del`.
pub fn noisy_partition_graph(p: &Partition, p_add: f64, p_del: f64, seed: u64) -> Result<WeightedGraph> {
    for (name, pr) in [("p_add", p_add), ("p_del", p_del)] {
        if !(0.0..=1.0).contains(&pr) {
            return Err(Error::InvalidArgument(format!("{name} = {pr} outside [0,1]")));
        }
    }
    let n = p.n();
    let block_of = p.block_index();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let u: f64 = rng.gen();
            let keep = if block_of[i] == block_of[j] {
                u >= p_del
            } else {
                u < p_add
            };
            if keep {
                edges.push((i, j));
            }
        }
    }
    WeightedGraph::simple(n, &edges)
}

/// Clique-type vector: entry `m` counts the supplied cliques of size `m` that
/// are not contained in another supplied clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueType(pub Vec<usize>);

impl CliqueType {
    pub fn count(&self, size: usize) -> usize {
        self.0.get(size).copied().unwrap_or(0)
    }
}

/// Union of complete graphs on the given cliques, with its clique type.
///
/// The node count is one more than the largest member; every node below it
/// must belong to some clique.
pub fn clique_union(cliques: &[NodeSet]) -> Result<(WeightedGraph, CliqueType)> {
    if cliques.is_empty() {
        return Err(Error::InvalidArgument("empty clique list".into()));
    }
    if cliques.iter().any(NodeSet::is_empty) {
        return Err(Error::InvalidArgument("empty clique".into()));
    }
    let cover = cliques.iter().fold(NodeSet::new(), |acc, c| acc.union(c));
    let n = cover.last().map_or(0, |m| m + 1);
    if cover.len() != n {
        let gap = (0..n).find(|&i| !cover.contains(i)).unwrap();
        return Err(Error::InvalidArgument(format!("node {gap} is in no clique")));
    }
    let mut pairs = std::collections::BTreeSet::new();
    for c in cliques {
        let m = c.to_vec();
        for (x, &i) in m.iter().enumerate() {
            pairs.extend(m[x + 1..].iter().map(|&j| (i, j)));
        }
    }
    let edges: Vec<_> = pairs.into_iter().collect();
    let g = WeightedGraph::simple(n, &edges)?;

    let mut kappa = vec![0; n + 1];
    let mut distinct: Vec<&NodeSet> = cliques.iter().collect();
    distinct.sort();
    distinct.dedup();
    for c in &distinct {
        let dominated = distinct.iter().any(|d| d != c && c.is_subset(d));
        if !dominated {
            kappa[c.len()] += 1;
        }
    }
    Ok((g, CliqueType(kappa)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodeset::set;

    fn k3() -> WeightedGraph {
        WeightedGraph::complete(3)
    }

    #[test]
    fn parse_defaults_and_errors() {
        let g = WeightedGraph::from_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(2, 1), 1.0);
        assert_eq!(g.weight(0, 2), 0.0);

        let g = WeightedGraph::from_edge_list("0 1 0.5").unwrap();
        assert_eq!(g.weight(0, 1), 0.5);
        assert_eq!(g.strength(0), 0.5);

        let err = WeightedGraph::from_edge_list("0 0").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, ref msg } if msg.contains("self-loop")));
        let err = WeightedGraph::from_edge_list("# c\n0 1\n1 0").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, ref msg } if msg.contains("duplicate")));
        let err = WeightedGraph::from_edge_list("0 1 1.5").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(WeightedGraph::from_edge_list("0 x").is_err());
        assert!(WeightedGraph::from_edge_list("0 1 2 3").is_err());
        // gap without a declaration
        assert!(WeightedGraph::from_edge_list("0 1\n3 4").is_err());
        let g = WeightedGraph::from_edge_list("# nodes: 5\n0 1\n3 4").unwrap();
        assert_eq!(g.n(), 5);
        assert!(WeightedGraph::from_edge_list("# nodes: 2\n0 3").is_err());
        assert_eq!(WeightedGraph::from_edge_list("# nodes: 4\n").unwrap(), WeightedGraph::empty(4));
    }

    #[test]
    fn spanned_weight() {
        assert_eq!(k3().spanned_edge_weight(&set(&[0, 1, 2])).unwrap(), 3.0);
        assert_eq!(k3().spanned_edge_weight(&set(&[0, 1])).unwrap(), 1.0);
        let g = half_regular(6).unwrap();
        let (n1, _) = half_regular_halves(6);
        assert_eq!(g.spanned_edge_weight(&n1).unwrap(), 3.0);
        assert!(k3().spanned_edge_weight(&set(&[3])).is_err());
    }

    #[test]
    fn neighborhoods() {
        assert_eq!(k3().neighborhood(0).unwrap(), set(&[1, 2]));
        assert_eq!(WeightedGraph::empty(2).neighborhood(0).unwrap(), set(&[]));
        assert_eq!(half_regular(6).unwrap().neighborhood(0).unwrap(), set(&[1, 2, 3]));
        let w = WeightedGraph::from_edges(2, [(0, 1, 0.5)]).unwrap();
        assert_eq!(w.neighborhood(0), Err(Error::NotSimple));
    }

    #[test]
    fn clustering_coefficients() {
        assert_eq!(k3().clustering_coefficient().unwrap(), 1.0);
        let path = WeightedGraph::simple(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.clustering_coefficient().unwrap(), 0.0);
        let g = half_regular(6).unwrap();
        assert_eq!(g.triangle_count().unwrap(), 2);
        assert!((g.clustering_coefficient().unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(WeightedGraph::empty(3).clustering_coefficient().is_err());
    }

    #[test]
    fn half_regular_family() {
        for n in [6, 8, 10, 12] {
            let g = half_regular(n).unwrap();
            assert_eq!(g.edge_count(), n * n / 4);
            assert!((0..n).all(|i| g.degree(i) == n / 2));
        }
        assert!(half_regular(5).is_err());
        assert!(half_regular(4).is_err());
    }

    #[test]
    fn partition_graphs() {
        let g = partition_graph(&Partition::new(3, vec![set(&[0, 1]), set(&[2])]).unwrap());
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1, 1.0)]);
        let g = partition_graph(&Partition::top(3));
        assert_eq!(g, k3());
        let p = Partition::new(4, vec![set(&[0, 1]), set(&[2, 3])]).unwrap();
        assert_eq!(partition_graph(&p).edge_count(), 2);
        assert_eq!(partition_graph(&p).components(), p.blocks().to_vec());
    }

    #[test]
    fn noise_extremes() {
        let p = Partition::new(5, vec![set(&[0, 1, 2]), set(&[3, 4])]).unwrap();
        assert_eq!(noisy_partition_graph(&p, 0.0, 0.0, 7).unwrap(), partition_graph(&p));
        assert_eq!(noisy_partition_graph(&p, 1.0, 0.0, 7).unwrap(), WeightedGraph::complete(5));
        assert_eq!(noisy_partition_graph(&p, 0.0, 1.0, 7).unwrap(), WeightedGraph::empty(5));
        assert!(noisy_partition_graph(&p, 1.5, 0.0, 7).is_err());
        assert_eq!(
            noisy_partition_graph(&p, 0.3, 0.3, 11).unwrap(),
            noisy_partition_graph(&p, 0.3, 0.3, 11).unwrap()
        );
    }

    #[test]
    fn clique_unions() {
        let (g, kappa) = clique_union(&[set(&[0, 1, 2])]).unwrap();
        assert_eq!(g, k3());
        assert_eq!(kappa.count(3), 1);

        let (n1, n2) = half_regular_halves(6);
        let mut cliques = vec![n1, n2];
        cliques.extend(half_regular_matching(6));
        let (g, kappa) = clique_union(&cliques).unwrap();
        assert_eq!(g, half_regular(6).unwrap());
        assert_eq!(kappa.count(2), 3);
        assert_eq!(kappa.count(3), 2);

        // a sub-clique does not count as maximal
        let (_, kappa) = clique_union(&[set(&[0, 1, 2]), set(&[0, 1])]).unwrap();
        assert_eq!(kappa.count(2), 0);
        assert!(clique_union(&[]).is_err());
        assert!(clique_union(&[set(&[0, 2])]).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = WeightedGraph::from_edges(4, [(0, 1, 0.25), (2, 3, 1.0)]).unwrap();
        assert_eq!(WeightedGraph::from_edge_list(&g.to_edge_list()).unwrap(), g);
    }
}
