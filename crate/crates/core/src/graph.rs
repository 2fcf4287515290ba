//! Undirected simple graphs, edge-list ingestion and link densities.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::real::Real;

/// Dense node index, `0..node_count`.
pub type NodeId = usize;

/// Immutable undirected simple graph.
///
/// Nodes carry their original string labels; all computation uses dense
/// indices. Edges are stored once as `(i, j)` with `i < j`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
}

#[inline]
fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Graph {
    /// Builds a graph from labels and index pairs. Self-loops are dropped,
    /// duplicate and reversed pairs collapse.
    ///
    /// Panics if an index is out of range.
    pub fn from_edges<I>(labels: Vec<String>, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = labels.len();
        let mut list: Vec<(NodeId, NodeId)> = edges
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| {
                assert!(a < n && b < n, "edge ({a}, {b}) out of range for {n} nodes");
                ordered(a, b)
            })
            .collect();
        list.sort_unstable();
        list.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &list {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Graph {
            labels,
            adjacency,
            edges: list,
        }
    }

    /// Graph on nodes labelled `"0"..n` with the given edges.
    pub fn with_node_count<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        let (a, b) = if self.adjacency[a].len() <= self.adjacency[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of the node with this label, if any.
    pub fn index_of(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label)
    }

    /// All unordered unlinked pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn non_edges(&self) -> Vec<(NodeId, NodeId)> {
        let n = self.node_count();
        let mut out =
            Vec::with_capacity((n * n.saturating_sub(1) / 2).saturating_sub(self.edge_count()));
        for i in 0..n {
            let row = &self.adjacency[i];
            let mut k = row.partition_point(|&x| x <= i);
            for j in (i + 1)..n {
                if k < row.len() && row[k] == j {
                    k += 1;
                } else {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Copy of this graph with the given edges removed; node set unchanged.
    pub fn without_edges(&self, removed: &[(NodeId, NodeId)]) -> Graph {
        let mut drop: Vec<(NodeId, NodeId)> = removed.iter().map(|&(a, b)| ordered(a, b)).collect();
        drop.sort_unstable();
        let kept = self
            .edges
            .iter()
            .copied()
            .filter(|e| drop.binary_search(e).is_err());
        Graph::from_edges(self.labels.clone(), kept)
    }

    /// Induced subgraph on `nodes`, re-indexed in the order given.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let mut local = vec![usize::MAX; self.node_count()];
        for (k, &v) in nodes.iter().enumerate() {
            local[v] = k;
        }
        let labels = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self.edges.iter().filter_map(|&(a, b)| {
            let (la, lb) = (local[a], local[b]);
            (la != usize::MAX && lb != usize::MAX).then_some((la, lb))
        });
        Graph::from_edges(labels, edges)
    }

    /// Connected components as sorted node lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &u in &self.adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on the largest connected component. Among equally
    /// large components the one holding the smallest node index wins.
    pub fn giant_component(&self) -> Graph {
        let comps = self.components();
        // components() is ordered by smallest member, so the first maximum wins ties.
        let mut best: Option<&Vec<NodeId>> = None;
        for c in &comps {
            if best.is_none_or(|b| c.len() > b.len()) {
                best = Some(c);
            }
        }
        match best {
            Some(nodes) => self.induced_subgraph(nodes),
            None => self.clone(),
        }
    }

    /// Number of edges with both endpoints in `nodes`.
    pub fn intra_edge_count(&self, nodes: &[NodeId]) -> usize {
        let mask = self.mask(nodes);
        nodes
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter(|&&u| u > v && mask[u])
                    .count()
            })
            .sum()
    }

    /// Number of edges with one endpoint in `a` and the other in `b`.
    pub fn cross_edge_count(&self, a: &[NodeId], b: &[NodeId]) -> Result<usize> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyNodeSet);
        }
        let in_a = self.mask(a);
        let in_b = self.mask(b);
        if let Some(&v) = b.iter().find(|&&v| in_a[v]) {
            return Err(Error::OverlappingBlocks(v));
        }
        Ok(a.iter()
            .map(|&v| self.adjacency[v].iter().filter(|&&u| in_b[u]).count())
            .sum())
    }

    fn mask(&self, nodes: &[NodeId]) -> Vec<bool> {
        let mut mask = vec![false; self.node_count()];
        for &v in nodes {
            mask[v] = true;
        }
        mask
    }

    /// Serializes as one `label label` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{} {}", self.labels[a], self.labels[b]);
        }
        out
    }
}

/// Parses a whitespace-separated edge list.
///
/// Blank lines and lines starting with `#` are skipped. Labels are mapped
/// to dense indices in order of first appearance.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut index: HashMap<&str, NodeId> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::MalformedLine {
                line: lineno + 1,
                found: tokens.len(),
            });
        }
        if tokens[0] == tokens[1] {
            return Err(Error::SelfLoop {
                line: lineno + 1,
                label: tokens[0].to_string(),
            });
        }
        let mut ends = [0; 2];
        for (end, &tok) in ends.iter_mut().zip(&tokens) {
            *end = *index.entry(tok).or_insert_with(|| {
                labels.push(tok.to_string());
                labels.len() - 1
            });
        }
        edges.push((ends[0], ends[1]));
    }
    Ok(Graph::from_edges(labels, edges))
}

/// Reads and parses an edge-list file; errors carry the path.
pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|err| Error::Io {
        path: path.to_path_buf(),
        err,
    })?;
    parse_edge_list(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        err: Box::new(e),
    })
}

/// Number of unordered node pairs in a block of `size` nodes.
#[inline]
pub fn pair_count(size: usize) -> u64 {
    let s = size as u64;
    s * s.saturating_sub(1) / 2
}

/// Intra-block link density `m / (|V|(|V|-1)/2)`.
///
/// Blocks with fewer than two nodes have no pairs and are treated as
/// complete (density 1).
pub fn block_density<F: Real>(g: &Graph, nodes: &[NodeId]) -> F {
    density_from_counts(g.intra_edge_count(nodes) as u64, pair_count(nodes.len()))
}

/// Density from raw counts; `pairs == 0` gives 1.
#[inline]
pub fn density_from_counts<F: Real>(edges: u64, pairs: u64) -> F {
    if pairs == 0 {
        F::one()
    } else {
        F::count(edges) / F::count(pairs)
    }
}

/// Connecting density `m_ab / (|a| |b|)` between two disjoint node sets.
pub fn cross_density<F: Real>(g: &Graph, a: &[NodeId], b: &[NodeId]) -> Result<F> {
    let m = g.cross_edge_count(a, b)?;
    Ok(F::count(m as u64) / F::count((a.len() * b.len()) as u64))
}
