//! Density-threshold block partitioning.
//!
//! One partition sample is built in two stages. The node set is first split
//! at random into two sides. Inside each side, communities are peeled off one
//! at a time: starting from everything still left on that side, nodes of
//! minimum degree are removed until the remaining subgraph is at least as
//! dense as the threshold, the survivors form a community and are taken out,
//! and the search restarts. When a side has no edges left its remaining nodes
//! become a residual block.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{density_from_counts, pair_count, Graph, NodeId};
use crate::real::Real;
use crate::seed::{derive, rng_from_seed, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    /// Density at or above the threshold, at least one edge.
    Community,
    /// Leftover nodes of one side, no internal edges.
    Residual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Sorted node indices.
    pub nodes: Vec<NodeId>,
    pub intra_edges: u64,
    pub pair_count: u64,
    pub kind: BlockKind,
}

impl Block {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn density<F: Real>(&self) -> F {
        density_from_counts(self.intra_edges, self.pair_count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub blocks: Vec<Block>,
    /// Block index of every node.
    pub block_of: Vec<usize>,
    pub seed: u64,
    pub threshold: f64,
}

/// `true` when `edges` over the pairs of `nodes` reaches the threshold.
#[inline]
fn dense_enough(edges: u64, nodes: usize, threshold: f64) -> bool {
    density_from_counts::<f64>(edges, pair_count(nodes)) >= threshold
}

pub fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(threshold))
    }
}

/// Splits the nodes into two sides, each node independently with
/// probability 1/2. An empty side receives one node chosen uniformly from
/// the other. Needs at least two nodes.
pub fn random_bipartition(g: &Graph, rng: &mut Rng) -> (Vec<NodeId>, Vec<NodeId>) {
    let (mut left, mut right): (Vec<NodeId>, Vec<NodeId>) =
        (0..g.node_count()).partition(|_| rng.random::<bool>());
    if g.node_count() >= 2 {
        if left.is_empty() {
            let k = rng.random_range(0..right.len());
            left.push(right.remove(k));
        } else if right.is_empty() {
            let k = rng.random_range(0..left.len());
            right.push(left.remove(k));
        }
    }
    (left, right)
}

/// Mutable view of the nodes still present on one side.
#[derive(Debug, Clone)]
struct WorkingGraph {
    nodes: Vec<NodeId>,
    adjacency: Vec<Vec<usize>>,
    alive: Vec<bool>,
    degree: Vec<usize>,
    alive_count: usize,
    edge_count: u64,
}

impl WorkingGraph {
    fn new(g: &Graph, nodes: &[NodeId]) -> Self {
        let mut local = vec![usize::MAX; g.node_count()];
        for (k, &v) in nodes.iter().enumerate() {
            local[v] = k;
        }
        let adjacency: Vec<Vec<usize>> = nodes
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .filter_map(|&u| (local[u] != usize::MAX).then_some(local[u]))
                    .collect()
            })
            .collect();
        let degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
        let edge_count = degree.iter().sum::<usize>() as u64 / 2;
        WorkingGraph {
            nodes: nodes.to_vec(),
            adjacency,
            alive: vec![true; nodes.len()],
            degree,
            alive_count: nodes.len(),
            edge_count,
        }
    }

    fn remove(&mut self, v: usize) {
        debug_assert!(self.alive[v]);
        self.alive[v] = false;
        self.alive_count -= 1;
        self.edge_count -= self.degree[v] as u64;
        for &u in &self.adjacency[v] {
            if self.alive[u] {
                self.degree[u] -= 1;
            }
        }
        self.degree[v] = 0;
    }

    fn alive_locals(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| self.alive[v]).collect()
    }

    /// Peels minimum-degree nodes (random among ties) from a copy until the
    /// density threshold is met. Returns the surviving local ids and their
    /// edge count. `observe` sees each removal as `(removed degree, minimum
    /// degree over alive nodes)`.
    fn find_community(
        &self,
        threshold: f64,
        rng: &mut Rng,
        mut observe: impl FnMut(usize, usize),
    ) -> Result<(Vec<usize>, u64)> {
        if self.edge_count == 0 {
            return Err(Error::Edgeless);
        }
        let mut work = self.clone();
        let mut ties = Vec::new();
        while !dense_enough(work.edge_count, work.alive_count, threshold) {
            let min = (0..work.nodes.len())
                .filter(|&v| work.alive[v])
                .map(|v| work.degree[v])
                .min()
                .expect("non-empty working graph below threshold");
            ties.clear();
            ties.extend((0..work.nodes.len()).filter(|&v| work.alive[v] && work.degree[v] == min));
            let victim = ties[rng.random_range(0..ties.len())];
            observe(work.degree[victim], min);
            work.remove(victim);
        }
        debug_assert!(work.alive_count >= 2 && work.edge_count >= 1);
        Ok((work.alive_locals(), work.edge_count))
    }
}

/// Densest-core search on a whole (sub)graph: removes minimum-degree nodes,
/// breaking ties uniformly with `rng`, until the density reaches
/// `threshold`. Returns the surviving nodes in ascending order.
///
/// The result always has at least two nodes and one edge. Fails on an
/// edgeless graph.
pub fn community_find(g: &Graph, threshold: f64, rng: &mut Rng) -> Result<Vec<NodeId>> {
    check_threshold(threshold)?;
    let all: Vec<NodeId> = (0..g.node_count()).collect();
    let work = WorkingGraph::new(g, &all);
    let (locals, _) = work.find_community(threshold, rng, |_, _| {})?;
    Ok(locals.into_iter().map(|v| work.nodes[v]).collect())
}

/// Blocks extracted from one side of the bipartition.
fn partition_side(
    g: &Graph,
    side: &[NodeId],
    threshold: f64,
    rng: &mut Rng,
    blocks: &mut Vec<Block>,
) -> Result<()> {
    if side.is_empty() {
        return Ok(());
    }
    let mut work = WorkingGraph::new(g, side);
    while work.edge_count > 0 {
        let (locals, edges) = work.find_community(threshold, rng, |_, _| {})?;
        let mut nodes: Vec<NodeId> = locals.iter().map(|&v| work.nodes[v]).collect();
        nodes.sort_unstable();
        blocks.push(Block {
            pair_count: pair_count(nodes.len()),
            nodes,
            intra_edges: edges,
            kind: BlockKind::Community,
        });
        for v in locals {
            work.remove(v);
        }
    }
    let mut rest: Vec<NodeId> = work
        .alive_locals()
        .into_iter()
        .map(|v| work.nodes[v])
        .collect();
    if !rest.is_empty() {
        rest.sort_unstable();
        blocks.push(Block {
            pair_count: pair_count(rest.len()),
            nodes: rest,
            intra_edges: 0,
            kind: BlockKind::Residual,
        });
    }
    Ok(())
}

/// One partition sample drawn with `seed`.
///
/// Blocks are ordered: communities of the first side in discovery order,
/// the first side's residual block, then the same for the second side.
pub fn partition_once(g: &Graph, threshold: f64, seed: u64) -> Result<Partition> {
    check_threshold(threshold)?;
    let n = g.node_count();
    let mut rng = rng_from_seed(seed);
    let (left, right) = if n >= 2 {
        random_bipartition(g, &mut rng)
    } else {
        ((0..n).collect(), Vec::new())
    };
    let mut blocks = Vec::new();
    partition_side(g, &left, threshold, &mut rng, &mut blocks)?;
    partition_side(g, &right, threshold, &mut rng, &mut blocks)?;

    let mut block_of = vec![usize::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        for &v in &block.nodes {
            block_of[v] = b;
        }
    }
    Ok(Partition {
        blocks,
        block_of,
        seed,
        threshold,
    })
}

/// `count` independent samples; sample `k` uses seed `derive(master_seed, k)`.
/// Output is identical whatever the size of the rayon pool.
pub fn sample_partitions(
    g: &Graph,
    threshold: f64,
    count: usize,
    master_seed: u64,
) -> Result<Vec<Partition>> {
    check_threshold(threshold)?;
    if count == 0 {
        return Err(Error::ZeroSamples);
    }
    (0..count as u64)
        .into_par_iter()
        .map(|k| partition_once(g, threshold, derive(master_seed, k)))
        .collect()
}

impl Partition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Edge counts between every pair of blocks, as a symmetric `k × k`
    /// row-major table; the diagonal holds intra-block counts.
    pub fn block_edge_counts(&self, g: &Graph) -> Vec<u64> {
        let k = self.blocks.len();
        let mut counts = vec![0u64; k * k];
        for &(a, b) in g.edges() {
            let (ba, bb) = (self.block_of[a], self.block_of[b]);
            counts[ba * k + bb] += 1;
            if ba != bb {
                counts[bb * k + ba] += 1;
            }
        }
        counts
    }

    /// Checks coverage, disjointness, block bookkeeping and the kind
    /// invariants against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.node_count();
        if self.block_of.len() != n {
            return Err(Error::Uncovered(self.block_of.len().min(n)));
        }
        let mut seen = vec![false; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in &block.nodes {
                if v >= n {
                    return Err(Error::NodeOutOfRange(v));
                }
                if seen[v] || self.block_of[v] != b {
                    return Err(Error::OverlappingBlocks(v));
                }
                seen[v] = true;
            }
            let m = g.intra_edge_count(&block.nodes) as u64;
            if m != block.intra_edges || block.pair_count != pair_count(block.len()) {
                return Err(Error::CorruptBlock {
                    pairs: block.pair_count,
                    edges: block.intra_edges,
                });
            }
            let ok = match block.kind {
                BlockKind::Community => {
                    block.len() >= 2 && m >= 1 && dense_enough(m, block.len(), self.threshold)
                }
                BlockKind::Residual => m == 0,
            };
            if !ok {
                return Err(Error::CorruptBlock {
                    pairs: block.pair_count,
                    edges: m,
                });
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::Uncovered(v));
        }
        Ok(())
    }

    /// Serializable view with node labels and the density matrix.
    pub fn to_doc(&self, g: &Graph) -> PartitionDoc {
        let matrix: DensityMatrix<f64> = partition_density_matrix(g, self);
        PartitionDoc {
            seed: self.seed,
            threshold: self.threshold,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockDoc {
                    nodes: b.nodes.iter().map(|&v| g.label(v).to_string()).collect(),
                    kind: b.kind,
                    m: b.intra_edges,
                    n: b.pair_count,
                    density: b.density(),
                })
                .collect(),
            density_matrix: matrix.rows(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub nodes: Vec<String>,
    pub kind: BlockKind,
    pub m: u64,
    pub n: u64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub seed: u64,
    pub threshold: f64,
    pub blocks: Vec<BlockDoc>,
    pub density_matrix: Vec<Vec<f64>>,
}

/// Symmetric block-by-block link density table.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<F> {
    size: usize,
    values: Vec<F>,
}

impl<F: Real> DensityMatrix<F> {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> F {
        self.values[row * self.size + col]
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        if self.size == 0 {
            return Vec::new();
        }
        self.values.chunks(self.size).map(<[F]>::to_vec).collect()
    }

    /// Header `block,0,1,…` then one row per block.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("block");
        for c in 0..self.size {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
        for r in 0..self.size {
            out.push_str(&r.to_string());
            for c in 0..self.size {
                out.push_str(&format!(",{}", self.get(r, c)));
            }
            out.push('\n');
        }
        out
    }
}

/// Intra-block densities on the diagonal, connecting densities elsewhere.
pub fn partition_density_matrix<F: Real>(g: &Graph, p: &Partition) -> DensityMatrix<F> {
    let k = p.blocks.len();
    let counts = p.block_edge_counts(g);
    let mut values = vec![F::zero(); k * k];
    for mu in 0..k {
        for nu in 0..k {
            let m = counts[mu * k + nu];
            values[mu * k + nu] = if mu == nu {
                density_from_counts(m, p.blocks[mu].pair_count)
            } else {
                F::count(m) / F::count((p.blocks[mu].len() * p.blocks[nu].len()) as u64)
            };
        }
    }
    DensityMatrix { size: k, values }
}
