//! Bayesian link-probability estimation over sampled partitions.
//!
//! For an unlinked pair inside a community block with `n` pairs and `m`
//! edges, one sample contributes the Beta integrals
//!
//! ```text
//! numerator   = ∫ p · p^n (1-p)^(n-m) dp = B(n+2, n-m+1)
//! denominator = ∫     p^n (1-p)^(n-m) dp = B(n+1, n-m+1)
//! ```
//!
//! and for a pair straddling two blocks with `n` possible and `m` actual
//! links between them (or lying in a residual block, with that block's own
//! counts):
//!
//! ```text
//! numerator   = ∫ p · p^m (1-p)^n dp = B(m+2, n+1)
//! denominator = ∫     p^m (1-p)^n dp = B(m+1, n+1)
//! ```
//!
//! The score of a pair is the ratio of the numerator sum to the denominator
//! sum over all samples. Every quantity is kept as a logarithm.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::{check_threshold, partition_once, BlockKind, Partition};
use crate::real::Real;
use crate::seed::derive;
use crate::special::{ln_beta, log_add_exp};

/// Log numerator and log denominator contributed by one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerms<F> {
    pub log_numerator: F,
    pub log_denominator: F,
}

impl<F: Real> PairTerms<F> {
    /// Per-sample probability `exp(log_numerator − log_denominator)`.
    pub fn ratio(&self) -> F {
        (self.log_numerator - self.log_denominator).exp()
    }

    /// `ln B(a, b)` and `ln B(a+1, b) = ln B(a, b) + ln(a / (a+b))`.
    fn beta_pair(a: u64, b: u64) -> Self {
        let (fa, fb) = (F::count(a), F::count(b));
        let log_denominator = ln_beta(fa, fb);
        PairTerms {
            log_numerator: log_denominator + (fa / (fa + fb)).ln(),
            log_denominator,
        }
    }
}

/// Terms for a pair inside a dense block with `n_pairs` node pairs and
/// `m_edges` edges: `ln B(n+2, n−m+1)` over `ln B(n+1, n−m+1)`.
/// The per-sample ratio is `(n+1)/(2n−m+2)`.
pub fn intra_terms<F: Real>(n_pairs: u64, m_edges: u64) -> Result<PairTerms<F>> {
    if n_pairs == 0 || m_edges > n_pairs {
        return Err(Error::CorruptBlock {
            pairs: n_pairs,
            edges: m_edges,
        });
    }
    Ok(PairTerms::beta_pair(n_pairs + 1, n_pairs - m_edges + 1))
}

/// Terms for a pair in the sparse regime with `n_cross` possible and
/// `m_cross` actual links: `ln B(m+2, n+1)` over `ln B(m+1, n+1)`.
/// The per-sample ratio is `(m+1)/(n+m+2)`.
pub fn inter_terms<F: Real>(n_cross: u64, m_cross: u64) -> Result<PairTerms<F>> {
    if n_cross == 0 {
        return Err(Error::EmptyCross);
    }
    Ok(PairTerms::beta_pair(m_cross + 1, n_cross + 1))
}

/// Running log-sums of numerators and denominators for every candidate pair.
#[derive(Debug, Clone)]
pub struct PairAccumulator<F> {
    node_count: usize,
    pairs: Vec<(NodeId, NodeId)>,
    log_num: Vec<F>,
    log_den: Vec<F>,
    samples: usize,
}

impl<F: Real> PairAccumulator<F> {
    /// Empty accumulator over the unlinked pairs of `g`.
    pub fn new(g: &Graph) -> Self {
        let pairs = g.non_edges();
        let len = pairs.len();
        PairAccumulator {
            node_count: g.node_count(),
            pairs,
            log_num: vec![F::neg_infinity(); len],
            log_den: vec![F::neg_infinity(); len],
            samples: 0,
        }
    }

    pub fn sample_count(&self) -> usize {
        self.samples
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    /// Running `(log Σ numerator, log Σ denominator)` for pair slot `k`.
    pub fn log_sums(&self, k: usize) -> (F, F) {
        (self.log_num[k], self.log_den[k])
    }

    /// Adds one partition sample of `g`.
    pub fn accumulate(&mut self, p: &Partition, g: &Graph) -> Result<()> {
        if p.block_of.len() != self.node_count || g.node_count() != self.node_count {
            return Err(Error::Uncovered(p.block_of.len().min(self.node_count)));
        }
        let k = p.blocks.len();
        if let Some(v) = p.block_of.iter().position(|&b| b >= k) {
            return Err(Error::Uncovered(v));
        }
        let counts = p.block_edge_counts(g);
        let mut cache: Vec<Option<PairTerms<F>>> = vec![None; k * k];
        for (slot, &(i, j)) in self.pairs.iter().enumerate() {
            let (bi, bj) = (p.block_of[i], p.block_of[j]);
            let key = bi.min(bj) * k + bi.max(bj);
            let terms = match cache[key] {
                Some(t) => t,
                None => {
                    let t = block_pair_terms(p, &counts, bi, bj)?;
                    cache[key] = Some(t);
                    t
                }
            };
            self.log_num[slot] = log_add_exp(self.log_num[slot], terms.log_numerator);
            self.log_den[slot] = log_add_exp(self.log_den[slot], terms.log_denominator);
        }
        self.samples += 1;
        Ok(())
    }

    /// Folds `other` (built over the same graph) into `self`.
    pub fn merge(&mut self, other: &PairAccumulator<F>) {
        assert_eq!(
            self.pairs, other.pairs,
            "accumulators over different graphs"
        );
        for k in 0..self.pairs.len() {
            self.log_num[k] = log_add_exp(self.log_num[k], other.log_num[k]);
            self.log_den[k] = log_add_exp(self.log_den[k], other.log_den[k]);
        }
        self.samples += other.samples;
    }

    /// Scores `exp(log Σ num − log Σ den)` for every candidate pair.
    pub fn finalize(&self, meta: ScoreMeta) -> Result<ScoreTable<F>> {
        if self.samples == 0 {
            return Err(Error::NoSamples);
        }
        let scores = self
            .log_num
            .iter()
            .zip(&self.log_den)
            .map(|(&n, &d)| (n - d).exp())
            .collect();
        Ok(ScoreTable {
            pairs: self.pairs.clone(),
            scores,
            meta,
        })
    }
}

fn block_pair_terms<F: Real>(
    p: &Partition,
    counts: &[u64],
    bi: usize,
    bj: usize,
) -> Result<PairTerms<F>> {
    let k = p.blocks.len();
    if bi == bj {
        let block = &p.blocks[bi];
        match block.kind {
            BlockKind::Community => intra_terms(block.pair_count, counts[bi * k + bi]),
            BlockKind::Residual => inter_terms(block.pair_count, counts[bi * k + bi]),
        }
    } else {
        let n = (p.blocks[bi].len() * p.blocks[bj].len()) as u64;
        inter_terms(n, counts[bi * k + bj])
    }
}

/// Provenance of a score table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMeta {
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
}

impl ScoreMeta {
    pub fn fbm(threshold: f64, samples: usize, master_seed: u64) -> Self {
        ScoreMeta {
            method: "fbm".into(),
            threshold: Some(threshold),
            samples: Some(samples),
            master_seed: Some(master_seed),
        }
    }
}

/// Scores for every unlinked pair of a graph, keyed by `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable<F> {
    pairs: Vec<(NodeId, NodeId)>,
    scores: Vec<F>,
    pub meta: ScoreMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub node_a: String,
    pub node_b: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreDoc {
    pub meta: ScoreMeta,
    pub pairs: usize,
    pub scores: Vec<ScoreRow>,
}

impl<F: Real> ScoreTable<F> {
    /// Builds a table from pairs sorted lexicographically with `i < j`.
    pub fn from_sorted(pairs: Vec<(NodeId, NodeId)>, scores: Vec<F>, meta: ScoreMeta) -> Self {
        assert_eq!(pairs.len(), scores.len());
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        ScoreTable {
            pairs,
            scores,
            meta,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn scores(&self) -> &[F] {
        &self.scores
    }

    /// Score of the unordered pair `{a, b}`.
    pub fn get(&self, a: NodeId, b: NodeId) -> Option<F> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pairs.binary_search(&key).ok().map(|k| self.scores[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = ((NodeId, NodeId), F)> + '_ {
        self.pairs.iter().copied().zip(self.scores.iter().copied())
    }

    /// Pair indices by descending score; ties keep pair order.
    fn ranked(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.pairs.len()).collect();
        order.sort_by(|&x, &y| {
            self.scores[y]
                .partial_cmp(&self.scores[x])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        order
    }

    /// `node_a,node_b,score` with a header row, highest score first.
    pub fn to_csv(&self, g: &Graph) -> String {
        let mut out = String::from("node_a,node_b,score\n");
        for k in self.ranked() {
            let (a, b) = self.pairs[k];
            out.push_str(&format!(
                "{},{},{}\n",
                g.label(a),
                g.label(b),
                self.scores[k]
            ));
        }
        out
    }

    pub fn to_doc(&self, g: &Graph) -> ScoreDoc {
        ScoreDoc {
            meta: self.meta.clone(),
            pairs: self.len(),
            scores: self
                .ranked()
                .into_iter()
                .map(|k| {
                    let (a, b) = self.pairs[k];
                    ScoreRow {
                        node_a: g.label(a).to_string(),
                        node_b: g.label(b).to_string(),
                        score: self.scores[k].to_f64_lossy(),
                    }
                })
                .collect(),
        }
    }
}

/// Samples reduced serially into one chunk accumulator.
const CHUNK: usize = 8;
/// Chunks evaluated in parallel before being folded into the total.
const WAVE: usize = 64;

/// Full pipeline: `samples` partitions of `g` at `threshold`, accumulated and
/// finalized. The result depends only on the arguments, not on the size of
/// the rayon pool: samples are grouped into fixed chunks whose accumulators
/// are merged in chunk order.
pub fn predict<F: Real>(
    g: &Graph,
    threshold: f64,
    samples: usize,
    master_seed: u64,
) -> Result<ScoreTable<F>> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    check_threshold(threshold)?;
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let chunks = samples.div_ceil(CHUNK);
    let mut total = PairAccumulator::<F>::new(g);
    let mut start = 0;
    while start < chunks {
        let end = (start + WAVE).min(chunks);
        let parts: Vec<PairAccumulator<F>> = (start..end)
            .into_par_iter()
            .map(|c| {
                let mut acc = PairAccumulator::new(g);
                for k in (c * CHUNK)..((c + 1) * CHUNK).min(samples) {
                    let p = partition_once(g, threshold, derive(master_seed, k as u64))?;
                    acc.accumulate(&p, g)?;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        for part in &parts {
            total.merge(part);
        }
        start = end;
    }
    total.finalize(ScoreMeta::fbm(threshold, samples, master_seed))
}
