//! Train/probe splits, AUC and the experiment drivers.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{score_baseline, BaselineMethod};
use crate::datasets;
use crate::error::{Error, Result};
use crate::estimator::{predict, ScoreTable};
use crate::graph::{Graph, NodeId};
use crate::partition::{check_threshold, partition_once, BlockKind};
use crate::real::Real;
use crate::seed::{derive, rng_from_seed};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 2012;

/// Observed graph with a set of its edges held out.
#[derive(Debug, Clone)]
pub struct EvaluationSplit {
    pub train: Graph,
    /// Removed edges, `(i, j)` with `i < j`, sorted.
    pub probe: Vec<(NodeId, NodeId)>,
    pub fraction: f64,
    pub seed: u64,
}

impl EvaluationSplit {
    /// Fails if any probe edge is still present in the training graph.
    pub fn check_no_leak(&self) -> Result<()> {
        match self.probe.iter().find(|&&(a, b)| self.train.has_edge(a, b)) {
            Some(&(a, b)) => Err(Error::Leak(a, b)),
            None => Ok(()),
        }
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if fraction > 0.0 && fraction < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidFraction(fraction))
    }
}

/// Draws `round(fraction · |pool|)` edges from `pool` without replacement.
fn draw_probe(
    g: &Graph,
    pool: &[(NodeId, NodeId)],
    fraction: f64,
    seed: u64,
) -> Result<EvaluationSplit> {
    let k = (fraction * pool.len() as f64).round() as usize;
    if k == 0 {
        return Err(Error::EmptyProbe {
            fraction,
            edges: pool.len(),
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut probe: Vec<(NodeId, NodeId)> = index::sample(&mut rng, pool.len(), k.min(pool.len()))
        .into_iter()
        .map(|i| pool[i])
        .collect();
    probe.sort_unstable();
    Ok(EvaluationSplit {
        train: g.without_edges(&probe),
        probe,
        fraction,
        seed,
    })
}

/// Uniform random probe set over all edges; the training graph keeps
/// every node.
pub fn split_edges(g: &Graph, fraction: f64, seed: u64) -> Result<EvaluationSplit> {
    check_fraction(fraction)?;
    if g.edge_count() < 2 {
        return Err(Error::TooFewEdges(g.edge_count()));
    }
    draw_probe(g, g.edges(), fraction, seed)
}

/// Edges whose endpoints share a community block of one partition sample
/// drawn with `seed`.
pub fn intra_community_edges(
    g: &Graph,
    threshold: f64,
    seed: u64,
) -> Result<Vec<(NodeId, NodeId)>> {
    let p = partition_once(g, threshold, seed)?;
    Ok(g.edges()
        .iter()
        .copied()
        .filter(|&(a, b)| {
            let block = p.block_of[a];
            block == p.block_of[b] && p.blocks[block].kind == BlockKind::Community
        })
        .collect())
}

/// Probe set drawn uniformly from the intra-community edges of one
/// partition at `threshold`.
pub fn split_intra_community(
    g: &Graph,
    threshold: f64,
    fraction: f64,
    seed: u64,
) -> Result<EvaluationSplit> {
    check_fraction(fraction)?;
    check_threshold(threshold)?;
    if g.edge_count() < 2 {
        return Err(Error::TooFewEdges(g.edge_count()));
    }
    let pool = intra_community_edges(g, threshold, derive(seed, 0))?;
    if pool.is_empty() {
        return Err(Error::NoIntraEdges);
    }
    draw_probe(g, &pool, fraction, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AucOptions {
    /// Largest comparison count evaluated exactly.
    pub exact_limit: u128,
    /// Random comparisons drawn above the limit.
    pub monte_carlo_draws: usize,
    pub seed: u64,
}

impl Default for AucOptions {
    fn default() -> Self {
        AucOptions {
            exact_limit: 100_000_000,
            monte_carlo_draws: 1_000_000,
            seed: DEFAULT_SEED,
        }
    }
}

fn lookup<F: Real>(scores: &ScoreTable<F>, pairs: &[(NodeId, NodeId)]) -> Result<Vec<F>> {
    pairs
        .iter()
        .map(|&(a, b)| scores.get(a, b).ok_or(Error::MissingScore(a, b)))
        .collect()
}

/// Probability that a probe edge outscores a non-edge, ties counting one
/// half, with default options.
pub fn auc<F: Real>(
    scores: &ScoreTable<F>,
    probe: &[(NodeId, NodeId)],
    non_edges: &[(NodeId, NodeId)],
) -> Result<f64> {
    auc_with(scores, probe, non_edges, AucOptions::default())
}

pub fn auc_with<F: Real>(
    scores: &ScoreTable<F>,
    probe: &[(NodeId, NodeId)],
    non_edges: &[(NodeId, NodeId)],
    opts: AucOptions,
) -> Result<f64> {
    if probe.is_empty() || non_edges.is_empty() {
        return Err(Error::EmptyComparison);
    }
    let positives = lookup(scores, probe)?;
    let negatives = lookup(scores, non_edges)?;
    let total = positives.len() as u128 * negatives.len() as u128;
    if total <= opts.exact_limit {
        Ok(auc_exact(&positives, negatives))
    } else {
        Ok(auc_sampled(
            &positives,
            &negatives,
            opts.monte_carlo_draws,
            opts.seed,
        ))
    }
}

/// Mann-Whitney statistic via binary search over sorted negatives.
fn auc_exact<F: Real>(positives: &[F], mut negatives: Vec<F>) -> f64 {
    negatives.sort_by(|a, b| a.partial_cmp(b).expect("scores are not NaN"));
    // twice the score: wins count 2, ties 1
    let mut doubled: u128 = 0;
    for &p in positives {
        let below = negatives.partition_point(|&n| n < p);
        let not_above = negatives.partition_point(|&n| n <= p);
        doubled += 2 * below as u128 + (not_above - below) as u128;
    }
    doubled as f64 / (2.0 * positives.len() as f64 * negatives.len() as f64)
}

fn auc_sampled<F: Real>(positives: &[F], negatives: &[F], draws: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut doubled: u64 = 0;
    for _ in 0..draws {
        let p = positives[rng.random_range(0..positives.len())];
        let n = negatives[rng.random_range(0..negatives.len())];
        doubled += if p > n {
            2
        } else if p == n {
            1
        } else {
            0
        };
    }
    doubled as f64 / (2.0 * draws as f64)
}

/// Scoring method under evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predictor {
    #[default]
    Fbm,
    Baseline(BaselineMethod),
}

impl fmt::Display for Predictor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predictor::Fbm => f.write_str("fbm"),
            Predictor::Baseline(m) => write!(f, "{m}"),
        }
    }
}

impl FromStr for Predictor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("fbm") {
            Ok(Predictor::Fbm)
        } else {
            s.parse().map(Predictor::Baseline)
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Probe edges drawn from all edges.
    #[default]
    Random,
    /// Probe edges drawn from intra-community edges only.
    IntraCommunity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub predictor: Predictor,
    pub threshold: f64,
    pub samples: usize,
    pub fraction: f64,
    pub repeats: usize,
    pub master_seed: u64,
    pub split: SplitMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            predictor: Predictor::Fbm,
            threshold: 1.0,
            samples: 50,
            fraction: 0.1,
            repeats: 100,
            master_seed: DEFAULT_SEED,
            split: SplitMode::Random,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        check_threshold(self.threshold)?;
        check_fraction(self.fraction)?;
        if self.samples == 0 {
            return Err(Error::ZeroSamples);
        }
        if self.repeats == 0 {
            return Err(Error::ZeroRepeats);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub method: String,
    pub split: SplitMode,
    pub threshold: f64,
    pub samples: usize,
    pub fraction: f64,
    pub repeats: usize,
    pub master_seed: u64,
    pub auc_mean: f64,
    pub auc_std: f64,
    /// Per-repeat AUC in repeat order.
    pub aucs: Vec<f64>,
    pub wall_time_seconds: f64,
}

impl ExperimentReport {
    /// `repeat,auc` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("repeat,auc\n");
        for (r, a) in self.aucs.iter().enumerate() {
            out.push_str(&format!("{r},{a}\n"));
        }
        out
    }
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Split seed of repeat `r`.
pub fn repeat_split_seed(master_seed: u64, r: usize) -> u64 {
    derive(master_seed, 2 * r as u64)
}

fn run_repeat<F: Real>(
    g: &Graph,
    non_edges: &[(NodeId, NodeId)],
    cfg: &ExperimentConfig,
    r: usize,
) -> Result<f64> {
    let split_seed = repeat_split_seed(cfg.master_seed, r);
    let predict_seed = derive(cfg.master_seed, 2 * r as u64 + 1);
    let split = match cfg.split {
        SplitMode::Random => split_edges(g, cfg.fraction, split_seed)?,
        SplitMode::IntraCommunity => {
            split_intra_community(g, cfg.threshold, cfg.fraction, split_seed)?
        }
    };
    split.check_no_leak()?;
    let scores: ScoreTable<F> = match cfg.predictor {
        Predictor::Fbm => predict(&split.train, cfg.threshold, cfg.samples, predict_seed)?,
        Predictor::Baseline(m) => score_baseline(&split.train, m)?,
    };
    auc_with(
        &scores,
        &split.probe,
        non_edges,
        AucOptions {
            seed: derive(split_seed, 1),
            ..AucOptions::default()
        },
    )
}

/// Repeats split → score → AUC with independent seeds and summarises.
///
/// Non-edges are the unlinked pairs of the original graph `g`.
pub fn run_experiment<F: Real>(g: &Graph, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let start = Instant::now();
    let non_edges = g.non_edges();
    let aucs: Vec<f64> = (0..cfg.repeats)
        .into_par_iter()
        .map(|r| run_repeat::<F>(g, &non_edges, cfg, r))
        .collect::<Result<_>>()?;
    let (auc_mean, auc_std) = mean_std(&aucs);
    Ok(ExperimentReport {
        method: cfg.predictor.to_string(),
        split: cfg.split,
        threshold: cfg.threshold,
        samples: cfg.samples,
        fraction: cfg.fraction,
        repeats: cfg.repeats,
        master_seed: cfg.master_seed,
        auc_mean,
        auc_std,
        aucs,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// `0.1, 0.2, …, 1.0`.
pub fn default_thresholds() -> Vec<f64> {
    (1..=10).map(|k| k as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub threshold: f64,
    pub report: ExperimentReport,
}

/// One experiment per threshold. All points share `cfg.master_seed`, so the
/// random splits are the same at every threshold.
pub fn threshold_sweep<F: Real>(
    g: &Graph,
    thresholds: &[f64],
    cfg: &ExperimentConfig,
) -> Result<Vec<SweepPoint>> {
    for &t in thresholds {
        check_threshold(t)?;
    }
    thresholds
        .iter()
        .map(|&threshold| {
            let report = run_experiment::<F>(g, &ExperimentConfig { threshold, ..*cfg })?;
            Ok(SweepPoint { threshold, report })
        })
        .collect()
}

/// `threshold,auc_mean,auc_std` rows.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("threshold,auc_mean,auc_std\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            p.threshold, p.report.auc_mean, p.report.auc_std
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismRatio {
    pub network: String,
    pub numerator_pair: (String, String),
    pub denominator_pair: (String, String),
    pub ratio: f64,
    pub expected: f64,
    /// `None` for informational entries.
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismReport {
    pub samples: usize,
    pub master_seed: u64,
    pub threshold: f64,
    pub ratios: Vec<MechanismRatio>,
}

impl MechanismReport {
    /// `false` if any asserted ratio misses its tolerance.
    pub fn passed(&self) -> bool {
        self.ratios.iter().all(|r| r.pass != Some(false))
    }
}

fn score_ratio<F: Real>(
    g: &Graph,
    scores: &ScoreTable<F>,
    num: (&str, &str),
    den: (&str, &str),
) -> Result<f64> {
    let get = |(a, b): (&str, &str)| -> Result<f64> {
        let ia = g.index_of(a).ok_or(Error::NodeOutOfRange(usize::MAX))?;
        let ib = g.index_of(b).ok_or(Error::NodeOutOfRange(usize::MAX))?;
        scores
            .get(ia, ib)
            .map(Real::to_f64_lossy)
            .ok_or(Error::MissingScore(ia, ib))
    };
    Ok(get(num)? / get(den)?)
}

/// Network, graph, numerator pair, denominator pair, expected, tolerance.
type Case = (
    &'static str,
    Graph,
    (&'static str, &'static str),
    (&'static str, &'static str),
    f64,
    Option<f64>,
);

/// Score ratios on the bundled toy networks at threshold 1.
///
/// * ring of six: score(3,6) / score(1,3), expected 0.5 ± 0.1
/// * five-node net: score(1,3) / score(3,5), expected 0.75 ± 0.1
/// * five-node stand-in: score(3,5) / score(1,3), reported against 1.5
pub fn mechanism_ratios<F: Real>(samples: usize, master_seed: u64) -> Result<MechanismReport> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let threshold = 1.0;
    let cases: [Case; 3] = [
        (
            "ring6",
            datasets::ring_of_six(),
            ("3", "6"),
            ("1", "3"),
            0.5,
            Some(0.1),
        ),
        (
            "mechanism-b",
            datasets::mechanism_b(),
            ("1", "3"),
            ("3", "5"),
            0.75,
            Some(0.1),
        ),
        (
            "mechanism-c",
            datasets::mechanism_c(),
            ("3", "5"),
            ("1", "3"),
            1.5,
            None,
        ),
    ];
    let mut ratios = Vec::with_capacity(cases.len());
    for (k, (name, g, num, den, expected, tolerance)) in cases.into_iter().enumerate() {
        let scores: ScoreTable<F> = predict(&g, threshold, samples, derive(master_seed, k as u64))?;
        let ratio = score_ratio(&g, &scores, num, den)?;
        ratios.push(MechanismRatio {
            network: name.to_string(),
            numerator_pair: (num.0.into(), num.1.into()),
            denominator_pair: (den.0.into(), den.1.into()),
            ratio,
            expected,
            tolerance,
            pass: tolerance.map(|tol| (ratio - expected).abs() <= tol),
        });
    }
    Ok(MechanismReport {
        samples,
        master_seed,
        threshold,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::ScoreMeta;

    fn table(pairs: Vec<(NodeId, NodeId)>, scores: Vec<f64>) -> ScoreTable<f64> {
        ScoreTable::from_sorted(pairs, scores, ScoreMeta::fbm(1.0, 1, 0))
    }

    #[test]
    fn split_ten_edges() {
        let g = Graph::with_node_count(11, (0..10).map(|i| (i, i + 1)));
        let s = split_edges(&g, 0.1, 4).unwrap();
        assert_eq!(s.probe.len(), 1);
        assert_eq!(s.train.edge_count(), 9);
        assert_eq!(s.train.node_count(), 11);
        s.check_no_leak().unwrap();
    }

    #[test]
    fn split_karate_rounds_up() {
        let g = datasets::karate();
        let s = split_edges(&g, 0.1, 1).unwrap();
        assert_eq!(s.probe.len(), 8);
        assert_eq!(s.train.edge_count(), 70);
        let again = split_edges(&g, 0.1, 1).unwrap();
        assert_eq!(s.probe, again.probe);
    }

    #[test]
    fn split_errors() {
        let g = Graph::with_node_count(11, (0..10).map(|i| (i, i + 1)));
        assert!(matches!(
            split_edges(&g, 0.01, 0),
            Err(Error::EmptyProbe { .. })
        ));
        assert!(split_edges(&g, 0.0, 0).is_err());
        assert!(split_edges(&g, 1.0, 0).is_err());
        let one = Graph::with_node_count(2, [(0, 1)]);
        assert!(matches!(
            split_edges(&one, 0.5, 0),
            Err(Error::TooFewEdges(1))
        ));
    }

    #[test]
    fn intra_split_excludes_pendant() {
        // 4-clique 0..4 and pendant 4 on node 0
        let g = Graph::with_node_count(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)]);
        let mut clique_only = 0;
        for seed in 0..60 {
            match split_intra_community(&g, 0.8, 0.2, seed) {
                Ok(s) => {
                    let p = partition_once(&g, 0.8, derive(seed, 0)).unwrap();
                    for &(_, b) in &s.probe {
                        if b == 4 {
                            // only when the bipartition isolated hub and pendant
                            assert_eq!(p.blocks[p.block_of[4]].nodes, vec![0, 4]);
                        }
                    }
                    let whole = p.blocks.iter().any(|b| b.nodes == vec![0, 1, 2, 3]);
                    if whole {
                        assert!(s.probe.iter().all(|&(_, b)| b < 4), "pendant edge drawn");
                        clique_only += 1;
                    }
                }
                // a bipartition may leave no community edges on either side
                Err(Error::NoIntraEdges) | Err(Error::EmptyProbe { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(clique_only > 0);
    }

    #[test]
    fn intra_split_on_karate_is_subset() {
        let g = datasets::karate();
        for seed in 0..10 {
            let s = split_intra_community(&g, 0.8, 0.1, seed).unwrap();
            let pool = intra_community_edges(&g, 0.8, derive(seed, 0)).unwrap();
            assert_eq!(s.probe.len(), (0.1 * pool.len() as f64).round() as usize);
            assert!(s.probe.iter().all(|e| pool.contains(e)));
            s.check_no_leak().unwrap();
        }
    }

    #[test]
    fn auc_examples() {
        let pairs = vec![(0, 1), (0, 2), (1, 2)];
        let s = table(pairs.clone(), vec![0.9, 0.3, 0.5]);
        assert_eq!(auc(&s, &[(0, 1), (0, 2)], &[(1, 2)]).unwrap(), 0.5);
        let s = table(pairs.clone(), vec![0.9, 0.8, 0.1]);
        assert_eq!(auc(&s, &[(0, 1), (0, 2)], &[(1, 2)]).unwrap(), 1.0);
        let s = table(pairs, vec![0.4, 0.4, 0.4]);
        assert_eq!(auc(&s, &[(0, 1)], &[(0, 2), (1, 2)]).unwrap(), 0.5);
    }

    #[test]
    fn auc_errors() {
        let s = table(vec![(0, 1), (0, 2)], vec![0.1, 0.2]);
        assert!(matches!(
            auc(&s, &[], &[(0, 1)]),
            Err(Error::EmptyComparison)
        ));
        assert!(matches!(
            auc(&s, &[(1, 2)], &[(0, 1)]),
            Err(Error::MissingScore(1, 2))
        ));
    }

    #[test]
    fn sampled_auc_tracks_exact() {
        let n = 400;
        let pairs: Vec<(NodeId, NodeId)> = (0..n).map(|i| (0, i + 1)).collect();
        let scores: Vec<f64> = (0..n).map(|i| ((i * 37) % 101) as f64).collect();
        let s = table(pairs.clone(), scores);
        let (pos, neg) = pairs.split_at(100);
        let exact = auc(&s, pos, neg).unwrap();
        let opts = AucOptions {
            exact_limit: 0,
            monte_carlo_draws: 200_000,
            seed: 3,
        };
        let sampled = auc_with(&s, pos, neg, opts).unwrap();
        assert!((exact - sampled).abs() < 0.01, "{exact} vs {sampled}");
    }

    #[test]
    fn single_repeat_has_zero_std() {
        let g = datasets::karate();
        let cfg = ExperimentConfig {
            repeats: 1,
            samples: 5,
            ..ExperimentConfig::default()
        };
        let r = run_experiment::<f64>(&g, &cfg).unwrap();
        assert_eq!(r.auc_std, 0.0);
        assert_eq!(r.aucs.len(), 1);
        assert!((0.0..=1.0).contains(&r.auc_mean));
    }

    #[test]
    fn mean_std_values() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn predictor_names() {
        assert_eq!("fbm".parse::<Predictor>().unwrap(), Predictor::Fbm);
        assert_eq!(
            "cn".parse::<Predictor>().unwrap(),
            Predictor::Baseline(BaselineMethod::CommonNeighbors)
        );
        assert!("sbm".parse::<Predictor>().is_err());
    }

    #[test]
    fn single_threshold_sweep_equals_experiment() {
        let g = datasets::karate();
        let cfg = ExperimentConfig {
            repeats: 3,
            samples: 5,
            threshold: 0.7,
            ..ExperimentConfig::default()
        };
        let sweep = threshold_sweep::<f64>(&g, &[0.7], &cfg).unwrap();
        let direct = run_experiment::<f64>(&g, &cfg).unwrap();
        assert_eq!(sweep.len(), 1);
        assert_eq!(sweep[0].report.aucs, direct.aucs);
        assert!(sweep_csv(&sweep).starts_with("threshold,auc_mean,auc_std\n0.7,"));
    }
}
