mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::Parser;
use fbm_core::evaluation::{
    default_thresholds, mechanism_ratios, run_experiment, sweep_csv, threshold_sweep,
    ExperimentConfig, Predictor, SplitMode,
};
use fbm_core::graph::read_edge_list;
use fbm_core::{baselines, datasets, estimator, partition, stats, Graph, Scores};

use crate::config::{Cli, Command, Format, RunConfig};

const DEFAULT_SAMPLES: u64 = 50;
const MECHANISM_SAMPLES: u64 = 10_000;

fn load_graph(cfg: &RunConfig) -> Result<Graph> {
    let input = cfg
        .input
        .as_deref()
        .ok_or_else(|| anyhow!("--input is required for this command"))?;
    if let Some(name) = input.strip_prefix("bundled:") {
        return datasets::bundled(name).ok_or_else(|| {
            anyhow!(
                "--input: unknown bundled dataset '{name}' (available: {})",
                datasets::NAMES.join(", ")
            )
        });
    }
    Ok(read_edge_list(input)?)
}

/// Appends `suffix` to the full file name: `out.csv` → `out.csv.meta.json`.
fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn emit(cfg: &RunConfig, body: &str) -> Result<()> {
    match &cfg.output {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().lock().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn cmd_stats(cfg: &RunConfig) -> Result<()> {
    let g = load_graph(cfg)?.giant_component();
    let s: fbm_core::Stats = stats::graph_stats(&g);
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&s)?,
        Format::Csv => format!(
            "nodes,edges,density,clustering,avg_degree,avg_distance\n{},{},{},{},{},{}\n",
            s.node_count,
            s.edge_count,
            s.density,
            s.clustering_coefficient,
            s.average_degree,
            s.average_distance
        ),
    };
    emit(cfg, &body)
}

fn cmd_partition(cfg: &RunConfig) -> Result<()> {
    let g = load_graph(cfg)?;
    let p = partition::partition_once(&g, cfg.threshold, cfg.seed)?;
    p.validate(&g)?;
    let matrix: fbm_core::DensityMatrix = partition::partition_density_matrix(&g, &p);
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            emit(cfg, &json(&p.to_doc(&g))?)?;
            if let Some(path) = &cfg.output {
                let csv_path = sidecar(path, ".density.csv");
                fs::write(&csv_path, matrix.to_csv())
                    .with_context(|| format!("writing {}", csv_path.display()))?;
            }
            Ok(())
        }
        Format::Csv => emit(cfg, &matrix.to_csv()),
    }
}

fn cmd_predict(cfg: &RunConfig) -> Result<()> {
    let g = load_graph(cfg)?;
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES) as usize;
    let scores: Scores = match cfg.method {
        Predictor::Fbm => estimator::predict(&g, cfg.threshold, samples, cfg.seed)?,
        Predictor::Baseline(m) => baselines::score_baseline(&g, m)?,
    };
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            emit(cfg, &scores.to_csv(&g))?;
            if let Some(path) = &cfg.output {
                let meta_path = sidecar(path, ".meta.json");
                fs::write(&meta_path, json(&scores.meta)?)
                    .with_context(|| format!("writing {}", meta_path.display()))?;
            }
            Ok(())
        }
        Format::Json => emit(cfg, &json(&scores.to_doc(&g))?),
    }
}

fn experiment_config(cfg: &RunConfig) -> ExperimentConfig {
    ExperimentConfig {
        predictor: cfg.method,
        threshold: cfg.threshold,
        samples: cfg.samples.unwrap_or(DEFAULT_SAMPLES) as usize,
        fraction: cfg.fraction,
        repeats: cfg.repeats as usize,
        master_seed: cfg.seed,
        split: if cfg.intra {
            SplitMode::IntraCommunity
        } else {
            SplitMode::Random
        },
    }
}

fn cmd_evaluate(cfg: &RunConfig) -> Result<()> {
    let g = load_graph(cfg)?.giant_component();
    let ecfg = experiment_config(cfg);
    let format = cfg.format.unwrap_or(Format::Json);
    let body = if cfg.sweep {
        let points = threshold_sweep::<f64>(&g, &default_thresholds(), &ecfg)?;
        match format {
            Format::Json => json(&points)?,
            Format::Csv => sweep_csv(&points),
        }
    } else {
        let report = run_experiment::<f64>(&g, &ecfg)?;
        eprintln!(
            "{} AUC {:.4} ± {:.4} over {} repeats ({:.2} s)",
            report.method,
            report.auc_mean,
            report.auc_std,
            report.repeats,
            report.wall_time_seconds
        );
        match format {
            Format::Json => json(&report)?,
            Format::Csv => report.to_csv(),
        }
    };
    emit(cfg, &body)
}

fn cmd_mechanism(cfg: &RunConfig) -> Result<bool> {
    let samples = cfg.samples.unwrap_or(MECHANISM_SAMPLES) as usize;
    let report = mechanism_ratios::<f64>(samples, cfg.seed)?;
    for r in &report.ratios {
        let verdict = match r.pass {
            Some(true) => "pass".to_string(),
            Some(false) => "FAIL".to_string(),
            None => "info".to_string(),
        };
        eprintln!(
            "{:<12} score{:?}/score{:?} = {:.4} (expected {}{}) {verdict}",
            r.network,
            r.numerator_pair,
            r.denominator_pair,
            r.ratio,
            r.expected,
            r.tolerance.map(|t| format!(" ± {t}")).unwrap_or_default(),
        );
    }
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut out = String::from("network,ratio,expected,tolerance,pass\n");
            for r in &report.ratios {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.network,
                    r.ratio,
                    r.expected,
                    r.tolerance.map(|t| t.to_string()).unwrap_or_default(),
                    r.pass.map(|p| p.to_string()).unwrap_or_default()
                ));
            }
            out
        }
    };
    emit(cfg, &body)?;
    Ok(report.passed())
}

fn run(command: &Command) -> Result<bool> {
    match command {
        Command::Stats(c) => cmd_stats(c).map(|_| true),
        Command::Partition(c) => cmd_partition(c).map(|_| true),
        Command::Predict(c) => cmd_predict(c).map(|_| true),
        Command::Evaluate(c) => cmd_evaluate(c).map(|_| true),
        Command::Mechanism(c) => cmd_mechanism(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = (|| -> Result<bool> {
        match cli.command.config().workers {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n as usize)
                    .build()
                    .context("--workers: cannot start thread pool")?;
                pool.install(|| run(&cli.command))
            }
            None => run(&cli.command),
        }
    })();
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
