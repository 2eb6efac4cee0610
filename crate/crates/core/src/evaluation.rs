//! RMSE and the repeated random-split experiment harness.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{split, Dataset, SplitSpec};
use crate::error::{Error, Result};
use crate::fuzzification::MembershipFamily;
use crate::model::{train, TrainConfig};

/// Root-mean-square error.
pub fn rmse(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    if actual.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: actual.len(),
            found: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::invalid("rmse of empty vectors"));
    }
    let sse: f64 = actual.iter().zip(predicted).map(|(a, p)| (a - p).powi(2)).sum();
    Ok((sse / actual.len() as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub repetitions: usize,
    pub train_ratio: f64,
    pub train_config: TrainConfig,
    pub base_seed: u64,
    /// Worker threads for repetitions; the report does not depend on it.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            repetitions: 30,
            train_ratio: 0.7,
            train_config: TrainConfig::default(),
            base_seed: 0,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub candidates: usize,
    pub selected: usize,
    pub rmse_train: f64,
    pub rmse_test: f64,
}

/// Mean and sample standard deviation (0 for a single value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Summary { mean, std }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub candidates: Summary,
    pub selected: Summary,
    pub rmse_train: Summary,
    pub rmse_test: Summary,
}

impl Aggregates {
    pub fn from_runs(runs: &[RunRecord]) -> Self {
        let col = |f: fn(&RunRecord) -> f64| Summary::of(&runs.iter().map(f).collect::<Vec<_>>());
        Aggregates {
            candidates: col(|r| r.candidates as f64),
            selected: col(|r| r.selected as f64),
            rmse_train: col(|r| r.rmse_train),
            rmse_test: col(|r| r.rmse_test),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub family: MembershipFamily,
    pub per_run: Vec<RunRecord>,
    pub aggregates: Aggregates,
}

/// Seed of repetition `k`.
pub fn repetition_seed(base_seed: u64, k: usize) -> u64 {
    base_seed ^ k as u64
}

fn run_once(data: &Dataset, config: &ExperimentConfig, k: usize) -> Result<RunRecord> {
    let seed = repetition_seed(config.base_seed, k);
    let (train_set, test_set) = split(data, SplitSpec { train_ratio: config.train_ratio, seed })?;
    let model = train(&train_set, &TrainConfig { seed, ..config.train_config })?;
    let rmse_train = rmse(&train_set.targets, &model.predict_rows(&train_set.rows)?)?;
    let rmse_test = rmse(&test_set.targets, &model.predict_rows(&test_set.rows)?)?;
    Ok(RunRecord {
        seed,
        candidates: model.candidate_count,
        selected: model.n_selected(),
        rmse_train,
        rmse_test,
    })
}

/// Repeat split → train → score `repetitions` times. Runs are independent
/// and may execute on `threads` workers; the report keeps repetition order.
pub fn run_experiment(data: &Dataset, config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.repetitions == 0 {
        return Err(Error::invalid("repetitions must be >= 1"));
    }
    config.train_config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let results: Vec<Result<RunRecord>> = pool.install(|| {
        (0..config.repetitions)
            .into_par_iter()
            .map(|k| run_once(data, config, k))
            .collect()
    });
    let per_run = results
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            r.map_err(|e| Error::Repetition {
                seed: repetition_seed(config.base_seed, k),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        family: config.train_config.family,
        aggregates: Aggregates::from_runs(&per_run),
        per_run,
    })
}

impl ExperimentReport {
    /// Aligned `M type | L | L_s | RMSE Train | RMSE Test` table with
    /// `mean (std)` cells.
    pub fn to_table(&self) -> String {
        let cell = |s: &Summary| format!("{:.2} ({:.2})", s.mean, s.std);
        let family = match self.family {
            MembershipFamily::Gaussian => "Gaussian",
            MembershipFamily::Triangular => "Triangular",
        };
        let header = ["M type", "L", "L_s", "RMSE Train", "RMSE Test"];
        let row = [
            family.to_string(),
            cell(&self.aggregates.candidates),
            cell(&self.aggregates.selected),
            cell(&self.aggregates.rmse_train),
            cell(&self.aggregates.rmse_test),
        ];
        let widths: Vec<usize> = header.iter().zip(&row).map(|(h, r)| h.len().max(r.len())).collect();
        let line = |cells: &[&str]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        let rule = widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-");
        let row_refs: Vec<&str> = row.iter().map(String::as_str).collect();
        format!("{}\n{}\n{}\n", line(&header), rule, line(&row_refs))
    }
}
