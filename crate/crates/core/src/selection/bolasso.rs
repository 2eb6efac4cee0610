use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cv::choose_penalty_cv;
use super::lars::lasso_path;
use crate::error::{Error, Result};

/// Lasso penalty: a fixed value or chosen by cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Penalty {
    Fixed(f64),
    CrossValidated,
}

impl fmt::Display for Penalty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Penalty::Fixed(v) => write!(f, "{v}"),
            Penalty::CrossValidated => f.write_str("cv"),
        }
    }
}

impl FromStr for Penalty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("cv") {
            return Ok(Penalty::CrossValidated);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(Penalty::Fixed(v)),
            _ => Err(Error::invalid(format!("penalty must be `cv` or a number >= 0, got `{s}`"))),
        }
    }
}

impl From<Penalty> for String {
    fn from(p: Penalty) -> Self {
        p.to_string()
    }
}

impl TryFrom<String> for Penalty {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BolassoConfig {
    pub bootstraps: usize,
    /// Minimum fraction of bootstrap supports a column must appear in.
    pub consensus: f64,
    pub penalty: Penalty,
    pub seed: u64,
    pub cv_folds: usize,
    pub cv_grid: usize,
}

impl Default for BolassoConfig {
    fn default() -> Self {
        Self {
            bootstraps: 16,
            consensus: 0.7,
            penalty: Penalty::CrossValidated,
            seed: 0,
            cv_folds: 5,
            cv_grid: 50,
        }
    }
}

impl BolassoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bootstraps == 0 {
            return Err(Error::invalid("bootstraps must be >= 1"));
        }
        if !(self.consensus > 0.0 && self.consensus <= 1.0) {
            return Err(Error::invalid(format!("consensus must lie in (0, 1], got {}", self.consensus)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Selected column indices, ascending.
    pub selected: Vec<usize>,
    /// Fraction of bootstrap supports containing each column.
    pub frequencies: Vec<f64>,
    pub penalty_used: f64,
    /// Set when no column reached the consensus and the most frequent one
    /// was kept instead.
    pub fallback: bool,
}

/// Per-column fraction of `supports` that contain it.
pub fn support_frequencies(supports: &[Vec<usize>], n_columns: usize) -> Vec<f64> {
    let mut counts = vec![0usize; n_columns];
    for s in supports {
        for &j in s {
            counts[j] += 1;
        }
    }
    counts
        .iter()
        .map(|&c| c as f64 / supports.len().max(1) as f64)
        .collect()
}

/// Columns whose frequency reaches `consensus`. If none does, the single most
/// frequent column (lowest index on ties) is returned with the fallback flag.
pub fn consensus_select(frequencies: &[f64], consensus: f64) -> (Vec<usize>, bool) {
    let selected: Vec<usize> = frequencies
        .iter()
        .enumerate()
        .filter(|(_, &f)| f >= consensus - 1e-12)
        .map(|(j, _)| j)
        .collect();
    if !selected.is_empty() || frequencies.is_empty() {
        return (selected, false);
    }
    let best = frequencies
        .iter()
        .enumerate()
        .fold(0, |best, (j, &f)| if f > frequencies[best] { j } else { best });
    (vec![best], true)
}

/// Nonzero lasso supports of each bootstrap replicate, with the penalty
/// they were taken at.
///
/// The penalty is fixed once on the full design (cross-validated when
/// requested) and reused for every replicate. Replicate `b` resamples the
/// rows with replacement from its own ChaCha stream under `seed`, so the
/// result does not depend on execution order.
pub fn bootstrap_supports(
    design: &DMatrix<f64>,
    targets: &[f64],
    config: &BolassoConfig,
) -> Result<(f64, Vec<Vec<usize>>)> {
    config.validate()?;
    let k = design.nrows();
    let penalty = match config.penalty {
        Penalty::Fixed(v) => v,
        Penalty::CrossValidated => {
            let folds = config.cv_folds.min(k);
            choose_penalty_cv(design, targets, folds, config.cv_grid, config.seed)?
        }
    };
    let supports = (0..config.bootstraps)
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(b as u64 + 1);
            let rows: Vec<usize> = (0..k).map(|_| rng.gen_range(0..k)).collect();
            let sample = design.select_rows(&rows);
            let sample_y: Vec<f64> = rows.iter().map(|&i| targets[i]).collect();
            Ok(lasso_path(&sample, &sample_y)?.support_at(penalty))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((penalty, supports))
}

/// Bootstrap-enhanced lasso: keep the columns whose support frequency over
/// the replicates of [`bootstrap_supports`] reaches the consensus.
pub fn bolasso_select(
    design: &DMatrix<f64>,
    targets: &[f64],
    config: &BolassoConfig,
) -> Result<SelectionResult> {
    let (penalty, supports) = bootstrap_supports(design, targets, config)?;
    let frequencies = support_frequencies(&supports, design.ncols());
    let (selected, fallback) = consensus_select(&frequencies, config.consensus);
    Ok(SelectionResult {
        selected,
        frequencies,
        penalty_used: penalty,
        fallback,
    })
}
