//! Loading, encoding, normalization and splitting of project effort tables.

mod load;
pub mod synthetic;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use load::{encode_methodology, load_dataset, load_dataset_with, load_table, LoadOptions, MethodologyLabels, Table};

/// Column names of the Use Case Point effort table, in the order they are
/// usually exported.
pub const UCP_COLUMNS: [&str; 13] = [
    "Donator",
    "Methodology",
    "Simple_Actors",
    "Average_Actors",
    "Complex_Actors",
    "Actor_Weight",
    "Simple_UC",
    "Average_UC",
    "Complex_UC",
    "UC_Weight",
    "Technical_Complexity",
    "Environmental_Complexity",
    "Real_Effort_20",
];

pub const DEFAULT_TARGET: &str = "effort";

/// Projects × features table with one effort target per project.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub target_name: String,
}

impl Dataset {
    pub fn new(
        feature_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        targets: Vec<f64>,
        target_name: impl Into<String>,
    ) -> Result<Self> {
        if feature_names.is_empty() {
            return Err(Error::invalid("dataset needs at least one feature"));
        }
        if rows.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: targets.len(),
            });
        }
        for row in &rows {
            if row.len() != feature_names.len() {
                return Err(Error::DimensionMismatch {
                    expected: feature_names.len(),
                    found: row.len(),
                });
            }
        }
        if rows.iter().flatten().chain(&targets).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("dataset contains NaN or infinite cells".into()));
        }
        Ok(Self {
            feature_names,
            rows,
            targets,
            target_name: target_name.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[j])
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            target_name: self.target_name.clone(),
        }
    }
}

/// Per-feature z-score parameters fitted on a training partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub means: Vec<f64>,
    pub std_devs: Vec<f64>,
    /// Features with zero spread; they normalize to 0.
    pub constant: Vec<bool>,
}

pub fn fit_normalizer(train: &Dataset) -> Result<Normalizer> {
    let n = train.len();
    if n < 2 {
        return Err(Error::invalid(format!(
            "normalizer needs at least 2 rows, got {n}"
        )));
    }
    let mut means = Vec::with_capacity(train.n_features());
    let mut std_devs = Vec::with_capacity(train.n_features());
    let mut constant = Vec::with_capacity(train.n_features());
    for j in 0..train.n_features() {
        let mean = train.column(j).sum::<f64>() / n as f64;
        // population variance
        let var = train.column(j).map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let sd = var.sqrt();
        let is_const = sd <= 1e-12 * (1.0 + mean.abs());
        means.push(mean);
        std_devs.push(if is_const { 1.0 } else { sd });
        constant.push(is_const);
    }
    Ok(Normalizer {
        means,
        std_devs,
        constant,
    })
}

impl Normalizer {
    pub fn width(&self) -> usize {
        self.means.len()
    }

    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.width() {
            return Err(Error::DimensionMismatch {
                expected: self.width(),
                found: row.len(),
            });
        }
        Ok(row
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                if self.constant[j] {
                    0.0
                } else {
                    (x - self.means[j]) / self.std_devs[j]
                }
            })
            .collect())
    }
}

/// Map every feature cell through `norm`; targets are left in their units.
pub fn apply_normalizer(norm: &Normalizer, data: &Dataset) -> Result<Dataset> {
    let rows = data
        .rows
        .iter()
        .map(|r| norm.apply_row(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        feature_names: data.feature_names.clone(),
        rows,
        targets: data.targets.clone(),
        target_name: data.target_name.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_ratio: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_ratio: 0.7,
            seed: 0,
        }
    }
}

/// Seeded random train/test partition; the train side gets
/// `floor(ratio * n)` rows.
pub fn split(data: &Dataset, spec: SplitSpec) -> Result<(Dataset, Dataset)> {
    let n = data.len();
    if n < 3 {
        return Err(Error::invalid(format!("split needs at least 3 rows, got {n}")));
    }
    if !(spec.train_ratio > 0.0 && spec.train_ratio < 1.0) {
        return Err(Error::invalid(format!(
            "train ratio must lie in (0, 1), got {}",
            spec.train_ratio
        )));
    }
    let n_train = (spec.train_ratio * n as f64).floor() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::invalid(format!(
            "ratio {} leaves an empty partition on {n} rows",
            spec.train_ratio
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));
    let (train, test) = order.split_at(n_train);
    Ok((data.subset(train), data.subset(test)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_feature(values: &[f64]) -> Dataset {
        Dataset::new(
            vec!["x".into()],
            values.iter().map(|&v| vec![v]).collect(),
            vec![0.0; values.len()],
            "effort",
        )
        .unwrap()
    }

    #[test]
    fn normalizer_uses_population_std() {
        let norm = fit_normalizer(&one_feature(&[1.0, 3.0])).unwrap();
        assert_eq!(norm.means, vec![2.0]);
        assert_eq!(norm.std_devs, vec![1.0]);
        assert!(!norm.constant[0]);
        assert_eq!(norm.apply_row(&[2.0]).unwrap(), vec![0.0]);
        assert_eq!(norm.apply_row(&[4.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn constant_feature_is_flagged_and_maps_to_zero() {
        let norm = fit_normalizer(&one_feature(&[5.0, 5.0, 5.0])).unwrap();
        assert!(norm.constant[0]);
        assert_eq!(norm.apply_row(&[123.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn standardized_column_is_a_fixed_point() {
        let norm = fit_normalizer(&one_feature(&[-1.0, 1.0, -1.0, 1.0])).unwrap();
        assert!(norm.means[0].abs() < 1e-15);
        assert!((norm.std_devs[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalizer_rejects_single_row_and_width_mismatch() {
        assert!(fit_normalizer(&one_feature(&[1.0])).is_err());
        let norm = fit_normalizer(&one_feature(&[1.0, 2.0])).unwrap();
        assert!(matches!(
            norm.apply_row(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn split_sizes_and_determinism() {
        let data = one_feature(&(0..10).map(f64::from).collect::<Vec<_>>());
        let spec = SplitSpec { train_ratio: 0.7, seed: 11 };
        let (a_train, a_test) = split(&data, spec).unwrap();
        let (b_train, b_test) = split(&data, spec).unwrap();
        assert_eq!((a_train.len(), a_test.len()), (7, 3));
        assert_eq!(a_train, b_train);
        assert_eq!(a_test, b_test);

        let mut all: Vec<f64> = a_train.column(0).chain(a_test.column(0)).collect();
        all.sort_by(f64::total_cmp);
        assert_eq!(all, (0..10).map(f64::from).collect::<Vec<_>>());
    }

    #[test]
    fn different_seeds_give_different_permutations() {
        let data = one_feature(&(0..10).map(f64::from).collect::<Vec<_>>());
        let (a, _) = split(&data, SplitSpec { train_ratio: 0.7, seed: 1 }).unwrap();
        let (b, _) = split(&data, SplitSpec { train_ratio: 0.7, seed: 2 }).unwrap();
        assert_ne!(a.rows, b.rows);
    }

    #[test]
    fn split_rejects_bad_inputs() {
        let small = one_feature(&[1.0, 2.0]);
        assert!(split(&small, SplitSpec::default()).is_err());
        let data = one_feature(&[1.0, 2.0, 3.0, 4.0]);
        for ratio in [0.0, 1.0, -0.5, 1.5, 0.1] {
            assert!(split(&data, SplitSpec { train_ratio: ratio, seed: 0 }).is_err());
        }
    }
}
