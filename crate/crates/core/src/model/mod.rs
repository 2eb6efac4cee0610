//! The three-layer fuzzy neural network: fixed fuzzification grid, random
//! and-neurons pruned by Bolasso, and a pseudoinverse-fitted leaky-ReLU
//! output neuron.

mod io;
mod pinv;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::data::{apply_normalizer, fit_normalizer, Dataset, Normalizer};
use crate::error::{Error, Result};
use crate::fuzzification::{build_grid, FuzzificationGrid, MembershipFamily};
use crate::logic::{activate_unchecked, generate_candidates_for, AndNeuron, CandidatePool, ProductProbSum};
use crate::selection::{bolasso_select, BolassoConfig, Penalty, SelectionResult};

pub use io::{load_model, save_model, ModelFile, FORMAT_VERSION};
pub use pinv::fit_output_weights;

/// Mixed into the training seed for the bootstrap streams so they never
/// coincide with the candidate-pool stream.
const BOOTSTRAP_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub m: usize,
    pub family: MembershipFamily,
    pub pool_size: usize,
    pub bootstraps: usize,
    pub consensus: f64,
    pub alpha: f64,
    pub seed: u64,
    pub penalty: Penalty,
    pub cv_folds: usize,
    pub cv_grid: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            m: 2,
            family: MembershipFamily::Triangular,
            pool_size: 100,
            bootstraps: 16,
            consensus: 0.7,
            alpha: 0.01,
            seed: 0,
            penalty: Penalty::CrossValidated,
            cv_folds: 5,
            cv_grid: 50,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::invalid(format!("m must be ≥ 2, got {}", self.m)));
        }
        if self.pool_size == 0 {
            return Err(Error::invalid("pool size must be >= 1"));
        }
        check_alpha(self.alpha)?;
        self.bolasso().validate()
    }

    fn bolasso(&self) -> BolassoConfig {
        BolassoConfig {
            bootstraps: self.bootstraps,
            consensus: self.consensus,
            penalty: self.penalty,
            seed: self.seed ^ BOOTSTRAP_SEED_SALT,
            cv_folds: self.cv_folds,
            cv_grid: self.cv_grid,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

/// `max(αx, x)`.
pub fn leaky_relu(x: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(leaky(x, alpha))
}

#[inline]
fn leaky(x: f64, alpha: f64) -> f64 {
    (alpha * x).max(x)
}

/// Second-layer output for one sample with the bias entry `z_0 = 1` first.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationVector(pub Vec<f64>);

impl ActivationVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Activations of `neurons` for an already normalized sample.
pub fn activations(neurons: &[AndNeuron], grid: &FuzzificationGrid, sample: &[f64]) -> Result<ActivationVector> {
    let mu = grid.fuzzify(sample)?;
    let counts = grid.mf_counts();
    let mut out = Vec::with_capacity(neurons.len() + 1);
    out.push(1.0);
    for n in neurons {
        if n.n_inputs() != grid.n_features() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_features(),
                found: n.n_inputs(),
            });
        }
        if n.mf_choice.iter().zip(&counts).any(|(&k, &c)| k >= c) {
            return Err(Error::invalid("neuron refers to a membership function outside the grid"));
        }
        out.push(activate_unchecked(n, &mu, &ProductProbSum));
    }
    Ok(ActivationVector(out))
}

/// K × L matrix of neuron activations over normalized `rows` (no bias column).
pub fn activation_matrix(neurons: &[AndNeuron], grid: &FuzzificationGrid, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let mut z = DMatrix::zeros(rows.len(), neurons.len());
    for (i, row) in rows.iter().enumerate() {
        let a = activations(neurons, grid, row)?;
        for (l, v) in a.0[1..].iter().enumerate() {
            z[(i, l)] = *v;
        }
    }
    Ok(z)
}

/// First two layers before any fitting: normalizer, grid and candidate pool.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenLayer {
    pub normalizer: Normalizer,
    pub grid: FuzzificationGrid,
    pub pool: CandidatePool,
}

impl HiddenLayer {
    pub fn build(train: &Dataset, config: &TrainConfig) -> Result<Self> {
        config.validate()?;
        let normalizer = fit_normalizer(train)?;
        let normalized = apply_normalizer(&normalizer, train)?;
        let grid = build_grid(&normalized, config.m, config.family)?;
        let pool = generate_candidates_for(&grid.mf_counts(), config.pool_size, config.seed)?;
        Ok(Self { normalizer, grid, pool })
    }

    /// Candidate activations for raw (unnormalized) rows.
    pub fn design(&self, raw_rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
        let rows = raw_rows
            .iter()
            .map(|r| self.normalizer.apply_row(r))
            .collect::<Result<Vec<_>>>()?;
        activation_matrix(&self.pool.neurons, &self.grid, &rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub feature_names: Vec<String>,
    pub target_name: String,
    pub grid: FuzzificationGrid,
    /// The selected neurons, in candidate order.
    pub neurons: Vec<AndNeuron>,
    /// `[v_0, v_1, …]`, bias first.
    pub output_weights: Vec<f64>,
    pub normalizer: Normalizer,
    pub config: TrainConfig,
    /// Indices into the candidate pool, frequencies over the whole pool.
    pub selection: SelectionResult,
    pub candidate_count: usize,
}

/// Fit the network on `train_data`. Deterministic in `config.seed`.
pub fn train(train_data: &Dataset, config: &TrainConfig) -> Result<TrainedModel> {
    if train_data.len() < 3 {
        return Err(Error::invalid(format!(
            "training needs at least 3 rows, got {}",
            train_data.len()
        )));
    }
    let hidden = HiddenLayer::build(train_data, config)?;
    let design = hidden.design(&train_data.rows)?;
    let selection = bolasso_select(&design, &train_data.targets, &config.bolasso())?;

    let k = design.nrows();
    let mut z = DMatrix::from_element(k, selection.selected.len() + 1, 1.0);
    for (c, &l) in selection.selected.iter().enumerate() {
        z.set_column(c + 1, &design.column(l));
    }
    let output_weights = fit_output_weights(&z, &train_data.targets)?;

    let HiddenLayer { normalizer, grid, pool } = hidden;
    let neurons = selection.selected.iter().map(|&l| pool.neurons[l].clone()).collect();
    Ok(TrainedModel {
        feature_names: train_data.feature_names.clone(),
        target_name: train_data.target_name.clone(),
        grid,
        neurons,
        output_weights,
        normalizer,
        config: *config,
        selection,
        candidate_count: pool.neurons.len(),
    })
}

impl TrainedModel {
    pub fn n_selected(&self) -> usize {
        self.neurons.len()
    }

    pub fn activations(&self, raw_sample: &[f64]) -> Result<ActivationVector> {
        if self.output_weights.len() != self.neurons.len() + 1 {
            return Err(Error::invalid("model is not trained"));
        }
        let x = self.normalizer.apply_row(raw_sample)?;
        activations(&self.neurons, &self.grid, &x)
    }

    /// Effort estimate: `Σ_l leaky_relu(z_l · v_l, α)` with `z_0 = 1`, the
    /// activation applied to each term before summing.
    pub fn predict(&self, raw_sample: &[f64]) -> Result<f64> {
        let z = self.activations(raw_sample)?;
        Ok(z.0
            .iter()
            .zip(&self.output_weights)
            .map(|(z, v)| leaky(z * v, self.config.alpha))
            .sum())
    }

    /// The linear read-out `Σ_l z_l · v_l` the output weights were fitted for.
    pub fn predict_linear(&self, raw_sample: &[f64]) -> Result<f64> {
        let z = self.activations(raw_sample)?;
        Ok(z.0.iter().zip(&self.output_weights).map(|(z, v)| z * v).sum())
    }

    pub fn predict_rows(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        rows.iter().map(|r| self.predict(r)).collect()
    }
}

/// Free-function form of [`TrainedModel::predict`].
pub fn predict(model: &TrainedModel, raw_sample: &[f64]) -> Result<f64> {
    model.predict(raw_sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::synthetic::ucp_projects;

    #[test]
    fn leaky_relu_examples() {
        assert_eq!(leaky_relu(2.0, 0.01).unwrap(), 2.0);
        assert_eq!(leaky_relu(-1.0, 0.01).unwrap(), -0.01);
        assert_eq!(leaky_relu(0.0, 0.3).unwrap(), 0.0);
        assert!(leaky_relu(1.0, 1.5).is_err());
        assert!(leaky_relu(1.0, -0.1).is_err());
    }

    #[test]
    fn activations_bias_only_and_peak() {
        let grid = FuzzificationGrid::from_ranges(&[(0.0, 1.0), (0.0, 1.0)], 2, MembershipFamily::Gaussian).unwrap();
        assert_eq!(activations(&[], &grid, &[0.3, 0.3]).unwrap().0, vec![1.0]);

        let n = AndNeuron::new(vec![1, 0], vec![0.0, 0.0]).unwrap();
        let a = activations(&[n], &grid, &[1.0, 0.0]).unwrap();
        assert_eq!(a.0, vec![1.0, 1.0]);
        assert!(activations(&[], &grid, &[0.3]).is_err());
    }

    fn toy_model(output_weights: Vec<f64>, alpha: f64) -> TrainedModel {
        let grid = FuzzificationGrid::from_ranges(&[(0.0, 1.0)], 2, MembershipFamily::Triangular).unwrap();
        let neurons = vec![AndNeuron::new(vec![0], vec![0.0]).unwrap()];
        TrainedModel {
            feature_names: vec!["x".into()],
            target_name: "effort".into(),
            grid,
            neurons,
            output_weights,
            normalizer: Normalizer {
                means: vec![0.0],
                std_devs: vec![1.0],
                constant: vec![false],
            },
            config: TrainConfig { alpha, ..TrainConfig::default() },
            selection: SelectionResult {
                selected: vec![0],
                frequencies: vec![1.0],
                penalty_used: 0.0,
                fallback: false,
            },
            candidate_count: 1,
        }
    }

    #[test]
    fn predict_applies_leaky_relu_per_term() {
        // z_1 = 0.5 at x = 0.5
        let m = toy_model(vec![0.0, 2.0], 0.01);
        assert_eq!(m.predict(&[0.5]).unwrap(), 1.0);

        let m = toy_model(vec![-4.0, 2.0], 0.01);
        assert!((m.predict(&[0.5]).unwrap() - (-0.04 + 1.0)).abs() < 1e-15);
        let m1 = toy_model(vec![-4.0, 2.0], 1.0);
        assert_eq!(m1.predict(&[0.5]).unwrap(), m1.predict_linear(&[0.5]).unwrap());

        assert_eq!(toy_model(vec![0.0, 0.0], 0.01).predict(&[0.2]).unwrap(), 0.0);
        assert!(m.predict(&[0.5, 1.0]).is_err());
        assert!(toy_model(vec![1.0], 0.01).predict(&[0.5]).is_err());
    }

    #[test]
    fn training_is_deterministic_and_bounded() {
        let data = ucp_projects(40, 5);
        let config = TrainConfig { seed: 3, ..TrainConfig::default() };
        let a = train(&data, &config).unwrap();
        let b = train(&data, &config).unwrap();
        assert_eq!(a, b);
        assert!(a.n_selected() >= 1 && a.n_selected() <= config.pool_size);
        assert_eq!(a.output_weights.len(), a.n_selected() + 1);
        assert_eq!(a.candidate_count, 100);
    }

    #[test]
    fn train_rejects_bad_config() {
        let data = ucp_projects(10, 1);
        for config in [
            TrainConfig { m: 1, ..TrainConfig::default() },
            TrainConfig { pool_size: 0, ..TrainConfig::default() },
            TrainConfig { alpha: 2.0, ..TrainConfig::default() },
            TrainConfig { consensus: 0.0, ..TrainConfig::default() },
        ] {
            assert!(train(&data, &config).is_err());
        }
        assert!(train(&data.subset(&[0, 1]), &TrainConfig::default()).is_err());
    }

    #[test]
    fn recovers_a_single_planted_neuron() {
        let data = ucp_projects(50, 8);
        let config = TrainConfig { seed: 21, ..TrainConfig::default() };
        let hidden = HiddenLayer::build(&data, &config).unwrap();
        let design = hidden.design(&data.rows).unwrap();
        // pick the candidate with the largest spread so it is clearly identifiable
        let j = (0..design.ncols())
            .max_by(|&a, &b| spread(&design, a).total_cmp(&spread(&design, b)))
            .unwrap();
        let mut planted = data.clone();
        planted.targets = design.column(j).iter().map(|z| 3.0 * z).collect();

        let model = train(&planted, &config).unwrap();
        assert_eq!(model.selection.frequencies[j], 1.0);
        let pos = model.selection.selected.iter().position(|&s| s == j).unwrap();
        assert!((model.output_weights[pos + 1] - 3.0).abs() < 1e-6);
    }

    fn spread(z: &DMatrix<f64>, j: usize) -> f64 {
        let c = z.column(j);
        c.max() - c.min()
    }
}
