use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{TrainConfig, TrainedModel};
use crate::data::Normalizer;
use crate::error::{Error, Result};
use crate::fuzzification::{FuzzificationGrid, MembershipFamily};
use crate::logic::AndNeuron;
use crate::persist::write_atomic;
use crate::selection::SelectionResult;

pub const FORMAT_VERSION: u32 = 1;

/// On-disk JSON layout of a trained model. The grid is stored as its
/// per-feature ranges and rebuilt on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub family: MembershipFamily,
    pub m: usize,
    pub feature_names: Vec<String>,
    pub target_name: String,
    pub feature_ranges: Vec<(f64, f64)>,
    pub normalizer: Normalizer,
    pub neurons: Vec<AndNeuron>,
    pub output_weights: Vec<f64>,
    pub alpha: f64,
    pub seed: u64,
    pub selection_frequencies: Vec<f64>,
    pub selected_candidates: Vec<usize>,
    pub selection_fallback: bool,
    pub penalty_used: f64,
    pub candidate_count: usize,
    pub config: TrainConfig,
}

impl From<&TrainedModel> for ModelFile {
    fn from(m: &TrainedModel) -> Self {
        ModelFile {
            format_version: FORMAT_VERSION,
            family: m.grid.family,
            m: m.grid.m,
            feature_names: m.feature_names.clone(),
            target_name: m.target_name.clone(),
            feature_ranges: m.grid.feature_ranges(),
            normalizer: m.normalizer.clone(),
            neurons: m.neurons.clone(),
            output_weights: m.output_weights.clone(),
            alpha: m.config.alpha,
            seed: m.config.seed,
            selection_frequencies: m.selection.frequencies.clone(),
            selected_candidates: m.selection.selected.clone(),
            selection_fallback: m.selection.fallback,
            penalty_used: m.selection.penalty_used,
            candidate_count: m.candidate_count,
            config: m.config,
        }
    }
}

impl TryFrom<ModelFile> for TrainedModel {
    type Error = Error;

    fn try_from(f: ModelFile) -> Result<Self> {
        if f.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: f.format_version,
                supported: FORMAT_VERSION,
            });
        }
        let corrupt = |msg: &str| Error::CorruptModel(msg.to_string());
        let n = f.feature_names.len();
        if f.feature_ranges.len() != n || f.normalizer.width() != n {
            return Err(corrupt("feature count disagrees between names, ranges and normalizer"));
        }
        if f.output_weights.len() != f.neurons.len() + 1 {
            return Err(corrupt("output weights must be one longer than the neuron list"));
        }
        if f.selected_candidates.len() != f.neurons.len() {
            return Err(corrupt("selected candidates disagree with the neuron list"));
        }
        let grid = FuzzificationGrid::from_ranges(&f.feature_ranges, f.m, f.family)
            .map_err(|e| Error::CorruptModel(e.to_string()))?;
        let counts = grid.mf_counts();
        for neuron in &f.neurons {
            if neuron.n_inputs() != n || neuron.weights.len() != n {
                return Err(corrupt("neuron width disagrees with the feature count"));
            }
            if neuron.mf_choice.iter().zip(&counts).any(|(&k, &c)| k >= c) {
                return Err(corrupt("neuron refers to a membership function outside the grid"));
            }
        }
        let mut config = f.config;
        config.alpha = f.alpha;
        config.seed = f.seed;
        Ok(TrainedModel {
            feature_names: f.feature_names,
            target_name: f.target_name,
            grid,
            neurons: f.neurons,
            output_weights: f.output_weights,
            normalizer: f.normalizer,
            config,
            selection: SelectionResult {
                selected: f.selected_candidates,
                frequencies: f.selection_frequencies,
                penalty_used: f.penalty_used,
                fallback: f.selection_fallback,
            },
            candidate_count: f.candidate_count,
        })
    }
}

impl TrainedModel {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&ModelFile::from(self))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::CorruptModel(e.to_string()))?;
        let version = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::CorruptModel("missing format_version".into()))?;
        if version != u64::from(FORMAT_VERSION) {
            return Err(Error::VersionMismatch {
                found: u32::try_from(version).unwrap_or(u32::MAX),
                supported: FORMAT_VERSION,
            });
        }
        let file: ModelFile =
            serde_json::from_value(value).map_err(|e| Error::CorruptModel(e.to_string()))?;
        file.try_into()
    }
}

/// Write the model as JSON; the file is replaced atomically.
pub fn save_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), model.to_json()?.as_bytes())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    TrainedModel::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::synthetic::ucp_projects;
    use crate::model::train;

    fn small_model() -> TrainedModel {
        let config = TrainConfig {
            seed: 4,
            family: MembershipFamily::Gaussian,
            ..TrainConfig::default()
        };
        train(&ucp_projects(30, 2), &config).unwrap()
    }

    #[test]
    fn json_round_trip_is_exact() {
        let model = small_model();
        let back = TrainedModel::from_json(&model.to_json().unwrap()).unwrap();
        assert_eq!(back, model);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&model, &path).unwrap();
        assert_eq!(load_model(&path).unwrap(), model);
    }

    #[test]
    fn unknown_version_is_rejected() {
        let text = small_model().to_json().unwrap().replacen(
            "\"format_version\": 1",
            "\"format_version\": 7",
            1,
        );
        assert!(matches!(
            TrainedModel::from_json(&text),
            Err(Error::VersionMismatch { found: 7, supported: 1 })
        ));
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let text = small_model().to_json().unwrap();
        let cut = &text[..text.len() / 2];
        assert!(matches!(TrainedModel::from_json(cut), Err(Error::CorruptModel(_))));
    }

    #[test]
    fn inconsistent_weights_are_corrupt() {
        let mut file = ModelFile::from(&small_model());
        file.output_weights.push(1.0);
        assert!(matches!(TrainedModel::try_from(file), Err(Error::CorruptModel(_))));
    }
}
