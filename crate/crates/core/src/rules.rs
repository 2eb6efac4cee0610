//! IF/THEN rule base read off the selected and-neurons.
//!
//! Neuron `l` becomes one rule: each feature contributes the linguistic label
//! of the membership function the neuron picked, together with the
//! neuron's weight for that feature as a certainty, and the consequent is
//! the neuron's output weight `v_l`, in target units.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::TrainedModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Antecedent {
    pub feature: String,
    pub label: String,
    pub certainty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyRule {
    pub neuron_index: usize,
    pub antecedents: Vec<Antecedent>,
    pub target: String,
    pub consequent: f64,
}

/// Linguistic labels for each grid size, ordered by ascending center.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelScheme {
    pub labels_by_m: BTreeMap<usize, Vec<String>>,
    /// Per-feature label lists that take precedence over `labels_by_m`.
    pub overrides: HashMap<String, Vec<String>>,
}

impl Default for LabelScheme {
    fn default() -> Self {
        let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let labels_by_m = BTreeMap::from([
            (2, owned(&["low", "high"])),
            (3, owned(&["low", "medium", "high"])),
            (4, owned(&["very low", "low", "high", "very high"])),
            (5, owned(&["very low", "low", "medium", "high", "very high"])),
        ]);
        Self {
            labels_by_m,
            overrides: HashMap::new(),
        }
    }
}

impl LabelScheme {
    pub fn with_override(mut self, feature: impl Into<String>, labels: Vec<String>) -> Self {
        self.overrides.insert(feature.into(), labels);
        self
    }

    fn labels_for(&self, feature: &str, m: usize) -> Result<&[String]> {
        if let Some(l) = self.overrides.get(feature) {
            if l.len() != m {
                return Err(Error::invalid(format!(
                    "label override for `{feature}` has {} entries, grid has {m}",
                    l.len()
                )));
            }
            return Ok(l);
        }
        self.labels_by_m
            .get(&m)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::invalid(format!("label scheme has no entry for m = {m}")))
    }
}

/// One rule per selected neuron. Features without spread are left out of
/// the antecedents since their membership is identically 1.
pub fn extract_rules(model: &TrainedModel, scheme: &LabelScheme) -> Result<Vec<FuzzyRule>> {
    let m = model.grid.m;
    let label_sets = model
        .feature_names
        .iter()
        .map(|f| scheme.labels_for(f, m))
        .collect::<Result<Vec<_>>>()?;

    Ok(model
        .neurons
        .iter()
        .enumerate()
        .map(|(l, neuron)| {
            let antecedents = neuron
                .mf_choice
                .iter()
                .zip(&neuron.weights)
                .enumerate()
                .filter(|(j, _)| !model.grid.per_feature[*j].is_constant())
                .map(|(j, (&k, &w))| Antecedent {
                    feature: model.feature_names[j].clone(),
                    label: label_sets[j][k].clone(),
                    certainty: w,
                })
                .collect();
            FuzzyRule {
                neuron_index: l,
                antecedents,
                target: model.target_name.clone(),
                consequent: model.output_weights[l + 1],
            }
        })
        .collect())
}

/// `If (F1 is L1) [w=w1] and (F2 is L2) [w=w2] … then (effort is V)`.
pub fn render_rule(rule: &FuzzyRule, precision: usize) -> String {
    let head = if rule.antecedents.is_empty() {
        "(always)".to_string()
    } else {
        rule.antecedents
            .iter()
            .map(|a| format!("({} is {}) [w={:.*}]", a.feature, a.label, precision, a.certainty))
            .collect::<Vec<_>>()
            .join(" and ")
    };
    format!("If {head} then ({} is {:.*})", rule.target, precision, rule.consequent)
}

/// Rule base with the output bias, as written by the `rules` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleBase {
    pub target: String,
    pub bias: f64,
    pub rules: Vec<FuzzyRule>,
}

pub fn rule_base(model: &TrainedModel, scheme: &LabelScheme) -> Result<RuleBase> {
    Ok(RuleBase {
        target: model.target_name.clone(),
        bias: model.output_weights[0],
        rules: extract_rules(model, scheme)?,
    })
}
