//! t-norms, s-norms, and-neurons and the random candidate neuron pool.

use std::collections::HashSet;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_degree(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::invalid(format!("degree {x} is outside [0, 1]")))
    }
}

pub fn t_norm_product(a: f64, b: f64) -> Result<f64> {
    check_degree(a)?;
    check_degree(b)?;
    Ok(a * b)
}

pub fn s_norm_probabilistic_sum(a: f64, b: f64) -> Result<f64> {
    check_degree(a)?;
    check_degree(b)?;
    Ok(prob_sum(a, b))
}

/// `a + b − ab`, evaluated from the larger argument so that 0 and 1 act as
/// exact identity and annihilator.
#[inline]
fn prob_sum(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + lo * (1.0 - hi)
}

/// A fuzzy conjunction / disjunction pair. Inputs are assumed to be in
/// [0, 1]; use the checked free functions at API boundaries.
pub trait NormPair {
    fn t(&self, a: f64, b: f64) -> f64;
    fn s(&self, a: f64, b: f64) -> f64;
}

/// Product t-norm with probabilistic-sum s-norm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProductProbSum;

impl NormPair for ProductProbSum {
    #[inline]
    fn t(&self, a: f64, b: f64) -> f64 {
        a * b
    }

    #[inline]
    fn s(&self, a: f64, b: f64) -> f64 {
        prob_sum(a, b)
    }
}

/// Logic neuron aggregating one membership per feature:
/// `z = T_i s(w_i, a_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AndNeuron {
    /// Zero-based membership index chosen for each feature.
    pub mf_choice: Vec<usize>,
    pub weights: Vec<f64>,
}

impl AndNeuron {
    pub fn new(mf_choice: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if mf_choice.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: mf_choice.len(),
                found: weights.len(),
            });
        }
        for &w in &weights {
            check_degree(w)?;
        }
        Ok(Self { mf_choice, weights })
    }

    pub fn n_inputs(&self) -> usize {
        self.mf_choice.len()
    }
}

pub fn and_neuron_activate(
    neuron: &AndNeuron,
    memberships: &DMatrix<f64>,
    norms: &impl NormPair,
) -> Result<f64> {
    if memberships.nrows() != neuron.n_inputs() {
        return Err(Error::DimensionMismatch {
            expected: neuron.n_inputs(),
            found: memberships.nrows(),
        });
    }
    if let Some(&bad) = neuron.mf_choice.iter().find(|&&k| k >= memberships.ncols()) {
        return Err(Error::DimensionMismatch {
            expected: memberships.ncols(),
            found: bad + 1,
        });
    }
    Ok(activate_unchecked(neuron, memberships, norms))
}

#[inline]
pub(crate) fn activate_unchecked(
    neuron: &AndNeuron,
    memberships: &DMatrix<f64>,
    norms: &impl NormPair,
) -> f64 {
    neuron
        .mf_choice
        .iter()
        .zip(&neuron.weights)
        .enumerate()
        .fold(1.0, |z, (i, (&k, &w))| norms.t(z, norms.s(w, memberships[(i, k)])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePool {
    pub neurons: Vec<AndNeuron>,
    pub seed: u64,
}

impl CandidatePool {
    pub fn len(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }
}

/// Candidate pool over a grid with `m` functions on each of `n_features`.
pub fn generate_candidates(n_features: usize, m: usize, pool_size: usize, seed: u64) -> Result<CandidatePool> {
    generate_candidates_for(&vec![m; n_features], pool_size, seed)
}

/// Candidate pool over a grid with `mf_counts[j]` functions on feature `j`.
///
/// When the grid has at most `pool_size` cells every cell becomes a neuron
/// (in mixed-radix order); otherwise `pool_size` distinct cells are drawn
/// uniformly without replacement. Weights are uniform on [0, 1] and come
/// from the same seeded stream, after the cells.
pub fn generate_candidates_for(mf_counts: &[usize], pool_size: usize, seed: u64) -> Result<CandidatePool> {
    if pool_size == 0 {
        return Err(Error::invalid("pool size must be >= 1"));
    }
    if mf_counts.is_empty() || mf_counts.contains(&0) {
        return Err(Error::invalid("every feature needs at least one membership function"));
    }
    let n = mf_counts.len();
    let cells_total = mf_counts
        .iter()
        .try_fold(1usize, |acc, &m| acc.checked_mul(m));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let cells: Vec<Vec<usize>> = match cells_total {
        Some(total) if total <= pool_size => (0..total)
            .map(|mut idx| {
                mf_counts
                    .iter()
                    .map(|&m| {
                        let k = idx % m;
                        idx /= m;
                        k
                    })
                    .collect()
            })
            .collect(),
        _ => {
            let mut seen = HashSet::with_capacity(pool_size);
            let mut cells = Vec::with_capacity(pool_size);
            while cells.len() < pool_size {
                let cell: Vec<usize> = mf_counts.iter().map(|&m| rng.gen_range(0..m)).collect();
                if seen.insert(cell.clone()) {
                    cells.push(cell);
                }
            }
            cells
        }
    };

    let neurons = cells
        .into_iter()
        .map(|mf_choice| {
            let weights = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
            AndNeuron { mf_choice, weights }
        })
        .collect();
    Ok(CandidatePool { neurons, seed })
}
