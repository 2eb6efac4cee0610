use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lars::lasso_path;
use crate::error::{Error, Result};

/// Held-out error for each penalty of a logarithmic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CvCurve {
    /// Decreasing from λ_max to 1e-3·λ_max.
    pub penalties: Vec<f64>,
    pub mean_squared_error: Vec<f64>,
    pub chosen: f64,
}

pub fn choose_penalty_cv(
    design: &DMatrix<f64>,
    targets: &[f64],
    folds: usize,
    grid_size: usize,
    seed: u64,
) -> Result<f64> {
    cross_validate_penalty(design, targets, folds, grid_size, seed).map(|c| c.chosen)
}

/// K-fold cross-validation of the lasso penalty. Rows are shuffled with
/// `seed` and dealt round-robin into folds; the squared errors of all
/// held-out rows are pooled. Ties go to the larger penalty.
pub fn cross_validate_penalty(
    design: &DMatrix<f64>,
    targets: &[f64],
    folds: usize,
    grid_size: usize,
    seed: u64,
) -> Result<CvCurve> {
    let k = design.nrows();
    if folds < 2 || folds > k {
        return Err(Error::invalid(format!(
            "cross-validation needs 2 <= folds <= rows, got {folds} folds on {k} rows"
        )));
    }
    if grid_size == 0 {
        return Err(Error::invalid("penalty grid needs at least one value"));
    }
    let lambda_max = lasso_path(design, targets)?.lambda_max();
    let penalties: Vec<f64> = if grid_size == 1 {
        vec![lambda_max]
    } else {
        (0..grid_size)
            .map(|i| lambda_max * 1e-3f64.powf(i as f64 / (grid_size - 1) as f64))
            .collect()
    };

    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold_of = vec![0; k];
    for (pos, &row) in order.iter().enumerate() {
        fold_of[row] = pos % folds;
    }

    let mut sse = vec![0.0; penalties.len()];
    for f in 0..folds {
        let train: Vec<usize> = (0..k).filter(|&i| fold_of[i] != f).collect();
        let held: Vec<usize> = (0..k).filter(|&i| fold_of[i] == f).collect();
        let sub = design.select_rows(&train);
        let sub_y: Vec<f64> = train.iter().map(|&i| targets[i]).collect();
        let path = lasso_path(&sub, &sub_y)?;
        for (g, &lam) in penalties.iter().enumerate() {
            let beta = path.coefficients_at(lam);
            let intercept = path.intercept_at(lam);
            for &i in &held {
                let fit = intercept + design.row(i).iter().zip(&beta).map(|(x, b)| x * b).sum::<f64>();
                sse[g] += (targets[i] - fit).powi(2);
            }
        }
    }
    let mean_squared_error: Vec<f64> = sse.iter().map(|s| s / k as f64).collect();

    let mut best = 0;
    for g in 1..penalties.len() {
        if mean_squared_error[g] < mean_squared_error[best] {
            best = g;
        }
    }
    Ok(CvCurve {
        chosen: penalties[best],
        penalties,
        mean_squared_error,
    })
}
