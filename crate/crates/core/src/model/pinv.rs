use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Minimum-norm least-squares weights `v = Z⁺ y` through a one-sided Jacobi SVD of `Z`.
///
/// Singular values at or below `max(rows, cols) · ε · σ_max` are treated as
/// zero.
pub fn fit_output_weights(design: &DMatrix<f64>, targets: &[f64]) -> Result<Vec<f64>> {
    let (k, cols) = design.shape();
    if k == 0 || cols == 0 {
        return Err(Error::invalid("output layer needs at least one row and one column"));
    }
    if targets.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: targets.len(),
        });
    }
    if design.iter().chain(targets).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("output layer design or targets".into()));
    }

    let (columns, rotation) = one_sided_jacobi(design);
    let sigmas: Vec<f64> = (0..cols).map(|i| columns.column(i).norm()).collect();
    let sigma_max = sigmas.iter().copied().fold(0.0, f64::max);
    let cutoff = k.max(cols) as f64 * f64::EPSILON * sigma_max;
    let y = DVector::from_column_slice(targets);

    // With Z·V = A (orthogonal columns a_i, |a_i| = σ_i): Z⁺y = Σ v_i (a_iᵀy) / σ_i².
    let mut v = DVector::<f64>::zeros(cols);
    for (i, &s) in sigmas.iter().enumerate() {
        if s > cutoff {
            v += rotation.column(i) * (columns.column(i).dot(&y) / (s * s));
        }
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("output weights".into()));
    }
    Ok(v.iter().copied().collect())
}

/// Hestenes one-sided Jacobi: returns `A = Z·V` with mutually orthogonal
/// columns and the accumulated orthogonal `V`.
fn one_sided_jacobi(design: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let cols = design.ncols();
    let mut a = design.clone();
    let mut v = DMatrix::<f64>::identity(cols, cols);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dot(&a.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    (a, v)
}

fn rotate(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for r in 0..m.nrows() {
        let (x, y) = (m[(r, p)], m[(r, q)]);
        m[(r, p)] = c * x - s * y;
        m[(r, q)] = s * x + c * y;
    }
}
