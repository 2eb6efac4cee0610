use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative size below which a column is treated as constant, or as lying in
/// the span of the active set.
const DEGENERATE_TOL: f64 = 1e-10;

/// Piecewise-linear lasso solution path for
/// `(1/2)‖y − ȳ − Zβ‖² + λ‖β‖₁` on columns standardized to zero mean and
/// unit population variance. The intercept is never penalized.
#[derive(Debug, Clone, PartialEq)]
pub struct LassoPath {
    /// Penalty values at the knots, strictly decreasing.
    pub breakpoints: Vec<f64>,
    /// Coefficients at each knot, in the original column scale.
    pub coefficients: Vec<Vec<f64>>,
    pub column_means: Vec<f64>,
    /// Population standard deviations; 0 marks an excluded constant column.
    pub column_scales: Vec<f64>,
    pub target_mean: f64,
}

impl LassoPath {
    pub fn n_columns(&self) -> usize {
        self.column_means.len()
    }

    /// Smallest penalty at which every coefficient is zero.
    pub fn lambda_max(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn coefficients_at(&self, penalty: f64) -> Vec<f64> {
        coefficients_at(self, penalty)
    }

    pub fn intercept_at(&self, penalty: f64) -> f64 {
        let beta = self.coefficients_at(penalty);
        self.intercept_for(&beta)
    }

    fn intercept_for(&self, beta: &[f64]) -> f64 {
        self.target_mean
            - self
                .column_means
                .iter()
                .zip(beta)
                .map(|(m, b)| m * b)
                .sum::<f64>()
    }

    /// Fitted value of `row` at `penalty`.
    pub fn predict(&self, penalty: f64, row: &[f64]) -> f64 {
        let beta = self.coefficients_at(penalty);
        self.intercept_for(&beta) + row.iter().zip(&beta).map(|(x, b)| x * b).sum::<f64>()
    }

    /// Column indices with a nonzero coefficient at `penalty`.
    pub fn support_at(&self, penalty: f64) -> Vec<usize> {
        self.coefficients_at(penalty)
            .iter()
            .enumerate()
            .filter(|(_, b)| **b != 0.0)
            .map(|(j, _)| j)
            .collect()
    }
}

/// Coefficients at an arbitrary penalty, interpolated linearly between knots.
pub fn coefficients_at(path: &LassoPath, penalty: f64) -> Vec<f64> {
    let bp = &path.breakpoints;
    if penalty >= bp[0] {
        return vec![0.0; path.n_columns()];
    }
    if let Some(i) = bp.iter().position(|&b| b == penalty) {
        return path.coefficients[i].clone();
    }
    match bp.iter().position(|&b| b < penalty) {
        None => path.coefficients.last().unwrap().clone(),
        Some(hi) => {
            let (l0, l1) = (bp[hi - 1], bp[hi]);
            let t = (l0 - penalty) / (l0 - l1);
            path.coefficients[hi - 1]
                .iter()
                .zip(&path.coefficients[hi])
                .map(|(a, b)| a + t * (b - a))
                .collect()
        }
    }
}

/// Full lasso path by least angle regression with the lasso modification
/// (variables leave the active set when their coefficient crosses zero).
pub fn lasso_path(design: &DMatrix<f64>, targets: &[f64]) -> Result<LassoPath> {
    let (k, p) = design.shape();
    if targets.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: targets.len(),
        });
    }
    if k < 2 {
        return Err(Error::invalid(format!("lasso path needs at least 2 rows, got {k}")));
    }
    if targets.iter().all(|&y| y == 0.0) {
        return Err(Error::Degenerate("all targets are zero".into()));
    }
    if design.iter().chain(targets).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("lasso design or targets".into()));
    }

    let kf = k as f64;
    let mut column_means = vec![0.0; p];
    let mut column_scales = vec![0.0; p];
    let mut x = design.clone();
    for j in 0..p {
        let col = design.column(j);
        let mean = col.sum() / kf;
        let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / kf).sqrt();
        column_means[j] = mean;
        if sd > DEGENERATE_TOL * (1.0 + mean.abs()) {
            column_scales[j] = sd;
            x.column_mut(j).iter_mut().for_each(|v| *v = (*v - mean) / sd);
        } else {
            x.column_mut(j).fill(0.0);
        }
    }
    if column_scales.iter().all(|&s| s == 0.0) {
        return Err(Error::Degenerate("every design column is constant".into()));
    }
    let target_mean = targets.iter().sum::<f64>() / kf;
    let y = DVector::from_iterator(k, targets.iter().map(|t| t - target_mean));

    let gram = x.transpose() * &x;
    let xty = x.transpose() * &y;

    let mut eligible: Vec<bool> = column_scales.iter().map(|&s| s > 0.0).collect();
    let mut beta = DVector::<f64>::zeros(p);
    let mut corr = xty.clone();

    let lambda_max = (0..p)
        .filter(|&j| eligible[j])
        .map(|j| corr[j].abs())
        .fold(0.0, f64::max);

    let to_original = |beta: &DVector<f64>| -> Vec<f64> {
        (0..p)
            .map(|j| if column_scales[j] > 0.0 { beta[j] / column_scales[j] } else { 0.0 })
            .collect()
    };

    let mut breakpoints = vec![lambda_max];
    let mut coefficients = vec![vec![0.0; p]];
    if lambda_max == 0.0 {
        return Ok(LassoPath {
            breakpoints,
            coefficients,
            column_means,
            column_scales,
            target_mean,
        });
    }

    let tiny = 1e-12 * lambda_max;
    let mut lambda = lambda_max;
    let mut active: Vec<usize> = Vec::new();
    let mut signs = vec![0.0; p];
    let mut add_next = true;
    let max_steps = 8 * (p + k) + 16;

    for _ in 0..max_steps {
        if add_next {
            // Bring in the most correlated eligible column, skipping any that
            // lies in the span of the current active set.
            loop {
                let next = (0..p)
                    .filter(|&j| eligible[j] && !active.contains(&j))
                    .max_by(|&a, &b| corr[a].abs().total_cmp(&corr[b].abs()).then(b.cmp(&a)));
                let Some(j) = next else { break };
                if in_active_span(&gram, &active, j) {
                    eligible[j] = false;
                    continue;
                }
                signs[j] = corr[j].signum();
                active.push(j);
                break;
            }
        }
        if active.is_empty() {
            break;
        }

        let na = active.len();
        let g_aa = DMatrix::from_fn(na, na, |r, c| gram[(active[r], active[c])]);
        let s_a = DVector::from_iterator(na, active.iter().map(|&j| signs[j]));
        let Some(chol) = Cholesky::new(g_aa) else {
            let j = active.pop().unwrap();
            eligible[j] = false;
            continue;
        };
        let d = chol.solve(&s_a);
        // a_j = x_jᵀ X_A d
        let a: DVector<f64> = DVector::from_fn(p, |j, _| active.iter().zip(d.iter()).map(|(&i, di)| gram[(j, i)] * di).sum());

        let mut gamma = lambda;
        let mut drop: Option<usize> = None;
        for j in (0..p).filter(|&j| eligible[j] && !active.contains(&j)) {
            for root in [(lambda - corr[j]) / (1.0 - a[j]), (lambda + corr[j]) / (1.0 + a[j])] {
                if root.is_finite() && root > tiny && root < gamma {
                    gamma = root;
                    drop = None;
                }
            }
        }
        for (pos, &j) in active.iter().enumerate() {
            if d[pos] != 0.0 {
                let root = -beta[j] / d[pos];
                if root > tiny && root < gamma {
                    gamma = root;
                    drop = Some(pos);
                }
            }
        }

        for (pos, &j) in active.iter().enumerate() {
            beta[j] += gamma * d[pos];
        }
        lambda -= gamma;
        match drop {
            Some(pos) => {
                let j = active.remove(pos);
                beta[j] = 0.0;
                add_next = false;
            }
            None => add_next = true,
        }
        corr = &xty - &gram * &beta;

        if lambda <= tiny {
            breakpoints.push(0.0);
            coefficients.push(to_original(&beta));
            break;
        }
        breakpoints.push(lambda);
        coefficients.push(to_original(&beta));
    }

    Ok(LassoPath {
        breakpoints,
        coefficients,
        column_means,
        column_scales,
        target_mean,
    })
}

/// Whether column `j` is (numerically) a linear combination of the active
/// columns, judged by its squared residual after projection.
fn in_active_span(gram: &DMatrix<f64>, active: &[usize], j: usize) -> bool {
    let gjj = gram[(j, j)];
    if active.is_empty() {
        return gjj <= DEGENERATE_TOL;
    }
    let na = active.len();
    let g_aa = DMatrix::from_fn(na, na, |r, c| gram[(active[r], active[c])]);
    let g_aj = DVector::from_iterator(na, active.iter().map(|&i| gram[(i, j)]));
    match Cholesky::new(g_aa) {
        Some(chol) => {
            let proj = g_aj.dot(&chol.solve(&g_aj));
            gjj - proj <= DEGENERATE_TOL * gjj
        }
        None => true,
    }
}
