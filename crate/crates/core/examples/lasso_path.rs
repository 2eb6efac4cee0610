//! Trace the lasso path of a small regression and pick a penalty by CV.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rfnn::selection::{cross_validate_penalty, lasso_path};

fn main() -> rfnn::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let design = DMatrix::from_fn(50, 6, |_, _| rng.gen_range(0.0..1.0));
    let targets: Vec<f64> = (0..50)
        .map(|i| 4.0 * design[(i, 0)] - 2.0 * design[(i, 3)] + rng.gen_range(-0.1..0.1))
        .collect();

    let path = lasso_path(&design, &targets)?;
    println!("{} breakpoints, lambda_max = {:.4}", path.breakpoints.len(), path.lambda_max());
    for &lambda in &path.breakpoints {
        println!("  lambda {lambda:>9.4}  support {:?}", path.support_at(lambda));
    }

    let cv = cross_validate_penalty(&design, &targets, 5, 50, 7)?;
    let coef: Vec<String> = path.coefficients_at(cv.chosen).iter().map(|b| format!("{b:.3}")).collect();
    println!("cv penalty {:.5}: coefficients [{}]", cv.chosen, coef.join(", "));
    Ok(())
}
