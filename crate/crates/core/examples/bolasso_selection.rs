//! Bootstrap the lasso and keep the columns chosen in most replicates.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rfnn::selection::{bolasso_select, BolassoConfig};

fn main() -> rfnn::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let design = DMatrix::from_fn(60, 10, |_, _| rng.gen_range(0.0..1.0));
    let targets: Vec<f64> = (0..60)
        .map(|i| 3.0 * design[(i, 2)] + design[(i, 5)] - 2.0 * design[(i, 8)] + rng.gen_range(-0.3..0.3))
        .collect();

    for consensus in [0.5, 0.7, 1.0] {
        let result = bolasso_select(&design, &targets, &BolassoConfig { consensus, seed: 3, ..BolassoConfig::default() })?;
        println!("consensus {consensus}: selected {:?} (penalty {:.4})", result.selected, result.penalty_used);
    }
    let result = bolasso_select(&design, &targets, &BolassoConfig { seed: 3, ..BolassoConfig::default() })?;
    let freq: Vec<String> = result.frequencies.iter().map(|f| format!("{f:.2}")).collect();
    println!("frequencies [{}]", freq.join(", "));
    Ok(())
}
