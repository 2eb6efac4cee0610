//! Build a random candidate pool and evaluate a few neurons on one sample.

use rfnn::logic::{and_neuron_activate, generate_candidates, ProductProbSum};
use rfnn::{FuzzificationGrid, MembershipFamily};

fn main() -> rfnn::Result<()> {
    let grid = FuzzificationGrid::from_ranges(&[(-1.0, 1.0); 4], 3, MembershipFamily::Triangular)?;
    let mu = grid.fuzzify(&[0.2, -0.7, 0.9, 0.0])?;
    let pool = generate_candidates(4, 3, 5, 42)?;

    for (i, neuron) in pool.neurons.iter().enumerate() {
        let z = and_neuron_activate(neuron, &mu, &ProductProbSum)?;
        let weights: Vec<String> = neuron.weights.iter().map(|w| format!("{w:.2}")).collect();
        println!("neuron {i}: mf {:?} w [{}] -> z = {z:.4}", neuron.mf_choice, weights.join(", "));
    }
    Ok(())
}
