//! Effort estimation for software projects with a regularized fuzzy neural
//! network over Use Case Point features.
//!
//! The network has three layers:
//!
//! 1. [`fuzzification`]: `M` equally spaced Gaussian or triangular
//!    membership functions per (normalized) feature.
//! 2. [`logic`]: and-neurons, each choosing one membership function per
//!    feature and aggregating them with a product t-norm over
//!    probabilistic-sum s-norms of random weights. A random pool of
//!    candidates is pruned by bootstrap lasso ([`selection`]).
//! 3. [`model`]: an output neuron whose weights are the minimum-norm least
//!    squares solution over the selected activations, read out through
//!    leaky ReLU.
//!
//! [`rules`] turns a trained network into IF/THEN rules, [`evaluation`]
//! runs the repeated 70/30 experiment, and [`ucp`] holds the Use Case Point
//! arithmetic that produces the input features.

pub mod cli;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod fuzzification;
pub mod logic;
pub mod model;
pub mod persist;
pub mod rules;
pub mod selection;
pub mod ucp;

pub use data::{Dataset, Normalizer, SplitSpec};
pub use error::{Error, Result};
pub use evaluation::{rmse, run_experiment, ExperimentConfig, ExperimentReport};
pub use fuzzification::{FuzzificationGrid, MembershipFamily};
pub use model::{load_model, save_model, train, TrainConfig, TrainedModel};
pub use selection::Penalty;
