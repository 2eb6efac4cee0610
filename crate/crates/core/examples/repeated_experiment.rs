//! Repeated random splits for both membership families.

use rfnn::data::synthetic::ucp_projects;
use rfnn::{run_experiment, ExperimentConfig, MembershipFamily, TrainConfig};

fn main() -> rfnn::Result<()> {
    let data = ucp_projects(70, 9);
    for family in [MembershipFamily::Triangular, MembershipFamily::Gaussian] {
        let config = ExperimentConfig {
            repetitions: 10,
            threads: 4,
            train_config: TrainConfig { family, ..TrainConfig::default() },
            ..ExperimentConfig::default()
        };
        let report = run_experiment(&data, &config)?;
        print!("{}", report.to_table());
    }
    Ok(())
}
