//! Train on synthetic projects, save the model, reload it and predict.
//!
//! Pass a CSV path and target column to use your own data:
//! `cargo run --example train_and_predict -- projects.csv effort`

use rfnn::data::load_dataset;
use rfnn::data::synthetic::ucp_projects;
use rfnn::data::split;
use rfnn::{load_model, rmse, save_model, train, SplitSpec, TrainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let data = match args.as_slice() {
        [path, target] => load_dataset(path, target)?,
        _ => ucp_projects(80, 1),
    };
    let (train_set, test_set) = split(&data, SplitSpec { train_ratio: 0.7, seed: 1 })?;
    let model = train(&train_set, &TrainConfig { seed: 1, ..TrainConfig::default() })?;
    println!("{} of {} candidate neurons kept", model.n_selected(), model.candidate_count);

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("model.json");
    save_model(&model, &path)?;
    let model = load_model(&path)?;

    let predicted = model.predict_rows(&test_set.rows)?;
    println!("test RMSE {:.2} hours", rmse(&test_set.targets, &predicted)?);
    for (actual, guess) in test_set.targets.iter().zip(&predicted).take(5) {
        println!("  actual {actual:>8.1}  predicted {guess:>8.1}");
    }
    Ok(())
}
