#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rfnn::data::synthetic::ucp_projects;
use rfnn::Dataset;

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rfnn"));
    cmd.env_remove("RFNN_SEED");
    cmd
}

pub fn rfnn(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn rfnn")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn write_dataset(path: &Path, data: &Dataset) {
    let mut w = csv::Writer::from_path(path).unwrap();
    let mut header = data.feature_names.clone();
    header.push(data.target_name.clone());
    w.write_record(&header).unwrap();
    for (row, t) in data.rows.iter().zip(&data.targets) {
        w.write_record(row.iter().chain([t]).map(|v| v.to_string())).unwrap();
    }
    w.flush().unwrap();
}

/// A temp dir holding `projects.csv` with `n` synthetic projects.
pub fn project_csv(n: usize, seed: u64) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("projects.csv");
    write_dataset(&path, &ucp_projects(n, seed));
    (dir, path)
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}
