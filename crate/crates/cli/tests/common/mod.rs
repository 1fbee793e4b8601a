//! Shared helpers for driving the compiled binary.

use shapmc::models::{DatasetTable, MlpModel};
use shapmc::RngSeed;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shapmc"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

/// Writes a seeded model and matching synthetic dataset into `dir`.
pub fn mlp_fixture(dir: &Path, features: usize, rows: usize) -> (PathBuf, PathBuf) {
    let model = MlpModel::seeded(&[features + 1, 4, 2], RngSeed(17));
    let data = DatasetTable::synthetic(features, rows, RngSeed(3));
    let model_path = dir.join("model.json");
    let data_path = dir.join("data.csv");
    std::fs::write(&model_path, model.to_json()).unwrap();
    std::fs::write(&data_path, data.to_csv()).unwrap();
    (model_path, data_path)
}

/// One linear unit over dyadic inputs: every estimator is bit-exact on it.
pub fn linear_fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let model = r#"{"layers": [{"weights": [[0.5, 0.75, -0.25]], "bias": [0.0], "activation": "linear"}]}"#;
    let data = "x0,x1,x2\n1.0,0.5,0.25\n1.0,0.25,0.75\n1.0,1.5,0.5\n";
    let model_path = dir.join("linear.json");
    let data_path = dir.join("dyadic.csv");
    std::fs::write(&model_path, model).unwrap();
    std::fs::write(&data_path, data).unwrap();
    (model_path, data_path)
}

pub fn unanimity_fixture(dir: &Path) -> PathBuf {
    let path = dir.join("unanimity.json");
    std::fs::write(
        &path,
        r#"{"game": {"unanimity": {"arity": 2, "members": [0, 1]}}}"#,
    )
    .unwrap();
    path
}
