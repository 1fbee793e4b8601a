//! Browser bindings for the estimator playground. Every entry point takes
//! plain scalars or comma-separated strings and returns a JSON string
//! (`{"error": ...}` on failure), so the page needs nothing beyond
//! `JSON.parse`. The same functions compile and run on the host, which is
//! where the unit tests live.

use serde::Serialize;
use shapmc::models::{synthetic_game, DatasetTable, MlpModel, SyntheticSpec};
use shapmc::{
    budget_to_params, estimate, exact_shapley, run_saliency, saliency_rgb, Algorithm,
    EstimateOptions, ExactConfig, RngSeed, SaliencyConfig, SamplingBudget, M_DEFAULT,
};
use wasm_bindgen::prelude::*;

fn fail(message: String) -> String {
    #[derive(Serialize)]
    struct Failure {
        error: String,
    }
    serde_json::to_string(&Failure { error: message }).unwrap()
}

fn parse_algorithm(name: &str) -> Result<Algorithm, String> {
    match name {
        "exact" => Ok(Algorithm::Exact),
        "castro" => Ok(Algorithm::Castro),
        "owen" => Ok(Algorithm::Owen),
        "halved-owen" => Ok(Algorithm::HalvedOwen),
        other => Err(format!(
            "unknown algorithm {other:?}; use exact, castro, owen, or halved-owen"
        )),
    }
}

fn parse_reals(csv: &str) -> Result<Vec<f64>, String> {
    csv.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("{t:?} is not a real")))
        .collect()
}

fn describe(budget: &SamplingBudget) -> String {
    match *budget {
        SamplingBudget::Exact => "full enumeration".into(),
        SamplingBudget::Castro { m_c } => format!("M_c={m_c}"),
        SamplingBudget::Owen { q, m } | SamplingBudget::HalvedOwen { q, m } => {
            format!("Q={q}, M={m}")
        }
    }
}

/// Weighted-voting attribution: the sampled estimate side by side with the
/// exact values, so the page can show the error directly.
#[wasm_bindgen]
pub fn voting_attribution(weights: &str, quota: f64, algo: &str, samples: u64, seed: u64) -> String {
    #[derive(Serialize)]
    struct Response {
        exact: Vec<f64>,
        estimate: Vec<f64>,
        params: String,
        evaluations: u64,
    }
    let run = || -> Result<Response, String> {
        let weights = parse_reals(weights)?;
        let game = synthetic_game(SyntheticSpec::WeightedVoting { weights, quota })
            .map_err(|e| e.to_string())?;
        let exact = exact_shapley(game.as_ref(), &ExactConfig::default())
            .map_err(|e| e.to_string())?;
        let algorithm = parse_algorithm(algo)?;
        let budget =
            budget_to_params(algorithm, samples, M_DEFAULT).map_err(|e| e.to_string())?;
        let est = estimate(game.as_ref(), &budget, RngSeed(seed), &EstimateOptions::default())
            .map_err(|e| e.to_string())?;
        Ok(Response {
            exact: exact.attributions,
            estimate: est.attributions,
            params: describe(&budget),
            evaluations: est.diagnostics.model_evaluations,
        })
    };
    match run() {
        Ok(r) => serde_json::to_string(&r).unwrap(),
        Err(e) => fail(e),
    }
}

/// Mean squared error against the exact values at a range of budgets, one
/// series per sampling algorithm, averaged over `seeds` master seeds. The
/// fixture is a fixed 4-player glove game.
#[wasm_bindgen]
pub fn convergence_curve(max_samples: u64, points: u32, seeds: u32, master_seed: u64) -> String {
    #[derive(Serialize)]
    struct Response {
        budgets: Vec<u64>,
        series: Vec<SeriesEntry>,
    }
    #[derive(Serialize)]
    struct SeriesEntry {
        algorithm: &'static str,
        mse: Vec<f64>,
    }
    let run = || -> Result<Response, String> {
        if points == 0 || seeds == 0 {
            return Err("points and seeds must be at least 1".into());
        }
        if max_samples / u64::from(points) < 2 {
            return Err("max_samples is too small for that many points".into());
        }
        let game = synthetic_game(SyntheticSpec::Glove {
            arity: 4,
            left: vec![0],
            right: vec![1, 2, 3],
        })
        .map_err(|e| e.to_string())?;
        let exact = exact_shapley(game.as_ref(), &ExactConfig::default())
            .map_err(|e| e.to_string())?
            .attributions;
        let step = max_samples / u64::from(points);
        let budgets: Vec<u64> = (1..=u64::from(points)).map(|k| k * step).collect();
        let options = EstimateOptions::default();
        let mut series = Vec::new();
        for algorithm in Algorithm::ALL_SAMPLING {
            let mut mse = Vec::with_capacity(budgets.len());
            for &samples in &budgets {
                let budget = budget_to_params(algorithm, samples, M_DEFAULT)
                    .map_err(|e| e.to_string())?;
                let mut total = 0.0;
                for rep in 0..u64::from(seeds) {
                    let run_seed = RngSeed(master_seed).derive(&[samples, rep]);
                    let est = estimate(game.as_ref(), &budget, run_seed, &options)
                        .map_err(|e| e.to_string())?;
                    total += est
                        .attributions
                        .iter()
                        .zip(&exact)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        / exact.len() as f64;
                }
                mse.push(total / f64::from(seeds));
            }
            series.push(SeriesEntry {
                algorithm: algorithm.as_str(),
                mse,
            });
        }
        Ok(Response { budgets, series })
    };
    match run() {
        Ok(r) => serde_json::to_string(&r).unwrap(),
        Err(e) => fail(e),
    }
}

/// Saliency grid for a seeded random net on a synthetic input row: signed
/// attribution values plus the red/blue pixel colors, ready for a canvas.
#[wasm_bindgen]
pub fn saliency_grid(
    width: u32,
    height: u32,
    model_seed: u64,
    algo: &str,
    samples: u64,
    seed: u64,
) -> String {
    #[derive(Serialize)]
    struct Response {
        width: u32,
        height: u32,
        predicted_class: usize,
        values: Vec<f64>,
        rgb: Vec<[u8; 3]>,
        params: String,
    }
    let run = || -> Result<Response, String> {
        let pixels = (width as usize) * (height as usize);
        if pixels == 0 || pixels > 64 {
            return Err("grid must have between 1 and 64 pixels".into());
        }
        let model = MlpModel::seeded(&[pixels + 1, 8, 3], RngSeed(model_seed));
        let dataset = DatasetTable::synthetic(pixels, 1, RngSeed(model_seed ^ 1));
        let algorithm = parse_algorithm(algo)?;
        let budget =
            budget_to_params(algorithm, samples, M_DEFAULT).map_err(|e| e.to_string())?;
        let config = SaliencyConfig {
            budget,
            seed: RngSeed(seed),
            shape: Some((width as usize, height as usize)),
            options: EstimateOptions::default(),
        };
        let map = run_saliency(&model, &dataset, 0, &config).map_err(|e| e.to_string())?;
        Ok(Response {
            width,
            height,
            predicted_class: map.predicted_class,
            rgb: saliency_rgb(&map.values),
            values: map.values,
            params: describe(&config.budget),
        })
    };
    match run() {
        Ok(r) => serde_json::to_string(&r).unwrap(),
        Err(e) => fail(e),
    }
}
