//! Benchmark harnesses: estimation error versus the exact values, variance
//! decay across budgets, and saliency maps. Reports are plain data;
//! serialization lives with the CLI.
//!
//! Every estimate inside a harness runs from a seed derived as
//! (master, example, budget), so examples are independent work units and
//! results never depend on loop order.

use crate::error::{Result, ShapError};
use crate::exact::{exact_shapley, ExactConfig};
use crate::game::{make_game, Game, ModelGame};
use crate::models::{DatasetTable, MlpModel};
use crate::rng::{domain, RngSeed};
use crate::samplers::{budget_to_params, estimate, EstimateOptions, M_DEFAULT};
use crate::types::{Algorithm, BaselineVector, SamplingBudget};
use rand::Rng;
use serde::Serialize;

/// Parameters for [`run_mse_experiment`].
#[derive(Debug, Clone)]
pub struct MseConfig {
    /// Examples drawn without replacement from the dataset.
    pub example_count: usize,
    /// Equivalent-sample budgets to evaluate.
    pub budget_grid: Vec<u64>,
    /// Master seeds; per-seed MSEs are averaged in each report row.
    pub seeds: Vec<RngSeed>,
    /// Substream for drawing the example subset.
    pub selection_seed: RngSeed,
    pub algorithms: Vec<Algorithm>,
    pub exact: ExactConfig,
    pub options: EstimateOptions,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MseRow {
    pub algorithm: Algorithm,
    pub equivalent_samples: u64,
    /// Dataset row index the estimate was computed on.
    pub example: usize,
    /// Mean over features of squared error, averaged over seeds.
    pub mse: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MseReport {
    pub rows: Vec<MseRow>,
    /// Per-(algorithm, budget) mean of `mse` over examples.
    pub means: Vec<(Algorithm, u64, f64)>,
}

/// Parameters for [`run_variance_experiment`].
#[derive(Debug, Clone)]
pub struct VarianceConfig {
    pub example_count: usize,
    /// Equivalent-sample steps; must be even (grid methods run at M = 2) and
    /// strictly increasing, at least two entries.
    pub step_grid: Vec<u64>,
    pub seed: RngSeed,
    pub algorithms: Vec<Algorithm>,
    pub options: EstimateOptions,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VarianceRow {
    pub algorithm: Algorithm,
    pub step: u64,
    /// Population standard deviation over all estimates up to this step,
    /// averaged over features and then over examples.
    pub avg_running_std: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VarianceReport {
    pub rows: Vec<VarianceRow>,
}

/// Parameters for [`run_saliency`].
#[derive(Debug, Clone)]
pub struct SaliencyConfig {
    pub budget: SamplingBudget,
    pub seed: RngSeed,
    /// (width, height) when the features form an image; must multiply out to
    /// the real feature count (bias slot excluded).
    pub shape: Option<(usize, usize)>,
    pub options: EstimateOptions,
}

/// Raw signed attributions for one example; rendering is an export concern.
///
/// `values` covers the real features only: the bias slot is not a pixel, so
/// its attribution is dropped here.
#[derive(Debug, Clone, Serialize)]
pub struct SaliencyMap {
    pub values: Vec<f64>,
    pub shape: Option<(usize, usize)>,
    pub predicted_class: usize,
    pub algorithm: Algorithm,
    pub budget: SamplingBudget,
    pub seed: u64,
}

/// Draws `count` distinct row indices, in draw order.
fn select_examples(rows: usize, count: usize, seed: RngSeed) -> Vec<usize> {
    let mut rng = seed.stream(domain::EXAMPLE_SELECTION, 0, 0);
    let mut indices: Vec<usize> = (0..rows).collect();
    for i in 0..count {
        let j = rng.gen_range(i..rows);
        indices.swap(i, j);
    }
    indices.truncate(count);
    indices
}

fn check_examples(dataset: &DatasetTable, example_count: usize) -> Result<()> {
    if example_count == 0 {
        return Err(ShapError::Config("need at least one example".into()));
    }
    if example_count > dataset.len() {
        return Err(ShapError::Config(format!(
            "asked for {example_count} examples, dataset has {} rows",
            dataset.len()
        )));
    }
    Ok(())
}

/// Binds the model to a dataset row as a game over the predicted class.
fn bind_example<'a>(
    model: &'a MlpModel,
    dataset: &DatasetTable,
    row: usize,
) -> Result<(ModelGame<'a>, usize)> {
    let x = dataset.row(row)?;
    let output = model.forward(x.values())?;
    let class = output
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let baseline = BaselineVector::zeros(x.len());
    let game = make_game(model, x, &baseline, class)?;
    Ok((game, class))
}

/// Mean squared estimation error against exact values, per algorithm,
/// budget, and example.
pub fn run_mse_experiment(
    model: &MlpModel,
    dataset: &DatasetTable,
    config: &MseConfig,
) -> Result<MseReport> {
    check_examples(dataset, config.example_count)?;
    if config.budget_grid.is_empty() {
        return Err(ShapError::Config("budget grid is empty".into()));
    }
    if config.seeds.is_empty() {
        return Err(ShapError::Config("seed list is empty".into()));
    }
    if config.algorithms.is_empty() {
        return Err(ShapError::Config("algorithm list is empty".into()));
    }

    let examples = select_examples(dataset.len(), config.example_count, config.selection_seed);
    let mut bound = Vec::with_capacity(examples.len());
    for &e in &examples {
        let (game, _) = bind_example(model, dataset, e)?;
        let truth = exact_shapley(&game, &config.exact)?;
        bound.push((e, game, truth.attributions));
    }

    let mut rows = Vec::new();
    let mut means = Vec::new();
    for &algorithm in &config.algorithms {
        for &budget in &config.budget_grid {
            let params = budget_to_params(algorithm, budget, M_DEFAULT)?;
            let mut budget_sum = 0.0;
            for (e, game, truth) in &bound {
                let mut seed_sum = 0.0;
                for &master in &config.seeds {
                    let run_seed = master.derive(&[domain::EXPERIMENT_RUN, *e as u64, budget]);
                    let est = estimate(game, &params, run_seed, &config.options)?;
                    let sq: f64 = est
                        .attributions
                        .iter()
                        .zip(truth)
                        .map(|(a, t)| (a - t) * (a - t))
                        .sum();
                    seed_sum += sq / truth.len() as f64;
                }
                let mse = seed_sum / config.seeds.len() as f64;
                rows.push(MseRow {
                    algorithm,
                    equivalent_samples: budget,
                    example: *e,
                    mse,
                });
                budget_sum += mse;
            }
            means.push((algorithm, budget, budget_sum / bound.len() as f64));
        }
    }
    Ok(MseReport { rows, means })
}

/// Running dispersion of repeated estimates across an increasing budget
/// ladder.
pub fn run_variance_experiment(
    model: &MlpModel,
    dataset: &DatasetTable,
    config: &VarianceConfig,
) -> Result<VarianceReport> {
    check_examples(dataset, config.example_count)?;
    if config.algorithms.is_empty() {
        return Err(ShapError::Config("algorithm list is empty".into()));
    }
    if config.step_grid.len() < 2 {
        return Err(ShapError::Config(
            "step grid needs at least two step sizes".into(),
        ));
    }
    for pair in config.step_grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(ShapError::Config(
                "step grid must be strictly increasing".into(),
            ));
        }
    }
    for &step in &config.step_grid {
        if step == 0 || step % 2 != 0 {
            return Err(ShapError::Config(format!(
                "step sizes must be even and positive, got {step}"
            )));
        }
    }

    let examples = select_examples(dataset.len(), config.example_count, config.seed);
    let mut bound = Vec::with_capacity(examples.len());
    for &e in &examples {
        let (game, _) = bind_example(model, dataset, e)?;
        bound.push((e, game));
    }
    let arity = bound[0].1.arity();
    let steps = config.step_grid.len();

    let mut rows = Vec::new();
    for &algorithm in &config.algorithms {
        // per_step[k] accumulates the feature-averaged running std at step k
        // across examples.
        let mut per_step = vec![0.0; steps];
        for (e, game) in &bound {
            // history[k][j]: estimate of feature j at step k.
            let mut history = Vec::with_capacity(steps);
            for &step in &config.step_grid {
                let params = budget_to_params(algorithm, step, M_DEFAULT)?;
                let run_seed = config
                    .seed
                    .derive(&[domain::EXPERIMENT_RUN, *e as u64, step]);
                let est = estimate(game, &params, run_seed, &config.options)?;
                history.push(est.attributions);
            }
            for (k, acc) in per_step.iter_mut().enumerate() {
                let count = (k + 1) as f64;
                let mut feature_sum = 0.0;
                for j in 0..arity {
                    let mean: f64 =
                        history[..=k].iter().map(|h| h[j]).sum::<f64>() / count;
                    let var: f64 = history[..=k]
                        .iter()
                        .map(|h| (h[j] - mean) * (h[j] - mean))
                        .sum::<f64>()
                        / count;
                    feature_sum += var.sqrt();
                }
                *acc += feature_sum / arity as f64;
            }
        }
        for (k, acc) in per_step.iter().enumerate() {
            rows.push(VarianceRow {
                algorithm,
                step: config.step_grid[k],
                avg_running_std: acc / bound.len() as f64,
            });
        }
    }
    Ok(VarianceReport { rows })
}

/// Attribution of the predicted class for one dataset row.
pub fn run_saliency(
    model: &MlpModel,
    dataset: &DatasetTable,
    row: usize,
    config: &SaliencyConfig,
) -> Result<SaliencyMap> {
    let (game, class) = bind_example(model, dataset, row)?;
    let pixels = game.arity() - 1;
    if let Some((w, h)) = config.shape {
        if w == 0 || h == 0 || w * h != pixels {
            return Err(ShapError::Config(format!(
                "shape {w}x{h} does not cover {pixels} features"
            )));
        }
    }
    let est = estimate(&game, &config.budget, config.seed, &config.options)?;
    Ok(SaliencyMap {
        values: est.attributions[1..].to_vec(),
        shape: config.shape,
        predicted_class: class,
        algorithm: est.algorithm,
        budget: config.budget,
        seed: config.seed.0,
    })
}

/// Signed-value colormap: white at zero, toward red for positive, toward
/// blue for negative, scaled by the largest absolute value. An all-zero map
/// renders all white.
pub fn saliency_rgb(values: &[f64]) -> Vec<[u8; 3]> {
    let max_abs = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    values
        .iter()
        .map(|&v| {
            if max_abs == 0.0 {
                return [255, 255, 255];
            }
            let s = v / max_abs;
            let fade = 255 - (255.0 * s.abs()).floor() as u8;
            if s >= 0.0 {
                [255, fade, fade]
            } else {
                [fade, fade, 255]
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::mlp::{Activation, Layer};

    fn tiny_model() -> MlpModel {
        MlpModel::seeded(&[3, 4, 2], RngSeed(3))
    }

    /// Dyadic weights and inputs keep every sum exact, so estimator
    /// exactness on additive games shows up as bit-for-bit zeros.
    fn linear_fixture() -> (MlpModel, DatasetTable) {
        let model = MlpModel::new(vec![Layer {
            weights: vec![vec![0.5, 0.75]],
            bias: vec![0.0],
            activation: Activation::Linear,
        }])
        .unwrap();
        let data = DatasetTable::from_csv_str("x0,x1\n1.0,0.5\n1.0,0.25\n").unwrap();
        (model, data)
    }

    fn all_algorithms() -> Vec<Algorithm> {
        Algorithm::ALL_SAMPLING.to_vec()
    }

    fn mse_config(budgets: Vec<u64>) -> MseConfig {
        MseConfig {
            example_count: 2,
            budget_grid: budgets,
            seeds: vec![RngSeed(1), RngSeed(2)],
            selection_seed: RngSeed(0),
            algorithms: all_algorithms(),
            exact: ExactConfig::default(),
            options: EstimateOptions::default(),
        }
    }

    #[test]
    fn mse_report_has_full_grid_and_is_deterministic() {
        let model = tiny_model();
        let data = DatasetTable::synthetic(2, 5, RngSeed(4));
        let config = mse_config(vec![4, 8]);
        let a = run_mse_experiment(&model, &data, &config).unwrap();
        let b = run_mse_experiment(&model, &data, &config).unwrap();
        assert_eq!(a.rows.len(), 3 * 2 * 2);
        assert_eq!(a.means.len(), 3 * 2);
        assert!(a.rows.iter().all(|r| r.mse >= 0.0));
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn mse_is_exactly_zero_on_additive_games() {
        let (model, data) = linear_fixture();
        let config = mse_config(vec![2, 6]);
        let report = run_mse_experiment(&model, &data, &config).unwrap();
        for row in &report.rows {
            assert_eq!(row.mse, 0.0, "{:?}", row);
        }
    }

    #[test]
    fn mse_rejects_oversized_example_count() {
        let model = tiny_model();
        let data = DatasetTable::synthetic(2, 3, RngSeed(4));
        let mut config = mse_config(vec![4]);
        config.example_count = 9;
        assert!(matches!(
            run_mse_experiment(&model, &data, &config),
            Err(ShapError::Config(_))
        ));
    }

    fn variance_config(steps: Vec<u64>) -> VarianceConfig {
        VarianceConfig {
            example_count: 2,
            step_grid: steps,
            seed: RngSeed(9),
            algorithms: all_algorithms(),
            options: EstimateOptions::default(),
        }
    }

    #[test]
    fn variance_grid_is_validated() {
        let model = tiny_model();
        let data = DatasetTable::synthetic(2, 4, RngSeed(4));
        for steps in [vec![2], vec![2, 3], vec![4, 2], vec![2, 2], vec![0, 2]] {
            let config = variance_config(steps.clone());
            assert!(
                matches!(
                    run_variance_experiment(&model, &data, &config),
                    Err(ShapError::Config(_))
                ),
                "accepted {steps:?}"
            );
        }
    }

    #[test]
    fn variance_first_step_is_zero_and_linear_games_flatline() {
        let model = tiny_model();
        let data = DatasetTable::synthetic(2, 4, RngSeed(4));
        let report =
            run_variance_experiment(&model, &data, &variance_config(vec![2, 4, 6])).unwrap();
        assert_eq!(report.rows.len(), 3 * 3);
        for row in report.rows.iter().filter(|r| r.step == 2) {
            assert_eq!(row.avg_running_std, 0.0);
        }

        let (linear, data) = linear_fixture();
        let report =
            run_variance_experiment(&linear, &data, &variance_config(vec![2, 4, 8])).unwrap();
        for row in &report.rows {
            assert_eq!(row.avg_running_std, 0.0, "{:?}", row);
        }
    }

    #[test]
    fn saliency_zero_input_gives_zero_map() {
        let model = tiny_model();
        let data = DatasetTable::from_csv_str("x0,x1,x2\n0,0,0\n").unwrap();
        let config = SaliencyConfig {
            budget: SamplingBudget::Owen { q: 3, m: 2 },
            seed: RngSeed(0),
            shape: Some((2, 1)),
            options: EstimateOptions::default(),
        };
        let map = run_saliency(&model, &data, 0, &config).unwrap();
        assert_eq!(map.values, vec![0.0, 0.0]);
        assert_eq!(map.shape, Some((2, 1)));
    }

    #[test]
    fn saliency_null_feature_gets_exactly_zero() {
        // Column 2 never influences the output: a null player.
        let model = MlpModel::new(vec![Layer {
            weights: vec![vec![0.5, 1.0, 0.0], vec![-0.25, 2.0, 0.0]],
            bias: vec![0.0, 0.0],
            activation: Activation::Softmax,
        }])
        .unwrap();
        let data = DatasetTable::from_csv_str("x0,x1,x2\n1.0,0.5,0.75\n").unwrap();
        let config = SaliencyConfig {
            budget: SamplingBudget::Exact,
            seed: RngSeed(0),
            shape: None,
            options: EstimateOptions::default(),
        };
        let map = run_saliency(&model, &data, 0, &config).unwrap();
        assert_eq!(map.values[1], 0.0);
    }

    #[test]
    fn saliency_validates_row_and_shape() {
        let model = tiny_model();
        let data = DatasetTable::synthetic(2, 2, RngSeed(4));
        let config = SaliencyConfig {
            budget: SamplingBudget::Exact,
            seed: RngSeed(0),
            shape: None,
            options: EstimateOptions::default(),
        };
        assert!(matches!(
            run_saliency(&model, &data, 7, &config),
            Err(ShapError::IndexOutOfRange { .. })
        ));
        let bad_shape = SaliencyConfig {
            shape: Some((3, 1)),
            ..config
        };
        assert!(matches!(
            run_saliency(&model, &data, 0, &bad_shape),
            Err(ShapError::Config(_))
        ));
    }

    #[test]
    fn colormap_matches_hand_applied_mapping() {
        let rgb = saliency_rgb(&[1.0, -0.5, 0.25, 0.0]);
        assert_eq!(
            rgb,
            vec![[255, 0, 0], [128, 128, 255], [255, 192, 192], [255, 255, 255]]
        );
        assert_eq!(saliency_rgb(&[0.0, 0.0]), vec![[255; 3], [255; 3]]);
        assert!(saliency_rgb(&[]).is_empty());
    }
}
