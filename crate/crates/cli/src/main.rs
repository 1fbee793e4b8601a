//! `shapmc`: Shapley value attribution from the command line.
//!
//! Exit codes: 0 success, 2 usage or parse problems, 3 budget or capability
//! limits. Every output is byte-deterministic given the same inputs, flags,
//! and seed.

use clap::{Args, Parser, Subcommand};
use shapmc::models::load_dataset;
use shapmc::{
    budget_to_params, estimate, make_game, Algorithm, EstimateOptions, ExactConfig, MseConfig,
    OwenOptions, Result, RngSeed, SaliencyConfig, SamplingBudget, ShapError, ShapleyVector,
    VarianceConfig, M_DEFAULT,
};
use shapmc_cli::input::{load_model_source, parse_baseline, parse_steps, ModelSource};
use shapmc_cli::output;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "shapmc",
    version,
    about = "Shapley value attribution for black-box models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Attribute one prediction across its input feature slots.
    Attribute(AttributeArgs),
    /// Benchmark harnesses writing CSV reports.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Signed attribution map for one example, as CSV and optional pixmap.
    Saliency(SaliencyArgs),
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Mean squared estimation error against exact values.
    Mse(MseArgs),
    /// Running dispersion of estimates across a budget ladder.
    Variance(VarianceArgs),
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    Algorithm::from_str(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct BudgetArgs {
    /// Algorithm: exact, castro, owen, or halved-owen.
    #[arg(long, default_value = "exact", value_parser = parse_algorithm)]
    algo: Algorithm,
    /// Equivalent-sample budget, translated per algorithm (castro: M_c = N;
    /// owen variants: Q = N/2 with M = 2).
    #[arg(long, conflicts_with_all = ["q", "m", "mc"])]
    samples: Option<u64>,
    /// Grid resolution override for the owen variants.
    #[arg(long)]
    q: Option<u64>,
    /// Inner draws per grid point for the owen variants (default 2).
    #[arg(long)]
    m: Option<u64>,
    /// Permutation count override for castro.
    #[arg(long)]
    mc: Option<u64>,
}

impl BudgetArgs {
    fn resolve(&self) -> Result<SamplingBudget> {
        let stray_grid = self.q.is_some() || self.m.is_some();
        match self.algo {
            Algorithm::Exact => {
                if self.samples.is_some() || stray_grid || self.mc.is_some() {
                    return Err(ShapError::Config(
                        "--algo exact enumerates every coalition and takes no sampling budget"
                            .into(),
                    ));
                }
                Ok(SamplingBudget::Exact)
            }
            Algorithm::Castro => {
                if stray_grid {
                    return Err(ShapError::Config(
                        "--q/--m apply to the owen variants; castro takes --samples or --mc"
                            .into(),
                    ));
                }
                match (self.samples, self.mc) {
                    (Some(n), None) => budget_to_params(Algorithm::Castro, n, M_DEFAULT),
                    (None, Some(0)) => {
                        Err(ShapError::Budget("need at least 1 permutation".into()))
                    }
                    (None, Some(m_c)) => Ok(SamplingBudget::Castro { m_c }),
                    _ => Err(ShapError::Config("castro needs --samples or --mc".into())),
                }
            }
            algo => {
                if self.mc.is_some() {
                    return Err(ShapError::Config(
                        "--mc applies to castro; the owen variants take --samples or --q/--m"
                            .into(),
                    ));
                }
                match (self.samples, self.q) {
                    (Some(n), None) => budget_to_params(algo, n, M_DEFAULT),
                    (None, Some(0)) => Err(ShapError::Budget(
                        "grid resolution Q must be at least 1".into(),
                    )),
                    (None, Some(q)) => {
                        let m = self.m.unwrap_or(M_DEFAULT);
                        if m == 0 {
                            return Err(ShapError::Budget(
                                "inner draw count M must be at least 1".into(),
                            ));
                        }
                        Ok(match algo {
                            Algorithm::Owen => SamplingBudget::Owen { q, m },
                            _ => SamplingBudget::HalvedOwen { q, m },
                        })
                    }
                    (None, None) => Err(ShapError::Config(format!(
                        "{algo} needs --samples or --q (with optional --m)"
                    ))),
                    _ => unreachable!("--samples conflicts with --q"),
                }
            }
        }
    }
}

#[derive(Args)]
struct AttributeArgs {
    /// Model file: MLP weights ({"layers": ...}) or a game spec ({"game": ...}).
    #[arg(long)]
    model: PathBuf,
    /// Dataset CSV; required for MLP models.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Row of --data to explain.
    #[arg(long)]
    row: Option<usize>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Absent-slot fill: "zero" or a file with one comma-separated line.
    #[arg(long, default_value = "zero")]
    baseline: String,
    /// Output class: an index or "predicted".
    #[arg(long, default_value = "predicted")]
    class: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Divide grid estimates by Q*M instead of the actual sample count.
    #[arg(long)]
    compat_normalization: bool,
    /// Drop the bias slot (feature 0) from the output rows.
    #[arg(long)]
    exclude_bias: bool,
}

#[derive(Args)]
struct MseArgs {
    /// MLP weights file.
    #[arg(long)]
    model: PathBuf,
    /// Dataset CSV.
    #[arg(long)]
    data: PathBuf,
    /// Examples drawn from the dataset without replacement.
    #[arg(long, default_value_t = 10)]
    examples: usize,
    /// Comma-separated equivalent-sample budgets, e.g. 100,500,2000.
    #[arg(long, required = true, value_delimiter = ',')]
    budgets: Vec<u64>,
    /// Comma-separated master seeds; rows average over them.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    /// Substream for choosing the example subset.
    #[arg(long, default_value_t = 0)]
    selection_seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    compat_normalization: bool,
}

#[derive(Args)]
struct VarianceArgs {
    /// MLP weights file.
    #[arg(long)]
    model: PathBuf,
    /// Dataset CSV.
    #[arg(long)]
    data: PathBuf,
    /// Examples drawn from the dataset without replacement.
    #[arg(long, default_value_t = 10)]
    examples: usize,
    /// Budget steps: a comma list (2,4,6) or inclusive range 2:200:2.
    #[arg(long, required = true)]
    steps: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    compat_normalization: bool,
}

#[derive(Args)]
struct SaliencyArgs {
    /// MLP weights file.
    #[arg(long)]
    model: PathBuf,
    /// Dataset CSV.
    #[arg(long)]
    data: PathBuf,
    /// Row of --data to map.
    #[arg(long)]
    row: usize,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Image width; with --height, also writes a pixmap.
    #[arg(long, requires = "height")]
    width: Option<usize>,
    /// Image height.
    #[arg(long, requires = "width")]
    height: Option<usize>,
    /// Pixmap file when --width/--height are set (raw values land next to
    /// it with a .csv extension); otherwise the CSV file itself.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    compat_normalization: bool,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Attribute(args) => cmd_attribute(args),
        Command::Experiment(ExperimentCommand::Mse(args)) => cmd_mse(args),
        Command::Experiment(ExperimentCommand::Variance(args)) => cmd_variance(args),
        Command::Saliency(args) => cmd_saliency(args),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e}");
        let code = match e {
            ShapError::Budget(_) | ShapError::CapExceeded { .. } => 3,
            _ => 2,
        };
        std::process::exit(code);
    }
}

fn options_with(compat: bool) -> EstimateOptions {
    EstimateOptions {
        owen: OwenOptions {
            compat_normalization: compat,
        },
        ..EstimateOptions::default()
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| ShapError::Parse(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn describe_params(budget: &SamplingBudget) -> String {
    match budget {
        SamplingBudget::Exact => "full enumeration".into(),
        SamplingBudget::Castro { m_c } => format!("M_c={m_c}"),
        SamplingBudget::Owen { q, m } | SamplingBudget::HalvedOwen { q, m } => {
            format!("Q={q}, M={m}")
        }
    }
}

fn report_diagnostics(sv: &ShapleyVector, budget: &SamplingBudget) {
    let d = &sv.diagnostics;
    let mut line = format!(
        "algorithm={} params: {} evaluations={} marginal_samples={}",
        sv.algorithm.as_str(),
        describe_params(budget),
        d.model_evaluations,
        d.marginal_samples_per_feature
    );
    if let Some(g) = d.grid_points {
        line.push_str(&format!(" grid_points={g}"));
    }
    if let Some(seed) = sv.seed {
        line.push_str(&format!(" seed={seed}"));
    }
    eprintln!("{line}");
}

fn predicted_class(model: &shapmc::models::MlpModel, x: &shapmc::FeatureVector) -> Result<usize> {
    let out = model.forward(x.values())?;
    Ok(out
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0))
}

fn cmd_attribute(args: AttributeArgs) -> Result<()> {
    let source = load_model_source(&args.model)?;
    let budget = args.budget.resolve()?;
    let options = options_with(args.compat_normalization);
    let (names, sv) = match source {
        ModelSource::Game(game) => {
            let names: Vec<String> = (0..game.arity()).map(|j| format!("x{j}")).collect();
            let sv = estimate(game.as_ref(), &budget, RngSeed(args.seed), &options)?;
            (names, sv)
        }
        ModelSource::Mlp(model) => {
            let data = args.data.as_ref().ok_or_else(|| {
                ShapError::Config("--data is required to explain an MLP model".into())
            })?;
            let row = args.row.ok_or_else(|| {
                ShapError::Config("--row selects which dataset row to explain".into())
            })?;
            let dataset = load_dataset(data)?;
            let x = dataset.row(row)?;
            let baseline = parse_baseline(&args.baseline, x.len())?;
            let class = match args.class.as_str() {
                "predicted" => predicted_class(&model, x)?,
                other => other.parse::<usize>().map_err(|_| {
                    ShapError::Parse(format!(
                        "class {other:?} is neither an index nor \"predicted\""
                    ))
                })?,
            };
            let game = make_game(&model, x, &baseline, class)?;
            let sv = estimate(&game, &budget, RngSeed(args.seed), &options)?;
            (dataset.feature_names.clone(), sv)
        }
    };
    report_diagnostics(&sv, &budget);
    write_text(
        args.out.as_deref(),
        &output::attribution_csv(&names, &sv, args.exclude_bias),
    )
}

fn cmd_mse(args: MseArgs) -> Result<()> {
    let model = shapmc::models::load_model(&args.model)?;
    let dataset = load_dataset(&args.data)?;
    let config = MseConfig {
        example_count: args.examples,
        budget_grid: args.budgets,
        seeds: args.seeds.iter().copied().map(RngSeed).collect(),
        selection_seed: RngSeed(args.selection_seed),
        algorithms: Algorithm::ALL_SAMPLING.to_vec(),
        exact: ExactConfig::default(),
        options: options_with(args.compat_normalization),
    };
    let report = shapmc::run_mse_experiment(&model, &dataset, &config)?;
    for (algo, budget, mean) in &report.means {
        eprintln!(
            "mean over examples: algorithm={} equivalent_samples={budget} mse={}",
            algo.as_str(),
            output::real(*mean)
        );
    }
    write_text(args.out.as_deref(), &output::mse_csv(&report))
}

fn cmd_variance(args: VarianceArgs) -> Result<()> {
    let model = shapmc::models::load_model(&args.model)?;
    let dataset = load_dataset(&args.data)?;
    let config = VarianceConfig {
        example_count: args.examples,
        step_grid: parse_steps(&args.steps)?,
        seed: RngSeed(args.seed),
        algorithms: Algorithm::ALL_SAMPLING.to_vec(),
        options: options_with(args.compat_normalization),
    };
    let report = shapmc::run_variance_experiment(&model, &dataset, &config)?;
    write_text(args.out.as_deref(), &output::variance_csv(&report))
}

fn cmd_saliency(args: SaliencyArgs) -> Result<()> {
    let model = shapmc::models::load_model(&args.model)?;
    let dataset = load_dataset(&args.data)?;
    let shape = match (args.width, args.height) {
        (Some(w), Some(h)) => Some((w, h)),
        _ => None,
    };
    let config = SaliencyConfig {
        budget: args.budget.resolve()?,
        seed: RngSeed(args.seed),
        shape,
        options: options_with(args.compat_normalization),
    };
    let map = shapmc::run_saliency(&model, &dataset, args.row, &config)?;
    eprintln!(
        "predicted_class={} algorithm={} params: {} seed={}",
        map.predicted_class,
        map.algorithm.as_str(),
        describe_params(&config.budget),
        map.seed
    );
    let csv = output::saliency_csv(&dataset.feature_names, &map);
    match shape {
        Some((w, h)) => {
            let ppm_path = args.out.as_deref().ok_or_else(|| {
                ShapError::Config("--out is required to write a pixmap".into())
            })?;
            write_text(Some(ppm_path), &output::ppm(&map.values, w, h))?;
            write_text(Some(&ppm_path.with_extension("csv")), &csv)
        }
        None => write_text(args.out.as_deref(), &csv),
    }
}
