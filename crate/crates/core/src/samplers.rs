//! Monte Carlo Shapley estimators and budget translation.
//!
//! Three estimators share one contract: a pure function of (game,
//! parameters, seed) returning a [`ShapleyVector`] with exact work counters.
//! Budgets are compared across algorithms in "equivalent samples": M_c
//! permutations for the permutation walk versus Q·M for the grid methods.
//!
//! Reproducibility: each (grid point, repetition) or permutation draws from
//! its own ChaCha8 substream keyed by (master seed, algorithm, unit,
//! repetition), so estimates do not depend on evaluation order and the loops
//! could be parallelized without changing a single bit of output.

use crate::error::{Result, ShapError};
use crate::exact::{exact_shapley, ExactConfig};
use crate::game::Game;
use crate::rng::{bernoulli_bits, shuffle, RngSeed};
use crate::types::{
    Algorithm, CoalitionMask, EstimatorDiagnostics, SamplingBudget, ShapleyVector,
};

/// Default inner draw count for the grid methods. Budget comparisons across
/// algorithms assume M_c = Q·M with this M unless overridden.
pub const M_DEFAULT: u64 = 2;

/// Behavior switches for the permutation estimator.
#[derive(Debug, Clone, Copy)]
pub struct CastroOptions {
    /// Permute all n+1 slots (default). With `false`, the bias slot is held
    /// permanently present, permutations cover only the real features, and
    /// slot 0 receives attribution 0.
    pub permute_bias: bool,
}

impl Default for CastroOptions {
    fn default() -> Self {
        Self { permute_bias: true }
    }
}

/// Behavior switches for the grid estimators.
#[derive(Debug, Clone, Copy, Default)]
pub struct OwenOptions {
    /// Divide by Q·M instead of the actual number of accumulated marginal
    /// samples. Biased at small Q; off by default.
    pub compat_normalization: bool,
}

/// Permutation-sampling estimate from `m_c` random permutations.
///
/// Each permutation grows a coalition one slot at a time, crediting each
/// slot with the value change it causes: n+2 game evaluations per
/// permutation, one marginal sample per slot.
pub fn castro_sample(game: &dyn Game, m_c: u64, seed: RngSeed) -> Result<ShapleyVector> {
    castro_sample_with(game, m_c, seed, &CastroOptions::default())
}

pub fn castro_sample_with(
    game: &dyn Game,
    m_c: u64,
    seed: RngSeed,
    options: &CastroOptions,
) -> Result<ShapleyVector> {
    if m_c == 0 {
        return Err(ShapError::Budget("need at least 1 permutation".into()));
    }
    let arity = game.arity();
    let first = if options.permute_bias { 0 } else { 1 };
    let mut order: Vec<usize> = (first..arity).collect();
    let mut sums = vec![0.0; arity];
    let mut evaluations = 0u64;

    for p in 0..m_c {
        let mut rng = seed.stream(Algorithm::Castro.stream_domain(), p, 0);
        shuffle(&mut rng, &mut order);
        let mut mask = CoalitionMask::empty(arity);
        if !options.permute_bias {
            mask.set(0, true);
        }
        let mut prev = game.evaluate(&mask);
        evaluations += 1;
        for &j in &order {
            mask.set(j, true);
            let cur = game.evaluate(&mask);
            evaluations += 1;
            sums[j] += cur - prev;
            prev = cur;
        }
    }

    let scale = 1.0 / m_c as f64;
    Ok(ShapleyVector {
        attributions: sums.iter().map(|s| s * scale).collect(),
        algorithm: Algorithm::Castro,
        seed: Some(seed.0),
        diagnostics: EstimatorDiagnostics {
            model_evaluations: evaluations,
            marginal_samples_per_feature: m_c,
            grid_points: None,
        },
    })
}

/// Grid estimate over membership probabilities 0, 1/q, ..., 1 with `m`
/// Bernoulli masks per grid point.
///
/// One mask is shared by all slots at each draw; per slot the mask is
/// evaluated with that slot forced present and forced absent, so a draw
/// costs 2(n+1) evaluations and yields one marginal sample per slot.
pub fn owen_sample(game: &dyn Game, q: u64, m: u64, seed: RngSeed) -> Result<ShapleyVector> {
    owen_sample_with(game, q, m, seed, &OwenOptions::default())
}

pub fn owen_sample_with(
    game: &dyn Game,
    q: u64,
    m: u64,
    seed: RngSeed,
    options: &OwenOptions,
) -> Result<ShapleyVector> {
    check_grid_budget(q, m)?;
    let arity = game.arity();
    let mut sums = vec![0.0; arity];

    for i in 0..=q {
        let prob = i as f64 / q as f64;
        for rep in 0..m {
            let mut rng = seed.stream(Algorithm::Owen.stream_domain(), i, rep);
            let mut mask = CoalitionMask::from_bits(bernoulli_bits(&mut rng, arity, prob));
            accumulate_marginals(game, &mut mask, &mut sums);
        }
    }

    let samples = (q + 1) * m;
    let denom = if options.compat_normalization {
        (q * m) as f64
    } else {
        samples as f64
    };
    Ok(ShapleyVector {
        attributions: sums.iter().map(|s| s / denom).collect(),
        algorithm: Algorithm::Owen,
        seed: Some(seed.0),
        diagnostics: EstimatorDiagnostics {
            model_evaluations: samples * 2 * arity as u64,
            marginal_samples_per_feature: samples,
            grid_points: Some(q + 1),
        },
    })
}

/// Antithetic grid estimate: probabilities 0, 1/q, ..., 0.5, each mask
/// paired with its complement.
///
/// A Bern(q) mask's complement is Bern(1−q), so the truncated grid still
/// covers [0, 1] while the pairing cancels much of the per-draw noise.
pub fn halved_owen_sample(
    game: &dyn Game,
    q: u64,
    m: u64,
    seed: RngSeed,
) -> Result<ShapleyVector> {
    halved_owen_sample_with(game, q, m, seed, &OwenOptions::default())
}

pub fn halved_owen_sample_with(
    game: &dyn Game,
    q: u64,
    m: u64,
    seed: RngSeed,
    options: &OwenOptions,
) -> Result<ShapleyVector> {
    halved_owen_sample_observed(game, q, m, seed, options, |_, _| {})
}

/// [`halved_owen_sample_with`] with a hook observing every antithetic mask
/// pair before the per-slot overrides are applied. Lets tests verify the
/// coupling I + I' = all-ones without touching estimator internals.
pub fn halved_owen_sample_observed(
    game: &dyn Game,
    q: u64,
    m: u64,
    seed: RngSeed,
    options: &OwenOptions,
    mut observer: impl FnMut(&CoalitionMask, &CoalitionMask),
) -> Result<ShapleyVector> {
    check_grid_budget(q, m)?;
    let arity = game.arity();
    let mut sums = vec![0.0; arity];
    let mut grid_points = 0u64;

    for i in 0..=q {
        if 2 * i > q {
            break;
        }
        grid_points += 1;
        let prob = i as f64 / q as f64;
        for rep in 0..m {
            let mut rng = seed.stream(Algorithm::HalvedOwen.stream_domain(), i, rep);
            let mut mask = CoalitionMask::from_bits(bernoulli_bits(&mut rng, arity, prob));
            let mut partner = mask.complement();
            observer(&mask, &partner);
            accumulate_marginals(game, &mut mask, &mut sums);
            accumulate_marginals(game, &mut partner, &mut sums);
        }
    }

    let samples = 2 * grid_points * m;
    let denom = if options.compat_normalization {
        (q * m) as f64
    } else {
        samples as f64
    };
    Ok(ShapleyVector {
        attributions: sums.iter().map(|s| s / denom).collect(),
        algorithm: Algorithm::HalvedOwen,
        seed: Some(seed.0),
        diagnostics: EstimatorDiagnostics {
            model_evaluations: samples * 2 * arity as u64,
            marginal_samples_per_feature: samples,
            grid_points: Some(grid_points),
        },
    })
}

/// Adds ν(mask with slot present) − ν(mask with slot absent) to every
/// slot's sum. The mask is restored before returning.
fn accumulate_marginals(game: &dyn Game, mask: &mut CoalitionMask, sums: &mut [f64]) {
    for (j, sum) in sums.iter_mut().enumerate() {
        let original = mask.bit(j);
        mask.set(j, true);
        let with = game.evaluate(mask);
        mask.set(j, false);
        let without = game.evaluate(mask);
        mask.set(j, original);
        *sum += with - without;
    }
}

/// Monte Carlo estimate of the multilinear extension e_j(q) from `m`
/// Bernoulli(q) masks — the inner loop of the grid estimators in isolation.
pub fn estimate_multilinear_e(
    game: &dyn Game,
    j: usize,
    q: f64,
    m: u64,
    seed: RngSeed,
) -> Result<f64> {
    let arity = game.arity();
    if j >= arity {
        return Err(ShapError::IndexOutOfRange {
            what: "feature",
            index: j,
            len: arity,
        });
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(ShapError::Domain(format!(
            "membership probability {q} outside [0, 1]"
        )));
    }
    if m == 0 {
        return Err(ShapError::Budget("need at least 1 draw".into()));
    }
    let mut rng = seed.stream(crate::rng::domain::MULTILINEAR_POINT, j as u64, 0);
    let mut sum = 0.0;
    for _ in 0..m {
        let mut mask = CoalitionMask::from_bits(bernoulli_bits(&mut rng, arity, q));
        mask.set(j, true);
        let with = game.evaluate(&mask);
        mask.set(j, false);
        let without = game.evaluate(&mask);
        sum += with - without;
    }
    Ok(sum / m as f64)
}

/// Translates an equivalent-sample budget into concrete parameters:
/// M_c = `equivalent_samples` for the permutation walk, Q =
/// `equivalent_samples`/`m_default` (rounded down) with M = `m_default` for
/// the grid methods. The realized count is recoverable via
/// [`SamplingBudget::equivalent_samples`].
pub fn budget_to_params(
    algorithm: Algorithm,
    equivalent_samples: u64,
    m_default: u64,
) -> Result<SamplingBudget> {
    match algorithm {
        Algorithm::Exact => Ok(SamplingBudget::Exact),
        Algorithm::Castro => {
            if equivalent_samples == 0 {
                return Err(ShapError::Budget("need at least 1 equivalent sample".into()));
            }
            Ok(SamplingBudget::Castro {
                m_c: equivalent_samples,
            })
        }
        Algorithm::Owen | Algorithm::HalvedOwen => {
            if m_default == 0 {
                return Err(ShapError::Budget("inner draw count M must be at least 1".into()));
            }
            let q = equivalent_samples / m_default;
            if q == 0 {
                return Err(ShapError::Budget(format!(
                    "{equivalent_samples} equivalent samples is below one grid step at M = {m_default}"
                )));
            }
            Ok(match algorithm {
                Algorithm::Owen => SamplingBudget::Owen { q, m: m_default },
                _ => SamplingBudget::HalvedOwen { q, m: m_default },
            })
        }
    }
}

/// Options threaded through [`estimate`] to whichever algorithm runs.
#[derive(Debug, Clone, Copy, Default)]
pub struct EstimateOptions {
    pub owen: OwenOptions,
    pub castro: CastroOptions,
    pub exact: ExactConfig,
}

/// Runs the algorithm selected by `budget`.
pub fn estimate(
    game: &dyn Game,
    budget: &SamplingBudget,
    seed: RngSeed,
    options: &EstimateOptions,
) -> Result<ShapleyVector> {
    match *budget {
        SamplingBudget::Exact => exact_shapley(game, &options.exact),
        SamplingBudget::Castro { m_c } => castro_sample_with(game, m_c, seed, &options.castro),
        SamplingBudget::Owen { q, m } => owen_sample_with(game, q, m, seed, &options.owen),
        SamplingBudget::HalvedOwen { q, m } => {
            halved_owen_sample_with(game, q, m, seed, &options.owen)
        }
    }
}

fn check_grid_budget(q: u64, m: u64) -> Result<()> {
    if q == 0 {
        return Err(ShapError::Budget("grid resolution Q must be at least 1".into()));
    }
    if m == 0 {
        return Err(ShapError::Budget("inner draw count M must be at least 1".into()));
    }
    Ok(())
}
