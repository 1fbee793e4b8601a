//! Exact Shapley values by full coalition enumeration.
//!
//! All 2^(n+1) coalition values are tabulated once, then combined per
//! feature. Exponential in the feature count, so everything is gated by
//! [`ExactConfig::max_features`]; within the cap this is the ground truth
//! the samplers are measured against.

use crate::error::{Result, ShapError};
use crate::game::Game;
use crate::types::{Algorithm, CoalitionMask, EstimatorDiagnostics, ShapleyVector};

/// Cap on the feature count exact enumeration will accept.
#[derive(Debug, Clone, Copy)]
pub struct ExactConfig {
    /// Upper bound on n+1. The table costs 8·2^(n+1) bytes and one game
    /// evaluation per entry; 25 is a deliberate desk-scale ceiling.
    pub max_features: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self { max_features: 25 }
    }
}

/// Exact Shapley values of every slot.
///
/// Each value is Σ over coalitions A not containing the slot of
/// |A|!·(n−|A|)!/(n+1)! times the slot's marginal contribution to A. The
/// subset weights come from the ratio recurrence w(a+1) = w(a)·(a+1)/(n−a)
/// starting at w(0) = 1/(n+1), which stays in range for any arity the cap
/// admits.
pub fn exact_shapley(game: &dyn Game, config: &ExactConfig) -> Result<ShapleyVector> {
    let table = evaluation_table(game, config)?;
    let arity = game.arity();
    let n = arity - 1;
    let mut weights = vec![0.0; arity];
    weights[0] = 1.0 / arity as f64;
    for a in 0..n {
        weights[a + 1] = weights[a] * (a + 1) as f64 / (n - a) as f64;
    }

    let full = (1usize << arity) - 1;
    let mut attributions = vec![0.0; arity];
    for (j, out) in attributions.iter_mut().enumerate() {
        let bit = 1usize << j;
        let mut sum = 0.0;
        for mask in 0..=full {
            if mask & bit == 0 {
                sum += weights[mask.count_ones() as usize] * (table[mask | bit] - table[mask]);
            }
        }
        *out = sum;
    }

    debug_assert!(
        (attributions.iter().sum::<f64>() - (table[full] - table[0])).abs() < 1e-10,
        "efficiency violated"
    );
    Ok(ShapleyVector {
        attributions,
        algorithm: Algorithm::Exact,
        seed: None,
        diagnostics: exact_diagnostics(arity),
    })
}

/// Exact multilinear extension e_j(q): the expected marginal contribution of
/// slot `j` when every other slot is present independently with probability
/// `q`.
pub fn exact_multilinear_e(
    game: &dyn Game,
    j: usize,
    q: f64,
    config: &ExactConfig,
) -> Result<f64> {
    check_feature(game, j)?;
    if !(0.0..=1.0).contains(&q) {
        return Err(ShapError::Domain(format!(
            "membership probability {q} outside [0, 1]"
        )));
    }
    let table = evaluation_table(game, config)?;
    let arity = game.arity();
    let n = arity - 1;

    // Power tables with the 0^0 = 1 convention so q = 0 and q = 1 work.
    let mut q_pow = vec![1.0; arity];
    let mut p_pow = vec![1.0; arity];
    for a in 1..arity {
        q_pow[a] = q_pow[a - 1] * q;
        p_pow[a] = p_pow[a - 1] * (1.0 - q);
    }

    let bit = 1usize << j;
    let mut sum = 0.0;
    for mask in 0..1usize << arity {
        if mask & bit == 0 {
            let a = mask.count_ones() as usize;
            sum += q_pow[a] * p_pow[n - a] * (table[mask | bit] - table[mask]);
        }
    }
    Ok(sum)
}

/// Shapley value of slot `j` via the integral ∫₀¹ e_j(q) dq, evaluated in
/// closed form: each subset of size a contributes its marginal times
/// ∫₀¹ qᵃ(1−q)^(n−a) dq = a!·(n−a)!/(n+1)!.
///
/// Agrees with [`exact_shapley`] to within accumulation error; the Beta
/// weights are built from a factorial table rather than the ratio
/// recurrence, so the two routes check each other.
pub fn exact_integral_shapley(game: &dyn Game, j: usize, config: &ExactConfig) -> Result<f64> {
    check_feature(game, j)?;
    let table = evaluation_table(game, config)?;
    let arity = game.arity();
    let n = arity - 1;

    // n+1 ≤ 25 keeps factorials far below f64 overflow (25! ≈ 1.6e25).
    let mut factorial = vec![1.0; arity + 1];
    for k in 1..=arity {
        factorial[k] = factorial[k - 1] * k as f64;
    }
    let beta = |a: usize| factorial[a] * factorial[n - a] / factorial[n + 1];

    let bit = 1usize << j;
    let mut sum = 0.0;
    for mask in 0..1usize << arity {
        if mask & bit == 0 {
            let a = mask.count_ones() as usize;
            sum += beta(a) * (table[mask | bit] - table[mask]);
        }
    }
    Ok(sum)
}

/// ν tabulated over all masks; entry k is ν(mask with bit pattern k).
pub(crate) fn evaluation_table(game: &dyn Game, config: &ExactConfig) -> Result<Vec<f64>> {
    let arity = game.arity();
    if arity > config.max_features {
        return Err(ShapError::CapExceeded {
            arity,
            cap: config.max_features,
        });
    }
    let mut mask = CoalitionMask::empty(arity);
    Ok((0..1usize << arity)
        .map(|index| {
            mask.assign_index(index);
            game.evaluate(&mask)
        })
        .collect())
}

fn check_feature(game: &dyn Game, j: usize) -> Result<()> {
    if j >= game.arity() {
        return Err(ShapError::IndexOutOfRange {
            what: "feature",
            index: j,
            len: game.arity(),
        });
    }
    Ok(())
}

fn exact_diagnostics(arity: usize) -> EstimatorDiagnostics {
    EstimatorDiagnostics {
        model_evaluations: 1u64 << arity,
        marginal_samples_per_feature: 1u64 << (arity - 1),
        grid_points: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::synthetic::TableGame;
    use crate::rng::RngSeed;

    #[test]
    fn weights_sum_to_one_over_subsets() {
        // Σ_A w(|A|) over the 2^n subsets of the other features must be 1:
        // the weights are a probability distribution over permutations.
        for arity in 2..=10usize {
            let n = arity - 1;
            let mut w = vec![0.0; arity];
            w[0] = 1.0 / arity as f64;
            for a in 0..n {
                w[a + 1] = w[a] * (a + 1) as f64 / (n - a) as f64;
            }
            let total: f64 = (0..=n)
                .map(|a| {
                    let mut binom = 1.0;
                    for k in 0..a {
                        binom *= (n - k) as f64 / (k + 1) as f64;
                    }
                    binom * w[a]
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "arity {arity}: {total}");
        }
    }

    #[test]
    fn efficiency_holds_on_random_games() {
        let cfg = ExactConfig::default();
        for rep in 0..20 {
            let arity = 2 + (rep % 7) as usize;
            let game = TableGame::random(arity, -3.0, 3.0, RngSeed(rep));
            let sv = exact_shapley(&game, &cfg).unwrap();
            let full = CoalitionMask::full(arity);
            let empty = CoalitionMask::empty(arity);
            let expected = game.evaluate(&full) - game.evaluate(&empty);
            assert!((sv.attributions.iter().sum::<f64>() - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn feature_index_is_checked() {
        let game = TableGame::random(3, 0.0, 1.0, RngSeed(4));
        assert!(exact_multilinear_e(&game, 3, 0.5, &ExactConfig::default()).is_err());
        assert!(exact_integral_shapley(&game, 9, &ExactConfig::default()).is_err());
    }
}
