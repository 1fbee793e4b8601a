//! Shapley value attribution for black-box models.
//!
//! The value of a prediction is split across input features by treating the
//! model as a cooperative game over feature coalitions: absent features are
//! replaced by baseline values and each feature is credited with a weighted
//! average of its marginal contributions. The crate provides the exact
//! enumeration engine plus three Monte Carlo estimators built on the
//! multilinear extension of the game:
//!
//! - [`samplers::castro_sample`]: uniform random permutations, one marginal
//!   contribution per feature per permutation.
//! - [`samplers::owen_sample`]: a Riemann grid over membership probability q,
//!   with Bernoulli(q) coalition masks at every grid point.
//! - [`samplers::halved_owen_sample`]: the grid truncated at q = 0.5, each
//!   mask paired with its complement (antithetic variates), halving the grid
//!   at equal budget and reducing variance.
//!
//! Slot 0 of every vector is a bias coordinate that participates in
//! attribution like any feature; callers that do not want it can drop index
//! 0 from results. Everything downstream of a master seed is deterministic:
//! fixed (game, parameters, seed) reproduce bitwise-identical estimates.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod game;
pub mod models;
pub mod rng;
pub mod samplers;
pub mod types;

pub use error::{Result, ShapError};
pub use exact::{exact_integral_shapley, exact_multilinear_e, exact_shapley, ExactConfig};
pub use experiments::{
    run_mse_experiment, run_saliency, run_variance_experiment, saliency_rgb, MseConfig,
    MseReport, MseRow, SaliencyConfig, SaliencyMap, VarianceConfig, VarianceReport, VarianceRow,
};
pub use game::{apply_mask, make_game, Game, ModelGame};
pub use rng::RngSeed;
pub use samplers::{
    budget_to_params, castro_sample, estimate, estimate_multilinear_e, halved_owen_sample,
    owen_sample, CastroOptions, EstimateOptions, OwenOptions, M_DEFAULT,
};
pub use types::{
    Algorithm, BaselineVector, CoalitionMask, EstimatorDiagnostics, FeatureVector,
    SamplingBudget, ShapleyVector,
};
