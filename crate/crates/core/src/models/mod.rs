//! Attribution targets: the MLP inference engine, dataset ingestion, and
//! closed-form oracle games.

pub mod dataset;
pub mod mlp;
pub mod synthetic;

pub use dataset::{load_dataset, DatasetTable};
pub use mlp::{load_model, Activation, Layer, MlpModel};
pub use synthetic::{synthetic_game, SyntheticSpec, TableGame};
