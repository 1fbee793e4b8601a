//! Model and baseline ingestion for the command line.

use serde::Deserialize;
use shapmc::models::{synthetic_game, MlpModel, SyntheticSpec};
use shapmc::{BaselineVector, Game, Result, ShapError};
use std::path::Path;

/// What a `--model` file turned out to contain.
pub enum ModelSource {
    Mlp(MlpModel),
    Game(Box<dyn Game>),
}

#[derive(Deserialize)]
struct GameFile {
    game: SyntheticSpec,
}

/// Loads a model file: `{"layers": ...}` is an MLP weight document,
/// `{"game": ...}` a closed-form game spec.
pub fn load_model_source(path: &Path) -> Result<ModelSource> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ShapError::Parse(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| ShapError::Parse(format!("model document: {e}")))?;
    if value.get("game").is_some() {
        let file: GameFile = serde_json::from_value(value)
            .map_err(|e| ShapError::Parse(format!("game document: {e}")))?;
        Ok(ModelSource::Game(synthetic_game(file.game)?))
    } else {
        Ok(ModelSource::Mlp(MlpModel::from_json(&text)?))
    }
}

/// Resolves `--baseline`: the literal "zero" or a file holding one line of
/// comma-separated reals, one per feature slot.
pub fn parse_baseline(spec: &str, len: usize) -> Result<BaselineVector> {
    if spec == "zero" {
        return Ok(BaselineVector::zeros(len));
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| ShapError::Parse(format!("{spec}: {e}")))?;
    let values = text
        .trim()
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| ShapError::Parse(format!("baseline entry {tok:?} is not a real")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != len {
        return Err(ShapError::Dimension(format!(
            "baseline has {} entries, input has {len}",
            values.len()
        )));
    }
    BaselineVector::new(values)
}

/// Parses `--steps`: a comma list (2,4,6) or an inclusive range
/// start:end:step (2:200:2).
pub fn parse_steps(spec: &str) -> Result<Vec<u64>> {
    let parse_one = |tok: &str| {
        tok.trim()
            .parse::<u64>()
            .map_err(|_| ShapError::Parse(format!("step {tok:?} is not a count")))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(ShapError::Parse(format!(
                "range {spec:?} is not start:end:step"
            )));
        }
        let (start, end, step) = (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if step == 0 {
            return Err(ShapError::Parse("range step must be positive".into()));
        }
        Ok((start..=end).step_by(step as usize).collect())
    } else {
        spec.split(',').map(parse_one).collect()
    }
}
