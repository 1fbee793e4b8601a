//! Minimal MLP forward-inference engine.
//!
//! Models are plain data: a stack of dense layers, each a row-major weight
//! matrix, a bias vector, and an activation. This is deliberately not a
//! training framework; it exists so attribution targets can be loaded from
//! disk, audited, and evaluated deterministically.

use crate::error::{Result, ShapError};
use crate::rng::{domain, RngSeed};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Sigmoid,
    Softmax,
    Linear,
}

impl Activation {
    fn parse(s: &str, layer: usize) -> Result<Self> {
        match s {
            "sigmoid" => Ok(Activation::Sigmoid),
            "softmax" => Ok(Activation::Softmax),
            "linear" => Ok(Activation::Linear),
            other => Err(ShapError::Parse(format!(
                "layer {layer}: unknown activation \"{other}\" (expected sigmoid, softmax, or linear)"
            ))),
        }
    }
}

/// Dense layer: `weights` has one row per output unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    pub fn output_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn input_dim(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MlpModel {
    pub layers: Vec<Layer>,
}

#[derive(Deserialize)]
struct RawModel {
    layers: Vec<RawLayer>,
}

#[derive(Deserialize)]
struct RawLayer {
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
    activation: String,
}

impl MlpModel {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        let model = Self { layers };
        model.validate()?;
        Ok(model)
    }

    /// Structural checks: consistent shapes, finite parameters, and softmax
    /// confined to the final layer.
    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(ShapError::Config("model has no layers".into()));
        }
        let last = self.layers.len() - 1;
        let mut expected_in: Option<usize> = None;
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.weights.is_empty() {
                return Err(ShapError::Config(format!("layer {i}: empty weight matrix")));
            }
            let in_dim = layer.weights[0].len();
            if in_dim == 0 {
                return Err(ShapError::Config(format!(
                    "layer {i}: weight rows have zero length"
                )));
            }
            if let Some(row) = layer.weights.iter().find(|row| row.len() != in_dim) {
                return Err(ShapError::Config(format!(
                    "layer {i}: ragged weight matrix (row of length {} among rows of length {in_dim})",
                    row.len()
                )));
            }
            if layer.bias.len() != layer.weights.len() {
                return Err(ShapError::Config(format!(
                    "layer {i}: {} bias entries for {} output units",
                    layer.bias.len(),
                    layer.weights.len()
                )));
            }
            if let Some(expected) = expected_in {
                if in_dim != expected {
                    return Err(ShapError::Dimension(format!(
                        "layer {i} expects {in_dim} inputs but layer {} produces {expected}",
                        i - 1
                    )));
                }
            }
            let finite = layer.weights.iter().flatten().all(|w| w.is_finite())
                && layer.bias.iter().all(|b| b.is_finite());
            if !finite {
                return Err(ShapError::Numeric(format!(
                    "layer {i}: non-finite weight or bias"
                )));
            }
            if layer.activation == Activation::Softmax && i != last {
                return Err(ShapError::Config(format!(
                    "layer {i}: softmax is only valid on the final layer"
                )));
            }
            expected_in = Some(layer.output_dim());
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].output_dim()
    }

    /// Runs the stack on `input` and returns the final layer's outputs.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        if input.len() != self.input_dim() {
            return Err(ShapError::Dimension(format!(
                "layer 0 expects {} inputs, got {}",
                self.input_dim(),
                input.len()
            )));
        }
        if !input.iter().all(|v| v.is_finite()) {
            return Err(ShapError::Numeric("non-finite model input".into()));
        }
        let mut current = input.to_vec();
        for layer in &self.layers {
            let mut out: Vec<f64> = layer
                .weights
                .iter()
                .zip(&layer.bias)
                .map(|(row, &b)| {
                    row.iter().zip(&current).map(|(&w, &v)| w * v).sum::<f64>() + b
                })
                .collect();
            match layer.activation {
                Activation::Sigmoid => {
                    for v in &mut out {
                        *v = sigmoid(*v);
                    }
                }
                Activation::Softmax => softmax_in_place(&mut out),
                Activation::Linear => {}
            }
            current = out;
        }
        if !current.iter().all(|v| v.is_finite()) {
            return Err(ShapError::Numeric(
                "forward pass produced a non-finite output".into(),
            ));
        }
        Ok(current)
    }

    /// Parses the canonical model document (JSON, top-level key `layers`).
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawModel = serde_json::from_str(text)
            .map_err(|e| ShapError::Parse(format!("model document: {e}")))?;
        let layers = raw
            .layers
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                Ok(Layer {
                    weights: l.weights,
                    bias: l.bias,
                    activation: Activation::parse(&l.activation, i)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(layers)
    }

    /// Serializes to the canonical document; finite weights round-trip

    /// bit-exactly through [`from_json`](Self::from_json).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    /// Deterministic random model on a fixed architecture.
    ///
    /// `layer_sizes` runs input to output, e.g. `[9, 13, 9, 2]`. Hidden
    /// layers are sigmoid; the output layer is softmax when it has at least
    /// two units, linear otherwise. Weights are uniform on ±sqrt(6/(fan_in +
    /// fan_out)), biases uniform on ±0.5, drawn row-major layer by layer.
    pub fn seeded(layer_sizes: &[usize], seed: RngSeed) -> MlpModel {
        assert!(
            layer_sizes.len() >= 2 && layer_sizes.iter().all(|&s| s > 0),
            "need at least input and output sizes, all positive"
        );
        let mut rng = seed.stream(domain::MODEL_GEN, 0, 0);
        let last = layer_sizes.len() - 2;
        let layers = layer_sizes
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let scale = (6.0 / (fan_in + fan_out) as f64).sqrt();
                let weights = (0..fan_out)
                    .map(|_| (0..fan_in).map(|_| rng.gen_range(-scale..scale)).collect())
                    .collect();
                let bias = (0..fan_out).map(|_| rng.gen_range(-0.5..0.5)).collect();
                let activation = if i < last {
                    Activation::Sigmoid
                } else if fan_out >= 2 {
                    Activation::Softmax
                } else {
                    Activation::Linear
                };
                Layer {
                    weights,
                    bias,
                    activation,
                }
            })
            .collect();
        MlpModel { layers }
    }
}

/// Loads a model document from disk.
pub fn load_model(path: &std::path::Path) -> Result<MlpModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ShapError::Parse(format!("{}: {e}", path.display())))?;
    MlpModel::from_json(&text)
}

/// Overflow-safe logistic function.
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Softmax with max subtraction so large logits cannot overflow.
fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in z.iter_mut() {
        *v /= sum;
    }
}
