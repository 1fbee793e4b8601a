//! The coalition-value abstraction every estimator works against.

use crate::error::{Result, ShapError};
use crate::models::mlp::MlpModel;
use crate::types::{BaselineVector, CoalitionMask, FeatureVector};

/// A set function ν over the n+1 feature slots.
///
/// Implementations must be deterministic and cheap to call many times;
/// estimators evaluate a game thousands to millions of times per run.
pub trait Game: Send + Sync {
    /// Number of slots n+1 (bias plus real features).
    fn arity(&self) -> usize;

    /// ν(A) for the coalition described by `mask`. `mask.len()` must equal
    /// [`arity`](Self::arity).
    fn evaluate(&self, mask: &CoalitionMask) -> f64;

    fn name(&self) -> &str {
        "game"
    }
}

/// Blends `x` and `baseline` coordinatewise: present slots keep `x`, absent
/// slots fall back to the baseline.
pub fn apply_mask(
    mask: &CoalitionMask,
    x: &FeatureVector,
    baseline: &BaselineVector,
) -> Result<FeatureVector> {
    if mask.len() != x.len() || baseline.len() != x.len() {
        return Err(ShapError::Dimension(format!(
            "mask/input/baseline lengths disagree: {} / {} / {}",
            mask.len(),
            x.len(),
            baseline.len()
        )));
    }
    let values = mask
        .bits()
        .iter()
        .zip(x.values().iter().zip(baseline.values()))
        .map(|(&present, (&xv, &bv))| if present { xv } else { bv })
        .collect();
    FeatureVector::new(values)
}

/// A model, an input, and a baseline bound together as a coalition game:
/// ν(A) = model(blend of x and baseline under A)[class].
pub struct ModelGame<'a> {
    model: &'a MlpModel,
    x: FeatureVector,
    baseline: BaselineVector,
    class: usize,
    name: String,
}

/// Binds a model output class to an input/baseline pair.
///
/// Dimensions are checked here once so that evaluation inside sampling loops
/// stays infallible.
pub fn make_game<'a>(
    model: &'a MlpModel,
    x: &FeatureVector,
    baseline: &BaselineVector,
    class: usize,
) -> Result<ModelGame<'a>> {
    if model.input_dim() != x.len() {
        return Err(ShapError::Dimension(format!(
            "model expects {} inputs, feature vector has {}",
            model.input_dim(),
            x.len()
        )));
    }
    if baseline.len() != x.len() {
        return Err(ShapError::Dimension(format!(
            "baseline has {} entries, feature vector has {}",
            baseline.len(),
            x.len()
        )));
    }
    if class >= model.output_dim() {
        return Err(ShapError::IndexOutOfRange {
            what: "model output",
            index: class,
            len: model.output_dim(),
        });
    }
    Ok(ModelGame {
        model,
        x: x.clone(),
        baseline: baseline.clone(),
        class,
        name: format!("mlp[class={class}]"),
    })
}

impl Game for ModelGame<'_> {
    fn arity(&self) -> usize {
        self.x.len()
    }

    fn evaluate(&self, mask: &CoalitionMask) -> f64 {
        debug_assert_eq!(mask.len(), self.x.len());
        let blended: Vec<f64> = mask
            .bits()
            .iter()
            .zip(self.x.values().iter().zip(self.baseline.values()))
            .map(|(&present, (&xv, &bv))| if present { xv } else { bv })
            .collect();
        // Construction validated dimensions and finiteness, so the forward
        // pass cannot fail on inputs a mask can produce.
        self.model
            .forward(&blended)
            .expect("validated model rejected a masked input")[self.class]
    }

    fn name(&self) -> &str {
        &self.name
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xv(values: &[f64]) -> FeatureVector {
        FeatureVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn full_mask_returns_input() {
        let x = xv(&[1.0, 2.0, 3.0]);
        let b = BaselineVector::zeros(3);
        let out = apply_mask(&CoalitionMask::full(3), &x, &b).unwrap();
        assert_eq!(out.values(), x.values());
    }

    #[test]
    fn empty_mask_returns_baseline() {
        let x = xv(&[1.0, 2.0, 3.0]);
        let b = BaselineVector::new(vec![9.0, 8.0, 7.0]).unwrap();
        let out = apply_mask(&CoalitionMask::empty(3), &x, &b).unwrap();
        assert_eq!(out.values(), b.values());
    }

    #[test]
    fn mixed_mask_blends_coordinatewise() {
        let x = xv(&[1.0, 2.0, 3.0]);
        let b = BaselineVector::new(vec![-1.0, -2.0, -3.0]).unwrap();
        let mask = CoalitionMask::from_bits(vec![true, false, true]);
        let out = apply_mask(&mask, &x, &b).unwrap();
        assert_eq!(out.values(), &[1.0, -2.0, 3.0]);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let x = xv(&[1.0, 2.0, 3.0]);
        let b = BaselineVector::zeros(4);
        assert!(apply_mask(&CoalitionMask::full(3), &x, &b).is_err());
    }
}
