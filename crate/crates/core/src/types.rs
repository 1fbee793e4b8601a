//! Value types for coalitional attribution.
//!
//! Index 0 of every vector is the bias slot: a coordinate that conventionally
//! holds 1.0 and takes part in attribution exactly like a real feature. All
//! types here are immutable values; operations return new instances.

use crate::error::{Result, ShapError};
use serde::Serialize;

/// Input vector, bias slot at index 0 followed by the real features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
}

impl FeatureVector {
    /// Requires at least two entries (bias plus one feature), all finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(ShapError::Dimension(format!(
                "feature vector needs at least 2 entries (bias + features), got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(ShapError::Numeric(format!(
                "feature vector entry {i} is not finite"
            )));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Reference vector substituted for absent features. Defaults to all zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineVector {
    values: Vec<f64>,
}

impl BaselineVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![0.0; len],
        }
    }

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(ShapError::Numeric(format!(
                "baseline entry {i} is not finite"
            )));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Coalition membership over the n+1 slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalitionMask {
    bits: Vec<bool>,
}

impl CoalitionMask {
    pub fn empty(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn full(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Mask whose bit `j` is the j-th binary digit of `index`.
    ///
    /// Inverse of [`to_index`](Self::to_index); requires `len < usize::BITS`.
    pub fn from_index(index: usize, len: usize) -> Self {
        let bits = (0..len).map(|j| index >> j & 1 == 1).collect();
        Self { bits }
    }

    pub fn to_index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &b)| if b { acc | 1 << j } else { acc })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Copy of the mask with slot `j` forced present.
    pub fn with_feature(&self, j: usize) -> Result<Self> {
        if j >= self.bits.len() {
            return Err(ShapError::IndexOutOfRange {
                what: "mask",
                index: j,
                len: self.bits.len(),
            });
        }
        let mut bits = self.bits.clone();
        bits[j] = true;
        Ok(Self { bits })
    }

    /// Copy of the mask with slot `j` forced absent.
    pub fn without_feature(&self, j: usize) -> Result<Self> {
        if j >= self.bits.len() {
            return Err(ShapError::IndexOutOfRange {
                what: "mask",
                index: j,
                len: self.bits.len(),
            });
        }
        let mut bits = self.bits.clone();
        bits[j] = false;
        Ok(Self { bits })
    }

    /// Bitwise complement; the antithetic partner under membership sampling.
    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    pub(crate) fn set(&mut self, j: usize, present: bool) {
        self.bits[j] = present;
    }

    /// Reuses the allocation to take on the bit pattern of `index`.
    pub(crate) fn assign_index(&mut self, index: usize) {
        for (j, b) in self.bits.iter_mut().enumerate() {
            *b = index >> j & 1 == 1;
        }
    }
}

/// Attribution algorithms exposed by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Exact,
    Castro,
    Owen,
    HalvedOwen,
}

impl Algorithm {
    pub const ALL_SAMPLING: [Algorithm; 3] =
        [Algorithm::Castro, Algorithm::Owen, Algorithm::HalvedOwen];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Castro => "castro",
            Algorithm::Owen => "owen",
            Algorithm::HalvedOwen => "halved-owen",
        }
    }

    pub(crate) fn stream_domain(self) -> u64 {
        match self {
            Algorithm::Exact => 0,
            Algorithm::Castro => crate::rng::domain::CASTRO,
            Algorithm::Owen => crate::rng::domain::OWEN,
            Algorithm::HalvedOwen => crate::rng::domain::HALVED_OWEN,
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = ShapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Algorithm::Exact),
            "castro" => Ok(Algorithm::Castro),
            "owen" => Ok(Algorithm::Owen),
            "halved-owen" | "halved_owen" => Ok(Algorithm::HalvedOwen),
            other => Err(ShapError::Parse(format!(
                "unknown algorithm \"{other}\" (valid: exact, castro, owen, halved-owen)"
            ))),
        }
    }
}

/// Resolved sampling parameters for one estimator run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SamplingBudget {
    /// Full 2^(n+1) enumeration.
    Exact,
    /// `m_c` random permutations.
    Castro { m_c: u64 },
    /// Grid of `q + 1` membership probabilities, `m` masks per grid point.
    Owen { q: u64, m: u64 },
    /// Grid truncated at probability 0.5 with antithetic mask pairs.
    HalvedOwen { q: u64, m: u64 },
}

impl SamplingBudget {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            SamplingBudget::Exact => Algorithm::Exact,
            SamplingBudget::Castro { .. } => Algorithm::Castro,
            SamplingBudget::Owen { .. } => Algorithm::Owen,
            SamplingBudget::HalvedOwen { .. } => Algorithm::HalvedOwen,
        }
    }

    /// Realized equivalent-sample count under the M_c = Q·M convention.
    pub fn equivalent_samples(&self) -> Option<u64> {
        match *self {
            SamplingBudget::Exact => None,
            SamplingBudget::Castro { m_c } => Some(m_c),
            SamplingBudget::Owen { q, m } | SamplingBudget::HalvedOwen { q, m } => Some(q * m),
        }
    }
}

/// Exact work counters for one attribution run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EstimatorDiagnostics {
    /// Coalition value evaluations performed.
    pub model_evaluations: u64,
    /// Marginal-contribution samples accumulated per feature.
    pub marginal_samples_per_feature: u64,
    /// Membership-probability grid points visited (grid estimators only).
    pub grid_points: Option<u64>,
}

/// Attribution result: one signed value per slot, bias included at index 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapleyVector {
    pub attributions: Vec<f64>,
    pub algorithm: Algorithm,
    /// Master seed the estimate was drawn under; `None` for exact results.
    pub seed: Option<u64>,
    pub diagnostics: EstimatorDiagnostics,
}

impl ShapleyVector {
    pub fn len(&self) -> usize {
        self.attributions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributions.is_empty()
    }
}
