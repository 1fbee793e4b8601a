//! Closed-form cooperative games used as test oracles.

use crate::error::{Result, ShapError};
use crate::game::Game;
use crate::rng::{domain, RngSeed};
use crate::types::CoalitionMask;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Recipe accepted by [`synthetic_game`]. Serializes with a snake_case
/// variant tag so game fixture files read naturally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticSpec {
    /// ν(A) = Σ_{i∈A} w_i.
    Linear { weights: Vec<f64> },
    /// ν(A) = 1 iff every member is present.
    Unanimity { arity: usize, members: Vec<usize> },
    /// ν(A) = 1 iff A holds at least one left and one right glove.
    Glove {
        arity: usize,
        left: Vec<usize>,
        right: Vec<usize>,
    },
    /// ν(A) = 1 iff Σ_{i∈A} w_i ≥ quota.
    WeightedVoting { weights: Vec<f64>, quota: f64 },
}

/// Builds the game described by `spec`, validating its dimensions.
pub fn synthetic_game(spec: SyntheticSpec) -> Result<Box<dyn Game>> {
    match spec {
        SyntheticSpec::Linear { weights } => {
            if weights.len() < 2 {
                return Err(ShapError::Config(
                    "linear game needs at least 2 weights".into(),
                ));
            }
            if !weights.iter().all(|w| w.is_finite()) {
                return Err(ShapError::Config("linear game weight not finite".into()));
            }
            Ok(Box::new(LinearGame { weights }))
        }
        SyntheticSpec::Unanimity { arity, members } => {
            check_members(arity, &members, "unanimity member")?;
            Ok(Box::new(UnanimityGame { arity, members }))
        }
        SyntheticSpec::Glove { arity, left, right } => {
            check_members(arity, &left, "glove left")?;
            check_members(arity, &right, "glove right")?;
            if left.iter().any(|i| right.contains(i)) {
                return Err(ShapError::Config(
                    "glove sides must be disjoint".into(),
                ));
            }
            Ok(Box::new(GloveGame { arity, left, right }))
        }
        SyntheticSpec::WeightedVoting { weights, quota } => {
            if weights.len() < 2 {
                return Err(ShapError::Config(
                    "weighted voting needs at least 2 weights".into(),
                ));
            }
            if !weights.iter().all(|w| w.is_finite()) || !quota.is_finite() {
                return Err(ShapError::Config("voting weight or quota not finite".into()));
            }
            if quota <= 0.0 {
                return Err(ShapError::Config("voting quota must be positive".into()));
            }
            Ok(Box::new(WeightedVotingGame { weights, quota }))
        }
    }
}

fn check_members(arity: usize, members: &[usize], what: &str) -> Result<()> {
    if members.is_empty() {
        return Err(ShapError::Config(format!("{what} set is empty")));
    }
    if let Some(&i) = members.iter().find(|&&i| i >= arity) {
        return Err(ShapError::Config(format!(
            "{what} {i} out of range for arity {arity}"
        )));
    }
    Ok(())
}

struct LinearGame {
    weights: Vec<f64>,
}

impl Game for LinearGame {
    fn arity(&self) -> usize {
        self.weights.len()
    }

    fn evaluate(&self, mask: &CoalitionMask) -> f64 {
        mask.bits()
            .iter()
            .zip(&self.weights)
            .filter(|(&b, _)| b)
            .map(|(_, &w)| w)
            .sum()
    }

    fn name(&self) -> &str {
        "linear"
    }
}

struct UnanimityGame {
    arity: usize,
    members: Vec<usize>,
}

impl Game for UnanimityGame {
    fn arity(&self) -> usize {
        self.arity
    }

    fn evaluate(&self, mask: &CoalitionMask) -> f64 {
        if self.members.iter().all(|&i| mask.bit(i)) {
            1.0
        } else {
            0.0
        }
    }

    fn name(&self) -> &str {
        "unanimity"
    }
}

struct GloveGame {
    arity: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Game for GloveGame {
    fn arity(&self) -> usize {
        self.arity
    }

    fn evaluate(&self, mask: &CoalitionMask) -> f64 {
        let has_left = self.left.iter().any(|&i| mask.bit(i));
        let has_right = self.right.iter().any(|&i| mask.bit(i));
        if has_left && has_right {
            1.0
        } else {
            0.0
        }
    }

    fn name(&self) -> &str {
        "glove"
    }
}

struct WeightedVotingGame {
    weights: Vec<f64>,
    quota: f64,
}

impl Game for WeightedVotingGame {
    fn arity(&self) -> usize {
        self.weights.len()
    }

    fn evaluate(&self, mask: &CoalitionMask) -> f64 {
        let total: f64 = mask
            .bits()
            .iter()
            .zip(&self.weights)
            .filter(|(&b, _)| b)
            .map(|(_, &w)| w)
            .sum();
        if total >= self.quota {
            1.0
        } else {
            0.0
        }
    }

    fn name(&self) -> &str {
        "weighted-voting"
    }
}

/// Arbitrary game given by an explicit value table indexed by mask bits.
///
/// The table has one entry per coalition; entry k is ν of the mask whose
/// bit pattern is k (bit 0 = slot 0).
pub struct TableGame {
    arity: usize,
    values: Vec<f64>,
}

impl TableGame {
    pub fn new(arity: usize, values: Vec<f64>) -> Result<Self> {
        if arity < 2 || arity > 25 {
            return Err(ShapError::Config(format!(
                "table game arity {arity} outside 2..=25"
            )));
        }
        if values.len() != 1 << arity {
            return Err(ShapError::Dimension(format!(
                "table game needs {} values for arity {arity}, got {}",
                1usize << arity,
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(ShapError::Numeric("table game value not finite".into()));
        }
        Ok(Self { arity, values })
    }

    /// Deterministic random table with values uniform on `[lo, hi)`.
    pub fn random(arity: usize, lo: f64, hi: f64, seed: RngSeed) -> Self {
        assert!((2..=25).contains(&arity) && lo < hi);
        let mut rng = seed.stream(domain::GAME_GEN, 0, 0);
        let values = (0..1usize << arity).map(|_| rng.gen_range(lo..hi)).collect();
        Self { arity, values }
    }

    /// Same game with the roles of slots `i` and `j` swapped in every
    /// coalition averaged in, making the two slots exchangeable.
    pub fn symmetrized(&self, i: usize, j: usize) -> Self {
        let swap = |mask: usize| {
            let (bi, bj) = (mask >> i & 1, mask >> j & 1);
            mask & !(1 << i) & !(1 << j) | bj << i | bi << j
        };
        let values = (0..self.values.len())
            .map(|k| 0.5 * (self.values[k] + self.values[swap(k)]))
            .collect();
        Self {
            arity: self.arity,
            values,
        }
    }
}

impl Game for TableGame {
    fn arity(&self) -> usize {
        self.arity
    }

    fn evaluate(&self, mask: &CoalitionMask) -> f64 {
        self.values[mask.to_index()]
    }

    fn name(&self) -> &str {
        "table"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask_of(indices: &[usize], arity: usize) -> CoalitionMask {
        let mut bits = vec![false; arity];
        for &i in indices {
            bits[i] = true;
        }
        CoalitionMask::from_bits(bits)
    }

    #[test]
    fn linear_sums_present_weights() {
        let game = synthetic_game(SyntheticSpec::Linear {
            weights: vec![1.0, 2.0],
        })
        .unwrap();
        assert_eq!(game.evaluate(&mask_of(&[1], 2)), 2.0);
        assert_eq!(game.evaluate(&mask_of(&[0, 1], 2)), 3.0);
    }

    #[test]
    fn unanimity_requires_every_member() {
        let game = synthetic_game(SyntheticSpec::Unanimity {
            arity: 2,
            members: vec![0, 1],
        })
        .unwrap();
        assert_eq!(game.evaluate(&mask_of(&[0], 2)), 0.0);
        assert_eq!(game.evaluate(&mask_of(&[0, 1], 2)), 1.0);
    }

    #[test]
    fn weighted_voting_compares_to_quota() {
        let game = synthetic_game(SyntheticSpec::WeightedVoting {
            weights: vec![4.0, 2.0, 1.0],
            quota: 5.0,
        })
        .unwrap();
        assert_eq!(game.evaluate(&mask_of(&[0, 1], 3)), 1.0);
        assert_eq!(game.evaluate(&mask_of(&[0, 2], 3)), 1.0);
        assert_eq!(game.evaluate(&mask_of(&[1, 2], 3)), 0.0);
    }

    #[test]
    fn glove_needs_both_sides() {
        let game = synthetic_game(SyntheticSpec::Glove {
            arity: 3,
            left: vec![0],
            right: vec![1, 2],
        })
        .unwrap();
        assert_eq!(game.evaluate(&mask_of(&[0], 3)), 0.0);
        assert_eq!(game.evaluate(&mask_of(&[1, 2], 3)), 0.0);
        assert_eq!(game.evaluate(&mask_of(&[0, 2], 3)), 1.0);
    }

    #[test]
    fn empty_member_set_is_rejected() {
        assert!(synthetic_game(SyntheticSpec::Unanimity {
            arity: 3,
            members: vec![],
        })
        .is_err());
        assert!(synthetic_game(SyntheticSpec::Glove {
            arity: 3,
            left: vec![],
            right: vec![1],
        })
        .is_err());
    }

    #[test]
    fn monotone_games_are_monotone() {
        let games = [
            synthetic_game(SyntheticSpec::Unanimity {
                arity: 4,
                members: vec![1, 3],
            })
            .unwrap(),
            synthetic_game(SyntheticSpec::Glove {
                arity: 4,
                left: vec![0, 2],
                right: vec![1, 3],
            })
            .unwrap(),
            synthetic_game(SyntheticSpec::WeightedVoting {
                weights: vec![3.0, 2.0, 1.0, 1.0],
                quota: 4.0,
            })
            .unwrap(),
        ];
        for game in &games {
            for sub in 0..16usize {
                for sup in 0..16usize {
                    if sub & sup == sub {
                        let vs = game.evaluate(&CoalitionMask::from_index(sub, 4));
                        let vt = game.evaluate(&CoalitionMask::from_index(sup, 4));
                        assert!(vs <= vt, "{}: ν({sub:04b}) > ν({sup:04b})", game.name());
                    }
                }
            }
        }
    }

    #[test]
    fn table_game_reads_its_table() {
        let values: Vec<f64> = (0..8).map(|k| k as f64).collect();
        let game = TableGame::new(3, values).unwrap();
        assert_eq!(game.evaluate(&mask_of(&[0, 2], 3)), 5.0);
    }

    #[test]
    fn symmetrized_table_is_exchangeable() {
        let game = TableGame::random(4, 0.0, 1.0, RngSeed(9)).symmetrized(1, 2);
        for k in 0..16usize {
            let swapped = k & !0b0110 | (k >> 1 & 1) << 2 | (k >> 2 & 1) << 1;
            assert_eq!(
                game.evaluate(&CoalitionMask::from_index(k, 4)),
                game.evaluate(&CoalitionMask::from_index(swapped, 4)),
            );
        }
    }
}
