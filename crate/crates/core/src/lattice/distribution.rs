use serde::{Deserialize, Serialize};

use crate::tolerance;
use crate::{Result, WalkError};

/// Probability of finding the walker at each lattice position.
///
/// Positions are strictly increasing. The total mass is 1 for an unabsorbed
/// walk and smaller once absorbers have removed probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    positions: Vec<i64>,
    probabilities: Vec<f64>,
}

impl Distribution {
    pub fn new(positions: Vec<i64>, probabilities: Vec<f64>) -> Result<Self> {
        if positions.len() != probabilities.len() {
            return Err(WalkError::InvalidInput(format!(
                "{} positions but {} probabilities",
                positions.len(),
                probabilities.len()
            )));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(WalkError::InvalidInput(
                "positions must be strictly increasing".into(),
            ));
        }
        for (&x, &p) in positions.iter().zip(&probabilities) {
            if !p.is_finite() {
                return Err(WalkError::NonFinite("distribution"));
            }
            if p < 0.0 {
                return Err(WalkError::InvalidInput(format!(
                    "negative probability {p} at position {x}"
                )));
            }
        }
        Ok(Self {
            positions,
            probabilities,
        })
    }

    /// Builds a distribution from unordered `(position, probability)` pairs,
    /// summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for (x, p) in pairs {
            *map.entry(x).or_insert(0.0) += p;
        }
        let (positions, probabilities) = map.into_iter().unzip();
        Self::new(positions, probabilities)
    }

    pub fn point(position: i64) -> Self {
        Self {
            positions: vec![position],
            probabilities: vec![1.0],
        }
    }

    /// Internal constructor for contiguous windows; clamps rounding noise
    /// below zero.
    pub(crate) fn from_window(min_pos: i64, probabilities: Vec<f64>) -> Self {
        let positions = (0..probabilities.len() as i64)
            .map(|k| min_pos + k)
            .collect();
        let probabilities = probabilities.into_iter().map(|p| p.max(0.0)).collect();
        Self {
            positions,
            probabilities,
        }
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.positions
            .iter()
            .copied()
            .zip(self.probabilities.iter().copied())
    }

    /// Probability at `position`; zero outside the support.
    pub fn get(&self, position: i64) -> f64 {
        self.positions
            .binary_search(&position)
            .map(|i| self.probabilities[i])
            .unwrap_or(0.0)
    }

    pub fn mass(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// The distribution conditioned on survival (scaled to unit mass).
    pub fn normalized(&self) -> Result<Self> {
        let mass = self.mass();
        if mass <= 0.0 {
            return Err(WalkError::ZeroMass);
        }
        Ok(Self {
            positions: self.positions.clone(),
            probabilities: self.probabilities.iter().map(|p| p / mass).collect(),
        })
    }

    /// Errors unless the mass is within [`tolerance::NORMALIZATION`] of 1.
    pub fn require_normalized(&self) -> Result<()> {
        let mass = self.mass();
        if (mass - 1.0).abs() > tolerance::NORMALIZATION {
            return Err(WalkError::NotNormalized { mass });
        }
        Ok(())
    }

    /// Union of the supports of `self` and `other`, in increasing order.
    pub fn union_support(&self, other: &Distribution) -> Vec<i64> {
        let mut all: Vec<i64> = self
            .positions
            .iter()
            .chain(other.positions.iter())
            .copied()
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Drops positions with probability at or below `threshold`.
    pub fn trimmed(&self, threshold: f64) -> Self {
        let (positions, probabilities) = self.iter().filter(|&(_, p)| p > threshold).unzip();
        Self {
            positions,
            probabilities,
        }
    }
}
