use serde::{Deserialize, Serialize};

use crate::{Result, WalkError};

/// Closed interval of lattice positions `[min, max]` backing a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    min: i64,
    max: i64,
}

impl Window {
    pub fn new(min: i64, max: i64) -> Result<Self> {
        if min > max {
            return Err(WalkError::InvalidInput(format!(
                "empty window [{min}, {max}]"
            )));
        }
        Ok(Self { min, max })
    }

    /// `[center - radius, center + radius]`, the sites reachable in `radius`
    /// steps from `center`.
    pub fn around(center: i64, radius: usize) -> Self {
        let r = radius as i64;
        Self {
            min: center - r,
            max: center + r,
        }
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.max
    }

    /// Number of sites.
    pub fn len(&self) -> usize {
        (self.max - self.min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, position: i64) -> bool {
        (self.min..=self.max).contains(&position)
    }

    pub fn index_of(&self, position: i64) -> Option<usize> {
        self.contains(position)
            .then(|| (position - self.min) as usize)
    }

    pub fn position(&self, index: usize) -> i64 {
        self.min + index as i64
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }

    pub(crate) fn overflow(&self, position: i64) -> WalkError {
        WalkError::WindowOverflow {
            position,
            min: self.min,
            max: self.max,
        }
    }
}
