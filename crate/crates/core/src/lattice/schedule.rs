use super::{CoinOperator, CoinState, Window};
use crate::{Result, WalkError};

/// One step of an experiment: coin, dephasing probability, and the sites
/// blocked after the step.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    coin: CoinOperator,
    q: f64,
    absorbers: Vec<i64>,
}

impl Step {
    pub fn new(coin: CoinOperator, q: f64, absorbers: &[i64]) -> Result<Self> {
        WalkError::check_probability("q", q)?;
        let mut absorbers = absorbers.to_vec();
        absorbers.sort_unstable();
        absorbers.dedup();
        Ok(Self { coin, q, absorbers })
    }

    pub fn coin(&self) -> &CoinOperator {
        &self.coin
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Sorted, deduplicated absorbing positions.
    pub fn absorbers(&self) -> &[i64] {
        &self.absorbers
    }

    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::new(self.coin, q, &self.absorbers)
    }
}

/// The full program of a walk: initial condition plus an ordered list of steps.
#[derive(Clone, Debug, PartialEq)]
pub struct StepSchedule {
    initial_position: i64,
    initial_coin: CoinState,
    steps: Vec<Step>,
}

impl StepSchedule {
    pub fn new(initial_position: i64, initial_coin: CoinState, steps: Vec<Step>) -> Result<Self> {
        let norm = initial_coin.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > crate::tolerance::NORMALIZATION {
            return Err(WalkError::InvalidInput(format!(
                "initial coin state must be normalized (norm^2 = {norm})"
            )));
        }
        Ok(Self {
            initial_position,
            initial_coin,
            steps,
        })
    }

    /// `n` identical steps built from `template`, absorbing at `absorbers`
    /// after every step.
    pub fn uniform(template: &WalkTemplate, n: usize, absorbers: &[i64]) -> Result<Self> {
        let step = Step::new(template.coin, template.q, absorbers)?;
        Self::new(
            template.initial_position,
            template.initial_coin,
            vec![step; n],
        )
    }

    pub fn initial_position(&self) -> i64 {
        self.initial_position
    }

    pub fn initial_coin(&self) -> CoinState {
        self.initial_coin
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// True when no step dephases, so pure-state evolution is exact.
    pub fn is_coherent(&self) -> bool {
        self.steps.iter().all(|s| s.q == 0.0)
    }

    pub fn has_absorbers(&self) -> bool {
        self.steps.iter().any(|s| !s.absorbers.is_empty())
    }

    /// The sites reachable from the initial position, `[x0 - N, x0 + N]`.
    pub fn window(&self) -> Window {
        Window::around(self.initial_position, self.steps.len())
    }

    /// Copy with every step's dephasing probability set to `q`.
    pub fn with_uniform_q(&self, q: f64) -> Result<Self> {
        let steps = self
            .steps
            .iter()
            .map(|s| s.with_q(q))
            .collect::<Result<_>>()?;
        Ok(Self {
            steps,
            ..self.clone()
        })
    }
}

/// A homogeneous walk: same coin and dephasing every step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkTemplate {
    pub initial_position: i64,
    pub initial_coin: CoinState,
    pub coin: CoinOperator,
    pub q: f64,
}

impl Default for WalkTemplate {
    /// Hadamard walk from `|L>` at the origin with no dephasing.
    fn default() -> Self {
        Self {
            initial_position: 0,
            initial_coin: CoinState::left_circular(),
            coin: CoinOperator::hadamard(),
            q: 0.0,
        }
    }
}

impl WalkTemplate {
    pub fn with_q(self, q: f64) -> Self {
        Self { q, ..self }
    }
}
