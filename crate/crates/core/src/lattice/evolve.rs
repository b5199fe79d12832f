use serde::{Deserialize, Serialize};

use super::{DensityState, Distribution, PureState, StepSchedule};
use crate::{Exec, Result, WalkError};

/// State representation used by [`evolve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Amplitude vector; exact for coherent schedules only.
    Pure,
    /// Dense density matrix, `O(N^2)` memory and per-step cost in the window size.
    Density,
}

/// Snapshot after one step (step 0 is the initial state).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// Unnormalized position distribution of the surviving walker.
    pub distribution: Distribution,
    /// Mass removed by absorbers during this step.
    pub absorbed: f64,
    pub cumulative_absorbed: f64,
}

/// Outcome of a walk: one record per step, starting with the initial state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub steps: Vec<StepRecord>,
}

/// Absorption summary of a walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionRecord {
    /// Mass absorbed at each step `1..=N`.
    pub per_step_absorbed: Vec<f64>,
    pub cumulative_absorbed: f64,
    pub remaining_mass: f64,
}

impl WalkRecord {
    pub fn final_record(&self) -> &StepRecord {
        self.steps
            .last()
            .expect("a walk record always holds the initial state")
    }

    pub fn final_distribution(&self) -> &Distribution {
        &self.final_record().distribution
    }

    /// Surviving probability after the last step.
    pub fn remaining_mass(&self) -> f64 {
        self.final_distribution().mass()
    }

    pub fn absorption(&self) -> AbsorptionRecord {
        AbsorptionRecord {
            per_step_absorbed: self.steps.iter().skip(1).map(|s| s.absorbed).collect(),
            cumulative_absorbed: self.final_record().cumulative_absorbed,
            remaining_mass: self.remaining_mass(),
        }
    }
}

/// Runs `schedule` and records every step.
pub fn evolve(schedule: &StepSchedule, mode: Mode) -> Result<WalkRecord> {
    evolve_with(schedule, mode, Exec::default())
}

/// [`evolve`] with an explicit execution strategy for the density step.
///
/// Each step applies the coin, the shift, dephasing (density mode), then the
/// step's absorbers. The window is fixed up front to the sites reachable from
/// the initial position, so no amplitude can leave it. Absorbed mass is
/// accumulated and the state is never renormalized.
pub fn evolve_with(schedule: &StepSchedule, mode: Mode, exec: Exec) -> Result<WalkRecord> {
    let window = schedule.window();
    let start = PureState::localized(window, schedule.initial_position(), schedule.initial_coin())?;
    let mut steps = Vec::with_capacity(schedule.len() + 1);
    steps.push(StepRecord {
        step: 0,
        distribution: start.distribution(),
        absorbed: 0.0,
        cumulative_absorbed: 0.0,
    });
    let mut cumulative = 0.0;
    let mut push = |k: usize, distribution: Distribution, absorbed: f64| {
        cumulative += absorbed;
        steps.push(StepRecord {
            step: k,
            distribution,
            absorbed,
            cumulative_absorbed: cumulative,
        });
    };

    match mode {
        Mode::Pure => {
            if let Some((k, s)) = schedule
                .steps()
                .iter()
                .enumerate()
                .find(|(_, s)| s.q() != 0.0)
            {
                return Err(WalkError::DephasingInPureMode {
                    step: k + 1,
                    q: s.q(),
                });
            }
            let mut state = start;
            for (k, step) in schedule.steps().iter().enumerate() {
                let (next, absorbed) = state.step(step.coin())?.absorb(step.absorbers());
                state = next;
                push(k + 1, state.distribution(), absorbed);
            }
        }
        Mode::Density => {
            let mut state = DensityState::from_pure(&start);
            for (k, step) in schedule.steps().iter().enumerate() {
                let (next, absorbed) = state
                    .step_with(step.coin(), step.q(), exec)?
                    .absorb(step.absorbers());
                state = next;
                push(k + 1, state.distribution(), absorbed);
            }
        }
    }
    Ok(WalkRecord { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{CoinOperator, CoinState, Step, WalkTemplate};

    #[test]
    fn empty_schedule_is_a_point_mass() {
        let s = StepSchedule::new(3, CoinState::left_circular(), vec![]).unwrap();
        for mode in [Mode::Pure, Mode::Density] {
            let r = evolve(&s, mode).unwrap();
            assert_eq!(r.steps.len(), 1);
            assert!((r.final_distribution().get(3) - 1.0).abs() < 1e-15);
            assert!((r.remaining_mass() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pure_mode_rejects_dephasing() {
        let s = StepSchedule::new(
            0,
            CoinState::left_circular(),
            vec![
                Step::new(CoinOperator::hadamard(), 0.0, &[]).unwrap(),
                Step::new(CoinOperator::hadamard(), 0.2, &[]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(
            evolve(&s, Mode::Pure),
            Err(WalkError::DephasingInPureMode { step: 2, q: 0.2 })
        );
        assert!(evolve(&s, Mode::Density).is_ok());
    }

    #[test]
    fn absorption_five_steps() {
        let s = StepSchedule::uniform(&WalkTemplate::default(), 5, &[-1]).unwrap();
        let a = evolve(&s, Mode::Pure).unwrap().absorption();
        assert!((a.cumulative_absorbed - 5.0 / 8.0).abs() < 1e-12);
        assert!((a.remaining_mass - 3.0 / 8.0).abs() < 1e-12);
        assert_eq!(a.per_step_absorbed.len(), 5);
    }
}
