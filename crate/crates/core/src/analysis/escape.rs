use serde::{Deserialize, Serialize};

use crate::lattice::{evolve, Mode, StepSchedule, WalkTemplate};
use crate::{Result, WalkError};

/// Survival of a walker facing absorbing sites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeEstimate {
    pub steps: usize,
    /// Probability never absorbed within `steps` steps.
    pub remaining_mass: f64,
    /// Sum of the per-step absorbed masses.
    pub cumulative_absorbed: f64,
    /// Mass absorbed in the final step.
    pub last_increment: f64,
    /// Whether `last_increment` fell below the requested tolerance.
    pub converged: bool,
}

/// Runs `template` for `max_steps` steps with `absorbers` active after every
/// step and reports the surviving mass.
///
/// Coherent templates use pure-state evolution; templates with `q > 0` fall
/// back to the density matrix, whose cost grows as the square of the window.
/// The absorbed increment of an oscillating quantum walk can vanish at
/// individual steps, so `converged` is a hint, not a guarantee.
pub fn escape_probability(
    template: &WalkTemplate,
    absorbers: &[i64],
    max_steps: usize,
    tol: f64,
) -> Result<EscapeEstimate> {
    if max_steps == 0 {
        return Err(WalkError::InvalidInput(
            "max_steps must be at least 1".into(),
        ));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(WalkError::InvalidInput(format!(
            "tolerance must be >= 0, got {tol}"
        )));
    }
    let schedule = StepSchedule::uniform(template, max_steps, absorbers)?;
    let mode = if schedule.is_coherent() {
        Mode::Pure
    } else {
        Mode::Density
    };
    let record = evolve(&schedule, mode)?;
    let last = record.final_record();
    Ok(EscapeEstimate {
        steps: max_steps,
        remaining_mass: record.remaining_mass(),
        cumulative_absorbed: last.cumulative_absorbed,
        last_increment: last.absorbed,
        converged: last.absorbed < tol,
    })
}
