use serde::{Deserialize, Serialize};

use crate::lattice::{evolve_with, Distribution, Mode, StepSchedule};
use crate::{Exec, Result, WalkError};

/// Points in the coarse grid over `q in [0, 1]`.
pub const FIT_GRID_POINTS: usize = 101;

/// Golden-section refinement stops once the bracket is narrower than this.
pub const FIT_Q_TOLERANCE: f64 = 1e-4;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Least-squares estimate of a uniform dephasing probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub q_hat: f64,
    /// `sum_j (p_model(j) - p_measured(j))^2` at `q_hat`.
    pub residual: f64,
    /// Number of model evaluations performed.
    pub evaluations: usize,
}

/// Fits the dephasing probability `q`, shared by every step of `template`,
/// to a measured final position distribution.
pub fn fit_decoherence(measured: &Distribution, template: &StepSchedule) -> Result<FitResult> {
    fit_decoherence_with(measured, template, Exec::default())
}

/// [`fit_decoherence`] with an explicit execution strategy.
///
/// The grid is evaluated first (in parallel when requested), then the
/// bracket around the best grid point is refined by golden-section search.
/// The model is the density-matrix walk, conditioned on survival when the
/// template absorbs. Any `q` already set in `template` is ignored.
pub fn fit_decoherence_with(
    measured: &Distribution,
    template: &StepSchedule,
    exec: Exec,
) -> Result<FitResult> {
    if measured.is_empty() {
        return Err(WalkError::InvalidInput(
            "measured distribution is empty".into(),
        ));
    }
    measured.require_normalized()?;

    let objective = |q: f64| -> Result<f64> {
        let schedule = template.with_uniform_q(q)?;
        // The step loop stays sequential here; parallelism is across q.
        let record = evolve_with(&schedule, Mode::Density, Exec::Sequential)?;
        let model = record.final_distribution().normalized()?;
        Ok(model
            .union_support(measured)
            .into_iter()
            .map(|x| (model.get(x) - measured.get(x)).powi(2))
            .sum())
    };

    let grid: Vec<f64> = (0..FIT_GRID_POINTS)
        .map(|i| i as f64 / (FIT_GRID_POINTS - 1) as f64)
        .collect();
    let values = exec
        .map_range(grid.len(), |i| objective(grid[i]))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let mut evaluations = grid.len();

    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    let mut q_hat = grid[best];
    let mut residual = values[best];

    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(grid.len() - 1)];
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = objective(x1)?;
    let mut f2 = objective(x2)?;
    evaluations += 2;
    while hi - lo > FIT_Q_TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = objective(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = objective(x2)?;
        }
        evaluations += 1;
    }
    for (q, f) in [(x1, f1), (x2, f2)] {
        if f < residual {
            q_hat = q;
            residual = f;
        }
    }

    Ok(FitResult {
        q_hat,
        residual,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{evolve, WalkTemplate};

    fn synthetic(q: f64, n: usize) -> (Distribution, StepSchedule) {
        let schedule = StepSchedule::uniform(&WalkTemplate::default().with_q(q), n, &[]).unwrap();
        let measured = evolve(&schedule, Mode::Density)
            .unwrap()
            .final_distribution()
            .clone();
        (measured, schedule)
    }

    #[test]
    fn recovers_interior_q() {
        let (measured, schedule) = synthetic(0.4, 5);
        let fit = fit_decoherence(&measured, &schedule).unwrap();
        assert!((fit.q_hat - 0.4).abs() < 1e-3, "{fit:?}");
        assert!(fit.residual < 1e-12);
        assert!(fit.evaluations > FIT_GRID_POINTS);
    }

    #[test]
    fn refines_between_grid_points() {
        for q in [0.137, 0.5555, 0.9031] {
            let (measured, schedule) = synthetic(q, 5);
            let fit = fit_decoherence(&measured, &schedule).unwrap();
            assert!((fit.q_hat - q).abs() < 1e-4, "{q}: {fit:?}");
            assert!(fit.residual <= synthetic_residual(&measured, &schedule, 0.0));
            assert!(fit.residual <= synthetic_residual(&measured, &schedule, 1.0));
        }
    }

    fn synthetic_residual(measured: &Distribution, schedule: &StepSchedule, q: f64) -> f64 {
        let model = evolve(&schedule.with_uniform_q(q).unwrap(), Mode::Density).unwrap();
        let model = model.final_distribution();
        model
            .union_support(measured)
            .into_iter()
            .map(|x| (model.get(x) - measured.get(x)).powi(2))
            .sum()
    }

    #[test]
    fn recovers_endpoints() {
        for q in [0.0, 1.0] {
            let (measured, schedule) = synthetic(q, 5);
            let fit = fit_decoherence(&measured, &schedule).unwrap();
            assert!((fit.q_hat - q).abs() < 1e-3, "{fit:?}");
        }
    }

    #[test]
    fn rejects_unnormalized_and_empty() {
        let (_, schedule) = synthetic(0.0, 3);
        let short = Distribution::from_pairs([(0, 0.8)]).unwrap();
        assert!(matches!(
            fit_decoherence(&short, &schedule),
            Err(WalkError::NotNormalized { .. })
        ));
        let empty = Distribution::new(vec![], vec![]).unwrap();
        assert!(fit_decoherence(&empty, &schedule).is_err());
    }
}
