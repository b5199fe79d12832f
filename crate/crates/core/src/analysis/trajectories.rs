use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lattice::{Distribution, PureState, StepRecord, StepSchedule, WalkRecord};
use crate::{Exec, Result, WalkError};

/// Samples per work unit. Fixed so the reduction order, and therefore every
/// floating-point sum, does not depend on the number of threads.
const CHUNK: usize = 1024;

/// Result of a stochastic unraveling of the dephased walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnsemble {
    pub sample_count: usize,
    pub seed: u64,
    /// Histogram of final position read-outs among surviving samples,
    /// normalized to unit mass (all zeros if every sample was absorbed).
    pub empirical: Distribution,
    /// Fraction of samples whose read-out found the walker absorbed.
    pub absorbed_fraction: f64,
    /// Per-step ensemble averages of each trajectory's exact position
    /// probabilities and absorbed mass. An unbiased estimate of the
    /// density-matrix record with lower variance than the histogram.
    pub record: WalkRecord,
}

/// Samples `samples` quantum trajectories of `schedule` from `seed`.
pub fn sample_trajectories(
    schedule: &StepSchedule,
    samples: usize,
    seed: u64,
) -> Result<TrajectoryEnsemble> {
    sample_trajectories_with(schedule, samples, seed, Exec::default())
}

struct Tally {
    born: Vec<Vec<f64>>,
    absorbed: Vec<f64>,
    counts: Vec<u64>,
    absorbed_readouts: u64,
}

impl Tally {
    fn new(steps: usize, sites: usize) -> Self {
        Self {
            born: vec![vec![0.0; sites]; steps],
            absorbed: vec![0.0; steps],
            counts: vec![0; sites],
            absorbed_readouts: 0,
        }
    }

    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.born.iter_mut().zip(&other.born) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        self.absorbed
            .iter_mut()
            .zip(&other.absorbed)
            .for_each(|(x, y)| *x += y);
        self.counts
            .iter_mut()
            .zip(&other.counts)
            .for_each(|(x, y)| *x += y);
        self.absorbed_readouts += other.absorbed_readouts;
    }
}

/// Index drawn from unnormalized `weights` with `u` uniform on `[0, total)`.
/// Returns `None` when `u` falls past the total weight.
fn pick(weights: impl Iterator<Item = f64>, u: f64) -> Option<usize> {
    let mut acc = 0.0;
    for (i, w) in weights.enumerate() {
        acc += w;
        if u < acc {
            return Some(i);
        }
    }
    None
}

/// [`sample_trajectories`] with an explicit execution strategy.
///
/// Each trajectory evolves a pure state. After every step's coin and shift,
/// with probability `q` the position is measured: a site is drawn from the
/// trajectory's own distribution and the state collapses onto it with its
/// norm kept. Absorbers then project out their sites, so a trajectory's norm
/// is its survival weight. Averaged over trajectories this reproduces the
/// dephasing channel exactly. The final read-out draws a position from the
/// trajectory's distribution, or "absorbed" with the missing weight.
///
/// Trajectory `i` uses a ChaCha8 stream `i` keyed by `seed`, so the result is
/// bit-identical for a fixed seed whatever the execution strategy.
pub fn sample_trajectories_with(
    schedule: &StepSchedule,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<TrajectoryEnsemble> {
    if samples == 0 {
        return Err(WalkError::InvalidInput("samples must be at least 1".into()));
    }
    let window = schedule.window();
    let start = PureState::localized(window, schedule.initial_position(), schedule.initial_coin())?;
    let n_steps = schedule.len();
    let sites = window.len();

    let run_chunk = |chunk: usize| -> Result<Tally> {
        let mut tally = Tally::new(n_steps, sites);
        let first = chunk * CHUNK;
        let last = (first + CHUNK).min(samples);
        for sample in first..last {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(sample as u64);
            let mut state = start.clone();
            for (k, step) in schedule.steps().iter().enumerate() {
                state = state.step(step.coin())?;
                if step.q() > 0.0 && rng.random::<f64>() < step.q() {
                    let norm = state.norm_sqr();
                    if norm > 0.0 {
                        let u = rng.random::<f64>() * norm;
                        let amps = state.amplitudes();
                        let i = pick(amps.iter().map(|a| a.norm_sqr()), u)
                            .or_else(|| amps.iter().rposition(|a| a.norm_sqr() > 0.0))
                            .expect("state has positive norm");
                        state = state.collapse_to(window.position(i));
                    }
                }
                let (next, absorbed) = state.absorb(step.absorbers());
                state = next;
                tally.absorbed[k] += absorbed;
                for (acc, a) in tally.born[k].iter_mut().zip(state.amplitudes()) {
                    *acc += a.norm_sqr();
                }
            }
            let u = rng.random::<f64>();
            match pick(state.amplitudes().iter().map(|a| a.norm_sqr()), u) {
                Some(i) => tally.counts[i] += 1,
                None => tally.absorbed_readouts += 1,
            }
        }
        Ok(tally)
    };

    let chunks = samples.div_ceil(CHUNK);
    let mut total = Tally::new(n_steps, sites);
    for tally in exec.map_range(chunks, run_chunk) {
        total.merge(&tally?);
    }

    let inv = 1.0 / samples as f64;
    let mut steps = Vec::with_capacity(n_steps + 1);
    steps.push(StepRecord {
        step: 0,
        distribution: start.distribution(),
        absorbed: 0.0,
        cumulative_absorbed: 0.0,
    });
    let mut cumulative = 0.0;
    for k in 0..n_steps {
        let absorbed = total.absorbed[k] * inv;
        cumulative += absorbed;
        steps.push(StepRecord {
            step: k + 1,
            distribution: Distribution::new(
                window.positions().collect(),
                total.born[k].iter().map(|p| p * inv).collect(),
            )?,
            absorbed,
            cumulative_absorbed: cumulative,
        });
    }

    let survivors: u64 = total.counts.iter().sum();
    let empirical = Distribution::new(
        window.positions().collect(),
        total
            .counts
            .iter()
            .map(|&c| {
                if survivors > 0 {
                    c as f64 / survivors as f64
                } else {
                    0.0
                }
            })
            .collect(),
    )?;

    Ok(TrajectoryEnsemble {
        sample_count: samples,
        seed,
        empirical,
        absorbed_fraction: total.absorbed_readouts as f64 * inv,
        record: WalkRecord { steps },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::binomial_reference;
    use crate::lattice::{evolve, Mode, WalkTemplate};

    fn tv(a: &Distribution, b: &Distribution) -> f64 {
        0.5 * a
            .union_support(b)
            .into_iter()
            .map(|x| (a.get(x) - b.get(x)).abs())
            .sum::<f64>()
    }

    #[test]
    fn zero_samples_rejected() {
        let s = StepSchedule::uniform(&WalkTemplate::default(), 2, &[]).unwrap();
        assert!(sample_trajectories(&s, 0, 1).is_err());
    }

    #[test]
    fn coherent_schedule_tracks_pure_walk_exactly() {
        let s = StepSchedule::uniform(&WalkTemplate::default(), 4, &[]).unwrap();
        let ens = sample_trajectories(&s, 50, 9).unwrap();
        let exact = evolve(&s, Mode::Pure).unwrap();
        for (a, b) in ens.record.steps.iter().zip(&exact.steps) {
            for x in b.distribution.positions() {
                assert!((a.distribution.get(*x) - b.distribution.get(*x)).abs() < 1e-12);
            }
        }
        assert!((ens.empirical.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fully_dephased_matches_binomial() {
        let s = StepSchedule::uniform(&WalkTemplate::default().with_q(1.0), 6, &[]).unwrap();
        let ens = sample_trajectories(&s, 100_000, 2024).unwrap();
        assert!(tv(&ens.empirical, &binomial_reference(6)) < 0.01);
    }

    #[test]
    fn deterministic_for_fixed_seed_and_strategy() {
        let s = StepSchedule::uniform(&WalkTemplate::default().with_q(0.5), 5, &[-1]).unwrap();
        let a = sample_trajectories_with(&s, 3000, 77, Exec::Sequential).unwrap();
        let b = sample_trajectories_with(&s, 3000, 77, Exec::Parallel).unwrap();
        let c = sample_trajectories_with(&s, 3000, 77, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        let d = sample_trajectories_with(&s, 3000, 78, Exec::Parallel).unwrap();
        assert_ne!(a.empirical, d.empirical);
    }

    #[test]
    fn absorption_is_tracked() {
        let s = StepSchedule::uniform(&WalkTemplate::default(), 5, &[-1]).unwrap();
        let ens = sample_trajectories(&s, 20_000, 5).unwrap();
        let rec = ens.record.final_record();
        assert!((rec.cumulative_absorbed - 5.0 / 8.0).abs() < 1e-12);
        assert!((ens.absorbed_fraction - 5.0 / 8.0).abs() < 0.02);
    }
}
