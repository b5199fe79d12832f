//! Statistics and estimators built on top of the lattice engine.

mod escape;
mod fit;
mod stats;
mod trajectories;

pub use escape::{escape_probability, EscapeEstimate};
pub use fit::{fit_decoherence, fit_decoherence_with, FitResult, FIT_GRID_POINTS, FIT_Q_TOLERANCE};
pub use stats::{binomial_reference, l1_distance, spread_stats, spreading_exponent, SpreadStats};
pub use trajectories::{sample_trajectories, sample_trajectories_with, TrajectoryEnsemble};
