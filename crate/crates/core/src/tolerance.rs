//! Numerical tolerances shared across the crate.

/// Entrywise deviation allowed in `U U^dagger = I` for coin operators.
pub const UNITARY: f64 = 1e-12;

/// Allowed drift of the norm or trace under a unitary step.
pub const TRACE: f64 = 1e-12;

/// Allowed Hermiticity defect of a density matrix.
pub const HERMITIAN: f64 = 1e-12;

/// Slack on the smallest eigenvalue of a density matrix.
pub const POSITIVITY: f64 = 1e-10;

/// Allowed error in probability sum rules and absorption bookkeeping.
pub const MASS: f64 = 1e-10;

/// Distance of a distribution's mass from 1 before it counts as unnormalized.
pub const NORMALIZATION: f64 = 1e-9;
