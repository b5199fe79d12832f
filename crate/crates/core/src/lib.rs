//! Discrete-time coined quantum walks on a one-dimensional lattice.
//!
//! The walker carries a two-level coin (polarization `H`/`V`). One step is a
//! coin unitary applied at every site followed by the conditional shift that
//! moves `H` amplitude one site left and `V` amplitude one site right. Walks
//! can be evolved as pure states or as density matrices subject to per-step
//! position dephasing with probability `q`, and any step may carry absorbing
//! sites that remove probability mass.
//!
//! Modules:
//! - [`lattice`]: states, coins, the step primitives and the evolution driver.
//! - [`analysis`]: spreading statistics, distribution distances, decoherence
//!   fitting, stochastic trajectory sampling and escape probabilities.
//! - [`apparatus`]: an optical model of the interferometric implementation
//!   (visibility calibration, misalignment, element counts, loss).
//!
//! Heavy loops run on rayon when the `parallel` feature is enabled (the
//! default). Every such entry point has an `*_with` variant taking an
//! [`Exec`] so both paths can be selected at runtime and compared.
//!
//! ```
//! use qwalk_core::lattice::{evolve, Mode, StepSchedule, WalkTemplate};
//!
//! let schedule = StepSchedule::uniform(&WalkTemplate::default(), 3, &[]).unwrap();
//! let record = evolve(&schedule, Mode::Pure).unwrap();
//! let last = record.final_distribution();
//! assert!((last.get(-3) - 0.125).abs() < 1e-12);
//! assert!((last.get(1) - 0.375).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod apparatus;
mod error;
mod exec;
pub mod lattice;
pub mod tolerance;

pub use error::{Result, WalkError};
pub use exec::Exec;
pub use num_complex::Complex64 as C64;
