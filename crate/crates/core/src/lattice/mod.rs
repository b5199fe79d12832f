//! Walker states and the coin, shift, dephasing and absorption primitives.
//!
//! Shift convention: `S = sum_j |j-1><j| (x) |H><H| + |j+1><j| (x) |V><V|`.
//! A step is `W = S C`, with `C` applied at every site.

mod coin;
mod density;
mod distribution;
mod evolve;
mod pure;
mod schedule;
mod window;

pub use coin::{waveplate_unitary, CoinOperator, CoinState, Waveplate};
pub use density::DensityState;
pub use distribution::Distribution;
pub use evolve::{evolve, evolve_with, AbsorptionRecord, Mode, StepRecord, WalkRecord};
pub use pure::PureState;
pub use schedule::{Step, StepSchedule, WalkTemplate};
pub use window::Window;
