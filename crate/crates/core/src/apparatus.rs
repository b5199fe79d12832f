//! Model of the optical implementation: beam displacers as shift operators,
//! waveplates as coins, and a controlled displacer misalignment as the
//! source of dephasing.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::lattice::{CoinOperator, CoinState, DensityState, PureState, Window};
use crate::{Result, WalkError};

/// Phase settings swept when measuring a fringe.
pub const DEFAULT_PHASE_SAMPLES: usize = 360;

/// Target accuracy in visibility when inverting the calibration curve.
pub const VISIBILITY_TOLERANCE: f64 = 1e-6;

/// The two-step interferometer used to calibrate dephasing.
///
/// A photon with coin `input` enters mode 0 and the first displacer splits
/// it into modes -1 and +1, where the dephasing under test acts. A phase
/// shifter sits in mode +1. After `coin` and the second displacer the two
/// paths recombine in mode 0, which is analysed by projecting onto
/// `analyzer`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interferometer {
    pub input: CoinState,
    pub coin: CoinOperator,
    pub analyzer: CoinState,
    pub phase_samples: usize,
}

impl Default for Interferometer {
    fn default() -> Self {
        Self {
            input: CoinState::diagonal(),
            coin: CoinOperator::hadamard(),
            analyzer: CoinState::diagonal(),
            phase_samples: DEFAULT_PHASE_SAMPLES,
        }
    }
}

impl Interferometer {
    /// Probability of the analysed output in mode 0 at relative phase `phi`,
    /// with dephasing `q` applied at each displacer.
    pub fn output_probability(&self, q: f64, phi: f64) -> Result<f64> {
        let window = Window::around(0, 2);
        let rho = DensityState::from_pure(&PureState::localized(window, 0, self.input)?);
        let split = rho.step(&CoinOperator::identity(), q)?;
        let out = split.with_site_phase(1, phi).step(&self.coin, q)?;
        Ok(out.projection(0, &self.analyzer))
    }

    /// Fringe visibility `(p_max - p_min) / (p_max + p_min)` over a phase sweep.
    pub fn visibility(&self, q: f64) -> Result<f64> {
        WalkError::check_probability("q", q)?;
        if self.phase_samples < 2 {
            return Err(WalkError::InvalidInput(
                "need at least 2 phase samples".into(),
            ));
        }
        let mut p_min = f64::INFINITY;
        let mut p_max = f64::NEG_INFINITY;
        for k in 0..self.phase_samples {
            let phi = TAU * k as f64 / self.phase_samples as f64;
            let p = self.output_probability(q, phi)?;
            p_min = p_min.min(p);
            p_max = p_max.max(p);
        }
        if p_max + p_min <= 0.0 {
            return Ok(0.0);
        }
        Ok(((p_max - p_min) / (p_max + p_min)).clamp(0.0, 1.0))
    }
}

/// Visibility of the default calibration interferometer at dephasing `q`.
pub fn visibility_from_q(q: f64) -> Result<f64> {
    Interferometer::default().visibility(q)
}

/// Inverts [`visibility_from_q`] by bisection on `q in [0, 1]`.
pub fn q_from_visibility(visibility: f64) -> Result<f64> {
    q_from_visibility_with(&Interferometer::default(), visibility)
}

pub fn q_from_visibility_with(setup: &Interferometer, visibility: f64) -> Result<f64> {
    WalkError::check_probability("visibility", visibility)?;
    let v_at = |q: f64| setup.visibility(q);
    let (v_lo, v_hi) = (v_at(0.0)?, v_at(1.0)?);
    if visibility >= v_lo {
        return Ok(0.0);
    }
    if visibility <= v_hi {
        return Ok(1.0);
    }
    // Visibility decreases in q.
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut mid = 0.5;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let v = v_at(mid)?;
        if (v - visibility).abs() < VISIBILITY_TOLERANCE || hi - lo < 1e-15 {
            break;
        }
        if v > visibility {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapModel {
    /// `V(a) = exp(-a^2 / (2 s^2))`, as for the overlap of displaced
    /// Gaussian modes.
    GaussianOverlap,
}

/// Maps a relative displacer angle to interference visibility.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationModel {
    /// Angle in degrees at which the visibility reaches `floor`.
    pub zero_visibility_angle: f64,
    pub model_kind: OverlapModel,
    /// Visibilities at or below this are reported as 0.
    pub floor: f64,
}

impl Default for CalibrationModel {
    fn default() -> Self {
        Self {
            zero_visibility_angle: 10.5,
            model_kind: OverlapModel::GaussianOverlap,
            floor: 0.005,
        }
    }
}

impl CalibrationModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.zero_visibility_angle > 0.0 && self.zero_visibility_angle.is_finite()) {
            return Err(WalkError::InvalidInput(format!(
                "zero_visibility_angle must be positive, got {}",
                self.zero_visibility_angle
            )));
        }
        if !(self.floor > 0.0 && self.floor < 0.05) {
            return Err(WalkError::InvalidInput(format!(
                "floor must lie in (0, 0.05), got {}",
                self.floor
            )));
        }
        Ok(())
    }

    /// Width `s` of the Gaussian, chosen so that `V(zero_visibility_angle) = floor`.
    pub fn sigma(&self) -> f64 {
        self.zero_visibility_angle / (2.0 * (1.0 / self.floor).ln()).sqrt()
    }
}

/// Visibility left by a relative displacer misalignment of `angle_deg`.
pub fn misalignment_to_visibility(angle_deg: f64, model: &CalibrationModel) -> Result<f64> {
    model.validate()?;
    if !(angle_deg >= 0.0 && angle_deg.is_finite()) {
        return Err(WalkError::InvalidInput(format!(
            "angle must be a finite non-negative number of degrees, got {angle_deg}"
        )));
    }
    let v = match model.model_kind {
        OverlapModel::GaussianOverlap => {
            let s = model.sigma();
            (-angle_deg * angle_deg / (2.0 * s * s)).exp()
        }
    };
    // Relative slack absorbs the rounding of exp(ln(floor)).
    Ok(if v <= model.floor * (1.0 + 1e-12) {
        0.0
    } else {
        v
    })
}

/// Optical element counts for an `n`-step walk: this displacer scheme uses
/// `2n`; a beamsplitter array uses `(n^2 + n)/2`.
pub fn element_count(n: u64) -> Result<(u64, u64)> {
    if n < 1 {
        return Err(WalkError::InvalidInput("element count needs n >= 1".into()));
    }
    Ok((2 * n, (n * n + n) / 2))
}

/// Probability that a photon survives `n` steps with `loss_per_step` loss each.
pub fn survival_probability(n: u32, loss_per_step: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&loss_per_step) {
        return Err(WalkError::InvalidInput(format!(
            "loss_per_step must lie in [0, 1), got {loss_per_step}"
        )));
    }
    Ok((1.0 - loss_per_step).powi(n as i32))
}
