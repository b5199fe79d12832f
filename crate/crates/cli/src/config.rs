//! Experiment configuration documents.
//!
//! ```json
//! {
//!   "version": 1,
//!   "steps": 5,
//!   "initial_coin": "L",
//!   "initial_position": 0,
//!   "coin": "hadamard",
//!   "q": 0.0,
//!   "absorbers": [{ "position": -1, "from_step": 1, "to_step": null }],
//!   "mode": "pure",
//!   "samples": null,
//!   "seed": 0
//! }
//! ```
//!
//! `coin` and `q` also accept one entry per step. Coins are `"hadamard"`,
//! `"identity"`, `{"half_wave": deg}` or `{"quarter_wave": deg}`. Initial coins
//! are one of `H V D A L R` or `{"h": [re, im], "v": [re, im]}`.

use std::path::Path;

use clap::ValueEnum;
use num_complex::Complex64;
use qwalk_core::lattice::{
    waveplate_unitary, CoinOperator, CoinState, Step, StepSchedule, Waveplate,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CONFIG_VERSION: u32 = 1;

/// Largest schedule accepted in density mode; the matrix is `(4N+2)^2` complex entries.
pub const MAX_DENSITY_STEPS: usize = 600;

/// Largest schedule accepted in pure and trajectory modes.
pub const MAX_STEPS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    #[default]
    Pure,
    Density,
    Trajectories,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialCoin {
    Named(String),
    Explicit { h: [f64; 2], v: [f64; 2] },
}

impl Default for InitialCoin {
    fn default() -> Self {
        InitialCoin::Named("L".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoinSpec {
    Named(String),
    HalfWave { half_wave: f64 },
    QuarterWave { quarter_wave: f64 },
}

impl Default for CoinSpec {
    fn default() -> Self {
        CoinSpec::Named("hadamard".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoinChoice {
    Uniform(CoinSpec),
    PerStep(Vec<CoinSpec>),
}

impl Default for CoinChoice {
    fn default() -> Self {
        CoinChoice::Uniform(CoinSpec::default())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QChoice {
    Uniform(f64),
    PerStep(Vec<f64>),
}

impl Default for QChoice {
    fn default() -> Self {
        QChoice::Uniform(0.0)
    }
}

/// A blocked site, active after every step in `from_step..=to_step`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsorberSpec {
    pub position: i64,
    #[serde(default = "first_step")]
    pub from_step: usize,
    #[serde(default)]
    pub to_step: Option<usize>,
}

fn first_step() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub steps: usize,
    #[serde(default)]
    pub initial_coin: InitialCoin,
    #[serde(default)]
    pub initial_position: i64,
    #[serde(default)]
    pub coin: CoinChoice,
    #[serde(default)]
    pub q: QChoice,
    #[serde(default)]
    pub absorbers: Vec<AbsorberSpec>,
    #[serde(default)]
    pub mode: RunMode,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.into(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    /// Parses a JSON document. Syntax and type errors name the offending
    /// field path.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." {
                "config".to_string()
            } else {
                path
            };
            field_err(field, e.into_inner().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn q_values(&self) -> Vec<f64> {
        match &self.q {
            QChoice::Uniform(q) => vec![*q; self.steps],
            QChoice::PerStep(v) => v.clone(),
        }
    }

    fn coin_specs(&self) -> Vec<CoinSpec> {
        match &self.coin {
            CoinChoice::Uniform(c) => vec![c.clone(); self.steps],
            CoinChoice::PerStep(v) => v.clone(),
        }
    }

    /// Checks every field; the error names the first offending one.
    pub fn validate(&self) -> Result<(), CliError> {
        self.to_schedule().map(|_| ())
    }

    /// Resolves the document into an engine schedule, validating as it goes.
    pub fn to_schedule(&self) -> Result<StepSchedule, CliError> {
        if self.version != CONFIG_VERSION {
            return Err(field_err(
                "version",
                format!(
                    "unsupported version {} (expected {CONFIG_VERSION})",
                    self.version
                ),
            ));
        }
        let limit = if self.mode == RunMode::Density {
            MAX_DENSITY_STEPS
        } else {
            MAX_STEPS
        };
        if self.steps > limit {
            return Err(field_err(
                "steps",
                format!(
                    "{} exceeds the limit of {limit} for {:?} mode",
                    self.steps, self.mode
                ),
            ));
        }

        let initial = resolve_initial_coin(&self.initial_coin)?;

        let qs = self.q_values();
        if qs.len() != self.steps {
            return Err(field_err(
                "q",
                format!("expected {} per-step values, got {}", self.steps, qs.len()),
            ));
        }
        for (i, &q) in qs.iter().enumerate() {
            if !(0.0..=1.0).contains(&q) {
                let field = match self.q {
                    QChoice::Uniform(_) => "q".to_string(),
                    QChoice::PerStep(_) => format!("q[{i}]"),
                };
                return Err(field_err(field, format!("{q} is outside [0, 1]")));
            }
        }

        let specs = self.coin_specs();
        if specs.len() != self.steps {
            return Err(field_err(
                "coin",
                format!(
                    "expected {} per-step coins, got {}",
                    self.steps,
                    specs.len()
                ),
            ));
        }
        let coin_field = |i: usize| match self.coin {
            CoinChoice::Uniform(_) => "coin".to_string(),
            CoinChoice::PerStep(_) => format!("coin[{i}]"),
        };
        let coins = specs
            .iter()
            .enumerate()
            .map(|(i, s)| resolve_coin(s).map_err(|m| field_err(coin_field(i), m)))
            .collect::<Result<Vec<_>, _>>()?;
        // A uniform spec that is invalid must be reported even for zero steps.
        if let CoinChoice::Uniform(s) = &self.coin {
            resolve_coin(s).map_err(|m| field_err("coin", m))?;
        }
        if let QChoice::Uniform(q) = self.q {
            if !(0.0..=1.0).contains(&q) {
                return Err(field_err("q", format!("{q} is outside [0, 1]")));
            }
        }

        for (i, a) in self.absorbers.iter().enumerate() {
            if a.from_step < 1 {
                return Err(field_err(
                    format!("absorbers[{i}].from_step"),
                    "must be at least 1",
                ));
            }
            if let Some(to) = a.to_step {
                if to < a.from_step {
                    return Err(field_err(
                        format!("absorbers[{i}].to_step"),
                        format!("{to} is before from_step {}", a.from_step),
                    ));
                }
            }
        }

        match self.mode {
            RunMode::Pure => {
                if let Some((i, q)) = qs.iter().enumerate().find(|(_, &q)| q != 0.0) {
                    return Err(field_err(
                        "mode",
                        format!(
                            "pure mode cannot represent dephasing (q = {q} at step {})",
                            i + 1
                        ),
                    ));
                }
            }
            RunMode::Density => {}
            RunMode::Trajectories => match self.samples {
                Some(n) if n >= 1 => {}
                Some(_) => return Err(field_err("samples", "must be at least 1")),
                None => return Err(field_err("samples", "required in trajectories mode")),
            },
        }
        if self.samples == Some(0) {
            return Err(field_err("samples", "must be at least 1"));
        }

        let steps = coins
            .into_iter()
            .zip(qs)
            .enumerate()
            .map(|(k, (coin, q))| {
                let step = k + 1;
                let sites: Vec<i64> = self
                    .absorbers
                    .iter()
                    .filter(|a| a.from_step <= step && a.to_step.is_none_or(|t| step <= t))
                    .map(|a| a.position)
                    .collect();
                Step::new(coin, q, &sites).map_err(|e| field_err("q", e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;

        StepSchedule::new(self.initial_position, initial, steps)
            .map_err(|e| field_err("initial_coin", e.to_string()))
    }
}

fn resolve_initial_coin(spec: &InitialCoin) -> Result<CoinState, CliError> {
    match spec {
        InitialCoin::Named(name) => named_coin_state(name).ok_or_else(|| {
            field_err(
                "initial_coin",
                format!("unknown coin state `{name}` (expected one of H, V, D, A, L, R)"),
            )
        }),
        InitialCoin::Explicit { h, v } => {
            if h.iter().chain(v).any(|x| !x.is_finite()) {
                return Err(field_err("initial_coin", "amplitudes must be finite"));
            }
            let s = CoinState::new(Complex64::new(h[0], h[1]), Complex64::new(v[0], v[1]));
            let n = s.norm_sqr();
            if (n - 1.0).abs() > qwalk_core::tolerance::NORMALIZATION {
                return Err(field_err(
                    "initial_coin",
                    format!("amplitudes must be normalized (|h|^2 + |v|^2 = {n})"),
                ));
            }
            Ok(s)
        }
    }
}

/// Exact amplitude literals for the named polarization states.
pub fn named_coin_state(name: &str) -> Option<CoinState> {
    Some(match name {
        "H" => CoinState::horizontal(),
        "V" => CoinState::vertical(),
        "D" => CoinState::diagonal(),
        "A" => CoinState::antidiagonal(),
        "L" => CoinState::left_circular(),
        "R" => CoinState::right_circular(),
        _ => return None,
    })
}

fn resolve_coin(spec: &CoinSpec) -> Result<CoinOperator, String> {
    match spec {
        CoinSpec::Named(n) => match n.to_ascii_lowercase().as_str() {
            "hadamard" => Ok(CoinOperator::hadamard()),
            "identity" => Ok(CoinOperator::identity()),
            other => Err(format!(
                "unknown coin `{other}` (expected hadamard, identity, {{\"half_wave\": deg}} or {{\"quarter_wave\": deg}})"
            )),
        },
        CoinSpec::HalfWave { half_wave } => {
            waveplate_unitary(Waveplate::Half, *half_wave).map_err(|e| e.to_string())
        }
        CoinSpec::QuarterWave { quarter_wave } => {
            waveplate_unitary(Waveplate::Quarter, *quarter_wave).map_err(|e| e.to_string())
        }
    }
}
