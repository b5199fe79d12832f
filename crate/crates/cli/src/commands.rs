use std::path::Path;

use qwalk_core::analysis::{fit_decoherence, sample_trajectories, FitResult};
use qwalk_core::apparatus::{
    element_count, misalignment_to_visibility, q_from_visibility, survival_probability,
    visibility_from_q, CalibrationModel,
};
use qwalk_core::lattice::{evolve, Mode};
use serde_json::json;

use crate::config::{ExperimentConfig, QChoice, RunMode};
use crate::csvio;
use crate::envelope::{ResultEnvelope, TrajectorySummary};
use crate::error::CliError;

/// Command-line values that take precedence over the config document.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mode: Option<RunMode>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(m) = self.mode {
            config.mode = m;
        }
        if let Some(n) = self.samples {
            config.samples = Some(n);
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
    }
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::load(path)?;
    overrides.apply(&mut config);
    config.validate()?;
    Ok(config)
}

/// Runs a validated config in its configured mode.
pub fn execute(config: &ExperimentConfig) -> Result<ResultEnvelope, CliError> {
    let schedule = config.to_schedule()?;
    match config.mode {
        RunMode::Pure | RunMode::Density => {
            let mode = if config.mode == RunMode::Pure {
                Mode::Pure
            } else {
                Mode::Density
            };
            let record = evolve(&schedule, mode)?;
            Ok(ResultEnvelope::from_record(config, &record))
        }
        RunMode::Trajectories => {
            let samples = config.samples.unwrap_or(0);
            let ens = sample_trajectories(&schedule, samples, config.seed)?;
            let mut env = ResultEnvelope::from_record(config, &ens.record);
            env.summary.trajectories = Some(TrajectorySummary {
                samples: ens.sample_count,
                empirical: ens.empirical,
                absorbed_fraction: ens.absorbed_fraction,
            });
            Ok(env)
        }
    }
}

fn write_step_csv(path: &Path, env: &ResultEnvelope) -> Result<(), CliError> {
    csvio::write_long(
        path,
        "step",
        env.per_step
            .iter()
            .map(|s| (s.step.to_string(), &s.distribution)),
    )
}

/// `run`: evolve the configured walk and report every step.
pub fn cmd_run(
    config: &Path,
    overrides: &Overrides,
    csv: Option<&Path>,
) -> Result<String, CliError> {
    let config = load_config(config, overrides)?;
    let env = execute(&config)?;
    if let Some(path) = csv {
        write_step_csv(path, &env)?;
    }
    Ok(env.to_json())
}

/// `absorb`: like `run`, but requires absorbers and always reports the
/// transmission.
pub fn cmd_absorb(
    config: &Path,
    overrides: &Overrides,
    csv: Option<&Path>,
) -> Result<String, CliError> {
    let config = load_config(config, overrides)?;
    if config.absorbers.is_empty() {
        return Err(CliError::Config {
            field: "absorbers".into(),
            message: "the absorb command needs at least one absorber".into(),
        });
    }
    let env = execute(&config)?;
    if let Some(path) = csv {
        write_step_csv(path, &env)?;
    }
    Ok(env.to_json())
}

/// `sweep-q`: one envelope per uniform dephasing probability. A pure-mode
/// config is promoted to density mode so that `q > 0` is representable.
pub fn cmd_sweep_q(
    config: &Path,
    overrides: &Overrides,
    q_list: &[f64],
    csv: Option<&Path>,
) -> Result<String, CliError> {
    let mut base = ExperimentConfig::load(config)?;
    overrides.apply(&mut base);
    for (i, &q) in q_list.iter().enumerate() {
        if !(0.0..=1.0).contains(&q) {
            return Err(CliError::Config {
                field: format!("q[{i}]"),
                message: format!("{q} is outside [0, 1]"),
            });
        }
    }
    if base.mode == RunMode::Pure {
        base.mode = RunMode::Density;
    }
    let envelopes = q_list
        .iter()
        .map(|&q| {
            let mut c = base.clone();
            c.q = QChoice::Uniform(q);
            c.validate()?;
            execute(&c)
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = csv {
        csvio::write_long(
            path,
            "q",
            q_list
                .iter()
                .zip(&envelopes)
                .map(|(q, e)| (q.to_string(), &e.summary.final_distribution)),
        )?;
    }
    Ok(serde_json::to_string_pretty(&envelopes).expect("envelopes serialize"))
}

/// `fit`: least-squares dephasing estimate for a measured final distribution.
/// The config supplies the walk; its `q` and `mode` are ignored.
pub fn cmd_fit(measured: &Path, config: &Path) -> Result<String, CliError> {
    let mut c = ExperimentConfig::load(config)?;
    c.q = QChoice::Uniform(0.0);
    c.mode = RunMode::Density;
    c.samples = None;
    let template = c.to_schedule()?;
    let dist = csvio::read_distribution(measured)?;
    let fit: FitResult = fit_decoherence(&dist, &template)?;
    Ok(serde_json::to_string_pretty(&fit).expect("fit serializes"))
}

#[derive(Clone, Debug)]
pub enum ApparatusQuery {
    Elements { n: u64 },
    Loss { n: u32, rate: f64 },
    Visibility { q: f64 },
    Calibrate { angle: f64, model: CalibrationModel },
}

/// `apparatus`: optical accounting and calibration helpers.
pub fn cmd_apparatus(query: &ApparatusQuery) -> Result<String, CliError> {
    let value = match *query {
        ApparatusQuery::Elements { n } => {
            let (this_scheme, triangular_scheme) = element_count(n)?;
            json!({ "n": n, "this_scheme": this_scheme, "triangular_scheme": triangular_scheme })
        }
        ApparatusQuery::Loss { n, rate } => {
            json!({ "n": n, "loss_per_step": rate, "survival": survival_probability(n, rate)? })
        }
        ApparatusQuery::Visibility { q } => {
            json!({ "q": q, "visibility": visibility_from_q(q)? })
        }
        ApparatusQuery::Calibrate { angle, model } => {
            let v = misalignment_to_visibility(angle, &model)?;
            json!({
                "angle": angle,
                "zero_visibility_angle": model.zero_visibility_angle,
                "floor": model.floor,
                "visibility": v,
                "q": q_from_visibility(v)?,
            })
        }
    };
    Ok(serde_json::to_string_pretty(&value).expect("report serializes"))
}
