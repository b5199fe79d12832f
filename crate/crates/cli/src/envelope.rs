use qwalk_core::analysis::{spread_stats, spreading_exponent, SpreadStats};
use qwalk_core::lattice::{Distribution, WalkRecord};
use serde::Serialize;

use crate::config::{ExperimentConfig, RunMode};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepEntry {
    pub step: usize,
    pub distribution: Distribution,
    /// Standard deviation of the surviving walker; `None` once fully absorbed.
    pub stddev: Option<f64>,
    /// `stddev / step`, the ballistic normalization; `None` at step 0.
    pub stddev_per_step: Option<f64>,
    pub absorbed: f64,
    pub cumulative_absorbed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectorySummary {
    pub samples: usize,
    pub empirical: Distribution,
    pub absorbed_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub final_distribution: Distribution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spreading_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transmission: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<TrajectorySummary>,
}

/// Machine-readable result of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultEnvelope {
    pub tool_version: String,
    pub seed: u64,
    pub mode: RunMode,
    pub config_echo: ExperimentConfig,
    pub per_step: Vec<StepEntry>,
    pub summary: Summary,
}

impl ResultEnvelope {
    pub fn from_record(config: &ExperimentConfig, record: &WalkRecord) -> Self {
        let mut stats: Vec<SpreadStats> = Vec::new();
        let per_step = record
            .steps
            .iter()
            .map(|s| {
                let spread = spread_stats(&s.distribution, s.step).ok();
                if let Some(st) = spread {
                    if s.step >= 1 && st.stddev > 0.0 {
                        stats.push(st);
                    }
                }
                let stddev = spread.map(|st| st.stddev);
                StepEntry {
                    step: s.step,
                    distribution: s.distribution.clone(),
                    stddev,
                    stddev_per_step: stddev.filter(|_| s.step > 0).map(|sd| sd / s.step as f64),
                    absorbed: s.absorbed,
                    cumulative_absorbed: s.cumulative_absorbed,
                }
            })
            .collect();
        let has_absorbers = !config.absorbers.is_empty();
        Self {
            tool_version: TOOL_VERSION.to_string(),
            seed: config.seed,
            mode: config.mode,
            config_echo: config.clone(),
            per_step,
            summary: Summary {
                final_distribution: record.final_distribution().clone(),
                spreading_exponent: spreading_exponent(&stats).ok(),
                q_hat: None,
                transmission: has_absorbers.then(|| record.remaining_mass()),
                trajectories: None,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}
