use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwalk_cli::commands::{self, ApparatusQuery, Overrides};
use qwalk_cli::config::RunMode;
use qwalk_cli::CliError;
use qwalk_core::apparatus::CalibrationModel;

/// Discrete-time quantum walks with tunable dephasing and absorbing sites.
#[derive(Parser)]
#[command(name = "qwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a walk and print every step.
    Run(RunArgs),
    /// Repeat a walk for a list of uniform dephasing probabilities.
    #[command(name = "sweep-q")]
    SweepQ {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated dephasing probabilities, e.g. `0,0.5,1`.
        #[arg(long = "q", value_delimiter = ',', num_args = 0..)]
        q_list: Vec<f64>,
    },
    /// Evolve a walk with absorbers and report its transmission.
    Absorb(RunArgs),
    /// Fit the dephasing probability to a measured distribution.
    Fit {
        /// CSV with a `position,probability` header.
        #[arg(long)]
        measured: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Optical implementation model.
    #[command(subcommand)]
    Apparatus(ApparatusCmd),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Write a long-format CSV sidecar here.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<RunMode>,
    #[arg(long)]
    samples: Option<usize>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            mode: self.mode,
            samples: self.samples,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum ApparatusCmd {
    /// Optical element counts for an N-step walk.
    Elements {
        #[arg(long)]
        n: u64,
    },
    /// Photon survival after N steps with a fixed loss per step.
    Loss {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0.01)]
        rate: f64,
    },
    /// Calibration-interferometer visibility at dephasing q.
    Visibility {
        #[arg(long)]
        q: f64,
    },
    /// Visibility and dephasing for a relative displacer angle (degrees).
    Calibrate {
        #[arg(long, allow_negative_numbers = true)]
        angle: f64,
        #[arg(long, default_value_t = 10.5)]
        zero_angle: f64,
        #[arg(long, default_value_t = 0.005)]
        floor: f64,
    },
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Run(a) => commands::cmd_run(&a.config, &a.overrides(), a.csv.as_deref()),
        Command::Absorb(a) => commands::cmd_absorb(&a.config, &a.overrides(), a.csv.as_deref()),
        Command::SweepQ { run, q_list } => {
            commands::cmd_sweep_q(&run.config, &run.overrides(), &q_list, run.csv.as_deref())
        }
        Command::Fit { measured, config } => commands::cmd_fit(&measured, &config),
        Command::Apparatus(cmd) => {
            let query = match cmd {
                ApparatusCmd::Elements { n } => ApparatusQuery::Elements { n },
                ApparatusCmd::Loss { n, rate } => ApparatusQuery::Loss { n, rate },
                ApparatusCmd::Visibility { q } => ApparatusQuery::Visibility { q },
                ApparatusCmd::Calibrate {
                    angle,
                    zero_angle,
                    floor,
                } => ApparatusQuery::Calibrate {
                    angle,
                    model: CalibrationModel {
                        zero_visibility_angle: zero_angle,
                        floor,
                        ..CalibrationModel::default()
                    },
                },
            };
            commands::cmd_apparatus(&query)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
