//! Command-line front end: `run`, `compare`, `replay`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use locosim::config::{ConfigError, ExperimentConfig, ObstacleMode};
use locosim::experiment::{self, ExperimentError};
use locosim::rl::ScheduleKind;

#[derive(Parser)]
#[command(
    name = "locosim",
    about = "Mining-locomotive speed-control RL workbench",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the number of training episodes.
    #[arg(long)]
    episodes: Option<u32>,
    /// Override the obstacle spawn mode (fixed | random).
    #[arg(long)]
    obstacle: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Train one Q-table and write rewards.csv, qtable.csv and per-episode step CSVs.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Exploration schedule (constant | linear | ieg).
        #[arg(long)]
        schedule: Option<String>,
        /// Training seed; defaults to the first configured seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Train linear and ieg schedules over all seeds and write a comparison report.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated seed list overriding the config.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
    },
    /// Replay a stored Q-table greedily for one episode.
    Replay {
        #[command(flatten)]
        common: CommonArgs,
        /// Q-table CSV produced by `run` or `compare`.
        #[arg(long)]
        qtable: PathBuf,
        /// Seed for argmax tie-breaking (and random obstacle spawn).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load_config(common: &CommonArgs) -> Result<ExperimentConfig, ExperimentError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            ExperimentConfig::parse(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(episodes) = common.episodes {
        cfg.max_episodes = episodes;
    }
    if let Some(mode) = &common.obstacle {
        cfg.obstacle_mode = match mode.as_str() {
            "fixed" => ObstacleMode::Fixed,
            "random" => ObstacleMode::Random,
            "none" => ObstacleMode::None,
            other => {
                return Err(ConfigError::InvalidValue {
                    key: "--obstacle".into(),
                    msg: format!("unknown mode '{other}' (fixed, random or none)"),
                }
                .into())
            }
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_schedule(value: Option<&str>, fallback: ScheduleKind) -> Result<ScheduleKind, ExperimentError> {
    match value {
        Some(text) => text.parse().map_err(|msg| {
            ExperimentError::Config(ConfigError::InvalidValue {
                key: "--schedule".into(),
                msg,
            })
        }),
        None => Ok(fallback),
    }
}

fn run(cli: Cli) -> Result<(), ExperimentError> {
    match cli.command {
        Command::Run {
            common,
            schedule,
            seed,
        } => {
            let cfg = load_config(&common)?;
            let schedule = parse_schedule(schedule.as_deref(), cfg.schedule)?;
            let seed = seed.unwrap_or(cfg.seeds[0]);
            let result = experiment::cmd_run(&cfg, schedule, seed, &common.out_dir)?;
            let last = result.summaries.last().expect("at least one episode");
            println!(
                "run complete: schedule {} seed {} episodes {} (final reward_sum {:.4}, {})",
                schedule,
                seed,
                result.summaries.len(),
                last.reward_sum,
                last.termination
            );
            println!("wrote {}", common.out_dir.display());
        }
        Command::Compare { common, seeds } => {
            let mut cfg = load_config(&common)?;
            if let Some(seeds) = seeds {
                cfg.seeds = seeds;
                cfg.validate()?;
            }
            let outcome = experiment::cmd_compare(&cfg, &common.out_dir)?;
            print!("{}", outcome.report.render());
            println!("wrote {}", common.out_dir.display());
        }
        Command::Replay {
            common,
            qtable,
            seed,
        } => {
            let cfg = load_config(&common)?;
            let result = experiment::cmd_replay(&cfg, &qtable, seed, &common.out_dir)?;
            let last = result.records.last();
            println!(
                "replay complete: {} steps, termination {}, final speed {:.4} m/s, min gap {:.4} m",
                result.steps,
                result.termination,
                last.map(|r| r.speed).unwrap_or(0.0),
                result.min_gap
            );
            println!("wrote {}", common.out_dir.join("replay.csv").display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
