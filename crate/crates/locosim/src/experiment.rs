//! Training orchestration, schedule comparison, and all file outputs.
//!
//! A run trains one Q-table for `max_episodes` episodes with one schedule
//! and one seed. A comparison trains the linear and arc schedules for every
//! seed (runs execute concurrently; each is internally sequential and
//! deterministic in its seed), then reports window means and improvement
//! percentages. All outputs are CSV plus a plain-text report.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, ObstacleMode};
use crate::episode::{
    improvement_pct, run_episode, replay_episode, EpisodeResult, EpisodeSetup, MetricsError,
    Termination,
};
use crate::rl::{QTable, QTableCsvError, ScheduleKind};
use crate::track::Obstacle;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Table(#[from] QTableCsvError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl ExperimentError {
    /// Process exit code: 1 for configuration-class errors, 2 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            ExperimentError::Io(_) => 2,
            ExperimentError::Table(QTableCsvError::Io(_)) => 2,
            _ => 1,
        }
    }
}

/// Per-episode line of `rewards.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeSummary {
    pub episode: u32,
    pub epsilon: f64,
    pub reward_sum: f64,
    pub reward_avg: f64,
    pub safety_index: Option<f64>,
    pub min_gap: f64,
    pub termination: Termination,
    pub steps: usize,
}

impl EpisodeSummary {
    fn from_result(episode: u32, result: &EpisodeResult) -> Self {
        Self {
            episode,
            epsilon: result.epsilon,
            reward_sum: result.reward_sum,
            reward_avg: result.reward_avg,
            safety_index: result.safety_index,
            min_gap: result.min_gap,
            termination: result.termination,
            steps: result.steps,
        }
    }
}

/// One finished training run.
#[derive(Debug, Clone)]
pub struct TrainResult {
    pub schedule: ScheduleKind,
    pub seed: u64,
    pub summaries: Vec<EpisodeSummary>,
    pub qtable: QTable,
}

impl TrainResult {
    pub fn reward_series(&self) -> Vec<f64> {
        self.summaries.iter().map(|s| s.reward_sum).collect()
    }

    /// Per-episode safety indices; requires an active obstacle in every
    /// episode, which the run modes guarantee.
    pub fn safety_series(&self) -> Vec<f64> {
        self.summaries
            .iter()
            .map(|s| s.safety_index.unwrap_or(f64::NAN))
            .collect()
    }

    pub fn termination_counts(&self) -> Vec<(Termination, usize)> {
        let mut counts: HashMap<Termination, usize> = HashMap::new();
        for s in &self.summaries {
            *counts.entry(s.termination).or_default() += 1;
        }
        Termination::ALL
            .iter()
            .copied()
            .filter_map(|t| counts.get(&t).map(|&c| (t, c)))
            .collect()
    }
}

/// Train one Q-table, invoking `on_episode` after every episode.
pub fn train_with<F>(
    cfg: &ExperimentConfig,
    schedule: ScheduleKind,
    seed: u64,
    mut on_episode: F,
) -> Result<TrainResult, ExperimentError>
where
    F: FnMut(u32, &EpisodeResult),
{
    cfg.validate()?;
    let layout = cfg.layout().expect("validated config");
    let actions = cfg.action_space().expect("validated config");
    let sched = cfg.schedule_of_kind(schedule).expect("validated config");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut qtable = QTable::new(actions.n_actions());
    let mut summaries = Vec::with_capacity(cfg.max_episodes as usize);
    for episode in 1..=cfg.max_episodes {
        let obstacle = spawn_obstacle(cfg, &mut rng);
        let setup = EpisodeSetup {
            layout: &layout,
            obstacle,
            vehicle: &cfg.vehicle,
            rl: &cfg.rl,
            actions: &actions,
            thresholds: &cfg.thresholds,
            timing: cfg.timing,
        };
        let result = run_episode(
            &setup,
            &mut qtable,
            &sched,
            episode,
            cfg.max_episodes,
            &mut rng,
        );
        summaries.push(EpisodeSummary::from_result(episode, &result));
        on_episode(episode, &result);
    }
    Ok(TrainResult {
        schedule,
        seed,
        summaries,
        qtable,
    })
}

/// Train without observing per-episode step logs.
pub fn train(
    cfg: &ExperimentConfig,
    schedule: ScheduleKind,
    seed: u64,
) -> Result<TrainResult, ExperimentError> {
    train_with(cfg, schedule, seed, |_, _| {})
}

fn spawn_obstacle<R: Rng + ?Sized>(cfg: &ExperimentConfig, rng: &mut R) -> Obstacle {
    match cfg.obstacle_mode {
        ObstacleMode::Fixed | ObstacleMode::None => cfg.fixed_obstacle(),
        ObstacleMode::Random => Obstacle {
            spawn_offset: rng.gen_range(cfg.random_spawn_min..=cfg.random_spawn_max),
            speed: cfg.obstacle_speed,
            active: true,
        },
    }
}

/// Per-seed window means and improvements of the arc schedule over linear.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedComparison {
    pub seed: u64,
    pub reward_linear_mean: f64,
    pub reward_ieg_mean: f64,
    pub reward_improvement_pct: f64,
    pub safety_linear_mean: f64,
    pub safety_ieg_mean: f64,
    pub safety_improvement_pct: f64,
}

/// Comparison results across schedules and seeds.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config_echo: String,
    pub seeds: Vec<u64>,
    pub reward_window: RangeInclusive<usize>,
    pub safety_window: RangeInclusive<usize>,
    pub per_seed: Vec<SeedComparison>,
    pub mean_reward_improvement_pct: f64,
    pub mean_safety_improvement_pct: f64,
    pub termination_counts: Vec<(ScheduleKind, u64, Vec<(Termination, usize)>)>,
}

impl ExperimentReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("schedule comparison: linear vs ieg\n");
        let seeds: Vec<String> = self.seeds.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("seeds: {}\n", seeds.join(", ")));
        out.push_str(&format!(
            "reward window: episodes {}..={} (mean of reward_sum)\n",
            self.reward_window.start(),
            self.reward_window.end()
        ));
        out.push_str(&format!(
            "safety window: episodes {}..={} (mean of safety_index)\n\n",
            self.safety_window.start(),
            self.safety_window.end()
        ));
        for c in &self.per_seed {
            out.push_str(&format!(
                "seed {}: reward linear = {:.4}, ieg = {:.4}, improvement = {:.2}%\n",
                c.seed, c.reward_linear_mean, c.reward_ieg_mean, c.reward_improvement_pct
            ));
            out.push_str(&format!(
                "        safety linear = {:.4}, ieg = {:.4}, improvement = {:.2}%\n",
                c.safety_linear_mean, c.safety_ieg_mean, c.safety_improvement_pct
            ));
        }
        out.push_str(&format!(
            "\ncross-seed mean reward improvement: {:.2}%\n",
            self.mean_reward_improvement_pct
        ));
        out.push_str(&format!(
            "cross-seed mean safety improvement: {:.2}%\n",
            self.mean_safety_improvement_pct
        ));
        out.push_str("\ntermination counts:\n");
        for (schedule, seed, counts) in &self.termination_counts {
            let parts: Vec<String> = counts
                .iter()
                .map(|(t, c)| format!("{t}={c}"))
                .collect();
            out.push_str(&format!("  {schedule} seed {seed}: {}\n", parts.join(" ")));
        }
        out.push_str("\nconfig:\n");
        out.push_str(&self.config_echo);
        out
    }
}

/// Everything a comparison produced: the trained runs plus the report.
#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub runs: Vec<TrainResult>,
    pub report: ExperimentReport,
}

impl CompareOutcome {
    pub fn run(&self, schedule: ScheduleKind, seed: u64) -> Option<&TrainResult> {
        self.runs
            .iter()
            .find(|r| r.schedule == schedule && r.seed == seed)
    }
}

/// Mean of a series over a 1-based inclusive episode window.
pub fn window_mean(series: &[f64], window: &RangeInclusive<usize>) -> f64 {
    let slice = &series[window.start() - 1..*window.end()];
    slice.iter().sum::<f64>() / slice.len() as f64
}

/// Train linear and arc schedules for every configured seed and compare
/// window means. Runs execute concurrently; results are deterministic in
/// the seed list.
pub fn compare(cfg: &ExperimentConfig) -> Result<CompareOutcome, ExperimentError> {
    cfg.validate()?;
    if cfg.obstacle_mode == ObstacleMode::None {
        return Err(ConfigError::InvalidValue {
            key: "experiment.obstacle".into(),
            msg: "schedule comparison needs an active obstacle for the safety series".into(),
        }
        .into());
    }
    let tasks: Vec<(ScheduleKind, u64)> = cfg
        .seeds
        .iter()
        .flat_map(|&seed| [(ScheduleKind::Linear, seed), (ScheduleKind::Ieg, seed)])
        .collect();
    let runs: Vec<TrainResult> = tasks
        .par_iter()
        .map(|&(schedule, seed)| train(cfg, schedule, seed))
        .collect::<Result<_, _>>()?;

    let reward_window = cfg.reward_window();
    let safety_window = cfg.safety_window();
    let mut per_seed = Vec::with_capacity(cfg.seeds.len());
    for &seed in &cfg.seeds {
        let linear = runs
            .iter()
            .find(|r| r.schedule == ScheduleKind::Linear && r.seed == seed)
            .expect("linear run exists");
        let ieg = runs
            .iter()
            .find(|r| r.schedule == ScheduleKind::Ieg && r.seed == seed)
            .expect("ieg run exists");
        let (lin_reward, ieg_reward) = (linear.reward_series(), ieg.reward_series());
        let (lin_safety, ieg_safety) = (linear.safety_series(), ieg.safety_series());
        per_seed.push(SeedComparison {
            seed,
            reward_linear_mean: window_mean(&lin_reward, &reward_window),
            reward_ieg_mean: window_mean(&ieg_reward, &reward_window),
            reward_improvement_pct: improvement_pct(
                &ieg_reward,
                &lin_reward,
                reward_window.clone(),
            )?,
            safety_linear_mean: window_mean(&lin_safety, &safety_window),
            safety_ieg_mean: window_mean(&ieg_safety, &safety_window),
            safety_improvement_pct: improvement_pct(
                &ieg_safety,
                &lin_safety,
                safety_window.clone(),
            )?,
        });
    }
    let n = per_seed.len() as f64;
    let mean_reward_improvement_pct =
        per_seed.iter().map(|c| c.reward_improvement_pct).sum::<f64>() / n;
    let mean_safety_improvement_pct =
        per_seed.iter().map(|c| c.safety_improvement_pct).sum::<f64>() / n;
    let termination_counts = runs
        .iter()
        .map(|r| (r.schedule, r.seed, r.termination_counts()))
        .collect();
    let report = ExperimentReport {
        config_echo: cfg.echo(),
        seeds: cfg.seeds.clone(),
        reward_window,
        safety_window,
        per_seed,
        mean_reward_improvement_pct,
        mean_safety_improvement_pct,
        termination_counts,
    };
    Ok(CompareOutcome { runs, report })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_rewards_csv<W: Write>(mut w: W, summaries: &[EpisodeSummary]) -> io::Result<()> {
    writeln!(
        w,
        "episode,epsilon,reward_sum,reward_avg,safety_index,min_gap,termination,steps"
    )?;
    for s in summaries {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            s.episode,
            s.epsilon,
            s.reward_sum,
            s.reward_avg,
            fmt_opt(s.safety_index),
            s.min_gap,
            s.termination,
            s.steps
        )?;
    }
    Ok(())
}

pub fn write_episode_csv<W: Write>(mut w: W, result: &EpisodeResult) -> io::Result<()> {
    writeln!(w, "t,position,speed,torque,state,reward,gap")?;
    for r in &result.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.t, r.position, r.speed, r.torque, r.state, r.reward, r.gap
        )?;
    }
    Ok(())
}

/// Train one run and write `rewards.csv`, the final `qtable.csv`, and a step
/// CSV per episode under `<out_dir>/episodes/`.
pub fn cmd_run(
    cfg: &ExperimentConfig,
    schedule: ScheduleKind,
    seed: u64,
    out_dir: &Path,
) -> Result<TrainResult, ExperimentError> {
    cfg.validate()?;
    let episodes_dir = out_dir.join("episodes");
    fs::create_dir_all(&episodes_dir)?;
    let mut episode_io: io::Result<()> = Ok(());
    let result = train_with(cfg, schedule, seed, |episode, ep_result| {
        if episode_io.is_ok() {
            let path = episodes_dir.join(format!("episode_{episode:04}.csv"));
            episode_io = File::create(path)
                .and_then(|f| write_episode_csv(BufWriter::new(f), ep_result));
        }
    })?;
    episode_io?;
    let rewards = File::create(out_dir.join("rewards.csv"))?;
    write_rewards_csv(BufWriter::new(rewards), &result.summaries)?;
    let actions = cfg.action_space().expect("validated config");
    let qtable = File::create(out_dir.join("qtable.csv"))?;
    result.qtable.write_csv(BufWriter::new(qtable), &actions)?;
    Ok(result)
}

/// Run the full comparison and write per-run `rewards.csv`/`qtable.csv`
/// pairs plus `report.txt`. Files appear only after every run has finished.
pub fn cmd_compare(cfg: &ExperimentConfig, out_dir: &Path) -> Result<CompareOutcome, ExperimentError> {
    let outcome = compare(cfg)?;
    fs::create_dir_all(out_dir)?;
    let actions = cfg.action_space().expect("validated config");
    for run in &outcome.runs {
        let dir = out_dir.join(format!("{}_seed{}", run.schedule, run.seed));
        fs::create_dir_all(&dir)?;
        let rewards = File::create(dir.join("rewards.csv"))?;
        write_rewards_csv(BufWriter::new(rewards), &run.summaries)?;
        let qtable = File::create(dir.join("qtable.csv"))?;
        run.qtable.write_csv(BufWriter::new(qtable), &actions)?;
    }
    fs::write(out_dir.join("report.txt"), outcome.report.render())?;
    Ok(outcome)
}

/// Replay a stored Q-table greedily for one episode and write `replay.csv`.
pub fn cmd_replay(
    cfg: &ExperimentConfig,
    qtable_path: &Path,
    seed: u64,
    out_dir: &Path,
) -> Result<EpisodeResult, ExperimentError> {
    cfg.validate()?;
    let actions = cfg.action_space().expect("validated config");
    let file = File::open(qtable_path)?;
    let qtable = QTable::read_csv(BufReader::new(file), &actions)?;
    let layout = cfg.layout().expect("validated config");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let obstacle = spawn_obstacle(cfg, &mut rng);
    let setup = EpisodeSetup {
        layout: &layout,
        obstacle,
        vehicle: &cfg.vehicle,
        rl: &cfg.rl,
        actions: &actions,
        thresholds: &cfg.thresholds,
        timing: cfg.timing,
    };
    let result = replay_episode(&setup, &qtable, &mut rng);
    fs::create_dir_all(out_dir)?;
    let file = File::create(out_dir.join("replay.csv"))?;
    write_episode_csv(BufWriter::new(file), &result)?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig::parse("[experiment]\nmax_episodes = 8\nrun_time = 2\nseeds = 1,2")
            .unwrap()
    }

    #[test]
    fn train_produces_one_summary_per_episode() {
        let cfg = small_cfg();
        let result = train(&cfg, ScheduleKind::Ieg, 42).unwrap();
        assert_eq!(result.summaries.len(), 8);
        for (i, s) in result.summaries.iter().enumerate() {
            assert_eq!(s.episode as usize, i + 1);
            assert!(s.reward_sum.is_finite());
            assert!(s.steps <= cfg.timing.max_steps());
        }
        // episode 8 of 8 is fully greedy under both decaying schedules
        assert_eq!(result.summaries.last().unwrap().epsilon, 0.0);
    }

    #[test]
    fn train_is_deterministic_per_seed() {
        let cfg = small_cfg();
        let a = train(&cfg, ScheduleKind::Linear, 42).unwrap();
        let b = train(&cfg, ScheduleKind::Linear, 42).unwrap();
        assert_eq!(a.summaries, b.summaries);
        assert_eq!(a.qtable, b.qtable);
        let c = train(&cfg, ScheduleKind::Linear, 43).unwrap();
        assert_ne!(a.summaries, c.summaries);
    }

    #[test]
    fn all_exploration_smoke_run() {
        let cfg = ExperimentConfig::parse(
            "[rl]\nschedule = constant\neps_hi = 1\neps_lo = 0\n[experiment]\nmax_episodes = 10\nrun_time = 3\n",
        )
        .unwrap();
        let result = train(&cfg, ScheduleKind::Constant, 7).unwrap();
        assert_eq!(result.summaries.len(), 10);
        for s in &result.summaries {
            assert_eq!(s.epsilon, 1.0);
            assert!(Termination::ALL.contains(&s.termination));
        }
    }

    #[test]
    fn compare_reports_per_seed_and_means() {
        let cfg = small_cfg();
        let outcome = compare(&cfg).unwrap();
        assert_eq!(outcome.runs.len(), 4);
        assert_eq!(outcome.report.per_seed.len(), 2);
        for c in &outcome.report.per_seed {
            assert!(c.reward_improvement_pct.is_finite());
            assert!(c.safety_improvement_pct.is_finite());
        }
        let text = outcome.report.render();
        assert!(text.contains("cross-seed mean reward improvement"));
        assert!(text.contains("seeds: 1, 2"));
        assert!(text.contains("[experiment]"));
    }

    #[test]
    fn compare_requires_an_obstacle() {
        let cfg =
            ExperimentConfig::parse("[experiment]\nobstacle = none\nmax_episodes = 2\nrun_time = 1")
                .unwrap();
        assert!(matches!(
            compare(&cfg),
            Err(ExperimentError::Config(ConfigError::InvalidValue { .. }))
        ));
    }

    #[test]
    fn identical_series_give_zero_improvement() {
        // same schedule, same seed on both sides of the comparison machinery
        let cfg = small_cfg();
        let run = train(&cfg, ScheduleKind::Ieg, 1).unwrap();
        let series = run.reward_series();
        let window = cfg.reward_window();
        let pct = improvement_pct(&series, &series, window).unwrap();
        assert_eq!(pct, 0.0);
    }

    #[test]
    fn rewards_csv_shape() {
        let cfg = small_cfg();
        let result = train(&cfg, ScheduleKind::Ieg, 42).unwrap();
        let mut buf = Vec::new();
        write_rewards_csv(&mut buf, &result.summaries).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9); // header + 8 episodes
        assert_eq!(
            lines[0],
            "episode,epsilon,reward_sum,reward_avg,safety_index,min_gap,termination,steps"
        );
        assert!(lines[1].starts_with("1,"));
    }
}
