//! File-level contracts of the run/compare/replay commands.

use locosim::config::ExperimentConfig;
use locosim::episode::Termination;
use locosim::experiment::{cmd_compare, cmd_replay, cmd_run, ExperimentError};
use locosim::rl::{QTableCsvError, ScheduleKind};

fn small_cfg() -> ExperimentConfig {
    ExperimentConfig::parse("[experiment]\nmax_episodes = 12\nrun_time = 3\nseeds = 1,2").unwrap()
}

#[test]
fn run_writes_rewards_qtable_and_step_files() {
    let cfg = small_cfg();
    let dir = tempfile::tempdir().unwrap();
    let result = cmd_run(&cfg, ScheduleKind::Ieg, 1, dir.path()).unwrap();
    assert_eq!(result.summaries.len(), 12);

    let rewards = std::fs::read_to_string(dir.path().join("rewards.csv")).unwrap();
    let lines: Vec<&str> = rewards.lines().collect();
    assert_eq!(lines.len(), 13, "header plus one row per episode");
    assert_eq!(
        lines[0],
        "episode,epsilon,reward_sum,reward_avg,safety_index,min_gap,termination,steps"
    );

    let qtable = std::fs::read_to_string(dir.path().join("qtable.csv")).unwrap();
    assert_eq!(qtable.lines().count(), 17, "torque header plus 16 state rows");
    assert!(qtable.starts_with("state,-300,-290,"));

    for episode in 1..=12 {
        let path = dir.path().join(format!("episodes/episode_{episode:04}.csv"));
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,position,speed,torque,state,reward,gap");
        assert!(lines.next().is_some(), "at least one step in {path:?}");
    }
}

#[test]
fn run_is_byte_deterministic() {
    let cfg = small_cfg();
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    cmd_run(&cfg, ScheduleKind::Linear, 42, dir_a.path()).unwrap();
    cmd_run(&cfg, ScheduleKind::Linear, 42, dir_b.path()).unwrap();
    let a = std::fs::read(dir_a.path().join("rewards.csv")).unwrap();
    let b = std::fs::read(dir_b.path().join("rewards.csv")).unwrap();
    assert_eq!(a, b);
    let qa = std::fs::read(dir_a.path().join("qtable.csv")).unwrap();
    let qb = std::fs::read(dir_b.path().join("qtable.csv")).unwrap();
    assert_eq!(qa, qb);
}

#[test]
fn compare_report_contains_expected_sections() {
    let cfg = small_cfg();
    let dir = tempfile::tempdir().unwrap();
    let outcome = cmd_compare(&cfg, dir.path()).unwrap();
    assert_eq!(outcome.runs.len(), 4);
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("seeds: 1, 2"));
    assert!(report.contains("reward window"));
    assert!(report.contains("safety window"));
    assert!(report.contains("cross-seed mean reward improvement"));
    assert!(report.contains("cross-seed mean safety improvement"));
    assert!(report.contains("termination counts"));
    // config echo is embedded
    assert!(report.contains("[experiment]"));
    assert!(report.contains("max_episodes = 12"));
    for schedule in ["linear", "ieg"] {
        for seed in [1, 2] {
            assert!(dir
                .path()
                .join(format!("{schedule}_seed{seed}/rewards.csv"))
                .exists());
            assert!(dir
                .path()
                .join(format!("{schedule}_seed{seed}/qtable.csv"))
                .exists());
        }
    }
}

#[test]
fn compare_windows_scale_with_episode_count() {
    let cfg = ExperimentConfig::parse("[experiment]\nmax_episodes = 100\nrun_time = 2\nseeds = 3")
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let outcome = cmd_compare(&cfg, dir.path()).unwrap();
    assert_eq!(outcome.report.reward_window, 92..=100);
    assert_eq!(outcome.report.safety_window, 88..=100);
}

#[test]
fn replay_runs_to_a_valid_termination() {
    let cfg = small_cfg();
    let dir = tempfile::tempdir().unwrap();
    cmd_run(&cfg, ScheduleKind::Ieg, 1, dir.path()).unwrap();
    let out = tempfile::tempdir().unwrap();
    let result = cmd_replay(&cfg, &dir.path().join("qtable.csv"), 9, out.path()).unwrap();
    assert!(Termination::ALL.contains(&result.termination));
    if result.termination == Termination::ReachedDestination {
        let last = result.records.last().unwrap();
        assert!(last.speed.abs() <= cfg.thresholds.stop_speed);
    }
    let text = std::fs::read_to_string(out.path().join("replay.csv")).unwrap();
    assert!(text.starts_with("t,position,speed,torque,state,reward,gap"));
    assert_eq!(text.lines().count(), result.steps + 1);
}

#[test]
fn replay_rejects_mismatched_table_shape() {
    let cfg = small_cfg();
    let dir = tempfile::tempdir().unwrap();
    cmd_run(&cfg, ScheduleKind::Ieg, 1, dir.path()).unwrap();
    // reload under a finer action grid: 601 columns expected, 61 found
    let fine = ExperimentConfig::parse(
        "[rl]\ngranularity = 1\n[experiment]\nmax_episodes = 12\nrun_time = 3\nseeds = 1,2",
    )
    .unwrap();
    let out = tempfile::tempdir().unwrap();
    let err = cmd_replay(&fine, &dir.path().join("qtable.csv"), 9, out.path()).unwrap_err();
    assert!(matches!(
        err,
        ExperimentError::Table(QTableCsvError::ShapeMismatch(_))
    ));
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn missing_qtable_is_an_io_error() {
    let cfg = small_cfg();
    let out = tempfile::tempdir().unwrap();
    let err = cmd_replay(&cfg, &out.path().join("nope.csv"), 9, out.path()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn all_zero_table_replay_terminates_validly() {
    let cfg = small_cfg();
    let dir = tempfile::tempdir().unwrap();
    // write a fresh all-zero table through the library
    let actions = cfg.action_space().unwrap();
    let table = locosim::rl::QTable::new(actions.n_actions());
    let path = dir.path().join("zero.csv");
    let file = std::fs::File::create(&path).unwrap();
    table.write_csv(std::io::BufWriter::new(file), &actions).unwrap();
    let out = tempfile::tempdir().unwrap();
    let result = cmd_replay(&cfg, &path, 5, out.path()).unwrap();
    assert!(Termination::ALL.contains(&result.termination));
}
