//! Bridges dynamics and learning: classifies the 16 driving states, runs the
//! episode loop with all termination conditions, and computes the
//! car-following safety metrics.

mod classify;
mod engine;
mod metrics;

pub use classify::classify_state;
pub use engine::{replay_episode, run_episode, EpisodeSetup, SimTiming};
pub use metrics::{improvement_pct, safety_index, MetricsError};

use crate::rl::DriveState;

/// Thresholds used by the state classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierThresholds {
    /// Band around a limit inside which the speed counts as "at the limit", m/s.
    pub speed_tolerance: f64,
    /// Required distance to the leading obstacle, m.
    pub safe_distance: f64,
    /// Distance to the destination that counts as "near the end", m.
    pub near_end_window: f64,
    /// How far ahead an upcoming curve triggers the turn-preparation states, m.
    pub turn_lookahead: f64,
    /// Speed magnitude below which the vehicle counts as stopped, m/s.
    pub stop_speed: f64,
}

impl Default for ClassifierThresholds {
    fn default() -> Self {
        Self {
            speed_tolerance: 0.05,
            safe_distance: 5.0,
            near_end_window: 5.0,
            turn_lookahead: 10.0,
            stop_speed: 0.05,
        }
    }
}

impl ClassifierThresholds {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("speed_tolerance", self.speed_tolerance),
            ("safe_distance", self.safe_distance),
            ("near_end_window", self.near_end_window),
            ("turn_lookahead", self.turn_lookahead),
            ("stop_speed", self.stop_speed),
        ] {
            if !(v > 0.0) {
                return Err(format!("{name} must be strictly positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Why an episode ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    ReachedDestination,
    RolledBack,
    Collision,
    DynamicsFault,
    TimeLimit,
}

impl Termination {
    pub const ALL: [Termination; 5] = [
        Termination::ReachedDestination,
        Termination::RolledBack,
        Termination::Collision,
        Termination::DynamicsFault,
        Termination::TimeLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Termination::ReachedDestination => "ReachedDestination",
            Termination::RolledBack => "RolledBack",
            Termination::Collision => "Collision",
            Termination::DynamicsFault => "DynamicsFault",
            Termination::TimeLimit => "TimeLimit",
        }
    }
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One control step of an episode log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub position: f64,
    pub speed: f64,
    /// Torque actually applied (after smoothing), Nm.
    pub torque: f64,
    /// State reached after the step.
    pub state: DriveState,
    pub reward: f64,
    pub epsilon: f64,
    pub gap: f64,
}

/// Full log and summary figures of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub records: Vec<StepRecord>,
    pub reward_sum: f64,
    /// `reward_sum` divided by the number of reward-bearing steps.
    pub reward_avg: f64,
    /// Closest approach to the obstacle over the episode, including the
    /// initial gap; `+inf` when no obstacle is active.
    pub min_gap: f64,
    /// `min_gap - safe_distance`; `None` when no obstacle is active.
    pub safety_index: Option<f64>,
    pub termination: Termination,
    /// Exploration rate used throughout this episode.
    pub epsilon: f64,
    /// Number of control steps executed.
    pub steps: usize,
}
