//! Tabular Q-learning: states, actions, exploration schedules, the Q-table,
//! and the speed-change reward.

mod action;
mod qtable;
mod reward;
mod schedule;
mod state;

pub use action::ActionSpace;
pub use qtable::{QTable, QTableCsvError};
pub use reward::{compute_reward, discounted_return};
pub use schedule::{epsilon_ieg, epsilon_linear, ExplorationSchedule, ScheduleKind};
pub use state::{DriveState, STATE_COUNT};

/// Learning and reward-shaping parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RLParams {
    /// Q-learning step size.
    pub alpha: f64,
    /// Discount factor.
    pub gamma: f64,
    /// Largest allowed torque change per control step, Nm.
    pub smoothing_threshold: f64,
    /// Reward per m/s of speed change.
    pub reward_coeff: f64,
    /// Added to the reward on reaching the destination.
    pub terminal_bonus: f64,
    /// Added to the reward on hitting the obstacle (negative).
    pub collision_penalty: f64,
}

impl Default for RLParams {
    fn default() -> Self {
        Self {
            alpha: 0.2,
            gamma: 0.8,
            smoothing_threshold: 50.0,
            reward_coeff: 10.0,
            terminal_bonus: 100.0,
            collision_penalty: -100.0,
        }
    }
}

impl RLParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(format!("alpha must be in (0, 1], got {}", self.alpha));
        }
        if !(self.gamma >= 0.0 && self.gamma < 1.0) {
            return Err(format!("gamma must be in [0, 1), got {}", self.gamma));
        }
        if !(self.smoothing_threshold > 0.0) {
            return Err(format!(
                "smoothing_threshold must be positive, got {}",
                self.smoothing_threshold
            ));
        }
        if !self.reward_coeff.is_finite()
            || !self.terminal_bonus.is_finite()
            || !self.collision_penalty.is_finite()
        {
            return Err("reward parameters must be finite".into());
        }
        Ok(())
    }
}
