//! Exploration-rate schedules over the episode counter.
//!
//! All three schedules scale the same span `delta = eps_hi - eps_lo`. The
//! linear schedule decays `delta * (1 - r)` with training progress
//! `r = episode / max_episodes`. The nonlinear schedule follows a circular
//! arc: above the linear line in the first half of training (more
//! exploration early), below it in the second half (more exploitation late),
//! meeting it at `r = 0.5` and reaching zero at the final episode.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    Constant,
    Linear,
    Ieg,
}

impl ScheduleKind {
    pub const ALL: [ScheduleKind; 3] = [ScheduleKind::Constant, ScheduleKind::Linear, ScheduleKind::Ieg];

    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::Constant => "constant",
            ScheduleKind::Linear => "linear",
            ScheduleKind::Ieg => "ieg",
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScheduleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "constant" => Ok(ScheduleKind::Constant),
            "linear" => Ok(ScheduleKind::Linear),
            "ieg" => Ok(ScheduleKind::Ieg),
            other => Err(format!("unknown schedule '{other}' (expected constant, linear or ieg)")),
        }
    }
}

/// A schedule kind with its exploration-rate span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplorationSchedule {
    pub kind: ScheduleKind,
    pub eps_hi: f64,
    pub eps_lo: f64,
}

impl ExplorationSchedule {
    pub fn new(kind: ScheduleKind, eps_hi: f64, eps_lo: f64) -> Result<Self, String> {
        if !(0.0 <= eps_lo && eps_lo < eps_hi && eps_hi <= 1.0) {
            return Err(format!(
                "exploration bounds must satisfy 0 <= eps_lo < eps_hi <= 1, got lo {eps_lo}, hi {eps_hi}"
            ));
        }
        Ok(Self { kind, eps_hi, eps_lo })
    }

    /// The decayed span `eps_hi - eps_lo`.
    pub fn delta(&self) -> f64 {
        self.eps_hi - self.eps_lo
    }

    /// Exploration rate for `episode` of `max_episodes`.
    pub fn epsilon(&self, episode: u32, max_episodes: u32) -> f64 {
        match self.kind {
            ScheduleKind::Constant => self.delta(),
            ScheduleKind::Linear => epsilon_linear(episode, max_episodes, self),
            ScheduleKind::Ieg => epsilon_ieg(episode, max_episodes, self),
        }
    }
}

/// Linearly decaying exploration rate: `delta * (1 - episode/max_episodes)`.
pub fn epsilon_linear(episode: u32, max_episodes: u32, sched: &ExplorationSchedule) -> f64 {
    debug_assert!(max_episodes > 0 && episode <= max_episodes);
    let r = episode as f64 / max_episodes as f64;
    sched.delta() * (1.0 - r)
}

/// Circular-arc exploration rate.
///
/// For progress `r = episode/max_episodes` at or below one half the rate is
/// `delta * (0.5 + sqrt(0.25 - r^2))`; beyond one half it is
/// `delta * (0.5 - sqrt(0.25 - (1 - r)^2))`. Both branches meet at
/// `delta * 0.5` when `r = 0.5`.
pub fn epsilon_ieg(episode: u32, max_episodes: u32, sched: &ExplorationSchedule) -> f64 {
    debug_assert!(max_episodes > 0 && episode <= max_episodes);
    let r = episode as f64 / max_episodes as f64;
    let delta = sched.delta();
    if r <= 0.5 {
        delta * (0.5 + (0.25 - r * r).max(0.0).sqrt())
    } else {
        let s = 1.0 - r;
        delta * (0.5 - (0.25 - s * s).max(0.0).sqrt())
    }
}
