//! Plain-text experiment configuration.
//!
//! Format: `key = value` lines grouped under `[section]` headers, `#` starts
//! a comment. Every key has a default, so the empty string is a valid config.
//! Unknown sections or keys are errors.
//!
//! Sections: `[track]` (repeated `segment` lines replace the stock track),
//! `[vehicle]`, `[rl]`, `[experiment]`.

use std::ops::RangeInclusive;

use thiserror::Error;

use crate::dynamics::VehicleParams;
use crate::episode::{ClassifierThresholds, SimTiming};
use crate::rl::{ActionSpace, ExplorationSchedule, RLParams, ScheduleKind};
use crate::track::{Obstacle, Segment, TrackLayout};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("invalid value for '{key}': {msg}")]
    InvalidValue { key: String, msg: String },
}

fn invalid(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.into(),
        msg: msg.into(),
    }
}

/// How the leading obstacle is placed at episode start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstacleMode {
    /// Spawn at `obstacle_offset` ahead of the start every episode.
    Fixed,
    /// Spawn uniformly in `[random_spawn_min, random_spawn_max]` each episode.
    Random,
    /// No obstacle.
    None,
}

impl ObstacleMode {
    pub fn name(self) -> &'static str {
        match self {
            ObstacleMode::Fixed => "fixed",
            ObstacleMode::Random => "random",
            ObstacleMode::None => "none",
        }
    }
}

/// Fully defaulted experiment configuration; parsing an empty file yields
/// the stock setup (500 episodes, 45 s budget, fixed 5 m obstacle).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    // [track]
    pub segments: Vec<Segment>,
    pub destination: f64,
    /// Recorded for completeness; the longitudinal model has no lateral
    /// dynamics, so superelevation is never consumed.
    pub superelevation_mm: f64,
    // [vehicle]
    pub vehicle: VehicleParams,
    // [rl]
    pub rl: RLParams,
    pub eps_hi: f64,
    pub eps_lo: f64,
    pub schedule: ScheduleKind,
    pub granularity: f64,
    // [experiment]
    pub max_episodes: u32,
    pub timing: SimTiming,
    pub seeds: Vec<u64>,
    pub obstacle_mode: ObstacleMode,
    pub obstacle_offset: f64,
    pub obstacle_speed: f64,
    pub random_spawn_min: f64,
    pub random_spawn_max: f64,
    pub thresholds: ClassifierThresholds,
    /// Start of the reward comparison window on the nominal 500-episode
    /// scale; scaled proportionally for other episode counts.
    pub reward_window_start: u32,
    /// Start of the safety comparison window on the nominal 500-episode scale.
    pub safety_window_start: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            segments: TrackLayout::default_track().segments().to_vec(),
            destination: 150.0,
            superelevation_mm: 3.8,
            vehicle: VehicleParams::default(),
            rl: RLParams::default(),
            eps_hi: 1.0,
            eps_lo: 0.01,
            schedule: ScheduleKind::Ieg,
            granularity: 10.0,
            max_episodes: 500,
            timing: SimTiming::default(),
            seeds: vec![1, 2, 3, 4, 5],
            obstacle_mode: ObstacleMode::Fixed,
            obstacle_offset: 5.0,
            obstacle_speed: 0.01,
            random_spawn_min: 5.0,
            random_spawn_max: 100.0,
            thresholds: ClassifierThresholds::default(),
            reward_window_start: 460,
            safety_window_start: 441,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        let mut custom_segments: Vec<Segment> = Vec::new();
        let mut section: Option<&str> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(header) = content.strip_prefix('[') {
                let name = header.strip_suffix(']').ok_or_else(|| ConfigError::Parse {
                    line,
                    msg: format!("malformed section header '{content}'"),
                })?;
                section = Some(match name.trim() {
                    "track" => "track",
                    "vehicle" => "vehicle",
                    "rl" => "rl",
                    "experiment" => "experiment",
                    other => {
                        return Err(ConfigError::UnknownKey {
                            line,
                            key: format!("[{other}]"),
                        })
                    }
                });
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
                line,
                msg: format!("expected 'key = value', got '{content}'"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let section = section.ok_or_else(|| ConfigError::Parse {
                line,
                msg: format!("key '{key}' appears before any [section] header"),
            })?;
            cfg.apply(section, key, value, line, &mut custom_segments)?;
        }

        if !custom_segments.is_empty() {
            cfg.segments = custom_segments;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(
        &mut self,
        section: &str,
        key: &str,
        value: &str,
        line: usize,
        custom_segments: &mut Vec<Segment>,
    ) -> Result<(), ConfigError> {
        let full_key = format!("{section}.{key}");
        let unknown = || ConfigError::UnknownKey {
            line,
            key: full_key.clone(),
        };
        match section {
            "track" => match key {
                "segment" => custom_segments.push(parse_segment(value)?),
                "destination" => self.destination = parse_f64(&full_key, value)?,
                "superelevation_mm" => self.superelevation_mm = parse_f64(&full_key, value)?,
                _ => return Err(unknown()),
            },
            "vehicle" => match key {
                "mass" => self.vehicle.mass = parse_f64(&full_key, value)?,
                "wheel_radius" => self.vehicle.wheel_radius = parse_f64(&full_key, value)?,
                "driven_axles" => self.vehicle.driven_axles = parse_u32(&full_key, value)?,
                "torque_min" => self.vehicle.torque_min = parse_f64(&full_key, value)?,
                "torque_max" => self.vehicle.torque_max = parse_f64(&full_key, value)?,
                "rolling_coeff" => self.vehicle.rolling_coeff = parse_f64(&full_key, value)?,
                "curve_coeff" => self.vehicle.curve_coeff = parse_f64(&full_key, value)?,
                "gravity" => self.vehicle.gravity = parse_f64(&full_key, value)?,
                "speed_cap" => self.vehicle.speed_cap = parse_f64(&full_key, value)?,
                _ => return Err(unknown()),
            },
            "rl" => match key {
                "alpha" => self.rl.alpha = parse_f64(&full_key, value)?,
                "gamma" => self.rl.gamma = parse_f64(&full_key, value)?,
                "eps_hi" => self.eps_hi = parse_f64(&full_key, value)?,
                "eps_lo" => self.eps_lo = parse_f64(&full_key, value)?,
                "schedule" => {
                    self.schedule = value
                        .parse::<ScheduleKind>()
                        .map_err(|e| invalid(&full_key, e))?
                }
                "granularity" => self.granularity = parse_f64(&full_key, value)?,
                "smoothing_threshold" => {
                    self.rl.smoothing_threshold = parse_f64(&full_key, value)?
                }
                "reward_coeff" => self.rl.reward_coeff = parse_f64(&full_key, value)?,
                "terminal_bonus" => self.rl.terminal_bonus = parse_f64(&full_key, value)?,
                "collision_penalty" => self.rl.collision_penalty = parse_f64(&full_key, value)?,
                _ => return Err(unknown()),
            },
            "experiment" => match key {
                "max_episodes" => self.max_episodes = parse_u32(&full_key, value)?,
                "run_time" => self.timing.run_time = parse_f64(&full_key, value)?,
                "dt_ctrl" => self.timing.dt_ctrl = parse_f64(&full_key, value)?,
                "dt_int" => self.timing.dt_int = parse_f64(&full_key, value)?,
                "seeds" => {
                    self.seeds = value
                        .split(',')
                        .map(|s| {
                            s.trim()
                                .parse::<u64>()
                                .map_err(|_| invalid(&full_key, format!("bad seed '{s}'")))
                        })
                        .collect::<Result<_, _>>()?
                }
                "obstacle" => {
                    self.obstacle_mode = match value {
                        "fixed" => ObstacleMode::Fixed,
                        "random" => ObstacleMode::Random,
                        "none" => ObstacleMode::None,
                        other => {
                            return Err(invalid(
                                &full_key,
                                format!("unknown obstacle mode '{other}' (fixed, random or none)"),
                            ))
                        }
                    }
                }
                "obstacle_offset" => self.obstacle_offset = parse_f64(&full_key, value)?,
                "obstacle_speed" => self.obstacle_speed = parse_f64(&full_key, value)?,
                "random_spawn_min" => self.random_spawn_min = parse_f64(&full_key, value)?,
                "random_spawn_max" => self.random_spawn_max = parse_f64(&full_key, value)?,
                "safe_distance" => self.thresholds.safe_distance = parse_f64(&full_key, value)?,
                "speed_tolerance" => {
                    self.thresholds.speed_tolerance = parse_f64(&full_key, value)?
                }
                "near_end_window" => {
                    self.thresholds.near_end_window = parse_f64(&full_key, value)?
                }
                "turn_lookahead" => self.thresholds.turn_lookahead = parse_f64(&full_key, value)?,
                "stop_speed" => self.thresholds.stop_speed = parse_f64(&full_key, value)?,
                "reward_window_start" => {
                    self.reward_window_start = parse_u32(&full_key, value)?
                }
                "safety_window_start" => {
                    self.safety_window_start = parse_u32(&full_key, value)?
                }
                _ => return Err(unknown()),
            },
            _ => unreachable!("sections are filtered at the header"),
        }
        Ok(())
    }

    /// Cross-field range checks; every constructor invariant is re-checked
    /// here so a parsed config is usable without further validation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.layout().map_err(|e| invalid("track", e.to_string()))?;
        self.vehicle
            .validate()
            .map_err(|e| invalid("vehicle", e))?;
        self.rl.validate().map_err(|e| invalid("rl", e))?;
        self.exploration_schedule()
            .map_err(|e| invalid("rl.eps", e))?;
        self.action_space()
            .map_err(|e| invalid("rl.granularity", e))?;
        self.timing
            .validate()
            .map_err(|e| invalid("experiment.timing", e))?;
        self.thresholds
            .validate()
            .map_err(|e| invalid("experiment.thresholds", e))?;
        if self.max_episodes == 0 {
            return Err(invalid("experiment.max_episodes", "must be at least 1"));
        }
        if self.seeds.is_empty() {
            return Err(invalid("experiment.seeds", "at least one seed required"));
        }
        if !(self.obstacle_offset > 0.0) {
            return Err(invalid(
                "experiment.obstacle_offset",
                format!("must be positive, got {}", self.obstacle_offset),
            ));
        }
        if !(self.obstacle_speed >= 0.0) {
            return Err(invalid(
                "experiment.obstacle_speed",
                format!("must be nonnegative, got {}", self.obstacle_speed),
            ));
        }
        if !(self.random_spawn_min > 0.0 && self.random_spawn_min <= self.random_spawn_max) {
            return Err(invalid(
                "experiment.random_spawn",
                format!(
                    "need 0 < min <= max, got [{}, {}]",
                    self.random_spawn_min, self.random_spawn_max
                ),
            ));
        }
        for (name, start) in [
            ("experiment.reward_window_start", self.reward_window_start),
            ("experiment.safety_window_start", self.safety_window_start),
        ] {
            if !(1..=500).contains(&start) {
                return Err(invalid(
                    name,
                    format!("must be in [1, 500] on the nominal scale, got {start}"),
                ));
            }
        }
        Ok(())
    }

    pub fn layout(&self) -> Result<TrackLayout, crate::track::TrackError> {
        TrackLayout::new(self.segments.clone(), self.destination)
    }

    pub fn action_space(&self) -> Result<ActionSpace, String> {
        ActionSpace::new(self.vehicle.torque_min, self.vehicle.torque_max, self.granularity)
    }

    /// The configured schedule kind with the configured exploration span.
    pub fn exploration_schedule(&self) -> Result<ExplorationSchedule, String> {
        self.schedule_of_kind(self.schedule)
    }

    /// A specific schedule kind with the configured exploration span.
    pub fn schedule_of_kind(&self, kind: ScheduleKind) -> Result<ExplorationSchedule, String> {
        ExplorationSchedule::new(kind, self.eps_hi, self.eps_lo)
    }

    /// Obstacle for one episode in fixed or disabled mode; random mode picks
    /// the offset elsewhere, where the run RNG lives.
    pub fn fixed_obstacle(&self) -> Obstacle {
        match self.obstacle_mode {
            ObstacleMode::None => Obstacle::inactive(),
            _ => Obstacle {
                spawn_offset: self.obstacle_offset,
                speed: self.obstacle_speed,
                active: true,
            },
        }
    }

    /// Reward comparison window, 1-based inclusive episode numbers, scaled
    /// proportionally from the nominal 500-episode scale.
    pub fn reward_window(&self) -> RangeInclusive<usize> {
        scaled_window(self.reward_window_start, self.max_episodes)
    }

    /// Safety comparison window.
    pub fn safety_window(&self) -> RangeInclusive<usize> {
        scaled_window(self.safety_window_start, self.max_episodes)
    }

    /// Canonical text form; `parse(echo()) == self`.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        out.push_str("[track]\n");
        for seg in &self.segments {
            match seg.radius() {
                Some(radius) => out.push_str(&format!(
                    "segment = curve,{},{},{},{}\n",
                    seg.length, radius, seg.speed_limit, seg.friction_mu
                )),
                None => out.push_str(&format!(
                    "segment = straight,{},{},{}\n",
                    seg.length, seg.speed_limit, seg.friction_mu
                )),
            }
        }
        out.push_str(&format!("destination = {}\n", self.destination));
        out.push_str(&format!("superelevation_mm = {}\n", self.superelevation_mm));
        out.push_str("\n[vehicle]\n");
        out.push_str(&format!("mass = {}\n", self.vehicle.mass));
        out.push_str(&format!("wheel_radius = {}\n", self.vehicle.wheel_radius));
        out.push_str(&format!("driven_axles = {}\n", self.vehicle.driven_axles));
        out.push_str(&format!("torque_min = {}\n", self.vehicle.torque_min));
        out.push_str(&format!("torque_max = {}\n", self.vehicle.torque_max));
        out.push_str(&format!("rolling_coeff = {}\n", self.vehicle.rolling_coeff));
        out.push_str(&format!("curve_coeff = {}\n", self.vehicle.curve_coeff));
        out.push_str(&format!("gravity = {}\n", self.vehicle.gravity));
        out.push_str(&format!("speed_cap = {}\n", self.vehicle.speed_cap));
        out.push_str("\n[rl]\n");
        out.push_str(&format!("alpha = {}\n", self.rl.alpha));
        out.push_str(&format!("gamma = {}\n", self.rl.gamma));
        out.push_str(&format!("eps_hi = {}\n", self.eps_hi));
        out.push_str(&format!("eps_lo = {}\n", self.eps_lo));
        out.push_str(&format!("schedule = {}\n", self.schedule));
        out.push_str(&format!("granularity = {}\n", self.granularity));
        out.push_str(&format!("smoothing_threshold = {}\n", self.rl.smoothing_threshold));
        out.push_str(&format!("reward_coeff = {}\n", self.rl.reward_coeff));
        out.push_str(&format!("terminal_bonus = {}\n", self.rl.terminal_bonus));
        out.push_str(&format!("collision_penalty = {}\n", self.rl.collision_penalty));
        out.push_str("\n[experiment]\n");
        out.push_str(&format!("max_episodes = {}\n", self.max_episodes));
        out.push_str(&format!("run_time = {}\n", self.timing.run_time));
        out.push_str(&format!("dt_ctrl = {}\n", self.timing.dt_ctrl));
        out.push_str(&format!("dt_int = {}\n", self.timing.dt_int));
        let seeds: Vec<String> = self.seeds.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("seeds = {}\n", seeds.join(",")));
        out.push_str(&format!("obstacle = {}\n", self.obstacle_mode.name()));
        out.push_str(&format!("obstacle_offset = {}\n", self.obstacle_offset));
        out.push_str(&format!("obstacle_speed = {}\n", self.obstacle_speed));
        out.push_str(&format!("random_spawn_min = {}\n", self.random_spawn_min));
        out.push_str(&format!("random_spawn_max = {}\n", self.random_spawn_max));
        out.push_str(&format!("safe_distance = {}\n", self.thresholds.safe_distance));
        out.push_str(&format!("speed_tolerance = {}\n", self.thresholds.speed_tolerance));
        out.push_str(&format!("near_end_window = {}\n", self.thresholds.near_end_window));
        out.push_str(&format!("turn_lookahead = {}\n", self.thresholds.turn_lookahead));
        out.push_str(&format!("stop_speed = {}\n", self.thresholds.stop_speed));
        out.push_str(&format!("reward_window_start = {}\n", self.reward_window_start));
        out.push_str(&format!("safety_window_start = {}\n", self.safety_window_start));
        out
    }
}

fn scaled_window(nominal_start: u32, max_episodes: u32) -> RangeInclusive<usize> {
    let start = (nominal_start as u64 * max_episodes as u64 / 500) as usize;
    start.max(1)..=max_episodes as usize
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    let parsed: f64 = value
        .parse()
        .map_err(|_| invalid(key, format!("expected a number, got '{value}'")))?;
    if !parsed.is_finite() {
        return Err(invalid(key, format!("must be finite, got '{value}'")));
    }
    Ok(parsed)
}

fn parse_u32(key: &str, value: &str) -> Result<u32, ConfigError> {
    value
        .parse()
        .map_err(|_| invalid(key, format!("expected a nonnegative integer, got '{value}'")))
}

/// `straight,<length>,<speed_limit>,<friction_mu>` or
/// `curve,<length>,<radius>,<speed_limit>,<friction_mu>`.
fn parse_segment(value: &str) -> Result<Segment, ConfigError> {
    let key = "track.segment";
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    let nums = |parts: &[&str]| -> Result<Vec<f64>, ConfigError> {
        parts.iter().map(|p| parse_f64(key, p)).collect()
    };
    let segment = match parts.as_slice() {
        ["straight", rest @ ..] if rest.len() == 3 => {
            let v = nums(rest)?;
            Segment::straight(v[0], v[2], v[1])
        }
        ["curve", rest @ ..] if rest.len() == 4 => {
            let v = nums(rest)?;
            Segment::curve(v[0], v[1], v[3], v[2])
        }
        _ => {
            return Err(invalid(
                key,
                format!(
                    "expected 'straight,<length>,<limit>,<mu>' or 'curve,<length>,<radius>,<limit>,<mu>', got '{value}'"
                ),
            ))
        }
    };
    segment.map_err(|e| invalid(key, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_yields_stock_defaults() {
        let cfg = ExperimentConfig::parse("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.max_episodes, 500);
        assert_eq!(cfg.rl.alpha, 0.2);
        assert_eq!(cfg.rl.gamma, 0.8);
        assert_eq!(cfg.timing.run_time, 45.0);
        assert_eq!(cfg.timing.dt_ctrl, 0.01);
        let layout = cfg.layout().unwrap();
        assert_eq!(layout.total_length(), 150.0);
        assert_eq!(cfg.action_space().unwrap().n_actions(), 61);
    }

    #[test]
    fn single_override_keeps_other_defaults() {
        let cfg = ExperimentConfig::parse("[rl]\nalpha = 0.2").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        let cfg = ExperimentConfig::parse("[rl]\nalpha = 0.5").unwrap();
        assert_eq!(cfg.rl.alpha, 0.5);
        assert_eq!(cfg.rl.gamma, 0.8);
    }

    #[test]
    fn range_violations_are_invalid_values() {
        assert!(matches!(
            ExperimentConfig::parse("[rl]\nalpha = 1.5"),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("[rl]\ngamma = 1.0"),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("[vehicle]\ntorque_max = 400"),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("[rl]\ngranularity = 7"),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("[experiment]\ndt_int = 0.003"),
            Err(ConfigError::InvalidValue { .. })
        ));
    }

    #[test]
    fn unknown_keys_and_sections_fail_closed() {
        let err = ExperimentConfig::parse("[rl]\nalpa = 0.2").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { line: 2, .. }));
        let err = ExperimentConfig::parse("[rrl]\nalpha = 0.2").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { line: 1, .. }));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = ExperimentConfig::parse("[rl]\nalpha 0.2").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 2, .. }));
        let err = ExperimentConfig::parse("alpha = 0.2").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }));
        let err = ExperimentConfig::parse("[rl\nalpha = 0.2").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let cfg = ExperimentConfig::parse(
            "# stock setup\n\n[rl]\nalpha = 0.3 # tuned\n\n# done\n",
        )
        .unwrap();
        assert_eq!(cfg.rl.alpha, 0.3);
    }

    #[test]
    fn custom_track_replaces_the_default() {
        let text = "[track]\nsegment = straight,30,2.0,0.3\nsegment = curve,20,100,1.0,0.3\ndestination = 50\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.segments.len(), 2);
        assert_eq!(cfg.segments[1].radius(), Some(100.0));
        let layout = cfg.layout().unwrap();
        assert_eq!(layout.total_length(), 50.0);
    }

    #[test]
    fn bad_segments_are_rejected() {
        assert!(ExperimentConfig::parse("[track]\nsegment = curve,20,2,1.0,0.3").is_err());
        assert!(ExperimentConfig::parse("[track]\nsegment = loop,20,100,1.0,0.3").is_err());
        assert!(ExperimentConfig::parse("[track]\nsegment = straight,30,2.0").is_err());
        // destination beyond the track
        assert!(ExperimentConfig::parse("[track]\nsegment = straight,30,2.0,0.3\ndestination = 31").is_err());
    }

    #[test]
    fn echo_round_trips() {
        let cfg = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::parse(&cfg.echo()).unwrap(), cfg);

        let custom = ExperimentConfig::parse(
            "[track]\nsegment = straight,30,2.0,0.3\ndestination = 25\n\
             [rl]\nschedule = linear\ngranularity = 20\n\
             [experiment]\nseeds = 7,8\nobstacle = random\nmax_episodes = 100",
        )
        .unwrap();
        assert_eq!(ExperimentConfig::parse(&custom.echo()).unwrap(), custom);
    }

    #[test]
    fn comparison_windows_scale_proportionally() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.reward_window(), 460..=500);
        assert_eq!(cfg.safety_window(), 441..=500);
        let cfg = ExperimentConfig::parse("[experiment]\nmax_episodes = 100").unwrap();
        assert_eq!(cfg.reward_window(), 92..=100);
        assert_eq!(cfg.safety_window(), 88..=100);
        let cfg = ExperimentConfig::parse("[experiment]\nmax_episodes = 1").unwrap();
        assert_eq!(cfg.reward_window(), 1..=1);
    }

    #[test]
    fn obstacle_modes_parse() {
        for (text, mode) in [
            ("fixed", ObstacleMode::Fixed),
            ("random", ObstacleMode::Random),
            ("none", ObstacleMode::None),
        ] {
            let cfg =
                ExperimentConfig::parse(&format!("[experiment]\nobstacle = {text}")).unwrap();
            assert_eq!(cfg.obstacle_mode, mode);
        }
        assert!(ExperimentConfig::parse("[experiment]\nobstacle = wall").is_err());
        let none = ExperimentConfig::parse("[experiment]\nobstacle = none").unwrap();
        assert!(!none.fixed_obstacle().active);
    }
}
