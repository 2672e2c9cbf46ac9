//! Closed-loop simulator and tabular reinforcement-learning workbench for
//! autonomous mining-locomotive speed control.
//!
//! The crate couples a saturated point-mass longitudinal vehicle model with
//! tabular Q-learning over a 16-state driving abstraction and compares
//! epsilon-greedy exploration schedules (constant, linear decay, and a
//! nonlinear circular-arc decay) on reward and car-following safety.
//!
//! Layout:
//! - [`track`]: segments, speed limits, the moving obstacle
//! - [`dynamics`]: torque-to-force conversion, adhesion saturation, fixed-step integration
//! - [`rl`]: Q-table, exploration schedules, action smoothing, reward
//! - [`episode`]: the 16-state classifier, the episode loop, safety metrics
//! - [`config`] / [`experiment`]: config file parsing, training orchestration, CSV/report output

pub mod config;
pub mod dynamics;
pub mod episode;
pub mod experiment;
pub mod rl;
pub mod track;
