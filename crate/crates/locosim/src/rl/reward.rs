//! Reward from the per-step speed change.
//!
//! The magnitude is `reward_coeff * |v_current - v_record|`; the sign depends
//! on what the state calls for. Below the limit (and when reverse motion
//! should turn into forward drive) acceleration is rewarded. Over the limit,
//! deceleration is rewarded. Close to the obstacle, close to the terminal,
//! or stopped at the obstacle, shedding speed magnitude is rewarded: braking
//! to a stop pays, accelerating away in reverse does not. At the limit,
//! holding the speed steady within the tolerance is rewarded. Terminal bonus
//! and collision penalty are added by the episode engine, not here.

use super::{DriveState, RLParams};

/// Reward for one control step given the state the action was taken in, the
/// previous step's speed and the new speed.
pub fn compute_reward(
    state: DriveState,
    v_record: f64,
    v_current: f64,
    params: &RLParams,
    speed_tolerance: f64,
) -> f64 {
    let c = params.reward_coeff;
    let dv = v_current - v_record;
    match state {
        DriveState::BelowSpdCNoObstacle
        | DriveState::BelowSpdLToC
        | DriveState::BelowSpdLNoObstacle
        | DriveState::NearToTheEndDrive => c * dv,
        DriveState::OverSpdCNoObstacle
        | DriveState::OverSpdLToC
        | DriveState::OverSpdLNoObstacle => -c * dv,
        DriveState::CWithinObstacle
        | DriveState::LWithinObstacle
        | DriveState::NearToTheEndBrake
        | DriveState::ObstacleStop => c * (v_record.abs() - v_current.abs()),
        DriveState::MaxSpdCNoObstacle
        | DriveState::MaxSpdLToC
        | DriveState::MaxSpdLNoObstacle => (c * (speed_tolerance - dv.abs())).max(0.0),
        DriveState::Begin | DriveState::ToTheEnd => 0.0,
    }
}

/// Discounted sum of a reward sequence (diagnostic).
pub fn discounted_return(rewards: &[f64], gamma: f64) -> f64 {
    rewards
        .iter()
        .rev()
        .fold(0.0, |acc, &r| r + gamma * acc)
}
