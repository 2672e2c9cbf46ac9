//! Total, deterministic mapping from (position, speed, gap) to a drive state.
//!
//! Precedence when several conditions hold: terminal / near-end first, then
//! obstacle proximity, then turn preparation, then the plain speed bands of
//! the current segment. `Begin` is emitted only before the first action.

use crate::dynamics::VehicleState;
use crate::rl::DriveState;
use crate::track::{gap, TrackError, TrackLayout};

use super::ClassifierThresholds;

pub fn classify_state(
    v: &VehicleState,
    layout: &TrackLayout,
    obstacle_pos: f64,
    th: &ClassifierThresholds,
    prev_action_taken: bool,
) -> Result<DriveState, TrackError> {
    if !prev_action_taken {
        return Ok(DriveState::Begin);
    }
    let pos = v.position;
    if pos < 0.0 || pos > layout.total_length() {
        return Err(TrackError::PositionOutOfTrack {
            pos,
            total: layout.total_length(),
        });
    }
    let speed = v.speed;
    let stopped = speed.abs() <= th.stop_speed;

    // (1)-(2) terminal region
    if layout.destination - pos <= th.near_end_window {
        return Ok(if stopped {
            DriveState::ToTheEnd
        } else if speed > th.stop_speed {
            DriveState::NearToTheEndBrake
        } else {
            DriveState::NearToTheEndDrive
        });
    }

    let (segment, _) = layout.segment_at(pos)?;

    // (3)-(4) obstacle proximity
    if gap(pos, obstacle_pos) <= th.safe_distance {
        return Ok(if stopped {
            DriveState::ObstacleStop
        } else if segment.is_curve() {
            DriveState::CWithinObstacle
        } else {
            DriveState::LWithinObstacle
        });
    }

    // (5) turn preparation: on a straight with a curve ahead, the band is
    // taken against the curve's limit
    if !segment.is_curve() {
        if let Some(curve) = layout.upcoming_curve(pos, th.turn_lookahead)? {
            return Ok(band(speed, curve.speed_limit, th.speed_tolerance, BandStates {
                max: DriveState::MaxSpdLToC,
                over: DriveState::OverSpdLToC,
                below: DriveState::BelowSpdLToC,
            }));
        }
    }

    // (6) plain speed band against the local limit
    let states = if segment.is_curve() {
        BandStates {
            max: DriveState::MaxSpdCNoObstacle,
            over: DriveState::OverSpdCNoObstacle,
            below: DriveState::BelowSpdCNoObstacle,
        }
    } else {
        BandStates {
            max: DriveState::MaxSpdLNoObstacle,
            over: DriveState::OverSpdLNoObstacle,
            below: DriveState::BelowSpdLNoObstacle,
        }
    };
    Ok(band(speed, segment.speed_limit, th.speed_tolerance, states))
}

struct BandStates {
    max: DriveState,
    over: DriveState,
    below: DriveState,
}

fn band(speed: f64, limit: f64, tolerance: f64, states: BandStates) -> DriveState {
    if (speed - limit).abs() <= tolerance {
        states.max
    } else if speed > limit + tolerance {
        states.over
    } else {
        states.below
    }
}
