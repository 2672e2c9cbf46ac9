//! Point-mass longitudinal dynamics with wheel-rail adhesion saturation.
//!
//! Axle torque converts to a tractive force that is clamped to the adhesion
//! limit `mu*m*g`; beyond that limit the wheel spins (traction) or slides
//! (braking) and no extra force reaches the rail, so the clamp stands in for
//! both. Motion resistance is a rolling term plus a curvature term on curves.
//! Integration runs on a fixed substep with a static-friction rule: a vehicle
//! at rest stays at rest while the applied force is inside the static cap.

use crate::track::{Segment, TrackLayout};
use thiserror::Error;

/// Largest torque magnitude the actuator model accepts, Nm.
pub const MAX_ABS_TORQUE: f64 = 388.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("torque {torque} Nm outside [{min}, {max}] Nm")]
    TorqueOutOfRange { torque: f64, min: f64, max: f64 },
    #[error("integration produced a non-finite state at t = {t} s")]
    IntegrationFault { t: f64 },
}

/// Physical parameters of the locomotive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    /// Vehicle mass, kg.
    pub mass: f64,
    /// Nominal wheel radius, m.
    pub wheel_radius: f64,
    /// Number of driven axles receiving the commanded torque.
    pub driven_axles: u32,
    /// Most negative allowed axle torque, Nm.
    pub torque_min: f64,
    /// Most positive allowed axle torque, Nm.
    pub torque_max: f64,
    /// Rolling resistance coefficient (dimensionless).
    pub rolling_coeff: f64,
    /// Curve resistance length scale, m; applied as `curve_coeff / radius`.
    pub curve_coeff: f64,
    /// Gravitational acceleration, m/s^2.
    pub gravity: f64,
    /// Speed magnitude beyond which the run is declared faulted, m/s.
    pub speed_cap: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            mass: 1500.0,
            wheel_radius: 0.193,
            driven_axles: 2,
            torque_min: -300.0,
            torque_max: 300.0,
            rolling_coeff: 0.004,
            curve_coeff: 0.5,
            gravity: 9.81,
            speed_cap: 5.0,
        }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.mass > 0.0) {
            return Err(format!("mass must be positive, got {}", self.mass));
        }
        if !(self.wheel_radius > 0.0) {
            return Err(format!("wheel_radius must be positive, got {}", self.wheel_radius));
        }
        if self.driven_axles < 1 {
            return Err("driven_axles must be at least 1".into());
        }
        if !(self.torque_min < 0.0 && self.torque_max > 0.0) {
            return Err(format!(
                "torque bounds must straddle zero, got [{}, {}]",
                self.torque_min, self.torque_max
            ));
        }
        if self.torque_min.abs() > MAX_ABS_TORQUE || self.torque_max.abs() > MAX_ABS_TORQUE {
            return Err(format!(
                "torque bounds exceed the {MAX_ABS_TORQUE} Nm actuator limit"
            ));
        }
        if !(self.rolling_coeff >= 0.0) {
            return Err(format!("rolling_coeff must be nonnegative, got {}", self.rolling_coeff));
        }
        if !(self.curve_coeff >= 0.0) {
            return Err(format!("curve_coeff must be nonnegative, got {}", self.curve_coeff));
        }
        if !(self.gravity > 0.0) {
            return Err(format!("gravity must be positive, got {}", self.gravity));
        }
        if !(self.speed_cap > 0.0) {
            return Err(format!("speed_cap must be positive, got {}", self.speed_cap));
        }
        Ok(())
    }

    /// Adhesion force limit `mu * m * g`, N.
    pub fn adhesion_limit(&self, mu: f64) -> f64 {
        mu * self.mass * self.gravity
    }
}

/// Kinematic state of the vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleState {
    pub t: f64,
    pub position: f64,
    pub speed: f64,
}

impl VehicleState {
    pub fn at_rest() -> Self {
        Self {
            t: 0.0,
            position: 0.0,
            speed: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.position.is_finite() && self.speed.is_finite()
    }
}

/// Outcome of [`fault_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultCheck {
    Ok,
    Fault,
}

/// Tractive force at the rail for a commanded axle torque, clamped to the
/// adhesion limit `mu * m * g`.
pub fn wheel_force(torque: f64, params: &VehicleParams, mu: f64) -> Result<f64, DynamicsError> {
    if !(params.torque_min..=params.torque_max).contains(&torque) {
        return Err(DynamicsError::TorqueOutOfRange {
            torque,
            min: params.torque_min,
            max: params.torque_max,
        });
    }
    let raw = params.driven_axles as f64 * torque / params.wheel_radius;
    let limit = params.adhesion_limit(mu);
    Ok(raw.clamp(-limit, limit))
}

/// Magnitude of the rolling-plus-curve resistance, N.
fn resistance_magnitude(segment: &Segment, params: &VehicleParams) -> f64 {
    let curve_term = match segment.radius() {
        Some(radius) => params.curve_coeff / radius,
        None => 0.0,
    };
    params.mass * params.gravity * (params.rolling_coeff + curve_term)
}

/// Motion resistance force, N.
///
/// While moving, returns the resistance magnitude carrying the sign of the
/// speed (subtract it from the wheel force). At rest, returns the static
/// friction force opposing `applied_force`, capped at the rolling magnitude
/// (add it to the wheel force). [`step`] combines both regimes accordingly.
pub fn resistance(
    speed: f64,
    applied_force: f64,
    segment: &Segment,
    params: &VehicleParams,
) -> f64 {
    let r0 = resistance_magnitude(segment, params);
    if speed != 0.0 {
        r0 * speed.signum()
    } else {
        -applied_force.clamp(-r0, r0)
    }
}

/// Net longitudinal force for the current substep.
fn net_force(speed: f64, applied_force: f64, segment: &Segment, params: &VehicleParams) -> f64 {
    let res = resistance(speed, applied_force, segment, params);
    if speed != 0.0 {
        applied_force - res
    } else {
        applied_force + res
    }
}

/// Advance one control interval of `dt_ctrl` seconds as `dt_ctrl / dt_int`
/// fixed substeps.
///
/// Each substep updates speed first and advances position with the mean of
/// the old and new speeds, which keeps constant-force trajectories exact. If
/// resistance alone would reverse the direction of motion within a substep
/// the speed is pinned to zero; breakaway from rest happens on the next
/// substep only if the applied force exceeds the static cap.
pub fn step(
    state: &VehicleState,
    torque: f64,
    layout: &TrackLayout,
    params: &VehicleParams,
    dt_ctrl: f64,
    dt_int: f64,
) -> Result<VehicleState, DynamicsError> {
    let substeps = (dt_ctrl / dt_int).round() as u64;
    debug_assert!(
        substeps >= 1 && ((dt_ctrl / dt_int) - substeps as f64).abs() < 1e-6,
        "dt_ctrl must be an integer multiple of dt_int"
    );
    let mut t = state.t;
    let mut position = state.position;
    let mut speed = state.speed;
    for _ in 0..substeps {
        let segment = layout.segment_at_clamped(position);
        let force = wheel_force(torque, params, segment.friction_mu)?;
        let accel = net_force(speed, force, segment, params) / params.mass;
        let mut new_speed = speed + accel * dt_int;
        // Resistance cannot push the vehicle through zero: stop in-substep.
        if speed != 0.0 && new_speed * speed < 0.0 {
            new_speed = 0.0;
        }
        position += 0.5 * (speed + new_speed) * dt_int;
        speed = new_speed;
        t += dt_int;
        if !(t.is_finite() && position.is_finite() && speed.is_finite()) {
            return Err(DynamicsError::IntegrationFault { t });
        }
    }
    Ok(VehicleState { t, position, speed })
}

/// Fault iff any state field is non-finite or the speed magnitude exceeds
/// the configured cap.
pub fn fault_check(state: &VehicleState, params: &VehicleParams) -> FaultCheck {
    if !state.is_finite() || state.speed.abs() > params.speed_cap {
        FaultCheck::Fault
    } else {
        FaultCheck::Ok
    }
}
