//! Discrete torque action space and the change-rate smoothing rule.

/// Evenly spaced torque grid from `min_torque` to `max_torque`, Nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionSpace {
    min_torque: f64,
    max_torque: f64,
    granularity: f64,
    n_actions: usize,
}

impl Default for ActionSpace {
    /// 61 torques from -300 to +300 Nm in 10 Nm steps.
    fn default() -> Self {
        Self::new(-300.0, 300.0, 10.0).expect("default grid is valid")
    }
}

impl ActionSpace {
    pub fn new(min_torque: f64, max_torque: f64, granularity: f64) -> Result<Self, String> {
        if !(min_torque < max_torque) {
            return Err(format!(
                "torque range is empty: [{min_torque}, {max_torque}]"
            ));
        }
        if !(granularity > 0.0) {
            return Err(format!("granularity must be positive, got {granularity}"));
        }
        let steps = (max_torque - min_torque) / granularity;
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(format!(
                "granularity {granularity} does not divide the range [{min_torque}, {max_torque}] evenly"
            ));
        }
        Ok(Self {
            min_torque,
            max_torque,
            granularity,
            n_actions: steps.round() as usize + 1,
        })
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn min_torque(&self) -> f64 {
        self.min_torque
    }

    pub fn max_torque(&self) -> f64 {
        self.max_torque
    }

    pub fn granularity(&self) -> f64 {
        self.granularity
    }

    /// Torque value of action `index`.
    pub fn torque(&self, index: usize) -> f64 {
        debug_assert!(index < self.n_actions);
        self.min_torque + index as f64 * self.granularity
    }

    /// Index of a torque that lies on the grid.
    pub fn index_of(&self, torque: f64) -> Option<usize> {
        let steps = (torque - self.min_torque) / self.granularity;
        let idx = steps.round();
        if idx < 0.0 || idx as usize >= self.n_actions || (steps - idx).abs() > 1e-6 {
            return None;
        }
        Some(idx as usize)
    }

    /// Rate-limit a torque command against the previous one.
    ///
    /// Within `threshold` the target passes through unchanged; beyond it the
    /// command moves `threshold` from `prev` toward the target, snapped onto
    /// the grid in the direction of `prev`.
    pub fn smooth(&self, target: f64, prev: f64, threshold: f64) -> f64 {
        let delta = target - prev;
        if delta.abs() <= threshold {
            return target;
        }
        let capped = prev + threshold * delta.signum();
        let steps = (capped - self.min_torque) / self.granularity;
        let snapped = if delta > 0.0 {
            (steps + 1e-9).floor()
        } else {
            (steps - 1e-9).ceil()
        };
        self.min_torque + snapped * self.granularity
    }
}
