//! The 16-valued driving-state abstraction the agent observes.

use std::fmt;

pub const STATE_COUNT: usize = 16;

/// Discrete driving situation, split by track kind (straight `l`, curve `c`),
/// obstacle proximity, speed band relative to the local limit, and run
/// start/end phases. `ToTheEnd` is the only terminal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DriveState {
    Begin,
    ToTheEnd,
    ObstacleStop,
    CWithinObstacle,
    MaxSpdCNoObstacle,
    OverSpdCNoObstacle,
    BelowSpdCNoObstacle,
    LWithinObstacle,
    NearToTheEndBrake,
    NearToTheEndDrive,
    MaxSpdLToC,
    OverSpdLToC,
    BelowSpdLToC,
    MaxSpdLNoObstacle,
    OverSpdLNoObstacle,
    BelowSpdLNoObstacle,
}

impl DriveState {
    pub const ALL: [DriveState; STATE_COUNT] = [
        DriveState::Begin,
        DriveState::ToTheEnd,
        DriveState::ObstacleStop,
        DriveState::CWithinObstacle,
        DriveState::MaxSpdCNoObstacle,
        DriveState::OverSpdCNoObstacle,
        DriveState::BelowSpdCNoObstacle,
        DriveState::LWithinObstacle,
        DriveState::NearToTheEndBrake,
        DriveState::NearToTheEndDrive,
        DriveState::MaxSpdLToC,
        DriveState::OverSpdLToC,
        DriveState::BelowSpdLToC,
        DriveState::MaxSpdLNoObstacle,
        DriveState::OverSpdLNoObstacle,
        DriveState::BelowSpdLNoObstacle,
    ];

    /// Row index in the Q-table.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_terminal(self) -> bool {
        self == DriveState::ToTheEnd
    }

    pub fn name(self) -> &'static str {
        match self {
            DriveState::Begin => "begin",
            DriveState::ToTheEnd => "to_the_end",
            DriveState::ObstacleStop => "obstacle_stop",
            DriveState::CWithinObstacle => "c_within_obstacle",
            DriveState::MaxSpdCNoObstacle => "max_spd_c_no_obstacle",
            DriveState::OverSpdCNoObstacle => "over_spd_c_no_obstacle",
            DriveState::BelowSpdCNoObstacle => "below_spd_c_no_obstacle",
            DriveState::LWithinObstacle => "l_within_obstacle",
            DriveState::NearToTheEndBrake => "near_to_the_end_brake",
            DriveState::NearToTheEndDrive => "near_to_the_end_drive",
            DriveState::MaxSpdLToC => "max_spd_l_to_c",
            DriveState::OverSpdLToC => "over_spd_l_to_c",
            DriveState::BelowSpdLToC => "below_spd_l_to_c",
            DriveState::MaxSpdLNoObstacle => "max_spd_l_no_obstacle",
            DriveState::OverSpdLNoObstacle => "over_spd_l_no_obstacle",
            DriveState::BelowSpdLNoObstacle => "below_spd_l_no_obstacle",
        }
    }

    pub fn from_name(name: &str) -> Option<DriveState> {
        DriveState::ALL.iter().copied().find(|s| s.name() == name)
    }
}

impl fmt::Display for DriveState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_states_with_stable_indices() {
        assert_eq!(DriveState::ALL.len(), 16);
        for (i, s) in DriveState::ALL.iter().enumerate() {
            assert_eq!(s.index(), i);
        }
    }

    #[test]
    fn only_to_the_end_is_terminal() {
        for s in DriveState::ALL {
            assert_eq!(s.is_terminal(), s == DriveState::ToTheEnd);
        }
    }

    #[test]
    fn names_round_trip() {
        for s in DriveState::ALL {
            assert_eq!(DriveState::from_name(s.name()), Some(s));
        }
        assert_eq!(DriveState::from_name("bogus"), None);
    }
}
