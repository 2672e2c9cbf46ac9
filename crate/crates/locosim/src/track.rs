//! Track geometry, speed limits, and the moving obstacle.
//!
//! A track is an ordered list of straight and curved segments, each carrying
//! its own friction coefficient and speed limit. Positions are meters from
//! the start of the first segment. A position lying exactly on a segment
//! boundary belongs to the following segment; the total length belongs to the
//! last segment.

use thiserror::Error;

/// Tightest curve the vehicle can negotiate, in meters.
pub const MIN_CURVE_RADIUS: f64 = 4.0;
/// Lowest plausible wheel-rail static friction (heavily lubricated rail).
pub const MIN_FRICTION: f64 = 0.05;
/// Highest accepted wheel-rail static friction.
pub const MAX_FRICTION: f64 = 0.6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackError {
    #[error("position {pos} m is outside the track [0, {total} m]")]
    PositionOutOfTrack { pos: f64, total: f64 },
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
}

/// Geometric kind of a track segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    Straight,
    Curve { radius: f64 },
}

/// One piece of track with homogeneous curvature, friction and speed limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub length: f64,
    pub friction_mu: f64,
    pub speed_limit: f64,
}

impl Segment {
    pub fn new(
        kind: SegmentKind,
        length: f64,
        friction_mu: f64,
        speed_limit: f64,
    ) -> Result<Self, TrackError> {
        if !(length > 0.0) {
            return Err(TrackError::InvalidSegment(format!(
                "length must be positive, got {length}"
            )));
        }
        if let SegmentKind::Curve { radius } = kind {
            if !(radius >= MIN_CURVE_RADIUS) {
                return Err(TrackError::InvalidSegment(format!(
                    "curve radius {radius} m below minimum {MIN_CURVE_RADIUS} m"
                )));
            }
        }
        if !(MIN_FRICTION..=MAX_FRICTION).contains(&friction_mu) {
            return Err(TrackError::InvalidSegment(format!(
                "friction {friction_mu} outside [{MIN_FRICTION}, {MAX_FRICTION}]"
            )));
        }
        if !(speed_limit > 0.0) {
            return Err(TrackError::InvalidSegment(format!(
                "speed limit must be positive, got {speed_limit}"
            )));
        }
        Ok(Self {
            kind,
            length,
            friction_mu,
            speed_limit,
        })
    }

    pub fn straight(length: f64, friction_mu: f64, speed_limit: f64) -> Result<Self, TrackError> {
        Self::new(SegmentKind::Straight, length, friction_mu, speed_limit)
    }

    pub fn curve(
        length: f64,
        radius: f64,
        friction_mu: f64,
        speed_limit: f64,
    ) -> Result<Self, TrackError> {
        Self::new(SegmentKind::Curve { radius }, length, friction_mu, speed_limit)
    }

    pub fn is_curve(&self) -> bool {
        matches!(self.kind, SegmentKind::Curve { .. })
    }

    /// Curve radius, if this segment is a curve.
    pub fn radius(&self) -> Option<f64> {
        match self.kind {
            SegmentKind::Curve { radius } => Some(radius),
            SegmentKind::Straight => None,
        }
    }
}

/// Ordered segments plus the position where a run must end stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackLayout {
    segments: Vec<Segment>,
    /// Start position of each segment (same indexing as `segments`).
    starts: Vec<f64>,
    total_length: f64,
    pub destination: f64,
}

impl TrackLayout {
    pub fn new(segments: Vec<Segment>, destination: f64) -> Result<Self, TrackError> {
        if segments.is_empty() {
            return Err(TrackError::InvalidLayout("no segments".into()));
        }
        let mut starts = Vec::with_capacity(segments.len());
        let mut acc = 0.0;
        for seg in &segments {
            starts.push(acc);
            acc += seg.length;
        }
        let total_length = acc;
        if !(destination > 0.0 && destination <= total_length) {
            return Err(TrackError::InvalidLayout(format!(
                "destination {destination} m outside (0, {total_length} m]"
            )));
        }
        Ok(Self {
            segments,
            starts,
            total_length,
            destination,
        })
    }

    /// The stock 150 m layout: 50 m straight (2.83 m/s), 50 m curve of radius
    /// 220.48 m (1.42 m/s), 50 m straight (2.83 m/s), dry rail throughout.
    pub fn default_track() -> Self {
        let segments = vec![
            Segment::straight(50.0, 0.4, 2.83).expect("valid segment"),
            Segment::curve(50.0, 220.48, 0.4, 1.42).expect("valid segment"),
            Segment::straight(50.0, 0.4, 2.83).expect("valid segment"),
        ];
        Self::new(segments, 150.0).expect("valid layout")
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Start position of segment `index`.
    pub fn segment_start(&self, index: usize) -> f64 {
        self.starts[index]
    }

    /// Segment containing `pos`, with its index. A boundary position belongs
    /// to the following segment; `total_length` belongs to the last segment.
    pub fn segment_at(&self, pos: f64) -> Result<(&Segment, usize), TrackError> {
        if !(0.0..=self.total_length).contains(&pos) {
            return Err(TrackError::PositionOutOfTrack {
                pos,
                total: self.total_length,
            });
        }
        // partition_point: first index whose start exceeds pos, minus one.
        let idx = self.starts.partition_point(|&s| s <= pos).saturating_sub(1);
        Ok((&self.segments[idx], idx))
    }

    /// Segment lookup that clamps out-of-track positions to the nearest end.
    /// Used by the integrator so force evaluation never fails mid-substep.
    pub(crate) fn segment_at_clamped(&self, pos: f64) -> &Segment {
        let clamped = pos.clamp(0.0, self.total_length);
        self.segment_at(clamped).expect("clamped position is on track").0
    }

    /// Minimum of the current segment's limit and the limit of every segment
    /// whose start lies within `(pos, pos + lookahead]`.
    pub fn speed_limit_at(&self, pos: f64, lookahead: f64) -> Result<f64, TrackError> {
        let (seg, idx) = self.segment_at(pos)?;
        let mut limit = seg.speed_limit;
        for j in idx + 1..self.segments.len() {
            if self.starts[j] > pos + lookahead {
                break;
            }
            limit = limit.min(self.segments[j].speed_limit);
        }
        Ok(limit)
    }

    /// First curve segment whose start lies within `(pos, pos + lookahead]`.
    pub fn upcoming_curve(&self, pos: f64, lookahead: f64) -> Result<Option<&Segment>, TrackError> {
        let (_, idx) = self.segment_at(pos)?;
        for j in idx + 1..self.segments.len() {
            if self.starts[j] > pos + lookahead {
                break;
            }
            if self.segments[j].is_curve() {
                return Ok(Some(&self.segments[j]));
            }
        }
        Ok(None)
    }
}

/// A point-like leading obstacle moving at constant speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstacle {
    /// Spawn position ahead of the vehicle start, meters.
    pub spawn_offset: f64,
    /// Obstacle speed, m/s (nonnegative).
    pub speed: f64,
    pub active: bool,
}

impl Obstacle {
    pub fn new(spawn_offset: f64, speed: f64) -> Result<Self, TrackError> {
        if !(spawn_offset > 0.0) {
            return Err(TrackError::InvalidLayout(format!(
                "obstacle spawn offset must be positive, got {spawn_offset}"
            )));
        }
        if !(speed >= 0.0) {
            return Err(TrackError::InvalidLayout(format!(
                "obstacle speed must be nonnegative, got {speed}"
            )));
        }
        Ok(Self {
            spawn_offset,
            speed,
            active: true,
        })
    }

    /// No obstacle present; `position` reports +infinity.
    pub fn inactive() -> Self {
        Self {
            spawn_offset: f64::INFINITY,
            speed: 0.0,
            active: false,
        }
    }

    /// Obstacle position at time `t`, given where the vehicle started.
    /// Inactive obstacles report +infinity (nothing ahead).
    pub fn position(&self, vehicle_start: f64, t: f64) -> f64 {
        if !self.active {
            return f64::INFINITY;
        }
        vehicle_start + self.spawn_offset + self.speed * t
    }
}

/// Signed distance from vehicle to obstacle; negative means overrun.
pub fn gap(vehicle_pos: f64, obstacle_pos: f64) -> f64 {
    obstacle_pos - vehicle_pos
}
