//! Car-following safety index and schedule-comparison percentages.

use std::ops::RangeInclusive;

use thiserror::Error;

use super::EpisodeResult;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("episode had no active obstacle")]
    NoObstacle,
    #[error("baseline mean over the window is zero")]
    DegenerateBaseline,
    #[error("window {start}..={end} not covered by series of length {len}")]
    InvalidWindow { start: usize, end: usize, len: usize },
}

/// Closest approach to the obstacle minus the required safe distance.
/// Zero is ideal; negative means the safe distance was violated.
pub fn safety_index(result: &EpisodeResult, safe_distance: f64) -> Result<f64, MetricsError> {
    if !result.min_gap.is_finite() {
        return Err(MetricsError::NoObstacle);
    }
    Ok(result.min_gap - safe_distance)
}

/// Relative change of series `a` over series `b` across an episode window,
/// in percent: `100 * (mean_a - mean_b) / |mean_b|`. Episodes are numbered
/// from 1.
pub fn improvement_pct(
    series_a: &[f64],
    series_b: &[f64],
    window: RangeInclusive<usize>,
) -> Result<f64, MetricsError> {
    let (start, end) = (*window.start(), *window.end());
    let len = series_a.len().min(series_b.len());
    if start < 1 || end < start || end > len {
        return Err(MetricsError::InvalidWindow { start, end, len });
    }
    let mean = |s: &[f64]| {
        let slice = &s[start - 1..end];
        slice.iter().sum::<f64>() / slice.len() as f64
    };
    let mean_a = mean(series_a);
    let mean_b = mean(series_b);
    if mean_b == 0.0 {
        return Err(MetricsError::DegenerateBaseline);
    }
    Ok(100.0 * (mean_a - mean_b) / mean_b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::episode::Termination;

    fn result_with_min_gap(min_gap: f64) -> EpisodeResult {
        EpisodeResult {
            records: Vec::new(),
            reward_sum: 0.0,
            reward_avg: 0.0,
            min_gap,
            safety_index: None,
            termination: Termination::TimeLimit,
            epsilon: 0.0,
            steps: 0,
        }
    }

    #[test]
    fn safety_index_examples() {
        assert_eq!(safety_index(&result_with_min_gap(5.0), 5.0).unwrap(), 0.0);
        assert!((safety_index(&result_with_min_gap(4.2), 5.0).unwrap() + 0.8).abs() < 1e-12);
        assert_eq!(safety_index(&result_with_min_gap(7.0), 5.0).unwrap(), 2.0);
        assert_eq!(
            safety_index(&result_with_min_gap(f64::INFINITY), 5.0),
            Err(MetricsError::NoObstacle)
        );
    }

    #[test]
    fn improvement_examples() {
        let b: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let a: Vec<f64> = b.iter().map(|v| v * 1.243).collect();
        let pct = improvement_pct(&a, &b, 1..=10).unwrap();
        assert!((pct - 24.3).abs() < 1e-9);

        assert_eq!(improvement_pct(&b, &b, 3..=7).unwrap(), 0.0);
        assert_eq!(improvement_pct(&[2.0, 2.0], &[1.0, 3.0], 1..=2).unwrap(), 0.0);
    }

    #[test]
    fn improvement_on_negative_baseline_uses_magnitude() {
        // less-negative a over negative b is an improvement
        let a = [-0.5, -0.5];
        let b = [-1.0, -1.0];
        let pct = improvement_pct(&a, &b, 1..=2).unwrap();
        assert!((pct - 50.0).abs() < 1e-9);
    }

    #[test]
    fn improvement_errors() {
        assert_eq!(
            improvement_pct(&[1.0], &[0.0], 1..=1),
            Err(MetricsError::DegenerateBaseline)
        );
        assert!(matches!(
            improvement_pct(&[1.0, 2.0], &[1.0, 2.0], 1..=3),
            Err(MetricsError::InvalidWindow { .. })
        ));
        assert!(matches!(
            improvement_pct(&[1.0, 2.0], &[1.0, 2.0], 0..=2),
            Err(MetricsError::InvalidWindow { .. })
        ));
    }
}
