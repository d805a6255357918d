//! Branch radius formulas and the per-segment split counter.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RadiusError {
    #[error("degenerate trunk radius {0}")]
    DegenerateTrunkRadius(f64),
}

/// Trunk base radius: length * ratio * (scale0 + draw * scaleV0), with the
/// variation draw in [-1, 1].
pub fn trunk_radius(
    trunk_length: f64,
    ratio: f64,
    scale0: f64,
    scale_v0: f64,
    variation_draw: f64,
) -> Result<f64, RadiusError> {
    let r = trunk_length * ratio * (scale0 + variation_draw * scale_v0);
    if r > 0.0 {
        Ok(r)
    } else {
        Err(RadiusError::DegenerateTrunkRadius(r))
    }
}

/// Child base radius: parent * (child_len / parent_len)^ratioPower, scaled by
/// the per-level tweak multiplier and floored at the minimum radius.
pub fn child_radius(
    parent_radius: f64,
    child_len: f64,
    parent_len: f64,
    ratio_power: f64,
    tweak: f64,
    min_radius: f64,
) -> f64 {
    let r = parent_radius * (child_len / parent_len).powf(ratio_power) * tweak;
    r.max(min_radius)
}

/// Integer split count at one segment boundary via additive error diffusion:
/// n = round(segSplits + error), new error = error + segSplits - n. A split
/// into n parts continues as n + 1 stems; n = 0 continues as one stem.
pub fn split_count(seg_splits: f64, error_acc: f64) -> (u32, f64) {
    let n = (seg_splits + error_acc).round().max(0.0) as u32;
    let new_error = error_acc + seg_splits - n as f64;
    (n, new_error)
}

/// Stems continuing after a split event with count `n`.
pub fn stems_after_split(n: u32) -> u32 {
    n + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trunk_radius_matches_the_formula() {
        assert_eq!(trunk_radius(10.0, 0.015, 1.0, 0.0, 0.7).unwrap(), 0.15);
        assert_eq!(trunk_radius(10.0, 0.015, 1.0, 0.2, 1.0).unwrap(), 0.18);
        // Draw 0 is the midpoint of the +/- range.
        let lo = trunk_radius(7.0, 0.02, 1.0, 0.3, -1.0).unwrap();
        let hi = trunk_radius(7.0, 0.02, 1.0, 0.3, 1.0).unwrap();
        let mid = trunk_radius(7.0, 0.02, 1.0, 0.3, 0.0).unwrap();
        assert!((mid - (lo + hi) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn nonpositive_trunk_radius_is_an_error() {
        assert!(trunk_radius(10.0, 0.015, 0.1, 0.5, -1.0).is_err());
    }

    #[test]
    fn child_radius_identity_and_power() {
        assert_eq!(child_radius(2.0, 3.0, 3.0, 1.7, 1.0, 0.0), 2.0);
        assert!((child_radius(2.0, 0.5, 1.0, 2.0, 1.0, 0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn child_radius_clamps_at_minimum() {
        assert_eq!(child_radius(2.0, 0.1, 1.0, 3.0, 1.0, 0.05), 0.05);
    }

    #[test]
    fn integer_seg_splits_give_fixed_counts() {
        assert_eq!(split_count(0.0, 0.0), (0, 0.0));
        assert_eq!(split_count(1.0, 0.0).0, 1);
        assert_eq!(split_count(2.0, 0.0).0, 2);
        assert_eq!(stems_after_split(0), 1);
        assert_eq!(stems_after_split(1), 2);
        assert_eq!(stems_after_split(2), 3);
    }

    #[test]
    fn fractional_seg_splits_average_out() {
        let mut err = 0.0;
        let mut total = 0u32;
        for _ in 0..1000 {
            let (n, e) = split_count(0.5, err);
            err = e;
            total += n;
        }
        let mean = total as f64 / 1000.0;
        assert!((mean - 0.5).abs() < 0.05, "mean {mean}");
    }
}
