//! Crown shape functions: the preset length-multiplier table plus the
//! custom per-level multipliers.

use crate::params::registry::LEVEL_COUNT;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TreeShape {
    Conical,
    Spherical,
    Hemispherical,
    Cylindrical,
    TaperedCylindrical,
    Flame,
    InverseConical,
    TendFlame,
    /// Uses the per-level multiplier vector instead of a position curve.
    Custom([f64; LEVEL_COUNT]),
}

#[derive(Debug, Error, PartialEq)]
pub enum ShapeError {
    #[error("unknown shape id `{0}`")]
    UnknownShape(String),
    #[error("position {0} outside [0,1]")]
    BadPosition(f64),
}

impl TreeShape {
    pub fn from_label(label: &str, custom: [f64; LEVEL_COUNT]) -> Result<Self, ShapeError> {
        Ok(match label {
            "conical" => TreeShape::Conical,
            "spherical" => TreeShape::Spherical,
            "hemispherical" => TreeShape::Hemispherical,
            "cylindrical" => TreeShape::Cylindrical,
            "tapered_cylindrical" => TreeShape::TaperedCylindrical,
            "flame" => TreeShape::Flame,
            "inverse_conical" => TreeShape::InverseConical,
            "tend_flame" => TreeShape::TendFlame,
            "custom" => TreeShape::Custom(custom),
            other => return Err(ShapeError::UnknownShape(other.to_string())),
        })
    }
}

/// Floor keeping preset curves strictly positive at their zero endpoints.
pub const SHAPE_RATIO_FLOOR: f64 = 0.05;

/// Child-length multiplier. `position` is the attachment height along the
/// parent, 0 at the base and 1 at the tip; the classic preset table is
/// evaluated with ratio = 1 - position so that e.g. the conical crown
/// narrows toward the top. Custom shapes return the level's multiplier.
pub fn shape_ratio(shape: &TreeShape, level: usize, position: f64) -> Result<f64, ShapeError> {
    if !(0.0..=1.0).contains(&position) {
        return Err(ShapeError::BadPosition(position));
    }
    if let TreeShape::Custom(multipliers) = shape {
        let m = multipliers[level.min(LEVEL_COUNT - 1)];
        return Ok(m.max(SHAPE_RATIO_FLOOR));
    }
    let ratio = 1.0 - position;
    let v = match shape {
        TreeShape::Conical => 0.2 + 0.8 * ratio,
        TreeShape::Spherical => 0.2 + 0.8 * (std::f64::consts::PI * ratio).sin(),
        TreeShape::Hemispherical => 0.2 + 0.8 * (std::f64::consts::FRAC_PI_2 * ratio).sin(),
        TreeShape::Cylindrical => 1.0,
        TreeShape::TaperedCylindrical => 0.5 + 0.5 * ratio,
        TreeShape::Flame => {
            if ratio <= 0.7 {
                ratio / 0.7
            } else {
                (1.0 - ratio) / 0.3
            }
        }
        TreeShape::InverseConical => 1.0 - 0.8 * ratio,
        TreeShape::TendFlame => {
            if ratio <= 0.7 {
                0.5 + 0.5 * ratio / 0.7
            } else {
                0.5 + 0.5 * (1.0 - ratio) / 0.3
            }
        }
        TreeShape::Custom(_) => unreachable!(),
    };
    Ok(v.max(SHAPE_RATIO_FLOOR))
}
