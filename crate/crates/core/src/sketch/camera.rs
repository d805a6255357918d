//! Canonical tree cameras: four perspective views on the +/-X and +/-Y
//! axes, auto-fit so the bounding sphere fills the frame height.

use crate::math::{vec3, Vec3};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalView {
    Front,
    Back,
    Left,
    Right,
}

impl CanonicalView {
    pub const ALL: [CanonicalView; 4] = [
        CanonicalView::Front,
        CanonicalView::Back,
        CanonicalView::Left,
        CanonicalView::Right,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CanonicalView::Front => "front",
            CanonicalView::Back => "back",
            CanonicalView::Left => "left",
            CanonicalView::Right => "right",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s)
    }

    /// Unit offset from the target toward the camera.
    fn axis(self) -> Vec3 {
        match self {
            CanonicalView::Front => vec3(0.0, -1.0, 0.0),
            CanonicalView::Back => vec3(0.0, 1.0, 0.0),
            CanonicalView::Left => vec3(-1.0, 0.0, 0.0),
            CanonicalView::Right => vec3(1.0, 0.0, 0.0),
        }
    }
}

/// A posed perspective camera, world up = +Z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraView {
    pub position: Vec3,
    pub target: Vec3,
    pub fov_y_deg: f64,
}

pub const DEFAULT_FOV_Y_DEG: f64 = 40.0;
/// Bounding sphere fills this fraction of the frame height.
pub const DEFAULT_FILL: f64 = 0.9;

/// Distance placing a sphere of `radius` at `fill` of the frame height.
pub fn fit_distance(radius: f64, fov_y_deg: f64, fill: f64) -> f64 {
    let tan_half = (fov_y_deg.to_radians() * 0.5).tan();
    (radius / (fill * tan_half)).max(1e-6)
}

/// The four canonical cameras at equal distance, aimed at the bounding-box
/// center.
pub fn fit_canonical_cameras(
    bounds: (Vec3, Vec3),
    fov_y_deg: f64,
    fill: f64,
) -> [(CanonicalView, CameraView); 4] {
    let (lo, hi) = bounds;
    let center = (lo + hi) * 0.5;
    let radius = ((hi - lo) * 0.5).length().max(1e-3);
    let d = fit_distance(radius, fov_y_deg, fill);
    CanonicalView::ALL.map(|view| {
        (
            view,
            CameraView {
                position: center + view.axis() * d,
                target: center,
                fov_y_deg,
            },
        )
    })
}

impl CameraView {
    /// Orthonormal view basis (right, up, forward).
    pub fn basis(&self) -> (Vec3, Vec3, Vec3) {
        let forward = (self.target - self.position).normalized();
        let right = forward.cross(Vec3::Z).normalized();
        let up = right.cross(forward);
        (right, up, forward)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_cameras_share_distance_and_target() {
        let bounds = (vec3(-1.0, -2.0, 0.0), vec3(1.5, 2.0, 9.0));
        let cams = fit_canonical_cameras(bounds, DEFAULT_FOV_Y_DEG, DEFAULT_FILL);
        let center = (bounds.0 + bounds.1) * 0.5;
        let d0 = (cams[0].1.position - center).length();
        for (_, cam) in &cams {
            assert!(((cam.position - center).length() - d0).abs() < 1e-9);
            assert_eq!(cam.target, center);
        }
    }

    #[test]
    fn front_basis_is_exactly_axis_aligned() {
        let cams = fit_canonical_cameras(
            (vec3(0.0, 0.0, 0.0), vec3(2.0, 2.0, 10.0)),
            DEFAULT_FOV_Y_DEG,
            DEFAULT_FILL,
        );
        let (right, up, forward) = cams[0].1.basis();
        assert_eq!(forward, vec3(0.0, 1.0, 0.0));
        assert_eq!(right, vec3(1.0, 0.0, 0.0));
        assert_eq!(up, vec3(0.0, 0.0, 1.0));
    }
}
