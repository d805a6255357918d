//! Minimal 3D vector math used by tree growth, meshing, and the rasterizer.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const fn vec3(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3 { x, y, z }
}

impl Vec3 {
    pub const ZERO: Vec3 = vec3(0.0, 0.0, 0.0);
    pub const X: Vec3 = vec3(1.0, 0.0, 0.0);
    pub const Y: Vec3 = vec3(0.0, 1.0, 0.0);
    pub const Z: Vec3 = vec3(0.0, 0.0, 1.0);

    pub fn dot(self, rhs: Vec3) -> f64 {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn cross(self, rhs: Vec3) -> Vec3 {
        vec3(
            self.y * rhs.z - self.z * rhs.y,
            self.z * rhs.x - self.x * rhs.z,
            self.x * rhs.y - self.y * rhs.x,
        )
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let len = self.length();
        if len <= f64::EPSILON {
            Vec3::Z
        } else {
            self * (1.0 / len)
        }
    }

    pub fn scale(self, s: f64) -> Vec3 {
        self * s
    }

    /// Rodrigues rotation of `self` about the unit axis by `angle` radians.
    pub fn rotated_about(self, axis: Vec3, angle: f64) -> Vec3 {
        self.rotated_about_cs(axis, angle.cos(), angle.sin())
    }

    /// Rodrigues rotation with an explicit (cos, sin) pair. Negating `sin`
    /// mirrors the rotation exactly, which the split-sign tests rely on.
    pub fn rotated_about_cs(self, axis: Vec3, cos: f64, sin: f64) -> Vec3 {
        let k = axis;
        let kxv = k.cross(self);
        let kkv = k * (k.dot(self) * (1.0 - cos));
        vec3(
            self.x * cos + kxv.x * sin + kkv.x,
            self.y * cos + kxv.y * sin + kkv.y,
            self.z * cos + kxv.z * sin + kkv.z,
        )
    }

    /// Any unit vector perpendicular to `self`.
    pub fn any_perpendicular(self) -> Vec3 {
        let pick = if self.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
        self.cross(pick).normalized()
    }

    /// Angle in radians between `self` and the +Z axis (0 = straight up).
    pub fn declination(self) -> f64 {
        let len = self.length();
        if len <= f64::EPSILON {
            return 0.0;
        }
        (self.z / len).clamp(-1.0, 1.0).acos()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        vec3(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, rhs: Vec3) {
        *self = *self + rhs;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        vec3(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        vec3(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        vec3(-self.x, -self.y, -self.z)
    }
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg * std::f64::consts::PI / 180.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        assert_eq!(Vec3::X.cross(Vec3::Y), Vec3::Z);
        assert_eq!(Vec3::Y.cross(Vec3::Z), Vec3::X);
    }

    #[test]
    fn rotation_about_z_quarter_turn() {
        let v = Vec3::X.rotated_about(Vec3::Z, std::f64::consts::FRAC_PI_2);
        assert!((v - Vec3::Y).length() < 1e-12);
    }

    #[test]
    fn rotation_with_negated_sin_mirrors() {
        let axis = vec3(0.3, -0.2, 0.93).normalized();
        let v = vec3(1.0, 2.0, -0.5);
        let (c, s) = (0.4f64.cos(), 0.4f64.sin());
        let fwd = v.rotated_about_cs(axis, c, s);
        let back = v.rotated_about_cs(axis, c, -s);
        let twice = fwd.rotated_about_cs(axis, c, -s);
        assert!((twice - v).length() < 1e-12);
        assert!((fwd - back).length() > 1e-3);
    }

    #[test]
    fn declination_of_axes() {
        assert!(Vec3::Z.declination().abs() < 1e-12);
        assert!((Vec3::X.declination() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(((-Vec3::Z).declination() - std::f64::consts::PI).abs() < 1e-12);
    }
}
