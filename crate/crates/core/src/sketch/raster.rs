//! Supersampled coverage rasterizer: flat-black silhouettes over a white
//! background, with a small edge soften so the downstream Sobel bands are
//! wide enough to survive the final erosion.

use super::camera::CameraView;
use super::image::RasterImage;
use super::ops;
use crate::math::Vec3;
use crate::synthesis::mesh::Mesh;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("tree not framed")]
    NotFramed,
    #[error(transparent)]
    Ops(#[from] ops::OpsError),
}

/// Subsamples per pixel axis.
pub const SUPERSAMPLE: usize = 4;
/// Sigma of the silhouette edge soften, in output pixels.
pub const EDGE_SIGMA: f64 = 2.0;

const NEAR: f64 = 1e-6;

/// Render the mesh silhouette from the camera: dark (0) mesh over white (1)
/// background, antialiased and slightly softened. An empty mesh renders
/// all-white; a mesh outside the frustum is an error.
pub fn render_part(
    mesh: &Mesh,
    camera: &CameraView,
    resolution: usize,
) -> Result<RasterImage, RenderError> {
    if mesh.is_empty() {
        return Ok(RasterImage::white(resolution, resolution));
    }

    let (right, up, forward) = camera.basis();
    let tan_half = (camera.fov_y_deg.to_radians() * 0.5).tan();
    let project = |p: Vec3| -> (f64, f64, f64) {
        let rel = p - camera.position;
        let vz = rel.dot(forward);
        let vx = rel.dot(right);
        let vy = rel.dot(up);
        (vx, vy, vz)
    };

    // Framing check on the mesh bounds.
    let (lo, hi) = mesh.bounds().expect("nonempty mesh has bounds");
    for &x in &[lo.x, hi.x] {
        for &y in &[lo.y, hi.y] {
            for &z in &[lo.z, hi.z] {
                let (vx, vy, vz) = project(crate::math::vec3(x, y, z));
                if vz <= NEAR {
                    return Err(RenderError::NotFramed);
                }
                let nx = vx / (vz * tan_half);
                let ny = vy / (vz * tan_half);
                if nx.abs() > 1.0 || ny.abs() > 1.0 {
                    return Err(RenderError::NotFramed);
                }
            }
        }
    }

    let side = resolution * SUPERSAMPLE;
    let mut covered = vec![false; side * side];

    let to_screen = |p: Vec3| -> Option<(f64, f64)> {
        let (vx, vy, vz) = project(p);
        if vz <= NEAR {
            return None;
        }
        let nx = vx / (vz * tan_half);
        let ny = vy / (vz * tan_half);
        Some(((nx + 1.0) * 0.5 * side as f64, (1.0 - ny) * 0.5 * side as f64))
    };

    for tri in &mesh.triangles {
        let pa = to_screen(mesh.vertices[tri[0] as usize]);
        let pb = to_screen(mesh.vertices[tri[1] as usize]);
        let pc = to_screen(mesh.vertices[tri[2] as usize]);
        let (Some(a), Some(b), Some(c)) = (pa, pb, pc) else {
            continue;
        };
        rasterize_triangle(&mut covered, side, a, b, c);
    }

    // Box-reduce subsamples to coverage, then soften the edges.
    let inv = 1.0 / (SUPERSAMPLE * SUPERSAMPLE) as f64;
    let mut img = RasterImage::white(resolution, resolution);
    for y in 0..resolution {
        for x in 0..resolution {
            let mut hits = 0usize;
            for sy in 0..SUPERSAMPLE {
                let row = (y * SUPERSAMPLE + sy) * side;
                for sx in 0..SUPERSAMPLE {
                    if covered[row + x * SUPERSAMPLE + sx] {
                        hits += 1;
                    }
                }
            }
            img.set(x, y, 1.0 - hits as f64 * inv);
        }
    }
    Ok(ops::gaussian(&img, EDGE_SIGMA)?)
}

fn rasterize_triangle(
    covered: &mut [bool],
    side: usize,
    a: (f64, f64),
    b: (f64, f64),
    c: (f64, f64),
) {
    let min_x = a.0.min(b.0).min(c.0).floor().max(0.0) as usize;
    let max_x = (a.0.max(b.0).max(c.0).ceil() as usize).min(side.saturating_sub(1));
    let min_y = a.1.min(b.1).min(c.1).floor().max(0.0) as usize;
    let max_y = (a.1.max(b.1).max(c.1).ceil() as usize).min(side.saturating_sub(1));
    if min_x > max_x || min_y > max_y {
        return;
    }
    let edge = |p0: (f64, f64), p1: (f64, f64), px: f64, py: f64| -> f64 {
        (p1.0 - p0.0) * (py - p0.1) - (p1.1 - p0.1) * (px - p0.0)
    };
    for y in min_y..=max_y {
        let py = y as f64 + 0.5;
        for x in min_x..=max_x {
            let px = x as f64 + 0.5;
            let e0 = edge(a, b, px, py);
            let e1 = edge(b, c, px, py);
            let e2 = edge(c, a, px, py);
            // Orientation-independent inside test.
            let inside = (e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0)
                || (e0 <= 0.0 && e1 <= 0.0 && e2 <= 0.0);
            if inside {
                covered[y * side + x] = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::camera::{fit_canonical_cameras, CanonicalView, DEFAULT_FILL, DEFAULT_FOV_Y_DEG};
    use crate::math::vec3;
    use crate::synthesis::mesh::{Mesh, MeshPart};

    /// Axis-aligned box mesh with generic (non-grid-aligned) coordinates.
    fn box_mesh(center: Vec3, half: Vec3) -> Mesh {
        let mut mesh = Mesh::empty(MeshPart::Skeleton);
        let corners: Vec<Vec3> = (0..8)
            .map(|i| {
                vec3(
                    center.x + if i & 1 == 0 { -half.x } else { half.x },
                    center.y + if i & 2 == 0 { -half.y } else { half.y },
                    center.z + if i & 4 == 0 { -half.z } else { half.z },
                )
            })
            .collect();
        for c in &corners {
            mesh.push_vertex(*c);
        }
        let quads = [
            [0u32, 1, 3, 2],
            [4, 5, 7, 6],
            [0, 1, 5, 4],
            [2, 3, 7, 6],
            [0, 2, 6, 4],
            [1, 3, 7, 5],
        ];
        for q in quads {
            mesh.push_triangle(q[0], q[1], q[2]);
            mesh.push_triangle(q[0], q[2], q[3]);
        }
        mesh
    }

    fn cameras_for(mesh: &Mesh) -> [(CanonicalView, super::super::camera::CameraView); 4] {
        fit_canonical_cameras(mesh.bounds().unwrap(), DEFAULT_FOV_Y_DEG, DEFAULT_FILL)
    }

    #[test]
    fn empty_mesh_renders_all_white() {
        let empty = Mesh::empty(MeshPart::Foliage);
        let cam = super::super::camera::CameraView {
            position: vec3(0.0, -10.0, 0.0),
            target: Vec3::ZERO,
            fov_y_deg: 40.0,
        };
        let img = render_part(&empty, &cam, 64).unwrap();
        assert!(img.data.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn centered_cube_draws_a_black_square() {
        let mesh = box_mesh(vec3(0.013, -0.027, 5.041), vec3(1.003, 1.003, 1.003));
        let cams = cameras_for(&mesh);
        let img = render_part(&mesh, &cams[0].1, 128).unwrap();
        assert!(img.dark_count() > 0);
        // Center pixel is deep inside the silhouette.
        assert_eq!(img.get(64, 64), 0.0);
        // Corners stay white.
        assert_eq!(img.get(0, 0), 1.0);
        assert_eq!(img.get(127, 127), 1.0);
    }

    #[test]
    fn back_view_is_the_mirrored_front_view() {
        // Mesh symmetric under y -> -y, generic in x/z.
        let mesh = box_mesh(vec3(0.617, 0.0, 4.273), vec3(0.811, 0.379, 1.291));
        let cams = cameras_for(&mesh);
        let front = render_part(&mesh, &cams[0].1, 160).unwrap();
        let back = render_part(&mesh, &cams[1].1, 160).unwrap();
        assert_eq!(back, front.flipped_horizontal());
    }

    #[test]
    fn right_view_is_the_mirrored_left_view() {
        let mesh = box_mesh(vec3(0.0, 0.583, 3.977), vec3(0.433, 0.857, 1.105));
        let cams = cameras_for(&mesh);
        let left = render_part(&mesh, &cams[2].1, 160).unwrap();
        let right = render_part(&mesh, &cams[3].1, 160).unwrap();
        assert_eq!(right, left.flipped_horizontal());
    }

    #[test]
    fn unframed_mesh_is_an_error() {
        let mesh = box_mesh(vec3(0.0, 0.0, 5.0), vec3(1.0, 1.0, 1.0));
        let cam = super::super::camera::CameraView {
            position: vec3(0.0, -1.2, 5.0), // far too close
            target: vec3(0.0, 0.0, 5.0),
            fov_y_deg: 40.0,
        };
        assert!(matches!(
            render_part(&mesh, &cam, 64),
            Err(RenderError::NotFramed)
        ));
    }
}
