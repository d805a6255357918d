//! Indexed triangle meshes, generalized-cylinder sweeping of stems, and
//! ASCII OBJ import/export.

use crate::math::{vec3, Vec3};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshPart {
    Skeleton,
    Foliage,
}

impl MeshPart {
    pub fn name(self) -> &'static str {
        match self {
            MeshPart::Skeleton => "skeleton",
            MeshPart::Foliage => "foliage",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub part: MeshPart,
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
}

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("obj parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Mesh {
    pub fn empty(part: MeshPart) -> Self {
        Mesh {
            part,
            vertices: Vec::new(),
            triangles: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Append a triangle, dropping exactly-degenerate (zero-area) ones.
    pub fn push_triangle(&mut self, a: u32, b: u32, c: u32) {
        let pa = self.vertices[a as usize];
        let pb = self.vertices[b as usize];
        let pc = self.vertices[c as usize];
        let area2 = (pb - pa).cross(pc - pa).length();
        if area2 > 0.0 {
            self.triangles.push([a, b, c]);
        }
    }

    pub fn push_vertex(&mut self, v: Vec3) -> u32 {
        self.vertices.push(v);
        (self.vertices.len() - 1) as u32
    }

    pub fn bounds(&self) -> Option<(Vec3, Vec3)> {
        if self.vertices.is_empty() {
            return None;
        }
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo = vec3(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = vec3(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        Some((lo, hi))
    }

    /// Bounds over several meshes (e.g. skeleton + foliage of one tree).
    pub fn combined_bounds(meshes: &[&Mesh]) -> Option<(Vec3, Vec3)> {
        let mut acc: Option<(Vec3, Vec3)> = None;
        for mesh in meshes {
            if let Some((lo, hi)) = mesh.bounds() {
                acc = Some(match acc {
                    None => (lo, hi),
                    Some((alo, ahi)) => (
                        vec3(alo.x.min(lo.x), alo.y.min(lo.y), alo.z.min(lo.z)),
                        vec3(ahi.x.max(hi.x), ahi.y.max(hi.y), ahi.z.max(hi.z)),
                    ),
                });
            }
        }
        acc
    }

    pub fn merged(parts: &[&Mesh], part: MeshPart) -> Mesh {
        let mut out = Mesh::empty(part);
        for mesh in parts {
            let base = out.vertices.len() as u32;
            out.vertices.extend_from_slice(&mesh.vertices);
            out.triangles
                .extend(mesh.triangles.iter().map(|t| t.map(|i| i + base)));
        }
        out
    }

    /// Rotate all vertices about the world Z axis (radians).
    pub fn rotated_z(&self, angle: f64) -> Mesh {
        let (c, s) = (angle.cos(), angle.sin());
        Mesh {
            part: self.part,
            vertices: self
                .vertices
                .iter()
                .map(|v| vec3(v.x * c - v.y * s, v.x * s + v.y * c, v.z))
                .collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Boundary edges: edges referenced by exactly one triangle.
    pub fn boundary_edge_count(&self) -> usize {
        use std::collections::HashMap;
        let mut edges: HashMap<(u32, u32), usize> = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let key = if a < b { (a, b) } else { (b, a) };
                *edges.entry(key).or_insert(0) += 1;
            }
        }
        edges.values().filter(|&&n| n == 1).count()
    }

    pub fn save_obj(&self, path: &Path) -> Result<(), MeshError> {
        let file = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(file);
        writeln!(w, "o {}", self.part.name())?;
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", v.x, v.y, v.z)?;
        }
        for t in &self.triangles {
            writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
        }
        Ok(())
    }

    pub fn load_obj(path: &Path) -> Result<Mesh, MeshError> {
        let file = std::fs::File::open(path)?;
        let reader = std::io::BufReader::new(file);
        let mut mesh = Mesh::empty(MeshPart::Skeleton);
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let mut it = line.split_whitespace();
            let fail = |message: &str| MeshError::Parse {
                line: lineno + 1,
                message: message.to_string(),
            };
            match it.next() {
                Some("o") | Some("g") => {
                    if let Some(name) = it.next() {
                        if name.eq_ignore_ascii_case("foliage") {
                            mesh.part = MeshPart::Foliage;
                        }
                    }
                }
                Some("v") => {
                    let mut coords = [0.0; 3];
                    for slot in &mut coords {
                        *slot = it
                            .next()
                            .and_then(|tok| tok.parse().ok())
                            .ok_or_else(|| fail("bad vertex"))?;
                    }
                    mesh.vertices.push(vec3(coords[0], coords[1], coords[2]));
                }
                Some("f") => {
                    let mut idx = Vec::with_capacity(4);
                    for tok in it {
                        let first = tok.split('/').next().unwrap_or("");
                        let i: i64 = first.parse().map_err(|_| fail("bad face index"))?;
                        if i < 1 || i as usize > mesh.vertices.len() {
                            return Err(fail("face index out of range"));
                        }
                        idx.push((i - 1) as u32);
                    }
                    if idx.len() < 3 {
                        return Err(fail("face with fewer than 3 vertices"));
                    }
                    // Triangulate fans for quads and larger polygons.
                    for k in 1..idx.len() - 1 {
                        mesh.triangles.push([idx[0], idx[k], idx[k + 1]]);
                    }
                }
                _ => {}
            }
        }
        Ok(mesh)
    }
}

/// Centerline samples of a swept tube: position, radius, and a transported
/// frame (tangent + right) per ring.
pub struct TubePath {
    pub centers: Vec<Vec3>,
    pub radii: Vec<f64>,
}

/// Catmull-Rom point between p1 and p2 with neighbor tangents.
fn catmull_rom(p0: Vec3, p1: Vec3, p2: Vec3, p3: Vec3, t: f64) -> Vec3 {
    let t2 = t * t;
    let t3 = t2 * t;
    (p1 * 2.0
        + (p2 - p0) * t
        + (p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3) * t2
        + ((p1 - p2) * 3.0 + p3 - p0) * t3)
        * 0.5
}

impl TubePath {
    /// Smooth the control polygon with one Catmull-Rom midpoint per segment.
    pub fn smoothed(points: &[Vec3], radii: &[f64]) -> TubePath {
        assert_eq!(points.len(), radii.len());
        assert!(points.len() >= 2);
        let n = points.len();
        let at = |i: isize| points[i.clamp(0, n as isize - 1) as usize];
        let mut centers = Vec::with_capacity(2 * n - 1);
        let mut out_radii = Vec::with_capacity(2 * n - 1);
        for i in 0..n - 1 {
            centers.push(points[i]);
            out_radii.push(radii[i]);
            let mid = catmull_rom(
                at(i as isize - 1),
                at(i as isize),
                at(i as isize + 1),
                at(i as isize + 2),
                0.5,
            );
            centers.push(mid);
            out_radii.push(0.5 * (radii[i] + radii[i + 1]));
        }
        centers.push(points[n - 1]);
        out_radii.push(radii[n - 1]);
        TubePath {
            centers,
            radii: out_radii,
        }
    }
}

/// Sweep a tube along the path. Cross sections carry
/// `2 * (bevel_resolution + 2)` vertices; the base is always capped, the
/// tip is capped when `close_tip` holds.
pub fn sweep_tube(mesh: &mut Mesh, path: &TubePath, bevel_resolution: u32, close_tip: bool) {
    let ring_n = (2 * (bevel_resolution + 2)) as usize;
    let n = path.centers.len();
    debug_assert!(n >= 2);

    // Tangents: central differences, one-sided at the ends.
    let mut tangents = Vec::with_capacity(n);
    for i in 0..n {
        let t = if i == 0 {
            path.centers[1] - path.centers[0]
        } else if i == n - 1 {
            path.centers[n - 1] - path.centers[n - 2]
        } else {
            path.centers[i + 1] - path.centers[i - 1]
        };
        tangents.push(t.normalized());
    }

    // Parallel-transport a right vector to avoid tube twisting.
    let mut right = tangents[0].any_perpendicular();
    let mut rings: Vec<Vec<u32>> = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            let axis = tangents[i - 1].cross(tangents[i]);
            let sin = axis.length();
            let cos = tangents[i - 1].dot(tangents[i]).clamp(-1.0, 1.0);
            if sin > 1e-12 {
                right = right.rotated_about_cs(axis * (1.0 / sin), cos, sin);
            }
        }
        // Re-orthogonalize against drift.
        right = (right - tangents[i] * right.dot(tangents[i])).normalized();
        let up = tangents[i].cross(right);
        let mut ring = Vec::with_capacity(ring_n);
        for k in 0..ring_n {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / ring_n as f64;
            let offset = right * theta.cos() + up * theta.sin();
            ring.push(mesh.push_vertex(path.centers[i] + offset * path.radii[i]));
        }
        rings.push(ring);
    }

    for i in 0..n - 1 {
        for k in 0..ring_n {
            let k2 = (k + 1) % ring_n;
            let (a, b) = (rings[i][k], rings[i][k2]);
            let (c, d) = (rings[i + 1][k], rings[i + 1][k2]);
            mesh.push_triangle(a, c, b);
            mesh.push_triangle(b, c, d);
        }
    }

    // Base cap.
    let base_center = mesh.push_vertex(path.centers[0]);
    for k in 0..ring_n {
        let k2 = (k + 1) % ring_n;
        mesh.push_triangle(rings[0][k], rings[0][k2], base_center);
    }
    if close_tip {
        let tip_center = mesh.push_vertex(path.centers[n - 1]);
        for k in 0..ring_n {
            let k2 = (k + 1) % ring_n;
            mesh.push_triangle(rings[n - 1][k2], rings[n - 1][k], tip_center);
        }
    }
}
