//! Recursive stem growth: trunk and branch skeletons plus leaf placement,
//! driven entirely by a parameter dictionary and a seed.

use super::mesh::{sweep_tube, Mesh, MeshPart, TubePath};
use super::radius::{split_count, trunk_radius, RadiusError};
use super::shape::{shape_ratio, ShapeError, TreeShape};
use crate::math::{deg_to_rad, vec3, Vec3};
use crate::params::registry::LEVEL_COUNT;
use crate::params::value::TreeParams;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrowError {
    #[error("degenerate tree: {0}")]
    DegenerateTree(String),
    #[error(transparent)]
    Radius(#[from] RadiusError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// One contiguous run of stem centerline samples. A stem without split
/// events is a single piece with `curve_resolution[level] + 1` points;
/// split events fork a stem into several pieces.
#[derive(Debug, Clone)]
pub struct StemPiece {
    pub stem_id: u32,
    pub level: usize,
    /// Direction entering the piece, before per-segment bending.
    pub initial_direction: Vec3,
    pub points: Vec<Vec3>,
    pub radii: Vec<f64>,
    /// Transported lateral frame axis per point.
    pub rights: Vec<Vec3>,
    /// Stem arclength fraction at each point (0 at stem base, 1 at tip).
    pub arc: Vec<f64>,
    pub stem_length: f64,
}

#[derive(Debug, Clone)]
pub struct Leaf {
    pub base: Vec3,
    pub direction: Vec3,
    pub side: Vec3,
    pub length: f64,
    pub width: f64,
}

/// Grown tree structure: stem pieces per level plus leaf placements.
#[derive(Debug, Clone)]
pub struct Tree {
    pub pieces: Vec<StemPiece>,
    pub leaves: Vec<Leaf>,
    bevel_resolution: u32,
    close_tip: bool,
}

impl Tree {
    pub fn stems_at_level(&self, level: usize) -> usize {
        let mut ids: Vec<u32> = self
            .pieces
            .iter()
            .filter(|p| p.level == level)
            .map(|p| p.stem_id)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Swept-tube skeleton mesh. `radius_scale` < 1 thins every stem, used
    /// by the sketch pipeline to drop sub-pixel branches.
    pub fn skeleton_mesh(&self, radius_scale: f64) -> Mesh {
        let mut mesh = Mesh::empty(MeshPart::Skeleton);
        for piece in &self.pieces {
            let radii: Vec<f64> = piece.radii.iter().map(|r| r * radius_scale).collect();
            let path = TubePath::smoothed(&piece.points, &radii);
            sweep_tube(&mut mesh, &path, self.bevel_resolution, self.close_tip);
        }
        mesh
    }

    /// Leaf quads, two triangles each.
    pub fn foliage_mesh(&self) -> Mesh {
        let mut mesh = Mesh::empty(MeshPart::Foliage);
        for leaf in &self.leaves {
            let half = leaf.side * (leaf.width * 0.5);
            let tip = leaf.base + leaf.direction * leaf.length;
            let a = mesh.push_vertex(leaf.base - half);
            let b = mesh.push_vertex(leaf.base + half);
            let c = mesh.push_vertex(tip + half);
            let d = mesh.push_vertex(tip - half);
            mesh.push_triangle(a, b, c);
            mesh.push_triangle(a, c, d);
        }
        mesh
    }
}

/// Growth-relevant view of the dictionary.
struct GrowthParams {
    levels: usize,
    scale: f64,
    scale_variation: f64,
    length: [f64; LEVEL_COUNT],
    length_variation: [f64; LEVEL_COUNT],
    taper_crown: f64,
    shape: TreeShape,
    secondary_shape: TreeShape,
    ratio: f64,
    radius_scale: f64,
    radius_scale_variation: f64,
    ratio_power: f64,
    min_radius: f64,
    root_flare: f64,
    taper: [f64; LEVEL_COUNT],
    tweak_radius: [f64; LEVEL_COUNT],
    curve_res: [usize; LEVEL_COUNT],
    curvature: [f64; LEVEL_COUNT],
    curvature_variation: [f64; LEVEL_COUNT],
    back_curvature: [f64; LEVEL_COUNT],
    attract_up: [f64; LEVEL_COUNT],
    attract_out: f64,
    seg_splits: [f64; LEVEL_COUNT],
    split_angle: [f64; LEVEL_COUNT],
    split_angle_variation: [f64; LEVEL_COUNT],
    split_height: f64,
    split_bias: f64,
    base_splits: u32,
    sign: f64,
    branches: [i64; LEVEL_COUNT],
    branch_mode: BranchMode,
    branch_distribution: f64,
    branch_rings: u32,
    trunk_height: f64,
    secondary_base_size: f64,
    down_angle: [f64; LEVEL_COUNT],
    down_angle_variation: [f64; LEVEL_COUNT],
    rotate_angle: [f64; LEVEL_COUNT],
    rotate_angle_variation: [f64; LEVEL_COUNT],
    use_old_down_angle: bool,
    use_parent_angle: bool,
    branch_rotate: f64,
    rotate_last_angle: f64,
    show_leaves: bool,
    leaves: i64,
    leaf_distribution: TreeShape,
    leaf_down_angle: f64,
    leaf_down_angle_variation: f64,
    leaf_rotation: f64,
    leaf_rotation_variation: f64,
    leaf_scale: f64,
    leaf_scale_variation: f64,
    leaf_scale_x: f64,
    leaf_scale_taper: f64,
    leaf_angle: f64,
    horizontal_leaves: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum BranchMode {
    Uniform,
    TreeCenter,
    Random,
}

impl GrowthParams {
    fn extract(params: &TreeParams) -> Result<Self, GrowError> {
        let levels = params.int("levels");
        if !(1..=LEVEL_COUNT as i64).contains(&levels) {
            return Err(GrowError::DegenerateTree(format!("levels = {levels}")));
        }
        let custom = params.float_vec("custom_shape");
        let shape = TreeShape::from_label(params.enum_label("shape"), custom)?;
        let secondary_shape =
            TreeShape::from_label(params.enum_label("secondary_splits"), custom)?;
        let leaf_distribution =
            TreeShape::from_label(params.enum_label("leaf_distribution"), custom)?;
        let branch_mode = match params.enum_label("branching_mode") {
            "tree_center" => BranchMode::TreeCenter,
            "random" => BranchMode::Random,
            _ => BranchMode::Uniform,
        };
        let curve_res_raw = params.int_vec("curve_resolution");
        let mut curve_res = [1usize; LEVEL_COUNT];
        for (slot, v) in curve_res.iter_mut().zip(curve_res_raw) {
            *slot = v.clamp(1, 64) as usize;
        }
        Ok(GrowthParams {
            levels: levels as usize,
            scale: params.float("scale"),
            scale_variation: params.float("scale_variation"),
            length: params.float_vec("length"),
            length_variation: params.float_vec("length_variation"),
            taper_crown: params.float("taper_crown"),
            shape,
            secondary_shape,
            ratio: params.float("ratio"),
            radius_scale: params.float("radius_scale"),
            radius_scale_variation: params.float("radius_scale_variation"),
            ratio_power: params.float("branch_radius_ratio"),
            min_radius: params.float("minimum_radius"),
            root_flare: params.float("root_flare"),
            taper: params.float_vec("taper"),
            tweak_radius: params.float_vec("tweak_radius"),
            curve_res,
            curvature: params.float_vec("curvature"),
            curvature_variation: params.float_vec("curvature_variation"),
            back_curvature: params.float_vec("back_curvature"),
            attract_up: params.float_vec("vertical_attraction"),
            attract_out: params.float("outward_attraction"),
            seg_splits: params.float_vec("segment_splits"),
            split_angle: params.float_vec("split_angle"),
            split_angle_variation: params.float_vec("split_angle_variation"),
            split_height: params.float("split_height"),
            split_bias: params.float("split_bias"),
            base_splits: params.int("base_splits").max(0) as u32,
            sign: params.sign("sign"),
            branches: params.int_vec("branches"),
            branch_mode,
            branch_distribution: params.float("branch_distribution").max(0.01),
            branch_rings: params.int("branch_rings").max(0) as u32,
            trunk_height: params.float("trunk_height"),
            secondary_base_size: params.float("secondary_base_size"),
            down_angle: params.float_vec("down_angle"),
            down_angle_variation: params.float_vec("down_angle_variation"),
            rotate_angle: params.float_vec("rotate_angle"),
            rotate_angle_variation: params.float_vec("rotate_angle_variation"),
            use_old_down_angle: params.boolean("use_old_down_angle"),
            use_parent_angle: params.boolean("use_parent_angle"),
            branch_rotate: params.float("branch_rotate"),
            rotate_last_angle: params.float("rotate_last_angle"),
            show_leaves: params.boolean("show_leaves"),
            leaves: params.int("leaves"),
            leaf_distribution,
            leaf_down_angle: params.float("leaf_down_angle"),
            leaf_down_angle_variation: params.float("leaf_down_angle_variation"),
            leaf_rotation: params.float("leaf_rotation"),
            leaf_rotation_variation: params.float("leaf_rotation_variation"),
            leaf_scale: params.float("leaf_scale"),
            leaf_scale_variation: params.float("leaf_scale_variation"),
            leaf_scale_x: params.float("leaf_scale_x"),
            leaf_scale_taper: params.float("leaf_scale_taper"),
            leaf_angle: params.float("leaf_angle"),
            horizontal_leaves: params.boolean("horizontal_leaves"),
        })
    }
}

/// A stem waiting to be grown.
struct StemSeed {
    level: usize,
    origin: Vec3,
    direction: Vec3,
    right: Vec3,
    length: f64,
    base_radius: f64,
    /// Azimuth carried over from the parent when use_parent_angle holds.
    azimuth_base: f64,
}

struct Grower<'a> {
    gp: &'a GrowthParams,
    rng: ChaCha8Rng,
    pieces: Vec<StemPiece>,
    leaves: Vec<Leaf>,
    next_stem_id: u32,
}

/// Convention used across the toolkit: a dictionary's growth seed is its
/// own random_seed parameter, so a parameter file reproduces its tree.
pub fn growth_seed(params: &TreeParams) -> u64 {
    params.int("random_seed").max(0) as u64
}

/// Grow the stem/leaf structure. Pure in (params, seed).
pub fn grow(params: &TreeParams, seed: u64) -> Result<Tree, GrowError> {
    let gp = GrowthParams::extract(params)?;
    let mut grower = Grower {
        gp: &gp,
        rng: ChaCha8Rng::seed_from_u64(seed),
        pieces: Vec::new(),
        leaves: Vec::new(),
        next_stem_id: 0,
    };

    let unit = |rng: &mut ChaCha8Rng| 2.0 * rng.random::<f64>() - 1.0;
    let tree_scale = (gp.scale + unit(&mut grower.rng) * gp.scale_variation).max(0.01);
    let mut trunk_length = tree_scale * gp.length[0] * (1.0 - 0.5 * gp.taper_crown);
    if let TreeShape::Custom(m) = gp.shape {
        trunk_length *= m[0].max(0.01);
    }
    if trunk_length <= 0.0 {
        return Err(GrowError::DegenerateTree("nonpositive trunk length".into()));
    }
    let r_trunk = trunk_radius(
        trunk_length,
        gp.ratio,
        gp.radius_scale,
        gp.radius_scale_variation,
        unit(&mut grower.rng),
    )?;

    let trunk_seed = StemSeed {
        level: 0,
        origin: Vec3::ZERO,
        direction: Vec3::Z,
        right: Vec3::X,
        length: trunk_length,
        base_radius: r_trunk,
        azimuth_base: gp.rotate_last_angle,
    };

    // Grow level by level so piece ordering (and RNG order) is stable.
    let mut current = vec![trunk_seed];
    for level in 0..gp.levels {
        let mut next = Vec::new();
        for stem in current {
            grower.grow_stem(stem, &mut next);
        }
        if level + 1 < gp.levels {
            current = next;
        } else {
            current = Vec::new();
        }
    }

    if grower.pieces.is_empty() {
        return Err(GrowError::DegenerateTree("no stems grown".into()));
    }
    grower.place_leaves();

    Ok(Tree {
        pieces: grower.pieces,
        leaves: grower.leaves,
        bevel_resolution: params.int("bevel_resolution").clamp(0, 12) as u32,
        close_tip: params.boolean("close_tip"),
    })
}

impl Grower<'_> {
    fn unit_draw(&mut self) -> f64 {
        2.0 * self.rng.random::<f64>() - 1.0
    }

    /// Radius along a stem: linear taper from the base radius, root flare
    /// near the trunk base, floored at the minimum radius.
    fn radius_at(&self, level: usize, base_radius: f64, t: f64) -> f64 {
        let mut r = base_radius * (1.0 - self.gp.taper[level] * t);
        if level == 0 && t < 0.1 {
            r *= 1.0 + (self.gp.root_flare - 1.0) * (1.0 - t / 0.1);
        }
        r.max(self.gp.min_radius).max(1e-6)
    }

    fn grow_stem(&mut self, seed: StemSeed, child_seeds: &mut Vec<StemSeed>) {
        let stem_id = self.next_stem_id;
        self.next_stem_id += 1;
        let res = self.gp.curve_res[seed.level];
        let sticky_down_draw = self.unit_draw();
        self.grow_piece(
            stem_id,
            &seed,
            seed.origin,
            seed.direction,
            seed.right,
            0,
            res,
            0.0,
        );

        // Spawn next-level stems along every piece of this stem.
        if seed.level + 1 < self.gp.levels {
            let n = self.gp.branches[seed.level + 1].max(0) as usize;
            if n > 0 {
                self.spawn_children(stem_id, &seed, n, sticky_down_draw, child_seeds);
            }
        }
    }

    /// Grow segments from `seg_start`; recurse on split events.
    #[allow(clippy::too_many_arguments)]
    fn grow_piece(
        &mut self,
        stem_id: u32,
        seed: &StemSeed,
        start: Vec3,
        mut dir: Vec3,
        mut right: Vec3,
        seg_start: usize,
        res: usize,
        mut split_err: f64,
    ) {
        let gp = self.gp;
        let level = seed.level;
        let initial_direction = dir;
        let seg_len = seed.length / res as f64;
        let mut points = vec![start];
        let mut radii = vec![self.radius_at(level, seed.base_radius, seg_start as f64 / res as f64)];
        let mut rights = vec![right];
        let mut arc = vec![seg_start as f64 / res as f64];

        let mut seg = seg_start;
        while seg < res {
            let first_half = seg * 2 < res;
            let base_curve = if first_half {
                gp.curvature[level]
            } else {
                gp.back_curvature[level]
            };
            let curve_deg =
                (base_curve + self.unit_draw() * gp.curvature_variation[level]) / res as f64;
            dir = dir.rotated_about(right, deg_to_rad(curve_deg)).normalized();

            // Vertical attraction: rotate toward +/- world up in proportion
            // to the parameter and the segment declination.
            let attract = gp.attract_up[level];
            if attract != 0.0 {
                let decl = dir.declination();
                let delta = (attract * decl * decl.sin() / res as f64)
                    .clamp(-std::f64::consts::FRAC_PI_3, std::f64::consts::FRAC_PI_3);
                let axis = dir.cross(Vec3::Z);
                if axis.length() > 1e-9 && delta != 0.0 {
                    dir = dir.rotated_about(axis.normalized(), delta).normalized();
                }
            }

            // Outward attraction: blend toward the radial direction.
            if level >= 1 && gp.attract_out > 0.0 {
                let p = *points.last().unwrap();
                let out_h = vec3(p.x, p.y, 0.0);
                if out_h.length() > 1e-9 {
                    let w = gp.attract_out / res as f64;
                    dir = (dir + out_h.normalized() * w).normalized();
                }
            }
            right = (right - dir * right.dot(dir)).normalized();

            let next_point = *points.last().unwrap() + dir * seg_len;
            seg += 1;
            let t = seg as f64 / res as f64;
            points.push(next_point);
            radii.push(self.radius_at(level, seed.base_radius, t));
            rights.push(right);
            arc.push(t);

            if seg >= res {
                break;
            }

            // Split events at interior segment boundaries.
            let n_split = self.split_events_at(level, seg, res, &mut split_err);
            if n_split >= 1 {
                self.pieces.push(StemPiece {
                    stem_id,
                    level,
                    initial_direction,
                    points,
                    radii,
                    rights,
                    arc,
                    stem_length: seed.length,
                });
                let magnitude =
                    gp.split_angle[level] + self.unit_draw() * gp.split_angle_variation[level];
                for child in split_directions(dir, right, magnitude, gp.sign, n_split) {
                    self.grow_piece(stem_id, seed, next_point, child, right, seg, res, split_err);
                }
                return;
            }
        }

        self.pieces.push(StemPiece {
            stem_id,
            level,
            initial_direction,
            points,
            radii,
            rights,
            arc,
            stem_length: seed.length,
        });
    }

    /// Split count at boundary `seg`/`res` of a stem, honoring base splits
    /// on the trunk, the split-height gate, and the split bias.
    fn split_events_at(&mut self, level: usize, seg: usize, res: usize, err: &mut f64) -> u32 {
        let gp = self.gp;
        let t = seg as f64 / res as f64;
        if level == 0 {
            let base_boundary = ((gp.trunk_height * res as f64).ceil() as usize).clamp(1, res - 1);
            if seg == base_boundary && gp.base_splits > 0 {
                return gp.base_splits;
            }
            if t < gp.split_height {
                return 0;
            }
        }
        let eff = (gp.seg_splits[level] * (1.0 + gp.split_bias * (2.0 * t - 1.0))).max(0.0);
        if eff <= 0.0 {
            return 0;
        }
        let (n, new_err) = split_count(eff, *err);
        *err = new_err;
        n
    }

    fn spawn_children(
        &mut self,
        stem_id: u32,
        parent: &StemSeed,
        n: usize,
        sticky_down_draw: f64,
        out: &mut Vec<StemSeed>,
    ) {
        let gp = self.gp;
        let child_level = parent.level + 1;
        let base_u = if parent.level == 0 {
            gp.trunk_height
        } else {
            gp.secondary_base_size
        };

        // Attachment heights: whorl rings on the trunk when requested,
        // otherwise a branch-distribution-warped spread.
        let rings = if parent.level == 0 { gp.branch_rings } else { 0 };
        let mut placements: Vec<(f64, f64)> = Vec::with_capacity(n); // (u, azimuth)
        if rings >= 1 {
            let k = rings as usize;
            let members = n.div_ceil(k);
            for i in 0..n {
                let ring = i % k;
                let slot = i / k;
                let frac = (ring as f64 + 1.0) / (k as f64 + 1.0);
                let u = base_u + (1.0 - base_u) * frac.powf(1.0 / gp.branch_distribution);
                let azimuth =
                    slot as f64 * (360.0 / members as f64) + ring as f64 * gp.branch_rotate;
                placements.push((u, azimuth));
            }
        } else {
            let mut azimuth = parent.azimuth_base;
            for i in 0..n {
                let frac = (i as f64 + 0.5) / n as f64;
                let u = if parent.level == 0 {
                    base_u + (1.0 - base_u) * frac.powf(1.0 / gp.branch_distribution)
                } else {
                    base_u + (1.0 - base_u) * frac
                };
                azimuth += match gp.branch_mode {
                    BranchMode::Uniform => {
                        gp.rotate_angle[child_level]
                            + self.unit_draw() * gp.rotate_angle_variation[child_level]
                    }
                    BranchMode::TreeCenter => {
                        360.0 / n as f64
                            + self.unit_draw() * gp.rotate_angle_variation[child_level]
                    }
                    BranchMode::Random => self.rng.random::<f64>() * 360.0,
                };
                placements.push((u, azimuth));
            }
        }

        // Pieces of this stem, in growth order; children attach per piece.
        let piece_range: Vec<usize> = (0..self.pieces.len())
            .filter(|&i| self.pieces[i].stem_id == stem_id)
            .collect();

        for &(u, azimuth) in &placements {
            let down_draw = if gp.use_old_down_angle {
                sticky_down_draw
            } else {
                self.unit_draw()
            };
            let length_draw = self.unit_draw();
            let down_deg =
                gp.down_angle[child_level] + down_draw * gp.down_angle_variation[child_level];

            for &pi in &piece_range {
                let Some((point, tangent, right)) = sample_piece(&self.pieces[pi], u) else {
                    continue;
                };
                let shape = if child_level == 1 {
                    &gp.shape
                } else {
                    &gp.secondary_shape
                };
                let ratio = match shape_ratio(shape, child_level, u.clamp(0.0, 1.0)) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                let len_mult = (gp.length[child_level]
                    + length_draw * gp.length_variation[child_level])
                .max(0.01);
                let child_len = parent.length * len_mult * ratio;
                let parent_r = {
                    let piece = &self.pieces[pi];
                    let idx = piece
                        .arc
                        .iter()
                        .position(|&a| a >= u)
                        .unwrap_or(piece.arc.len() - 1);
                    piece.radii[idx]
                };
                let child_r = super::radius::child_radius(
                    parent_r,
                    child_len,
                    parent.length,
                    gp.ratio_power,
                    gp.tweak_radius[child_level],
                    gp.min_radius,
                );

                let axis = right.rotated_about(tangent, deg_to_rad(azimuth)).normalized();
                let child_dir = tangent.rotated_about(axis, deg_to_rad(down_deg)).normalized();
                out.push(StemSeed {
                    level: child_level,
                    origin: point,
                    direction: child_dir,
                    right: axis,
                    length: child_len.max(1e-3),
                    base_radius: child_r,
                    azimuth_base: if gp.use_parent_angle { azimuth } else { 0.0 },
                });
            }
        }
    }

    fn place_leaves(&mut self) {
        let gp = self.gp;
        if !gp.show_leaves || gp.leaves <= 0 {
            return;
        }
        let leaf_level = gp.levels - 1;
        let n = gp.leaves as usize;

        // Density-weighted positions along the stem per the leaf
        // distribution preset.
        let mut cdf = Vec::with_capacity(65);
        let mut acc = 0.0;
        cdf.push(0.0);
        for b in 0..64 {
            let u = (b as f64 + 0.5) / 64.0;
            let w = shape_ratio(&gp.leaf_distribution, leaf_level, u).unwrap_or(1.0);
            acc += w;
            cdf.push(acc);
        }
        let invert = |target: f64| -> f64 {
            let goal = target * acc;
            let idx = cdf.partition_point(|&c| c < goal).clamp(1, 64);
            let (lo, hi) = (cdf[idx - 1], cdf[idx]);
            let frac = if hi > lo { (goal - lo) / (hi - lo) } else { 0.5 };
            ((idx - 1) as f64 + frac) / 64.0
        };

        let piece_ids: Vec<usize> = (0..self.pieces.len())
            .filter(|&i| self.pieces[i].level == leaf_level)
            .collect();
        for pi in piece_ids {
            let mut azimuth = 0.0;
            for j in 0..n {
                azimuth += gp.leaf_rotation + self.unit_draw() * gp.leaf_rotation_variation;
                let down =
                    gp.leaf_down_angle + self.unit_draw() * gp.leaf_down_angle_variation;
                let scale_draw = self.unit_draw();
                let u = invert((j as f64 + 0.5) / n as f64);

                let piece = &self.pieces[pi];
                let Some((point, tangent, right)) = sample_piece(piece, u) else {
                    continue;
                };
                let axis = right.rotated_about(tangent, deg_to_rad(azimuth)).normalized();
                let mut dir = tangent.rotated_about(axis, deg_to_rad(down)).normalized();
                // Leaf angle pulls toward the ground (negative) or sky.
                if gp.leaf_angle != 0.0 {
                    let lift_axis = dir.cross(Vec3::Z);
                    if lift_axis.length() > 1e-9 {
                        dir = dir
                            .rotated_about(lift_axis.normalized(), deg_to_rad(gp.leaf_angle))
                            .normalized();
                    }
                }
                let taper_mult = 1.0 + gp.leaf_scale_taper * (0.5 - u);
                let len = (gp.leaf_scale * (1.0 + scale_draw * gp.leaf_scale_variation))
                    .max(1e-3)
                    * taper_mult.max(0.1);
                let side = if gp.horizontal_leaves {
                    let flat = vec3(dir.x, dir.y, 0.0);
                    if flat.length() > 1e-9 {
                        flat.normalized().cross(Vec3::Z)
                    } else {
                        axis
                    }
                } else {
                    axis
                };
                self.leaves.push(Leaf {
                    base: point,
                    direction: dir,
                    side,
                    length: len,
                    width: (len * gp.leaf_scale_x).max(1e-4),
                });
            }
        }
    }
}

/// Position, tangent, and right axis at stem arclength fraction `u`, if the
/// piece covers it.
fn sample_piece(piece: &StemPiece, u: f64) -> Option<(Vec3, Vec3, Vec3)> {
    let (first, last) = (piece.arc[0], *piece.arc.last().unwrap());
    if u < first || u > last {
        return None;
    }
    let idx = piece
        .arc
        .windows(2)
        .position(|w| u >= w[0] && u <= w[1])
        .unwrap_or(piece.arc.len() - 2);
    let (a0, a1) = (piece.arc[idx], piece.arc[idx + 1]);
    let frac = if a1 > a0 { (u - a0) / (a1 - a0) } else { 0.0 };
    let p = piece.points[idx] + (piece.points[idx + 1] - piece.points[idx]) * frac;
    let tangent = (piece.points[idx + 1] - piece.points[idx]).normalized();
    Some((p, tangent, piece.rights[idx]))
}

/// Directions after a split into `n` parts (n + 1 children), fanned about
/// the lateral axis by sign * (splitAngle + variation). The trig pair is
/// computed from the unsigned angle so flipping the sign mirrors the fan
/// bit-exactly.
fn split_directions(dir: Vec3, right: Vec3, magnitude_deg: f64, sign: f64, n: u32) -> Vec<Vec3> {
    let n = n as usize;
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let spread = 0.5 - j as f64 / n as f64;
        let f = deg_to_rad(magnitude_deg * spread.abs());
        let (c, s) = (f.cos(), f.sin());
        let sigma = if spread >= 0.0 { 1.0 } else { -1.0 };
        out.push(dir.rotated_about_cs(right, c, sign * sigma * s).normalized());
    }
    out
}

/// Grow and mesh in one call: (skeleton, foliage).
pub fn grow_tree(params: &TreeParams, seed: u64) -> Result<(Mesh, Mesh), GrowError> {
    let tree = grow(params, seed)?;
    Ok((tree.skeleton_mesh(1.0), tree.foliage_mesh()))
}
