//! The parameter vocabulary: 62 named parameters organized in five classes
//! (geometry, branch radius, branch splitting, branch growth, leaves), each
//! tagged with a value kind, arity, magnitude group, and legal range.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

/// Number of registered parameters. Fixed; the target matrix is 4 x this.
pub const PARAM_COUNT: usize = 62;

/// Entries of per-level vector parameters (levels 0..3).
pub const LEVEL_COUNT: usize = 4;

/// The six order-of-magnitude groups that route parameters to separate
/// network output branches and decide which columns get normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MagnitudeGroup {
    #[serde(rename = "[-inf,inf]")]
    Unbounded,
    #[serde(rename = "[-360,360]")]
    Angle,
    #[serde(rename = "[0,1]")]
    Unit,
    #[serde(rename = "[0,inf]")]
    NonNegative,
    #[serde(rename = "[min,max]")]
    Bounded,
    #[serde(rename = "[-1,1]")]
    SignedUnit,
}

impl MagnitudeGroup {
    pub const ALL: [MagnitudeGroup; 6] = [
        MagnitudeGroup::Unbounded,
        MagnitudeGroup::Angle,
        MagnitudeGroup::Unit,
        MagnitudeGroup::NonNegative,
        MagnitudeGroup::Bounded,
        MagnitudeGroup::SignedUnit,
    ];

    /// Groups whose columns are Max-Abs scaled to [-1,1].
    pub fn is_normalized(self) -> bool {
        matches!(self, MagnitudeGroup::Unbounded | MagnitudeGroup::Angle)
    }

    pub fn label(self) -> &'static str {
        match self {
            MagnitudeGroup::Unbounded => "[-inf,inf]",
            MagnitudeGroup::Angle => "[-360,360]",
            MagnitudeGroup::Unit => "[0,1]",
            MagnitudeGroup::NonNegative => "[0,inf]",
            MagnitudeGroup::Bounded => "[min,max]",
            MagnitudeGroup::SignedUnit => "[-1,1]",
        }
    }
}

impl fmt::Display for MagnitudeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Float,
    Int,
    Bool,
    /// Ordered label list; encoded as the zero-based declaration index.
    Enum(&'static [&'static str]),
    /// Admits only -1 and +1.
    BinarySign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Scalar,
    /// One value per tree level, always 4 entries.
    PerLevel,
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub arity: Arity,
    pub group: MagnitudeGroup,
    /// Legal range (inclusive); +/- infinity allowed.
    pub min: f64,
    pub max: f64,
}

impl ParamSpec {
    pub fn is_vector(&self) -> bool {
        self.arity == Arity::PerLevel
    }

    pub fn enum_labels(&self) -> Option<&'static [&'static str]> {
        match self.kind {
            ParamKind::Enum(labels) => Some(labels),
            _ => None,
        }
    }

    pub fn in_range(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }
}

pub const SHAPE_LABELS: &[&str] = &[
    "conical",
    "spherical",
    "hemispherical",
    "cylindrical",
    "tapered_cylindrical",
    "flame",
    "inverse_conical",
    "tend_flame",
    "custom",
];

pub const LEAF_DIST_LABELS: &[&str] = &[
    "conical",
    "spherical",
    "hemispherical",
    "cylindrical",
    "tapered_cylindrical",
    "flame",
    "inverse_conical",
    "tend_flame",
];

pub const LEAF_SHAPE_LABELS: &[&str] = &["rectangular", "hexagonal", "dupliface", "duplivert"];

pub const HANDLE_TYPE_LABELS: &[&str] = &["auto", "vector"];

pub const BRANCH_MODE_LABELS: &[&str] = &["uniform", "tree_center", "random"];

const INF: f64 = f64::INFINITY;

macro_rules! spec {
    ($name:literal, $kind:expr, $arity:expr, $group:expr, $min:expr, $max:expr) => {
        ParamSpec {
            name: $name,
            kind: $kind,
            arity: $arity,
            group: $group,
            min: $min,
            max: $max,
        }
    };
}

use Arity::{PerLevel, Scalar};
use MagnitudeGroup::{Angle, Bounded, NonNegative, SignedUnit, Unbounded, Unit};
use ParamKind::{BinarySign, Bool, Enum, Float, Int};

/// Declaration order is fixed: geometry, branch radius, branch splitting,
/// branch growth, leaves. Target-matrix columns follow this order.
static ENTRIES: [ParamSpec; PARAM_COUNT] = [
    // -- geometry --
    spec!("bevel_resolution", Int, Scalar, Bounded, 0.0, 12.0),
    spec!("handle_type", Enum(HANDLE_TYPE_LABELS), Scalar, Unit, 0.0, 1.0),
    spec!("shape", Enum(SHAPE_LABELS), Scalar, Bounded, 0.0, 8.0),
    spec!("custom_shape", Float, PerLevel, NonNegative, 0.01, 10.0),
    spec!("secondary_splits", Enum(SHAPE_LABELS), Scalar, Bounded, 0.0, 8.0),
    spec!("branch_distribution", Float, Scalar, NonNegative, 0.01, 10.0),
    spec!("branch_rings", Int, Scalar, NonNegative, 0.0, 30.0),
    spec!("random_seed", Int, Scalar, NonNegative, 0.0, 2147483647.0),
    spec!("scale", Float, Scalar, NonNegative, 0.01, 100.0),
    spec!("scale_variation", Float, Scalar, NonNegative, 0.0, 20.0),
    // -- branch radius --
    spec!("ratio", Float, Scalar, Unit, 0.0, 1.0),
    spec!("radius_scale", Float, Scalar, NonNegative, 0.0, 10.0),
    spec!("radius_scale_variation", Float, Scalar, Unit, 0.0, 1.0),
    spec!("branch_radius_ratio", Float, Scalar, Bounded, 0.0, 5.0),
    spec!("minimum_radius", Float, Scalar, NonNegative, 0.0, 1.0),
    spec!("close_tip", Bool, Scalar, Unit, 0.0, 1.0),
    spec!("root_flare", Float, Scalar, Bounded, 1.0, 10.0),
    spec!("taper", Float, PerLevel, Unit, 0.0, 1.0),
    spec!("tweak_radius", Float, PerLevel, NonNegative, 0.0, 5.0),
    // -- branch splitting --
    spec!("levels", Int, Scalar, Bounded, 1.0, 4.0),
    spec!("base_splits", Int, Scalar, NonNegative, 0.0, 10.0),
    spec!("trunk_height", Float, Scalar, Unit, 0.0, 1.0),
    spec!("secondary_base_size", Float, Scalar, Unit, 0.0, 1.0),
    spec!("split_height", Float, Scalar, Unit, 0.0, 1.0),
    spec!("split_bias", Float, Scalar, Bounded, -2.0, 2.0),
    spec!("branches", Int, PerLevel, NonNegative, 0.0, 500.0),
    spec!("segment_splits", Float, PerLevel, Bounded, 0.0, 3.0),
    spec!("split_angle", Float, PerLevel, Angle, -360.0, 360.0),
    spec!("split_angle_variation", Float, PerLevel, Angle, -360.0, 360.0),
    spec!("rotate_angle", Float, PerLevel, Angle, -360.0, 360.0),
    spec!("rotate_angle_variation", Float, PerLevel, Angle, -360.0, 360.0),
    spec!("branch_rotate", Float, Scalar, Angle, -360.0, 360.0),
    spec!("rotate_last_angle", Float, Scalar, Angle, -360.0, 360.0),
    spec!("outward_attraction", Float, Scalar, NonNegative, 0.0, 2.0),
    spec!("branching_mode", Enum(BRANCH_MODE_LABELS), Scalar, Bounded, 0.0, 2.0),
    spec!("curve_resolution", Int, PerLevel, NonNegative, 1.0, 32.0),
    spec!("sign", BinarySign, Scalar, SignedUnit, -1.0, 1.0),
    // -- branch growth --
    spec!("taper_crown", Float, Scalar, Unit, 0.0, 1.0),
    spec!("length", Float, PerLevel, NonNegative, 0.0, 2.0),
    spec!("length_variation", Float, PerLevel, Unit, 0.0, 1.0),
    spec!("down_angle", Float, PerLevel, Angle, -360.0, 360.0),
    spec!("down_angle_variation", Float, PerLevel, Angle, -360.0, 360.0),
    spec!("curvature", Float, PerLevel, Angle, -360.0, 360.0),
    spec!("curvature_variation", Float, PerLevel, Angle, -360.0, 360.0),
    spec!("back_curvature", Float, PerLevel, Angle, -360.0, 360.0),
    spec!("vertical_attraction", Float, PerLevel, Unbounded, -INF, INF),
    spec!("use_old_down_angle", Bool, Scalar, Unit, 0.0, 1.0),
    spec!("use_parent_angle", Bool, Scalar, Unit, 0.0, 1.0),
    // -- leaves --
    spec!("show_leaves", Bool, Scalar, Unit, 0.0, 1.0),
    spec!("leaf_shape", Enum(LEAF_SHAPE_LABELS), Scalar, Bounded, 0.0, 3.0),
    spec!("leaves", Int, Scalar, NonNegative, 0.0, 500.0),
    spec!("leaf_distribution", Enum(LEAF_DIST_LABELS), Scalar, Bounded, 0.0, 7.0),
    spec!("leaf_down_angle", Float, Scalar, Angle, -360.0, 360.0),
    spec!("leaf_down_angle_variation", Float, Scalar, Angle, -360.0, 360.0),
    spec!("leaf_rotation", Float, Scalar, Angle, -360.0, 360.0),
    spec!("leaf_rotation_variation", Float, Scalar, Angle, -360.0, 360.0),
    spec!("leaf_scale", Float, Scalar, NonNegative, 0.0, 10.0),
    spec!("leaf_scale_variation", Float, Scalar, Unit, 0.0, 1.0),
    spec!("leaf_scale_x", Float, Scalar, NonNegative, 0.0, 5.0),
    spec!("leaf_scale_taper", Float, Scalar, SignedUnit, -1.0, 1.0),
    spec!("horizontal_leaves", Bool, Scalar, Unit, 0.0, 1.0),
    spec!("leaf_angle", Float, Scalar, Angle, -360.0, 360.0),
];

/// Static metadata for every parameter; the column order of the target matrix.
#[derive(Debug)]
pub struct ParamRegistry {
    entries: &'static [ParamSpec],
    by_name: HashMap<&'static str, usize>,
}

impl ParamRegistry {
    /// The shared registry instance.
    pub fn global() -> &'static ParamRegistry {
        static REGISTRY: OnceLock<ParamRegistry> = OnceLock::new();
        REGISTRY.get_or_init(|| {
            let by_name = ENTRIES
                .iter()
                .enumerate()
                .map(|(i, spec)| (spec.name, i))
                .collect();
            let reg = ParamRegistry {
                entries: &ENTRIES,
                by_name,
            };
            reg.self_check();
            reg
        })
    }

    pub fn entries(&self) -> &[ParamSpec] {
        self.entries
    }

    pub fn total_count(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, name: &str) -> Option<&ParamSpec> {
        self.by_name.get(name).map(|&i| &self.entries[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// Entry count per magnitude group (the n_t values).
    pub fn group_counts(&self) -> [(MagnitudeGroup, usize); 6] {
        let mut counts = MagnitudeGroup::ALL.map(|g| (g, 0usize));
        for spec in self.entries {
            let slot = counts.iter_mut().find(|(g, _)| *g == spec.group).unwrap();
            slot.1 += 1;
        }
        counts
    }

    /// Column keys of one group, preserving registry order.
    pub fn group_keys(&self, group: MagnitudeGroup) -> Vec<&'static str> {
        self.entries
            .iter()
            .filter(|s| s.group == group)
            .map(|s| s.name)
            .collect()
    }

    fn self_check(&self) {
        assert_eq!(self.entries.len(), PARAM_COUNT);
        assert_eq!(self.by_name.len(), PARAM_COUNT, "duplicate parameter name");
        let total: usize = self.group_counts().iter().map(|(_, n)| n).sum();
        assert_eq!(total, PARAM_COUNT);
        for spec in self.entries {
            assert!(spec.min <= spec.max, "{}: inverted range", spec.name);
            match spec.group {
                MagnitudeGroup::Unit => assert!(spec.min >= 0.0 && spec.max <= 1.0),
                MagnitudeGroup::Angle => assert!(spec.min >= -360.0 && spec.max <= 360.0),
                MagnitudeGroup::NonNegative => assert!(spec.min >= 0.0),
                MagnitudeGroup::SignedUnit => assert!(spec.min >= -1.0 && spec.max <= 1.0),
                MagnitudeGroup::Bounded => assert!(spec.min.is_finite() && spec.max.is_finite()),
                MagnitudeGroup::Unbounded => {}
            }
            if let ParamKind::Enum(labels) = spec.kind {
                assert!(!labels.is_empty());
                assert_eq!(spec.max as usize, labels.len() - 1, "{}", spec.name);
            }
        }
    }
}

/// Label -> zero-based declaration index, as a float code.
pub fn encode_enum(name: &str, label: &str, registry: &ParamRegistry) -> Result<f64, EnumCodeError> {
    let spec = registry
        .get(name)
        .ok_or_else(|| EnumCodeError::UnknownParameter(name.to_string()))?;
    let labels = spec
        .enum_labels()
        .ok_or_else(|| EnumCodeError::NotAnEnum(name.to_string()))?;
    labels
        .iter()
        .position(|l| *l == label)
        .map(|i| i as f64)
        .ok_or_else(|| EnumCodeError::UnencodableLabel {
            parameter: name.to_string(),
            label: label.to_string(),
        })
}

/// Float code -> label; the code must be an exact declaration index.
pub fn decode_enum(
    name: &str,
    code: f64,
    registry: &ParamRegistry,
) -> Result<&'static str, EnumCodeError> {
    let spec = registry
        .get(name)
        .ok_or_else(|| EnumCodeError::UnknownParameter(name.to_string()))?;
    let labels = spec
        .enum_labels()
        .ok_or_else(|| EnumCodeError::NotAnEnum(name.to_string()))?;
    if code.fract() == 0.0 && code >= 0.0 && (code as usize) < labels.len() {
        Ok(labels[code as usize])
    } else {
        Err(EnumCodeError::UndecodableCode {
            parameter: name.to_string(),
            code,
        })
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EnumCodeError {
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("parameter `{0}` is not an enum")]
    NotAnEnum(String),
    #[error("unencodable label `{label}` for parameter `{parameter}`")]
    UnencodableLabel { parameter: String, label: String },
    #[error("undecodable enum code {code} for parameter `{parameter}`")]
    UndecodableCode { parameter: String, code: f64 },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_62_entries_in_six_groups() {
        let reg = ParamRegistry::global();
        assert_eq!(reg.total_count(), 62);
        let counts = reg.group_counts();
        let total: usize = counts.iter().map(|(_, n)| n).sum();
        assert_eq!(total, 62);
        for (group, n) in counts {
            assert!(n >= 1, "group {group} is empty");
        }
    }

    #[test]
    fn leaf_shape_codes_follow_declaration_order() {
        let reg = ParamRegistry::global();
        assert_eq!(encode_enum("leaf_shape", "rectangular", reg), Ok(0.0));
        assert_eq!(encode_enum("leaf_shape", "duplivert", reg), Ok(3.0));
        assert_eq!(decode_enum("leaf_shape", 1.0, reg), Ok("hexagonal"));
    }

    #[test]
    fn enum_round_trip_is_bijective() {
        let reg = ParamRegistry::global();
        for spec in reg.entries() {
            if let Some(labels) = spec.enum_labels() {
                for (i, label) in labels.iter().enumerate() {
                    let code = encode_enum(spec.name, label, reg).unwrap();
                    assert_eq!(code, i as f64);
                    assert_eq!(decode_enum(spec.name, code, reg).unwrap(), *label);
                }
            }
        }
    }

    #[test]
    fn unknown_label_is_rejected() {
        let reg = ParamRegistry::global();
        let err = encode_enum("leaf_shape", "triangular", reg).unwrap_err();
        assert!(matches!(err, EnumCodeError::UnencodableLabel { .. }));
    }

    #[test]
    fn sign_range_is_binary() {
        let reg = ParamRegistry::global();
        let spec = reg.get("sign").unwrap();
        assert_eq!(spec.kind, ParamKind::BinarySign);
        assert_eq!((spec.min, spec.max), (-1.0, 1.0));
    }
}
