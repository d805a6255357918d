//! The 4 x 62 target matrix: type coercions forward (encode) and value
//! snapping back (decode).

use crate::params::registry::{
    decode_enum, Arity, MagnitudeGroup, ParamKind, ParamRegistry, LEVEL_COUNT, PARAM_COUNT,
};
use crate::params::value::{ParamValue, TreeParams};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TARGET_ROWS: usize = LEVEL_COUNT;

/// Dense row-major 4 x n_p float matrix; columns follow registry order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetMatrix {
    pub column_keys: Vec<String>,
    /// Row-major, TARGET_ROWS x column_keys.len().
    pub data: Vec<f64>,
}

impl TargetMatrix {
    pub fn rows(&self) -> usize {
        TARGET_ROWS
    }

    pub fn cols(&self) -> usize {
        self.column_keys.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        let cols = self.cols();
        self.data[row * cols + col] = v;
    }

    pub fn column(&self, col: usize) -> [f64; TARGET_ROWS] {
        let mut out = [0.0; TARGET_ROWS];
        for (row, slot) in out.iter_mut().enumerate() {
            *slot = self.get(row, col);
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("parameter `{0}` has the wrong shape for encoding")]
    BadShape(String),
    #[error("parameter `{0}`: {1}")]
    BadValue(String, String),
    #[error("matrix has {got} columns, registry expects {expected}")]
    ColumnCountMismatch { got: usize, expected: usize },
    #[error("column `{0}` cannot be snapped to a legal value (code {1})")]
    Unsnappable(String, f64),
}

/// Encode a validated dictionary into the target matrix. All values become
/// floats: bools to 0/1, signs -1/+1 to 0/1, enum labels to their codes,
/// scalars replicated down the four rows.
pub fn encode(params: &TreeParams, registry: &ParamRegistry) -> Result<TargetMatrix, CodecError> {
    let mut column_keys = Vec::with_capacity(PARAM_COUNT);
    let mut data = vec![0.0; TARGET_ROWS * PARAM_COUNT];
    for (col, spec) in registry.entries().iter().enumerate() {
        column_keys.push(spec.name.to_string());
        let value = params
            .get(spec.name)
            .ok_or_else(|| CodecError::MissingParameter(spec.name.to_string()))?;
        match spec.arity {
            Arity::PerLevel => {
                let v = value
                    .as_vec_f64()
                    .ok_or_else(|| CodecError::BadShape(spec.name.to_string()))?;
                for (row, x) in v.iter().enumerate() {
                    data[row * PARAM_COUNT + col] = *x;
                }
            }
            Arity::Scalar => {
                let x = coerce_scalar(spec.name, value, spec.kind, registry)?;
                for row in 0..TARGET_ROWS {
                    data[row * PARAM_COUNT + col] = x;
                }
            }
        }
    }
    Ok(TargetMatrix { column_keys, data })
}

fn coerce_scalar(
    name: &str,
    value: &ParamValue,
    kind: ParamKind,
    registry: &ParamRegistry,
) -> Result<f64, CodecError> {
    let plain = value
        .as_scalar_f64(registry, name)
        .ok_or_else(|| CodecError::BadShape(name.to_string()))?;
    match kind {
        // Binary [-1,1] maps onto [0,1].
        ParamKind::BinarySign => Ok(if plain < 0.0 { 0.0 } else { 1.0 }),
        ParamKind::Enum(_) => match value {
            ParamValue::Enum(_) => Ok(plain),
            _ => Err(CodecError::BadValue(
                name.to_string(),
                "expected a label".to_string(),
            )),
        },
        _ => Ok(plain),
    }
}

/// Decode a matrix back into a dictionary. Scalars read row 0; discrete
/// kinds snap by round-half-away-from-zero then clamp to the legal range;
/// continuous values clamp to their range so the result validates.
pub fn decode(matrix: &TargetMatrix, registry: &ParamRegistry) -> Result<TreeParams, CodecError> {
    if matrix.cols() != registry.total_count() {
        return Err(CodecError::ColumnCountMismatch {
            got: matrix.cols(),
            expected: registry.total_count(),
        });
    }
    let mut params = TreeParams::new();
    for (col, spec) in registry.entries().iter().enumerate() {
        let column = matrix.column(col);
        let value = match spec.arity {
            Arity::PerLevel => match spec.kind {
                ParamKind::Int => {
                    let mut v = [0i64; LEVEL_COUNT];
                    for (i, x) in column.iter().enumerate() {
                        v[i] = snap_int(*x, spec.min, spec.max);
                    }
                    ParamValue::IntVec(v)
                }
                _ => {
                    let mut v = column;
                    for x in &mut v {
                        *x = clamp_continuous(*x, spec.min, spec.max);
                    }
                    ParamValue::FloatVec(v)
                }
            },
            Arity::Scalar => {
                let x = column[0];
                match spec.kind {
                    ParamKind::Float => ParamValue::Float(clamp_continuous(x, spec.min, spec.max)),
                    ParamKind::Int => ParamValue::Int(snap_int(x, spec.min, spec.max)),
                    ParamKind::Bool => ParamValue::Bool(snap_int(x, 0.0, 1.0) == 1),
                    ParamKind::BinarySign => {
                        // Inverse of the [0,1] mapping: nearest of {0,1}.
                        ParamValue::Sign(if snap_int(x, 0.0, 1.0) == 1 { 1 } else { -1 })
                    }
                    ParamKind::Enum(labels) => {
                        let code = snap_int(x, 0.0, (labels.len() - 1) as f64) as f64;
                        let label = decode_enum(spec.name, code, registry)
                            .map_err(|_| CodecError::Unsnappable(spec.name.to_string(), x))?;
                        ParamValue::Enum(label.to_string())
                    }
                }
            }
        };
        params.set(spec.name, value);
    }
    Ok(params)
}

fn snap_int(x: f64, min: f64, max: f64) -> i64 {
    if x.is_nan() {
        return min as i64;
    }
    // round() is round-half-away-from-zero.
    (x.round().clamp(min, max)) as i64
}

fn clamp_continuous(x: f64, min: f64, max: f64) -> f64 {
    if x.is_nan() {
        return min.max(0.0).min(max);
    }
    x.clamp(min, max)
}

/// Magnitude group of a matrix column.
pub fn column_group(name: &str, registry: &ParamRegistry) -> Option<MagnitudeGroup> {
    registry.get(name).map(|s| s.group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::random::randomize;
    use crate::params::species::{builtin_profile, Species};
    use crate::params::validate::validate;

    fn sample(species: Species, seed: u64) -> TreeParams {
        randomize(builtin_profile(species), seed, ParamRegistry::global()).unwrap()
    }

    #[test]
    fn matrix_is_4_by_62_with_replicated_scalars() {
        let reg = ParamRegistry::global();
        let m = encode(&sample(Species::Maple, 3), reg).unwrap();
        assert_eq!(m.rows(), 4);
        assert_eq!(m.cols(), 62);
        let col = reg.index_of("scale").unwrap();
        let c = m.column(col);
        assert!(c.iter().all(|&x| x == c[0]));
    }

    #[test]
    fn sign_minus_one_becomes_a_zero_column() {
        let reg = ParamRegistry::global();
        let mut p = sample(Species::Maple, 3);
        p.set("sign", ParamValue::Sign(-1));
        let m = encode(&p, reg).unwrap();
        let col = reg.index_of("sign").unwrap();
        assert_eq!(m.column(col), [0.0; 4]);
        p.set("sign", ParamValue::Sign(1));
        let m = encode(&p, reg).unwrap();
        assert_eq!(m.column(col), [1.0; 4]);
    }

    #[test]
    fn close_tip_true_becomes_a_ones_column() {
        let reg = ParamRegistry::global();
        let mut p = sample(Species::Maple, 3);
        p.set("close_tip", ParamValue::Bool(true));
        let m = encode(&p, reg).unwrap();
        let col = reg.index_of("close_tip").unwrap();
        assert_eq!(m.column(col), [1.0; 4]);
    }

    #[test]
    fn branches_column_carries_the_per_level_vector() {
        let reg = ParamRegistry::global();
        let mut p = sample(Species::Maple, 3);
        p.set("branches", ParamValue::IntVec([0, 54, 10, 5]));
        let m = encode(&p, reg).unwrap();
        let col = reg.index_of("branches").unwrap();
        assert_eq!(m.column(col), [0.0, 54.0, 10.0, 5.0]);
    }

    #[test]
    fn missing_parameter_is_an_error_naming_the_key() {
        let reg = ParamRegistry::global();
        let mut p = sample(Species::Maple, 3);
        p.remove("taper");
        let err = encode(&p, reg).unwrap_err();
        assert!(matches!(err, CodecError::MissingParameter(k) if k == "taper"));
    }

    #[test]
    fn decode_encode_round_trip_is_identity() {
        let reg = ParamRegistry::global();
        for species in Species::ALL {
            for seed in 0..20 {
                let p = sample(species, seed);
                let back = decode(&encode(&p, reg).unwrap(), reg).unwrap();
                assert_eq!(p, back, "{species} seed {seed}");
                assert_eq!(validate(&back, reg), vec![]);
            }
        }
    }

    #[test]
    fn binary_column_snaps_toward_nearest_legal_value() {
        let reg = ParamRegistry::global();
        let mut m = encode(&sample(Species::Maple, 3), reg).unwrap();
        let col = reg.index_of("sign").unwrap();
        for row in 0..4 {
            m.set(row, col, 0.9);
        }
        let p = decode(&m, reg).unwrap();
        assert_eq!(p.sign("sign"), 1.0);
        for row in 0..4 {
            m.set(row, col, 0.2);
        }
        let p = decode(&m, reg).unwrap();
        assert_eq!(p.sign("sign"), -1.0);
    }

    #[test]
    fn enum_column_rounds_to_the_nearest_label() {
        let reg = ParamRegistry::global();
        let mut m = encode(&sample(Species::Maple, 3), reg).unwrap();
        let col = reg.index_of("leaf_shape").unwrap();
        for row in 0..4 {
            m.set(row, col, 2.2);
        }
        let p = decode(&m, reg).unwrap();
        assert_eq!(p.enum_label("leaf_shape"), "dupliface");
    }

    #[test]
    fn snapping_is_idempotent() {
        let reg = ParamRegistry::global();
        let mut m = encode(&sample(Species::Cherry, 11), reg).unwrap();
        // Perturb a few discrete columns with off-grid values.
        for key in ["levels", "leaf_shape", "sign", "branches"] {
            let col = reg.index_of(key).unwrap();
            for row in 0..4 {
                let v = m.get(row, col);
                m.set(row, col, v + 0.3);
            }
        }
        let once = decode(&m, reg).unwrap();
        let twice = decode(&encode(&once, reg).unwrap(), reg).unwrap();
        assert_eq!(once, twice);
    }
}
