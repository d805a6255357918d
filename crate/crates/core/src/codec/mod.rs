//! Conversion between parameter dictionaries and the network target
//! representation: the 4 x 62 matrix, six magnitude-grouped sub-matrices,
//! and Max-Abs normalization with persisted records.

pub mod bundle;
pub mod matrix;
pub mod normalize;

pub use bundle::{merge_groups, split_groups, SubMatrix, TargetBundle};
pub use matrix::{decode, encode, CodecError, TargetMatrix, TARGET_ROWS};
pub use normalize::{
    denormalize, normalize, NormalizationRecord, NormalizeError, NormalizeOptions,
};

use crate::params::{ParamRegistry, TreeParams};

/// Dictionary -> normalized bundle, one call.
pub fn encode_normalized(
    params: &TreeParams,
    record: &NormalizationRecord,
    registry: &ParamRegistry,
) -> Result<TargetBundle, NormalizeError> {
    let matrix = encode(params, registry).map_err(|e| {
        NormalizeError::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))
    })?;
    normalize(
        &split_groups(&matrix, registry),
        record,
        NormalizeOptions::default(),
    )
}

/// Normalized bundle -> dictionary, one call.
pub fn decode_normalized(
    bundle: &TargetBundle,
    record: &NormalizationRecord,
    registry: &ParamRegistry,
) -> Result<TreeParams, CodecError> {
    let plain = denormalize(bundle, record, NormalizeOptions::default())
        .map_err(|e| CodecError::BadValue("bundle".into(), e.to_string()))?;
    let matrix = merge_groups(&plain, registry)?;
    decode(&matrix, registry)
}
