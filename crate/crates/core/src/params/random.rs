//! Randomized dictionary generation: fixed values copied verbatim, unfixed
//! parameters drawn uniformly from the profile's declared ranges.

use super::registry::{Arity, ParamKind, ParamRegistry, LEVEL_COUNT};
use super::species::SpeciesProfile;
use super::value::{ParamValue, TreeParams};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RandomizeError {
    #[error("profile declares no range for unfixed parameter `{0}`")]
    MissingRange(String),
    #[error("unfixed parameter `{0}` is not registered")]
    Unregistered(String),
}

/// Draw a full dictionary from a species profile. Pure in (profile, seed):
/// the same seed always yields a bit-identical dictionary. Draw order is
/// the registry declaration order.
pub fn randomize(
    profile: &SpeciesProfile,
    seed: u64,
    registry: &ParamRegistry,
) -> Result<TreeParams, RandomizeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = TreeParams::new();

    for spec in registry.entries() {
        if let Some(value) = profile.fixed.get(spec.name) {
            params.set(spec.name, value.clone());
            continue;
        }
        let &(lo, hi) = profile
            .unfixed_ranges
            .get(spec.name)
            .ok_or_else(|| RandomizeError::MissingRange(spec.name.to_string()))?;
        let value = match (spec.kind, spec.arity) {
            (ParamKind::BinarySign, _) => {
                ParamValue::Sign(if rng.random::<bool>() { 1 } else { -1 })
            }
            (ParamKind::Int, Arity::Scalar) => {
                ParamValue::Int(rng.random_range(lo as i64..=hi as i64))
            }
            (ParamKind::Int, Arity::PerLevel) => {
                let mut v = [0i64; LEVEL_COUNT];
                for slot in &mut v {
                    *slot = rng.random_range(lo as i64..=hi as i64);
                }
                ParamValue::IntVec(v)
            }
            (ParamKind::Float, Arity::Scalar) => ParamValue::Float(draw_uniform(&mut rng, lo, hi)),
            (ParamKind::Float, Arity::PerLevel) => {
                let mut v = [0f64; LEVEL_COUNT];
                for slot in &mut v {
                    *slot = draw_uniform(&mut rng, lo, hi);
                }
                ParamValue::FloatVec(v)
            }
            (ParamKind::Bool, _) => ParamValue::Bool(rng.random::<bool>()),
            (ParamKind::Enum(labels), _) => {
                let idx = rng.random_range(0..labels.len());
                ParamValue::Enum(labels[idx].to_string())
            }
        };
        params.set(spec.name, value);
    }
    Ok(params)
}

fn draw_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}
