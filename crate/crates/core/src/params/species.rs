//! Species profiles: per-species fixed values, unfixed draw ranges, the
//! characteristic-parameter set used for identification, and texture ids.
//!
//! The five shipped profiles are hand-tuned data, not ground truth; any
//! profile satisfying the structural rules exercises the pipeline.

use super::registry::{ParamRegistry, PARAM_COUNT};
use super::value::TreeParams;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Maple,
    Pine,
    Bonsai,
    Palm,
    Cherry,
}

impl Species {
    pub const ALL: [Species; 5] = [
        Species::Maple,
        Species::Pine,
        Species::Bonsai,
        Species::Palm,
        Species::Cherry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Species::Maple => "maple",
            Species::Pine => "pine",
            Species::Bonsai => "bonsai",
            Species::Palm => "palm",
            Species::Cherry => "cherry",
        }
    }

    pub fn parse(s: &str) -> Option<Species> {
        Species::ALL.into_iter().find(|sp| sp.name() == s)
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One characteristic parameter: a fixed value that identifies the species
/// when a predicted value lands within +/- epsilon of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Characteristic {
    pub name: String,
    pub value: f64,
    pub epsilon: f64,
}

/// Default tolerance: 5% of the fixed value with an absolute floor.
pub fn default_epsilon(value: f64) -> f64 {
    (0.05 * value.abs()).max(1e-3)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextureSet {
    pub bark: String,
    pub leaf: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesProfile {
    pub species: Species,
    pub fixed: TreeParams,
    /// Draw range per unfixed parameter; integers draw inclusive bounds.
    pub unfixed_ranges: BTreeMap<String, (f64, f64)>,
    pub characteristic: Vec<Characteristic>,
    pub texture: TextureSet,
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("profile `{species}`: {message}")]
    Invalid { species: String, message: String },
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("params: {0}")]
    Params(#[from] super::value::ParamsIoError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize, Deserialize)]
struct ProfileFile {
    species: String,
    texture: TextureSet,
    fixed: serde_json::Value,
    unfixed: BTreeMap<String, (f64, f64)>,
    characteristic: Vec<Characteristic>,
}

impl SpeciesProfile {
    pub fn from_json_str(text: &str, registry: &ParamRegistry) -> Result<Self, ProfileError> {
        let file: ProfileFile = serde_json::from_str(text)?;
        let species = Species::parse(&file.species)
            .ok_or_else(|| ProfileError::UnknownSpecies(file.species.clone()))?;
        let profile = SpeciesProfile {
            species,
            fixed: TreeParams::from_json_value(&file.fixed, registry)?,
            unfixed_ranges: file.unfixed,
            characteristic: file.characteristic,
            texture: file.texture,
        };
        profile.check(registry)?;
        Ok(profile)
    }

    pub fn load(path: &std::path::Path, registry: &ParamRegistry) -> Result<Self, ProfileError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text, registry)
    }

    pub fn to_json_string(&self) -> String {
        let file = ProfileFile {
            species: self.species.name().to_string(),
            texture: self.texture.clone(),
            fixed: self.fixed.to_json_value(),
            unfixed: self.unfixed_ranges.clone(),
            characteristic: self.characteristic.clone(),
        };
        serde_json::to_string_pretty(&file).expect("profile serialize")
    }

    /// Structural rules: fixed and unfixed keys partition the registry,
    /// ranges stay inside the registry ranges, and every characteristic
    /// parameter is fixed.
    fn check(&self, registry: &ParamRegistry) -> Result<(), ProfileError> {
        let fail = |message: String| {
            Err(ProfileError::Invalid {
                species: self.species.name().to_string(),
                message,
            })
        };
        let mut covered = 0usize;
        for spec in registry.entries() {
            let in_fixed = self.fixed.get(spec.name).is_some();
            let in_unfixed = self.unfixed_ranges.contains_key(spec.name);
            match (in_fixed, in_unfixed) {
                (true, false) | (false, true) => covered += 1,
                (true, true) => return fail(format!("`{}` both fixed and unfixed", spec.name)),
                (false, false) => return fail(format!("`{}` unclassified", spec.name)),
            }
        }
        if covered != PARAM_COUNT {
            return fail("key coverage mismatch".to_string());
        }
        for (name, (lo, hi)) in &self.unfixed_ranges {
            let spec = match registry.get(name) {
                Some(s) => s,
                None => return fail(format!("unfixed `{name}` not registered")),
            };
            if lo > hi {
                return fail(format!("`{name}` inverted range"));
            }
            if *lo < spec.min || *hi > spec.max {
                return fail(format!("`{name}` range exceeds registry range"));
            }
            if !lo.is_finite() || !hi.is_finite() {
                return fail(format!("`{name}` draw range must be bounded"));
            }
        }
        for cp in &self.characteristic {
            if self.fixed.get(&cp.name).is_none() {
                return fail(format!("characteristic `{}` is not fixed", cp.name));
            }
            if cp.epsilon <= 0.0 {
                return fail(format!("characteristic `{}` has epsilon <= 0", cp.name));
            }
        }
        if self.characteristic.is_empty() {
            return fail("no characteristic parameters".to_string());
        }
        Ok(())
    }

    /// Numeric value of a fixed scalar parameter (enum labels as codes).
    pub fn fixed_scalar(&self, name: &str, registry: &ParamRegistry) -> Option<f64> {
        self.fixed
            .get(name)
            .and_then(|v| v.as_scalar_f64(registry, name))
    }
}

const MAPLE_JSON: &str = include_str!("../../data/species/maple.json");
const PINE_JSON: &str = include_str!("../../data/species/pine.json");
const BONSAI_JSON: &str = include_str!("../../data/species/bonsai.json");
const PALM_JSON: &str = include_str!("../../data/species/palm.json");
const CHERRY_JSON: &str = include_str!("../../data/species/cherry.json");

/// The five profiles shipped with the crate, in species enum order.
pub fn builtin_profiles() -> &'static [SpeciesProfile] {
    static PROFILES: OnceLock<Vec<SpeciesProfile>> = OnceLock::new();
    PROFILES.get_or_init(|| {
        let reg = ParamRegistry::global();
        [MAPLE_JSON, PINE_JSON, BONSAI_JSON, PALM_JSON, CHERRY_JSON]
            .iter()
            .map(|text| SpeciesProfile::from_json_str(text, reg).expect("builtin profile"))
            .collect()
    })
}

pub fn builtin_profile(species: Species) -> &'static SpeciesProfile {
    builtin_profiles()
        .iter()
        .find(|p| p.species == species)
        .expect("all species shipped")
}

/// Texture asset pair configured for a species.
pub fn texture_for(species: Species) -> &'static TextureSet {
    &builtin_profile(species).texture
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_profiles_cover_all_species() {
        let profiles = builtin_profiles();
        assert_eq!(profiles.len(), 5);
        for (p, s) in profiles.iter().zip(Species::ALL) {
            assert_eq!(p.species, s);
        }
    }

    #[test]
    fn textures_are_distinct_across_species() {
        let mut seen = std::collections::HashSet::new();
        for s in Species::ALL {
            let t = texture_for(s);
            assert!(seen.insert((t.bark.clone(), t.leaf.clone())), "{s} reuses a texture");
        }
    }

    #[test]
    fn profile_round_trips_through_json() {
        let reg = ParamRegistry::global();
        let p = builtin_profile(Species::Pine);
        let text = p.to_json_string();
        let back = SpeciesProfile::from_json_str(&text, reg).unwrap();
        assert_eq!(*p, back);
    }

    #[test]
    fn characteristic_values_are_pairwise_separated() {
        let reg = ParamRegistry::global();
        let profiles = builtin_profiles();
        for a in profiles {
            for b in profiles {
                if a.species == b.species {
                    continue;
                }
                for cp in &a.characteristic {
                    let other = b
                        .characteristic
                        .iter()
                        .find(|c| c.name == cp.name)
                        .expect("shared characteristic name set");
                    let gap = (cp.value - other.value).abs();
                    assert!(
                        gap > cp.epsilon + other.epsilon,
                        "{}/{} overlap on {}",
                        a.species,
                        b.species,
                        cp.name
                    );
                }
                let _ = reg;
            }
        }
    }
}
