//! Species detection from a parameter dictionary: tally characteristic
//! parameters whose values land within their tolerance window, then pick
//! the species with the highest eligibility percentage.

use crate::params::registry::ParamRegistry;
use crate::params::species::{Species, SpeciesProfile, TextureSet};
use crate::params::value::TreeParams;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IdentifyError {
    #[error("unidentifiable dictionary: no characteristic parameter matched")]
    Unidentifiable,
    #[error("no species profiles supplied")]
    NoProfiles,
}

/// Per-species eligibility counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EligibilityTally {
    pub species: Species,
    pub eligible: usize,
    pub characteristic_count: usize,
}

impl EligibilityTally {
    pub fn percentage(&self) -> f64 {
        self.eligible as f64 / self.characteristic_count as f64
    }
}

#[derive(Debug, Clone)]
pub struct IdentifyOutcome {
    pub species: Species,
    pub tallies: Vec<EligibilityTally>,
    /// True when another species reached the same top percentage; the
    /// winner is then the lowest species in enum order.
    pub tied: bool,
}

/// Compare every predicted parameter against each species' characteristic
/// set; a parameter is eligible when |value - cp.value| <= epsilon. The
/// winner maximizes eligible / characteristic-count.
pub fn identify(
    params: &TreeParams,
    profiles: &[SpeciesProfile],
    registry: &ParamRegistry,
) -> Result<IdentifyOutcome, IdentifyError> {
    if profiles.is_empty() {
        return Err(IdentifyError::NoProfiles);
    }
    let mut tallies: Vec<EligibilityTally> = profiles
        .iter()
        .map(|p| EligibilityTally {
            species: p.species,
            eligible: 0,
            characteristic_count: p.characteristic.len().max(1),
        })
        .collect();

    for (name, value) in params.iter() {
        let Some(v) = value.as_scalar_f64(registry, name) else {
            continue;
        };
        for (profile, tally) in profiles.iter().zip(tallies.iter_mut()) {
            for cp in &profile.characteristic {
                if cp.name == *name && (v - cp.value).abs() <= cp.epsilon {
                    tally.eligible += 1;
                }
            }
        }
    }

    if tallies.iter().all(|t| t.eligible == 0) {
        return Err(IdentifyError::Unidentifiable);
    }

    tallies.sort_by_key(|t| t.species);
    let best = tallies
        .iter()
        .map(EligibilityTally::percentage)
        .fold(f64::MIN, f64::max);
    let winners: Vec<&EligibilityTally> = tallies
        .iter()
        .filter(|t| t.percentage() == best)
        .collect();
    Ok(IdentifyOutcome {
        species: winners[0].species,
        tied: winners.len() > 1,
        tallies,
    })
}

/// Texture asset pair for a species, from its profile data.
pub fn texture_for<'a>(
    species: Species,
    profiles: &'a [SpeciesProfile],
) -> Option<&'a TextureSet> {
    profiles
        .iter()
        .find(|p| p.species == species)
        .map(|p| &p.texture)
}
