//! Max-Abs scaling of the [-inf,inf] and [-360,360] groups, with the
//! per-parameter maxima persisted for reuse at decode time.

use super::bundle::TargetBundle;
use super::matrix::TARGET_ROWS;
use crate::params::registry::{MagnitudeGroup, ParamRegistry};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Per-parameter maximum absolute value observed over a training set.
/// Covers exactly the normalized-group parameters; every stored max > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationRecord {
    pub max_abs: BTreeMap<String, f64>,
}

#[derive(Debug, Error)]
pub enum NormalizeError {
    #[error("unnormalizable column `{0}`: max-abs is zero")]
    UnnormalizableColumn(String),
    #[error("record does not cover column `{0}`")]
    MissingColumn(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Which groups get scaled. The two named groups always do; the
/// non-negative group is an opt-in switch.
#[derive(Debug, Clone, Copy, Default)]
pub struct NormalizeOptions {
    pub include_non_negative: bool,
}

impl NormalizeOptions {
    fn applies(self, group: MagnitudeGroup) -> bool {
        group.is_normalized() || (self.include_non_negative && group == MagnitudeGroup::NonNegative)
    }
}

impl NormalizationRecord {
    /// Column-wise max-abs over a set of training bundles.
    /// Errors if any covered column is identically zero.
    pub fn from_bundles<'a>(
        bundles: impl IntoIterator<Item = &'a TargetBundle>,
        options: NormalizeOptions,
    ) -> Result<Self, NormalizeError> {
        let mut max_abs: BTreeMap<String, f64> = BTreeMap::new();
        let mut any = false;
        for bundle in bundles {
            any = true;
            for (group, sub) in &bundle.groups {
                if !options.applies(*group) {
                    continue;
                }
                for (c, key) in sub.keys.iter().enumerate() {
                    let m = sub.column_max_abs(c);
                    let slot = max_abs.entry(key.clone()).or_insert(0.0);
                    *slot = slot.max(m);
                }
            }
        }
        if !any {
            return Err(NormalizeError::UnnormalizableColumn("<empty set>".into()));
        }
        for (key, m) in &max_abs {
            if *m <= 0.0 {
                return Err(NormalizeError::UnnormalizableColumn(key.clone()));
            }
        }
        Ok(NormalizationRecord { max_abs })
    }

    /// Coverage self-check against the registry's normalized groups.
    pub fn covers_normalized_groups(&self, registry: &ParamRegistry) -> bool {
        registry
            .entries()
            .iter()
            .filter(|s| s.group.is_normalized())
            .all(|s| self.max_abs.contains_key(s.name))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serialize")
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), NormalizeError> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self, NormalizeError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Divide the normalized groups elementwise by their stored column maxima.
/// Other groups pass through unchanged; zeros stay zero.
pub fn normalize(
    bundle: &TargetBundle,
    record: &NormalizationRecord,
    options: NormalizeOptions,
) -> Result<TargetBundle, NormalizeError> {
    scale_bundle(bundle, record, options, |v, m| v / m)
}

/// Inverse of `normalize`.
pub fn denormalize(
    bundle: &TargetBundle,
    record: &NormalizationRecord,
    options: NormalizeOptions,
) -> Result<TargetBundle, NormalizeError> {
    scale_bundle(bundle, record, options, |v, m| v * m)
}

fn scale_bundle(
    bundle: &TargetBundle,
    record: &NormalizationRecord,
    options: NormalizeOptions,
    apply: fn(f64, f64) -> f64,
) -> Result<TargetBundle, NormalizeError> {
    let mut out = bundle.clone();
    for (group, sub) in &mut out.groups {
        if !options.applies(*group) {
            continue;
        }
        for c in 0..sub.cols() {
            let key = sub.keys[c].clone();
            let m = *record
                .max_abs
                .get(&key)
                .ok_or(NormalizeError::MissingColumn(key.clone()))?;
            if m <= 0.0 {
                return Err(NormalizeError::UnnormalizableColumn(key));
            }
            for row in 0..TARGET_ROWS {
                let v = sub.get(row, c);
                // Exact sparsity preservation, independent of the max.
                if v != 0.0 {
                    sub.set(row, c, apply(v, m));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::bundle::split_groups;
    use crate::codec::matrix::encode;
    use crate::params::random::randomize;
    use crate::params::species::{builtin_profile, Species};
    use crate::params::ParamRegistry;

    fn bundle_for(seed: u64) -> TargetBundle {
        let reg = ParamRegistry::global();
        let p = randomize(builtin_profile(Species::Maple), seed, reg).unwrap();
        split_groups(&encode(&p, reg).unwrap(), reg)
    }

    #[test]
    fn division_by_stored_maxima() {
        let mut bundle = bundle_for(0);
        let angle = bundle.group_mut(MagnitudeGroup::Angle);
        let col = angle.keys.iter().position(|k| k == "curvature").unwrap();
        for (row, v) in [-180.0, 90.0, 360.0, 0.0].iter().enumerate() {
            angle.set(row, col, *v);
        }
        let mut record = NormalizationRecord {
            max_abs: BTreeMap::new(),
        };
        for key in &bundle.group(MagnitudeGroup::Angle).keys {
            record.max_abs.insert(key.clone(), 360.0);
        }
        for key in &bundle.group(MagnitudeGroup::Unbounded).keys {
            record.max_abs.insert(key.clone(), 10.0);
        }
        let normed = normalize(&bundle, &record, NormalizeOptions::default()).unwrap();
        let sub = normed.group(MagnitudeGroup::Angle);
        assert_eq!(sub.get(0, col), -0.5);
        assert_eq!(sub.get(1, col), 0.25);
        assert_eq!(sub.get(2, col), 1.0);
        assert_eq!(sub.get(3, col), 0.0);
    }

    #[test]
    fn zero_columns_stay_zero_under_positive_maxima() {
        let mut bundle = bundle_for(1);
        let unbounded = bundle.group_mut(MagnitudeGroup::Unbounded);
        for c in 0..unbounded.cols() {
            for row in 0..TARGET_ROWS {
                unbounded.set(row, c, 0.0);
            }
        }
        let record = NormalizationRecord {
            max_abs: bundle
                .groups
                .iter()
                .filter(|(g, _)| g.is_normalized())
                .flat_map(|(_, s)| s.keys.iter().cloned())
                .map(|k| (k, 7.5))
                .collect(),
        };
        let normed = normalize(&bundle, &record, NormalizeOptions::default()).unwrap();
        let sub = normed.group(MagnitudeGroup::Unbounded);
        for c in 0..sub.cols() {
            for row in 0..TARGET_ROWS {
                assert_eq!(sub.get(row, c), 0.0);
            }
        }
    }

    #[test]
    fn round_trip_error_stays_below_1e_9() {
        let bundles: Vec<TargetBundle> = (0..100).map(bundle_for).collect();
        let record =
            NormalizationRecord::from_bundles(bundles.iter(), NormalizeOptions::default()).unwrap();
        for bundle in &bundles {
            let normed = normalize(bundle, &record, NormalizeOptions::default()).unwrap();
            let back = denormalize(&normed, &record, NormalizeOptions::default()).unwrap();
            for (group, sub) in &bundle.groups {
                let out = back.group(*group);
                for i in 0..sub.data.len() {
                    assert!((sub.data[i] - out.data[i]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn normalized_groups_land_in_unit_interval() {
        let bundles: Vec<TargetBundle> = (0..50).map(bundle_for).collect();
        let record =
            NormalizationRecord::from_bundles(bundles.iter(), NormalizeOptions::default()).unwrap();
        assert!(record.covers_normalized_groups(ParamRegistry::global()));
        for bundle in &bundles {
            let normed = normalize(bundle, &record, NormalizeOptions::default()).unwrap();
            for g in [MagnitudeGroup::Unbounded, MagnitudeGroup::Angle] {
                for v in &normed.group(g).data {
                    assert!(v.abs() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn zero_max_abs_is_an_error() {
        let bundle = bundle_for(2);
        let mut record = NormalizationRecord {
            max_abs: BTreeMap::new(),
        };
        for (g, sub) in &bundle.groups {
            if g.is_normalized() {
                for key in &sub.keys {
                    record.max_abs.insert(key.clone(), 1.0);
                }
            }
        }
        record.max_abs.insert("curvature".into(), 0.0);
        let err = normalize(&bundle, &record, NormalizeOptions::default()).unwrap_err();
        assert!(matches!(err, NormalizeError::UnnormalizableColumn(k) if k == "curvature"));
    }
}
