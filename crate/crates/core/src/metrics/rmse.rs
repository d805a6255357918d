//! Per-branch and overall 1-RMSE accuracy over normalized target bundles.

use crate::codec::bundle::TargetBundle;
use crate::params::registry::MagnitudeGroup;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RmseError {
    #[error("bundle shapes differ in group {0}")]
    ShapeMismatch(MagnitudeGroup),
}

/// One accuracy score per magnitude group plus their mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub per_group: Vec<(MagnitudeGroup, f64)>,
    pub overall: f64,
}

impl AccuracyReport {
    pub fn group(&self, g: MagnitudeGroup) -> f64 {
        self.per_group
            .iter()
            .find(|(group, _)| *group == g)
            .map(|(_, s)| *s)
            .expect("all groups scored")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialize")
    }
}

/// Per group: 1 - sqrt(mean squared elementwise error); overall is the
/// arithmetic mean of the six group scores. Scores are fractions (the
/// usual x100 presentation is left to callers).
pub fn one_minus_rmse(
    pred: &TargetBundle,
    gt: &TargetBundle,
) -> Result<AccuracyReport, RmseError> {
    let mut per_group = Vec::with_capacity(6);
    for (group, gt_sub) in &gt.groups {
        let pred_sub = pred
            .groups
            .get(group)
            .ok_or(RmseError::ShapeMismatch(*group))?;
        if pred_sub.keys != gt_sub.keys || pred_sub.data.len() != gt_sub.data.len() {
            return Err(RmseError::ShapeMismatch(*group));
        }
        let n = gt_sub.data.len().max(1);
        let mse: f64 = pred_sub
            .data
            .iter()
            .zip(&gt_sub.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / n as f64;
        per_group.push((*group, 1.0 - mse.sqrt()));
    }
    let overall = per_group.iter().map(|(_, s)| s).sum::<f64>() / per_group.len() as f64;
    Ok(AccuracyReport { per_group, overall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{encode, split_groups};
    use crate::params::random::randomize;
    use crate::params::species::{builtin_profile, Species};
    use crate::params::ParamRegistry;

    fn bundle(seed: u64) -> TargetBundle {
        let reg = ParamRegistry::global();
        let p = randomize(builtin_profile(Species::Maple), seed, reg).unwrap();
        split_groups(&encode(&p, reg).unwrap(), reg)
    }

    #[test]
    fn identical_bundles_score_one_everywhere() {
        let b = bundle(0);
        let report = one_minus_rmse(&b, &b).unwrap();
        for (_, s) in &report.per_group {
            assert_eq!(*s, 1.0);
        }
        assert_eq!(report.overall, 1.0);
    }

    #[test]
    fn constant_offset_scores_one_minus_offset() {
        let gt = bundle(1);
        let mut pred = gt.clone();
        for sub in pred.groups.values_mut() {
            for v in &mut sub.data {
                *v += 0.1;
            }
        }
        let report = one_minus_rmse(&pred, &gt).unwrap();
        for (g, s) in &report.per_group {
            assert!((s - 0.9).abs() < 1e-12, "group {g}: {s}");
        }
        assert!((report.overall - 0.9).abs() < 1e-12);
    }

    #[test]
    fn overall_is_the_mean_of_group_scores() {
        let gt = bundle(2);
        let mut pred = gt.clone();
        // Different offsets per group.
        for (i, sub) in pred.groups.values_mut().enumerate() {
            for v in &mut sub.data {
                *v += 0.02 * (i as f64 + 1.0);
            }
        }
        let report = one_minus_rmse(&pred, &gt).unwrap();
        let mean = report.per_group.iter().map(|(_, s)| s).sum::<f64>() / 6.0;
        assert!((report.overall - mean).abs() < 1e-12);
    }

    #[test]
    fn random_pair_matches_a_direct_two_loop_reference() {
        let gt = bundle(3);
        let pred = bundle(4);
        let report = one_minus_rmse(&pred, &gt).unwrap();
        for (group, score) in &report.per_group {
            let a = &pred.groups[group];
            let b = &gt.groups[group];
            // Reference: explicit loops over rows and columns.
            let mut acc = 0.0;
            let mut count = 0usize;
            for row in 0..4 {
                for col in 0..a.cols() {
                    let d = a.get(row, col) - b.get(row, col);
                    acc += d * d;
                    count += 1;
                }
            }
            let expected = 1.0 - (acc / count as f64).sqrt();
            assert!((score - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = bundle(5);
        let mut b = bundle(6);
        let sub = b.groups.get_mut(&MagnitudeGroup::Unit).unwrap();
        sub.keys.pop();
        sub.data.truncate(sub.data.len() - 4);
        assert!(one_minus_rmse(&a, &b).is_err());
    }

    #[test]
    fn error_monotonicity_in_a_single_entry() {
        let gt = bundle(7);
        let mut pred = gt.clone();
        let mut last = one_minus_rmse(&pred, &gt).unwrap().overall;
        for step in 1..=5 {
            let sub = pred.groups.get_mut(&MagnitudeGroup::Unit).unwrap();
            sub.data[0] = gt.groups[&MagnitudeGroup::Unit].data[0] + 0.05 * step as f64;
            let score = one_minus_rmse(&pred, &gt).unwrap().overall;
            assert!(score < last);
            last = score;
        }
    }
}
