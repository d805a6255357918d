//! Splitting the target matrix into the six magnitude-group sub-matrices
//! and merging them back losslessly.

use super::matrix::{CodecError, TargetMatrix, TARGET_ROWS};
use crate::params::registry::{MagnitudeGroup, ParamRegistry};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One 4 x n_t sub-matrix holding the columns of a single magnitude group,
/// registry order preserved within the group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubMatrix {
    pub keys: Vec<String>,
    /// Row-major, TARGET_ROWS x keys.len().
    pub data: Vec<f64>,
}

impl SubMatrix {
    pub fn cols(&self) -> usize {
        self.keys.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        let cols = self.cols();
        self.data[row * cols + col] = v;
    }

    pub fn column_max_abs(&self, col: usize) -> f64 {
        (0..TARGET_ROWS)
            .map(|row| self.get(row, col).abs())
            .fold(0.0, f64::max)
    }
}

/// The six sub-matrices keyed by magnitude group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetBundle {
    pub groups: BTreeMap<MagnitudeGroup, SubMatrix>,
}

impl TargetBundle {
    pub fn group(&self, g: MagnitudeGroup) -> &SubMatrix {
        &self.groups[&g]
    }

    pub fn group_mut(&mut self, g: MagnitudeGroup) -> &mut SubMatrix {
        self.groups.get_mut(&g).expect("all groups present")
    }

    pub fn total_cols(&self) -> usize {
        self.groups.values().map(|m| m.cols()).sum()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serialize")
    }

    pub fn from_json_str(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn save(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CodecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CodecError::BadValue("bundle".into(), e.to_string()))?;
        Self::from_json_str(&text).map_err(|e| CodecError::BadValue("bundle".into(), e.to_string()))
    }
}

/// Route each matrix column to its magnitude group.
pub fn split_groups(matrix: &TargetMatrix, registry: &ParamRegistry) -> TargetBundle {
    let mut groups: BTreeMap<MagnitudeGroup, SubMatrix> = MagnitudeGroup::ALL
        .into_iter()
        .map(|g| {
            (
                g,
                SubMatrix {
                    keys: Vec::new(),
                    data: Vec::new(),
                },
            )
        })
        .collect();

    // Collect per-group columns first, then lay out row-major.
    let mut columns: BTreeMap<MagnitudeGroup, Vec<(String, [f64; TARGET_ROWS])>> = BTreeMap::new();
    for (col, key) in matrix.column_keys.iter().enumerate() {
        let group = registry
            .get(key)
            .map(|s| s.group)
            .expect("encoded matrices carry registry keys");
        columns
            .entry(group)
            .or_default()
            .push((key.clone(), matrix.column(col)));
    }
    for (group, cols) in columns {
        let sub = groups.get_mut(&group).unwrap();
        sub.keys = cols.iter().map(|(k, _)| k.clone()).collect();
        sub.data = vec![0.0; TARGET_ROWS * cols.len()];
        for (c, (_, column)) in cols.iter().enumerate() {
            for (row, v) in column.iter().enumerate() {
                sub.data[row * cols.len() + c] = *v;
            }
        }
    }
    TargetBundle { groups }
}

/// Inverse of `split_groups`: reassemble the full matrix in registry order.
pub fn merge_groups(bundle: &TargetBundle, registry: &ParamRegistry) -> Result<TargetMatrix, CodecError> {
    let total = bundle.total_cols();
    if total != registry.total_count() {
        return Err(CodecError::ColumnCountMismatch {
            got: total,
            expected: registry.total_count(),
        });
    }
    let mut column_keys = vec![String::new(); total];
    let mut data = vec![0.0; TARGET_ROWS * total];
    for sub in bundle.groups.values() {
        for (c, key) in sub.keys.iter().enumerate() {
            let col = registry
                .index_of(key)
                .ok_or_else(|| CodecError::BadValue(key.clone(), "unknown column".into()))?;
            column_keys[col] = key.clone();
            for row in 0..TARGET_ROWS {
                data[row * total + col] = sub.get(row, c);
            }
        }
    }
    Ok(TargetMatrix { column_keys, data })
}
