//! Dictionary validation against the registry: coverage, kinds, arity,
//! ranges, and the handful of structural rules (levels, sign, enums).

use super::registry::{Arity, ParamKind, ParamRegistry, LEVEL_COUNT};
use super::value::{ParamValue, TreeParams};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub parameter: String,
    pub rule: Rule,
    /// Offending value rendered for diagnostics.
    pub value: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    UnregisteredParameter,
    MissingParameter,
    KindMismatch { expected: &'static str },
    ArityMismatch { expected: usize },
    OutOfRange { min: f64, max: f64 },
    UnknownLabel,
    InvalidSign,
    NotAnInteger,
    NotFinite,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Rule::UnregisteredParameter => {
                write!(f, "`{}`: unregistered parameter", self.parameter)
            }
            Rule::MissingParameter => write!(f, "`{}`: missing parameter", self.parameter),
            Rule::KindMismatch { expected } => write!(
                f,
                "`{}`: expected {expected}, got {}",
                self.parameter, self.value
            ),
            Rule::ArityMismatch { expected } => write!(
                f,
                "`{}`: expected {expected} entries, got {}",
                self.parameter, self.value
            ),
            Rule::OutOfRange { min, max } => write!(
                f,
                "`{}`: value {} outside legal range [{min}, {max}]",
                self.parameter, self.value
            ),
            Rule::UnknownLabel => write!(f, "`{}`: unknown label {}", self.parameter, self.value),
            Rule::InvalidSign => write!(
                f,
                "`{}`: sign must be -1 or 1, got {}",
                self.parameter, self.value
            ),
            Rule::NotAnInteger => write!(
                f,
                "`{}`: expected integral value, got {}",
                self.parameter, self.value
            ),
            Rule::NotFinite => write!(f, "`{}`: non-finite value", self.parameter),
        }
    }
}

fn violation(name: &str, rule: Rule, value: impl fmt::Debug) -> Violation {
    Violation {
        parameter: name.to_string(),
        rule,
        value: format!("{value:?}"),
    }
}

/// Returns the empty list iff the dictionary is well-formed: every registry
/// key present with the right kind/arity and every value in range. Unknown
/// keys are reported, never fatal.
pub fn validate(params: &TreeParams, registry: &ParamRegistry) -> Vec<Violation> {
    let mut out = Vec::new();

    for (name, value) in params.iter() {
        match registry.get(name) {
            None => out.push(violation(name, Rule::UnregisteredParameter, value)),
            Some(spec) => check_value(name, value, spec.kind, spec.arity, spec.min, spec.max, &mut out),
        }
    }

    for spec in registry.entries() {
        if params.get(spec.name).is_none() {
            out.push(violation(spec.name, Rule::MissingParameter, "absent"));
        }
    }

    // Levels is further restricted to the four supported depths.
    if let Some(ParamValue::Int(levels)) = params.get("levels") {
        if !(1..=LEVEL_COUNT as i64).contains(levels) {
            out.push(violation(
                "levels",
                Rule::OutOfRange { min: 1.0, max: 4.0 },
                levels,
            ));
        }
    }

    out
}

#[allow(clippy::too_many_arguments)]
fn check_value(
    name: &str,
    value: &ParamValue,
    kind: ParamKind,
    arity: Arity,
    min: f64,
    max: f64,
    out: &mut Vec<Violation>,
) {
    let scalar_expected = arity == Arity::Scalar;
    match value {
        ParamValue::FloatVec(v) => {
            if scalar_expected {
                out.push(violation(name, Rule::ArityMismatch { expected: 1 }, v));
                return;
            }
            // Wrong-length source arrays parse with NaN padding; report as arity.
            if v.iter().any(|x| x.is_nan()) {
                out.push(violation(
                    name,
                    Rule::ArityMismatch {
                        expected: LEVEL_COUNT,
                    },
                    v,
                ));
                return;
            }
            if kind == ParamKind::Int {
                out.push(violation(name, Rule::NotAnInteger, v));
            }
            for x in v {
                check_range(name, *x, min, max, out);
            }
        }
        ParamValue::IntVec(v) => {
            if scalar_expected {
                out.push(violation(name, Rule::ArityMismatch { expected: 1 }, v));
                return;
            }
            if kind != ParamKind::Int {
                out.push(violation(name, Rule::KindMismatch { expected: "floats" }, v));
            }
            for x in v {
                check_range(name, *x as f64, min, max, out);
            }
        }
        scalar => {
            if !scalar_expected {
                out.push(violation(
                    name,
                    Rule::ArityMismatch {
                        expected: LEVEL_COUNT,
                    },
                    scalar,
                ));
                return;
            }
            match (kind, scalar) {
                (ParamKind::Float, ParamValue::Float(v)) => check_range(name, *v, min, max, out),
                (ParamKind::Float, ParamValue::Int(v)) => {
                    check_range(name, *v as f64, min, max, out)
                }
                (ParamKind::Int, ParamValue::Int(v)) => check_range(name, *v as f64, min, max, out),
                (ParamKind::Int, ParamValue::Float(v)) => {
                    if v.fract() == 0.0 {
                        check_range(name, *v, min, max, out);
                    } else {
                        out.push(violation(name, Rule::NotAnInteger, v));
                    }
                }
                (ParamKind::Bool, ParamValue::Bool(_)) => {}
                (ParamKind::Enum(labels), ParamValue::Enum(label)) => {
                    if !labels.contains(&label.as_str()) {
                        out.push(violation(name, Rule::UnknownLabel, label));
                    }
                }
                (ParamKind::BinarySign, ParamValue::Sign(s)) => {
                    if *s != -1 && *s != 1 {
                        out.push(violation(name, Rule::InvalidSign, s));
                    }
                }
                (ParamKind::BinarySign, ParamValue::Int(v)) => {
                    if *v != -1 && *v != 1 {
                        out.push(violation(name, Rule::InvalidSign, v));
                    }
                }
                (ParamKind::Bool, other) => {
                    out.push(violation(name, Rule::KindMismatch { expected: "bool" }, other))
                }
                (ParamKind::Enum(_), other) => out.push(violation(
                    name,
                    Rule::KindMismatch { expected: "label" },
                    other,
                )),
                (ParamKind::Float, other) | (ParamKind::Int, other) => out.push(violation(
                    name,
                    Rule::KindMismatch { expected: "number" },
                    other,
                )),
                (ParamKind::BinarySign, other) => out.push(violation(
                    name,
                    Rule::KindMismatch { expected: "sign" },
                    other,
                )),
            }
        }
    }
}

fn check_range(name: &str, v: f64, min: f64, max: f64, out: &mut Vec<Violation>) {
    if v.is_nan() {
        out.push(violation(name, Rule::NotFinite, v));
    } else if v < min || v > max {
        out.push(violation(name, Rule::OutOfRange { min, max }, v));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::species::builtin_profiles;

    #[test]
    fn maple_profile_dictionary_is_valid() {
        let reg = ParamRegistry::global();
        let profiles = builtin_profiles();
        let params = crate::params::random::randomize(&profiles[0], 7, reg).unwrap();
        assert_eq!(validate(&params, reg), vec![]);
    }

    #[test]
    fn leaf_scale_variation_above_one_is_a_range_violation() {
        let reg = ParamRegistry::global();
        let profiles = builtin_profiles();
        let mut params = crate::params::random::randomize(&profiles[0], 7, reg).unwrap();
        params.set("leaf_scale_variation", ParamValue::Float(1.5));
        let violations = validate(&params, reg);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].parameter, "leaf_scale_variation");
        assert_eq!(
            violations[0].rule,
            Rule::OutOfRange { min: 0.0, max: 1.0 }
        );
    }

    #[test]
    fn three_entry_branches_vector_is_an_arity_violation() {
        let reg = ParamRegistry::global();
        let profiles = builtin_profiles();
        let mut params = crate::params::random::randomize(&profiles[0], 7, reg).unwrap();
        let text = params.to_json_string().replace(
            &format!(
                "\"branches\": {}",
                serde_json::to_string_pretty(&params.to_json_value()["branches"]).unwrap()
            ),
            "\"branches\": [0, 54, 10]",
        );
        // Fall back to editing the parsed form if pretty formatting differs.
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        doc["branches"] = serde_json::json!([0, 54, 10]);
        params = TreeParams::from_json_value(&doc, reg).unwrap();
        let violations = validate(&params, reg);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].parameter, "branches");
        assert!(matches!(violations[0].rule, Rule::ArityMismatch { .. }));
    }

    #[test]
    fn unregistered_parameter_is_reported_not_fatal() {
        let reg = ParamRegistry::global();
        let profiles = builtin_profiles();
        let mut params = crate::params::random::randomize(&profiles[0], 7, reg).unwrap();
        params.set("mystery_knob", ParamValue::Float(3.0));
        let violations = validate(&params, reg);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].rule, Rule::UnregisteredParameter);
    }
}
