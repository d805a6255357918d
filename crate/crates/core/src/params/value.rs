//! Parameter dictionary values and their key/value text serialization.

use super::registry::{Arity, ParamKind, ParamRegistry, LEVEL_COUNT};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Float(f64),
    Int(i64),
    Bool(bool),
    Enum(String),
    /// -1 or +1.
    Sign(i8),
    FloatVec([f64; LEVEL_COUNT]),
    IntVec([i64; LEVEL_COUNT]),
}

impl ParamValue {
    /// Numeric view used by range checks, species matching, and encoding.
    /// Enums map to their label code, bools to 0/1, signs to -1/+1.
    pub fn as_scalar_f64(&self, registry: &ParamRegistry, name: &str) -> Option<f64> {
        match self {
            ParamValue::Float(v) => Some(*v),
            ParamValue::Int(v) => Some(*v as f64),
            ParamValue::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
            ParamValue::Sign(s) => Some(*s as f64),
            ParamValue::Enum(label) => {
                super::registry::encode_enum(name, label, registry).ok()
            }
            _ => None,
        }
    }

    pub fn as_vec_f64(&self) -> Option<[f64; LEVEL_COUNT]> {
        match self {
            ParamValue::FloatVec(v) => Some(*v),
            ParamValue::IntVec(v) => Some(v.map(|x| x as f64)),
            _ => None,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Value};
        match self {
            ParamValue::Float(v) => json!(v),
            ParamValue::Int(v) => json!(v),
            ParamValue::Bool(b) => json!(b),
            ParamValue::Enum(s) => json!(s),
            ParamValue::Sign(s) => json!(*s as i64),
            ParamValue::FloatVec(v) => Value::Array(v.iter().map(|x| json!(x)).collect()),
            ParamValue::IntVec(v) => Value::Array(v.iter().map(|x| json!(x)).collect()),
        }
    }
}

/// A complete Weber-Penn parameter dictionary, one entry per registry key.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TreeParams {
    values: BTreeMap<String, ParamValue>,
}

#[derive(Debug, Error)]
pub enum ParamsIoError {
    #[error("parameter file is not a JSON object")]
    NotAnObject,
    #[error("parameter `{0}`: {1}")]
    BadValue(String, String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl TreeParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, value: ParamValue) {
        self.values.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.values.get(name)
    }

    pub fn remove(&mut self, name: &str) -> Option<ParamValue> {
        self.values.remove(name)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ParamValue)> {
        self.values.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.values.keys()
    }

    // Typed accessors for well-formed dictionaries; panic on a missing or
    // mistyped key, which validation rules out beforehand.

    pub fn float(&self, name: &str) -> f64 {
        match self.values.get(name) {
            Some(ParamValue::Float(v)) => *v,
            Some(ParamValue::Int(v)) => *v as f64,
            other => panic!("parameter `{name}` is not a float: {other:?}"),
        }
    }

    pub fn int(&self, name: &str) -> i64 {
        match self.values.get(name) {
            Some(ParamValue::Int(v)) => *v,
            other => panic!("parameter `{name}` is not an int: {other:?}"),
        }
    }

    pub fn boolean(&self, name: &str) -> bool {
        match self.values.get(name) {
            Some(ParamValue::Bool(b)) => *b,
            other => panic!("parameter `{name}` is not a bool: {other:?}"),
        }
    }

    pub fn enum_label(&self, name: &str) -> &str {
        match self.values.get(name) {
            Some(ParamValue::Enum(s)) => s,
            other => panic!("parameter `{name}` is not an enum: {other:?}"),
        }
    }

    pub fn sign(&self, name: &str) -> f64 {
        match self.values.get(name) {
            Some(ParamValue::Sign(s)) => *s as f64,
            other => panic!("parameter `{name}` is not a sign: {other:?}"),
        }
    }

    pub fn float_vec(&self, name: &str) -> [f64; LEVEL_COUNT] {
        match self.values.get(name) {
            Some(v) => v
                .as_vec_f64()
                .unwrap_or_else(|| panic!("parameter `{name}` is not a vector")),
            None => panic!("parameter `{name}` missing"),
        }
    }

    pub fn int_vec(&self, name: &str) -> [i64; LEVEL_COUNT] {
        match self.values.get(name) {
            Some(ParamValue::IntVec(v)) => *v,
            other => panic!("parameter `{name}` is not an int vector: {other:?}"),
        }
    }

    /// Serialize to the canonical key/value JSON object (keys sorted,
    /// 4-vectors as arrays, enums as labels, signs as -1/1 integers).
    pub fn to_json_value(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .values
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("params serialize")
    }

    /// Parse a key/value object, coercing each value per its registry kind.
    /// Unknown keys are kept as raw floats so that validation can report
    /// them instead of silently dropping data.
    pub fn from_json_value(
        value: &serde_json::Value,
        registry: &ParamRegistry,
    ) -> Result<Self, ParamsIoError> {
        let obj = value.as_object().ok_or(ParamsIoError::NotAnObject)?;
        let mut params = TreeParams::new();
        for (key, raw) in obj {
            let parsed = match registry.get(key) {
                Some(spec) => parse_typed(key, raw, spec.kind, spec.arity)?,
                None => parse_untyped(key, raw)?,
            };
            params.set(key.clone(), parsed);
        }
        Ok(params)
    }

    pub fn from_json_str(text: &str, registry: &ParamRegistry) -> Result<Self, ParamsIoError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        Self::from_json_value(&value, registry)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), ParamsIoError> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }

    pub fn load(path: &std::path::Path, registry: &ParamRegistry) -> Result<Self, ParamsIoError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text, registry)
    }
}

fn parse_typed(
    key: &str,
    raw: &serde_json::Value,
    kind: ParamKind,
    arity: Arity,
) -> Result<ParamValue, ParamsIoError> {
    let bad = |msg: &str| ParamsIoError::BadValue(key.to_string(), msg.to_string());
    if arity == Arity::PerLevel {
        let arr = raw.as_array().ok_or_else(|| bad("expected an array"))?;
        if arr.len() != LEVEL_COUNT {
            // Preserve the wrong-arity data for validation to flag.
            let mut v = [0.0; LEVEL_COUNT];
            for (i, slot) in v.iter_mut().enumerate() {
                *slot = arr.get(i).and_then(|x| x.as_f64()).unwrap_or(f64::NAN);
            }
            return Ok(ParamValue::FloatVec(v));
        }
        return match kind {
            ParamKind::Int => {
                let mut v = [0i64; LEVEL_COUNT];
                for (i, x) in arr.iter().enumerate() {
                    v[i] = x.as_i64().ok_or_else(|| bad("expected integers"))?;
                }
                Ok(ParamValue::IntVec(v))
            }
            _ => {
                let mut v = [0f64; LEVEL_COUNT];
                for (i, x) in arr.iter().enumerate() {
                    v[i] = x.as_f64().ok_or_else(|| bad("expected numbers"))?;
                }
                Ok(ParamValue::FloatVec(v))
            }
        };
    }
    match kind {
        ParamKind::Float => raw
            .as_f64()
            .map(ParamValue::Float)
            .ok_or_else(|| bad("expected a number")),
        ParamKind::Int => raw
            .as_i64()
            .map(ParamValue::Int)
            .ok_or_else(|| bad("expected an integer")),
        ParamKind::Bool => raw
            .as_bool()
            .map(ParamValue::Bool)
            .ok_or_else(|| bad("expected a bool")),
        ParamKind::Enum(_) => raw
            .as_str()
            .map(|s| ParamValue::Enum(s.to_string()))
            .ok_or_else(|| bad("expected a label string")),
        ParamKind::BinarySign => {
            let v = raw.as_i64().ok_or_else(|| bad("expected -1 or 1"))?;
            Ok(ParamValue::Sign(v as i8))
        }
    }
}

fn parse_untyped(key: &str, raw: &serde_json::Value) -> Result<ParamValue, ParamsIoError> {
    match raw {
        serde_json::Value::Bool(b) => Ok(ParamValue::Bool(*b)),
        serde_json::Value::String(s) => Ok(ParamValue::Enum(s.clone())),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(ParamValue::Int(i))
            } else {
                Ok(ParamValue::Float(n.as_f64().unwrap_or(f64::NAN)))
            }
        }
        serde_json::Value::Array(arr) => {
            let mut v = [f64::NAN; LEVEL_COUNT];
            for (i, x) in arr.iter().take(LEVEL_COUNT).enumerate() {
                v[i] = x.as_f64().unwrap_or(f64::NAN);
            }
            Ok(ParamValue::FloatVec(v))
        }
        _ => Err(ParamsIoError::BadValue(
            key.to_string(),
            "unsupported value".to_string(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::registry::ParamRegistry;

    #[test]
    fn json_round_trip_preserves_kinds() {
        let reg = ParamRegistry::global();
        let mut p = TreeParams::new();
        p.set("scale", ParamValue::Float(13.0));
        p.set("levels", ParamValue::Int(2));
        p.set("close_tip", ParamValue::Bool(true));
        p.set("leaf_shape", ParamValue::Enum("hexagonal".into()));
        p.set("sign", ParamValue::Sign(-1));
        p.set("branches", ParamValue::IntVec([0, 54, 10, 5]));
        p.set("taper", ParamValue::FloatVec([1.0, 1.0, 0.7, 0.7]));
        let text = p.to_json_string();
        let back = TreeParams::from_json_str(&text, reg).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn unknown_keys_survive_parsing() {
        let reg = ParamRegistry::global();
        let parsed =
            TreeParams::from_json_str(r#"{"mystery_knob": 4.25, "scale": 10.0}"#, reg).unwrap();
        assert!(parsed.get("mystery_knob").is_some());
    }
}
