//! Abstract JSON values.
//!
//! [`JsonValue`] is the datum every other module works on. Objects keep their
//! insertion order so that serialized output is deterministic, but equality
//! between objects ignores key order.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

/// Ordered map used for JSON objects.
pub type Map = IndexMap<String, JsonValue>;

#[derive(Clone, Debug, PartialEq)]
pub enum JsonValue {
    Null,
    Bool(bool),
    /// Always finite; JSON has no spelling for NaN or the infinities.
    Num(f64),
    Str(String),
    Arr(Vec<JsonValue>),
    Obj(Map),
}

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("number {0} is not representable as a finite double")]
    NonFinite(String),
}

impl JsonValue {
    /// Parses JSON text. Duplicate keys keep the last occurrence.
    pub fn parse(text: &str) -> Result<Self, JsonError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        Self::try_from(&value)
    }

    pub fn obj<K: Into<String>>(entries: impl IntoIterator<Item = (K, JsonValue)>) -> Self {
        JsonValue::Obj(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn str(s: impl Into<String>) -> Self {
        JsonValue::Str(s.into())
    }

    /// Short name of the value's JSON type, as used in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            JsonValue::Null => "null",
            JsonValue::Bool(_) => "boolean",
            JsonValue::Num(_) => "number",
            JsonValue::Str(_) => "string",
            JsonValue::Arr(_) => "array",
            JsonValue::Obj(_) => "object",
        }
    }

    pub fn as_object(&self) -> Option<&Map> {
        match self {
            JsonValue::Obj(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_array(&self) -> Option<&[JsonValue]> {
        match self {
            JsonValue::Arr(items) => Some(items),
            _ => None,
        }
    }

    pub fn to_serde(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            JsonValue::Null => Value::Null,
            JsonValue::Bool(b) => Value::Bool(*b),
            JsonValue::Num(n) => number_to_serde(*n),
            JsonValue::Str(s) => Value::String(s.clone()),
            JsonValue::Arr(items) => Value::Array(items.iter().map(JsonValue::to_serde).collect()),
            JsonValue::Obj(props) => {
                Value::Object(props.iter().map(|(k, v)| (k.clone(), v.to_serde())).collect())
            }
        }
    }

    /// Compact single-line JSON text.
    pub fn to_json_string(&self) -> String {
        self.to_serde().to_string()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_serde()).expect("JSON values always serialize")
    }
}

// Integral doubles inside the exactly-representable range print without a
// fractional part, the way JavaScript prints them.
fn number_to_serde(n: f64) -> serde_json::Value {
    const SAFE: f64 = 9_007_199_254_740_992.0;
    if n.fract() == 0.0 && n.abs() <= SAFE {
        serde_json::Value::from(n as i64)
    } else {
        serde_json::Number::from_f64(n)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

impl TryFrom<&serde_json::Value> for JsonValue {
    type Error = JsonError;

    fn try_from(value: &serde_json::Value) -> Result<Self, Self::Error> {
        use serde_json::Value;
        Ok(match value {
            Value::Null => JsonValue::Null,
            Value::Bool(b) => JsonValue::Bool(*b),
            Value::Number(n) => match n.as_f64() {
                Some(f) if f.is_finite() => JsonValue::Num(f),
                _ => return Err(JsonError::NonFinite(n.to_string())),
            },
            Value::String(s) => JsonValue::Str(s.clone()),
            Value::Array(items) => {
                JsonValue::Arr(items.iter().map(JsonValue::try_from).collect::<Result<_, _>>()?)
            }
            Value::Object(props) => JsonValue::Obj(
                props
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), JsonValue::try_from(v)?)))
                    .collect::<Result<_, JsonError>>()?,
            ),
        })
    }
}

impl fmt::Display for JsonValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_string())
    }
}

impl From<bool> for JsonValue {
    fn from(b: bool) -> Self {
        JsonValue::Bool(b)
    }
}

impl From<f64> for JsonValue {
    fn from(n: f64) -> Self {
        JsonValue::Num(n)
    }
}

impl From<&str> for JsonValue {
    fn from(s: &str) -> Self {
        JsonValue::Str(s.to_owned())
    }
}

/// A JSON Pointer (RFC 6901) used to locate schema nodes and data in
/// diagnostics. The root pointer is stored as the empty string and displayed
/// as `/`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Pointer(String);

impl Pointer {
    pub fn root() -> Self {
        Pointer(String::new())
    }

    pub fn push(&self, token: &str) -> Self {
        let mut s = self.0.clone();
        s.push('/');
        for c in token.chars() {
            match c {
                '~' => s.push_str("~0"),
                '/' => s.push_str("~1"),
                c => s.push(c),
            }
        }
        Pointer(s)
    }

    pub fn push_index(&self, index: usize) -> Self {
        Pointer(format!("{}/{}", self.0, index))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Pointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("/")
        } else {
            f.write_str(&self.0)
        }
    }
}
