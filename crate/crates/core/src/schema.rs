//! The restricted JSON Schema dialect: boolean schemas, the four ground
//! types, `array` with `items`, and `object` with `properties`.
//!
//! Validation is conservative: an object value must carry exactly the
//! properties its schema lists, no more and no fewer.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::json::{JsonValue, Map, Pointer};

/// Non-nested JSON types. The derived order (number, string, boolean, null)
/// is the canonical iteration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundType {
    Number,
    String,
    Boolean,
    Null,
}

impl GroundType {
    pub const ALL: [GroundType; 4] = [
        GroundType::Number,
        GroundType::String,
        GroundType::Boolean,
        GroundType::Null,
    ];

    /// The `"type"` keyword spelling.
    pub fn name(self) -> &'static str {
        match self {
            GroundType::Number => "number",
            GroundType::String => "string",
            GroundType::Boolean => "boolean",
            GroundType::Null => "null",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        GroundType::ALL.into_iter().find(|g| g.name() == name)
    }

    /// Ground type of a value, or `None` for arrays and objects.
    pub fn of(value: &JsonValue) -> Option<Self> {
        match value {
            JsonValue::Num(_) => Some(GroundType::Number),
            JsonValue::Str(_) => Some(GroundType::String),
            JsonValue::Bool(_) => Some(GroundType::Boolean),
            JsonValue::Null => Some(GroundType::Null),
            JsonValue::Arr(_) | JsonValue::Obj(_) => None,
        }
    }
}

impl fmt::Display for GroundType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Property name to subschema, in document order.
pub type Properties = IndexMap<String, Schema>;

/// Equality is structural and ignores property order.
#[derive(Clone, Debug, PartialEq)]
pub enum Schema {
    Trivial(bool),
    Ground(GroundType),
    Array(Box<Schema>),
    Object(Properties),
}

impl Schema {
    pub fn array(items: Schema) -> Self {
        Schema::Array(Box::new(items))
    }

    pub fn object<K: Into<String>>(props: impl IntoIterator<Item = (K, Schema)>) -> Self {
        Schema::Object(props.into_iter().map(|(k, s)| (k.into(), s)).collect())
    }

    /// Node count; the search's termination measure.
    pub fn size(&self) -> usize {
        match self {
            Schema::Trivial(_) | Schema::Ground(_) => 1,
            Schema::Array(items) => 1 + items.size(),
            Schema::Object(props) => 1 + props.values().map(Schema::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Schema::Trivial(_) | Schema::Ground(_) => 0,
            Schema::Array(items) => 1 + items.depth(),
            Schema::Object(props) => 1 + props.values().map(Schema::depth).max().unwrap_or(0),
        }
    }

    /// One-word description used in diagnostics.
    pub fn kind(&self) -> String {
        match self {
            Schema::Trivial(true) => "true".into(),
            Schema::Trivial(false) => "false".into(),
            Schema::Ground(g) => g.name().into(),
            Schema::Array(_) => "array".into(),
            Schema::Object(_) => "object".into(),
        }
    }

    /// Serializes back to a schema document.
    pub fn to_document(&self) -> JsonValue {
        match self {
            Schema::Trivial(b) => JsonValue::Bool(*b),
            Schema::Ground(g) => JsonValue::obj([("type", JsonValue::str(g.name()))]),
            Schema::Array(items) => {
                JsonValue::obj([("type", JsonValue::str("array")), ("items", items.to_document())])
            }
            Schema::Object(props) => JsonValue::obj([
                ("type", JsonValue::str("object")),
                (
                    "properties",
                    JsonValue::Obj(props.iter().map(|(k, s)| (k.clone(), s.to_document())).collect()),
                ),
            ]),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_document().to_json_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("invalid type {name} at {pointer}")]
    InvalidType { name: String, pointer: Pointer },
    #[error("missing required field \"{field}\" at {pointer}")]
    MissingField { field: &'static str, pointer: Pointer },
    #[error("field \"{field}\" at {pointer} must be {expected}")]
    MalformedField {
        field: &'static str,
        expected: &'static str,
        pointer: Pointer,
    },
    #[error("not a schema at {pointer}: expected a boolean or an object")]
    NotASchema { pointer: Pointer },
}

impl SchemaError {
    pub fn pointer(&self) -> &Pointer {
        match self {
            SchemaError::InvalidType { pointer, .. }
            | SchemaError::MissingField { pointer, .. }
            | SchemaError::MalformedField { pointer, .. }
            | SchemaError::NotASchema { pointer } => pointer,
        }
    }
}

/// A successfully parsed schema together with non-fatal diagnostics.
#[derive(Clone, Debug)]
pub struct ParsedSchema {
    pub schema: Schema,
    pub warnings: Vec<String>,
}

/// Parses a schema document, discarding warnings.
pub fn parse_schema(doc: &JsonValue) -> Result<Schema, SchemaError> {
    parse_schema_with_warnings(doc).map(|p| p.schema)
}

/// Parses a schema document. Unknown keywords are ignored and reported as
/// warnings.
pub fn parse_schema_with_warnings(doc: &JsonValue) -> Result<ParsedSchema, SchemaError> {
    let mut warnings = Vec::new();
    let schema = parse_node(doc, &Pointer::root(), &mut warnings)?;
    Ok(ParsedSchema { schema, warnings })
}

fn parse_node(doc: &JsonValue, at: &Pointer, warnings: &mut Vec<String>) -> Result<Schema, SchemaError> {
    let fields = match doc {
        JsonValue::Bool(b) => return Ok(Schema::Trivial(*b)),
        JsonValue::Obj(fields) => fields,
        _ => return Err(SchemaError::NotASchema { pointer: at.clone() }),
    };

    let type_name = match fields.get("type") {
        Some(JsonValue::Str(name)) => name.as_str(),
        // Type unions such as ["string", "null"] are outside the dialect.
        Some(other) => {
            return Err(SchemaError::InvalidType {
                name: other.to_json_string(),
                pointer: at.push("type"),
            })
        }
        None => {
            return Err(SchemaError::MissingField {
                field: "type",
                pointer: at.clone(),
            })
        }
    };

    let (schema, known): (Schema, &[&str]) = match type_name {
        "array" => {
            let items = fields.get("items").ok_or_else(|| SchemaError::MissingField {
                field: "items",
                pointer: at.clone(),
            })?;
            let items = parse_node(items, &at.push("items"), warnings)?;
            (Schema::array(items), &["type", "items"])
        }
        "object" => {
            let props = match fields.get("properties") {
                Some(JsonValue::Obj(props)) => props,
                Some(_) => {
                    return Err(SchemaError::MalformedField {
                        field: "properties",
                        expected: "an object",
                        pointer: at.push("properties"),
                    })
                }
                None => {
                    return Err(SchemaError::MissingField {
                        field: "properties",
                        pointer: at.clone(),
                    })
                }
            };
            let base = at.push("properties");
            let mut parsed = Properties::with_capacity(props.len());
            for (name, sub) in props {
                parsed.insert(name.clone(), parse_node(sub, &base.push(name), warnings)?);
            }
            (Schema::Object(parsed), &["type", "properties"])
        }
        name => match GroundType::from_name(name) {
            Some(g) => (Schema::Ground(g), &["type"]),
            None => {
                return Err(SchemaError::InvalidType {
                    name: format!("\"{name}\""),
                    pointer: at.push("type"),
                })
            }
        },
    };

    for key in fields.keys().filter(|k| !known.contains(&k.as_str())) {
        warnings.push(format!(
            "ignoring unsupported keyword \"{key}\" at {}",
            at.push(key)
        ));
    }
    Ok(schema)
}

/// Structural equality, insensitive to property order.
pub fn schema_equal(a: &Schema, b: &Schema) -> bool {
    a == b
}

/// Why a value failed validation.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("value at {data} does not conform to schema at {schema}: {reason}")]
pub struct ValidationError {
    pub data: Pointer,
    pub schema: Pointer,
    pub reason: String,
}

/// Conservative validation predicate.
pub fn validate(value: &JsonValue, schema: &Schema) -> bool {
    check(value, schema).is_ok()
}

/// Like [`validate`], but reports the first mismatch found.
pub fn check(value: &JsonValue, schema: &Schema) -> Result<(), ValidationError> {
    check_at(value, schema, &Pointer::root(), &Pointer::root())
}

fn check_at(value: &JsonValue, schema: &Schema, data: &Pointer, at: &Pointer) -> Result<(), ValidationError> {
    let fail = |reason: String| ValidationError {
        data: data.clone(),
        schema: at.clone(),
        reason,
    };
    match schema {
        Schema::Trivial(true) => Ok(()),
        Schema::Trivial(false) => Err(fail("schema `false` accepts nothing".into())),
        Schema::Ground(g) => {
            if GroundType::of(value) == Some(*g) {
                Ok(())
            } else {
                Err(fail(format!("expected {g}, found {}", value.kind())))
            }
        }
        Schema::Array(items) => {
            let JsonValue::Arr(elems) = value else {
                return Err(fail(format!("expected array, found {}", value.kind())));
            };
            let item_at = at.push("items");
            elems
                .iter()
                .enumerate()
                .try_for_each(|(i, e)| check_at(e, items, &data.push_index(i), &item_at))
        }
        Schema::Object(props) => {
            let JsonValue::Obj(fields) = value else {
                return Err(fail(format!("expected object, found {}", value.kind())));
            };
            check_keys(fields, props).map_err(fail)?;
            let base = at.push("properties");
            props.iter().try_for_each(|(name, sub)| {
                check_at(&fields[name.as_str()], sub, &data.push(name), &base.push(name))
            })
        }
    }
}

fn check_keys(fields: &Map, props: &Properties) -> Result<(), String> {
    if let Some(missing) = props.keys().find(|k| !fields.contains_key(*k)) {
        return Err(format!("missing property \"{missing}\""));
    }
    if let Some(extra) = fields.keys().find(|k| !props.contains_key(*k)) {
        return Err(format!("unexpected property \"{extra}\""));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const RESEARCHER_SCHEMA: &str = r#"{
        "type": "object",
        "properties": {
            "name": { "type": "string" },
            "birth_year": { "type": "number" },
            "paper_titles": { "type": "array", "items": { "type": "string" } }
        }
    }"#;

    const RESEARCHER: &str = r#"{
        "name": "Alan Turing",
        "birth_year": 1912,
        "paper_titles": [
            "Computing Machinery and Intelligence",
            "On Computable Numbers",
            "Computability and λ-Definability"
        ]
    }"#;

    fn doc(s: &str) -> JsonValue {
        JsonValue::parse(s).unwrap()
    }

    #[test]
    fn parses_researcher_schema() {
        let s = parse_schema(&doc(RESEARCHER_SCHEMA)).unwrap();
        let expected = Schema::object([
            ("name", Schema::Ground(GroundType::String)),
            ("birth_year", Schema::Ground(GroundType::Number)),
            ("paper_titles", Schema::array(Schema::Ground(GroundType::String))),
        ]);
        assert_eq!(s, expected);
    }

    #[test]
    fn parses_boolean_schemas() {
        assert_eq!(parse_schema(&doc("true")).unwrap(), Schema::Trivial(true));
        assert_eq!(parse_schema(&doc("false")).unwrap(), Schema::Trivial(false));
    }

    #[test]
    fn rejects_unknown_type() {
        let err = parse_schema(&doc(r#"{"type":"quaternion"}"#)).unwrap_err();
        assert_eq!(
            err,
            SchemaError::InvalidType {
                name: "\"quaternion\"".into(),
                pointer: Pointer::root().push("type"),
            }
        );
    }

    #[test]
    fn rejects_type_unions() {
        let err = parse_schema(&doc(r#"{"type":["string","null"]}"#)).unwrap_err();
        assert!(matches!(err, SchemaError::InvalidType { .. }));
    }

    #[test]
    fn missing_items_and_properties() {
        let err = parse_schema(&doc(r#"{"type":"array"}"#)).unwrap_err();
        assert!(matches!(err, SchemaError::MissingField { field: "items", .. }));
        let err = parse_schema(&doc(r#"{"type":"object"}"#)).unwrap_err();
        assert!(matches!(
            err,
            SchemaError::MissingField {
                field: "properties",
                ..
            }
        ));
        let err = parse_schema(&doc(r#"{"title":"x"}"#)).unwrap_err();
        assert!(matches!(err, SchemaError::MissingField { field: "type", .. }));
    }

    #[test]
    fn not_a_schema() {
        for text in ["3", "null", "\"string\"", "[]"] {
            assert!(matches!(
                parse_schema(&doc(text)),
                Err(SchemaError::NotASchema { .. })
            ));
        }
    }

    #[test]
    fn errors_carry_nested_pointer() {
        let text =
            r#"{"type":"object","properties":{"paper_titles":{"type":"array","items":{"type":"frob"}}}}"#;
        let err = parse_schema(&doc(text)).unwrap_err();
        assert_eq!(err.pointer().as_str(), "/properties/paper_titles/items/type");
    }

    #[test]
    fn unknown_keywords_warn() {
        let parsed = parse_schema_with_warnings(&doc(r#"{"type":"string","title":"Name"}"#)).unwrap();
        assert_eq!(parsed.schema, Schema::Ground(GroundType::String));
        assert_eq!(parsed.warnings.len(), 1);
        assert!(parsed.warnings[0].contains("title"));
    }

    #[test]
    fn validates_researcher() {
        let s = parse_schema(&doc(RESEARCHER_SCHEMA)).unwrap();
        let v = doc(RESEARCHER);
        assert!(validate(&v, &s));

        let mut extra = v.as_object().unwrap().clone();
        extra.insert("email".into(), JsonValue::str("alan@example.org"));
        assert!(!validate(&JsonValue::Obj(extra), &s));

        let mut missing = v.as_object().unwrap().clone();
        missing.shift_remove("birth_year");
        let err = check(&JsonValue::Obj(missing), &s).unwrap_err();
        assert!(err.reason.contains("birth_year"));
    }

    #[test]
    fn trivial_schemas() {
        for v in [JsonValue::Null, doc("[1,{}]"), doc(RESEARCHER)] {
            assert!(validate(&v, &Schema::Trivial(true)));
            assert!(!validate(&v, &Schema::Trivial(false)));
        }
    }

    #[test]
    fn ground_validation_is_exact() {
        let num = Schema::Ground(GroundType::Number);
        assert!(validate(&JsonValue::Num(1.0), &num));
        assert!(!validate(&JsonValue::str("1"), &num));
        assert!(!validate(&JsonValue::Null, &num));
    }

    #[test]
    fn array_validation_reports_element_pointer() {
        let s = Schema::array(Schema::Ground(GroundType::String));
        let err = check(&doc(r#"["a", 2]"#), &s).unwrap_err();
        assert_eq!(err.data.as_str(), "/1");
        assert_eq!(err.schema.as_str(), "/items");
    }

    #[test]
    fn equality_ignores_property_order() {
        let num = || Schema::Ground(GroundType::Number);
        let st = || Schema::Ground(GroundType::String);
        assert!(schema_equal(&num(), &num()));
        assert!(schema_equal(
            &Schema::object([("A", num()), ("B", st())]),
            &Schema::object([("B", st()), ("A", num())]),
        ));
        assert!(!schema_equal(&Schema::array(st()), &st()));
    }

    #[test]
    fn document_round_trip() {
        let s = parse_schema(&doc(RESEARCHER_SCHEMA)).unwrap();
        let again = parse_schema(&s.to_document()).unwrap();
        assert!(schema_equal(&s, &again));
    }
}
