//! Synthesis of JSON transformers from a pair of JSON Schemas.
//!
//! The pipeline mirrors a small compiler:
//!
//! * [`schema`] parses the restricted schema dialect and validates values;
//! * [`search`] finds a rewrite [`Sequence`] relating two schemas;
//! * [`interp`] executes a sequence directly on a [`JsonValue`];
//! * [`codegen`] lowers a sequence to JavaScript (or back to text IR).
//!
//! ```
//! use jsonsynth::{apply, emit, find_path, JsonValue, Schema, GroundType};
//!
//! let src = Schema::array(Schema::Ground(GroundType::String));
//! let tgt = Schema::array(Schema::Ground(GroundType::Number));
//! let seq = find_path(&src, &tgt).found().unwrap();
//!
//! let out = apply(&seq, &JsonValue::parse(r#"["1","2"]"#).unwrap()).unwrap();
//! assert_eq!(out, JsonValue::parse("[1,2]").unwrap());
//! assert!(emit(&seq, "input", "output").unwrap().source_text.contains("parseInt"));
//! ```

pub mod cli;
pub mod codegen;
pub mod generate;
pub mod ground;
pub mod interp;
pub mod ir;
pub mod json;
pub mod schema;
pub mod search;

pub use codegen::{emit, Backend, CodegenError, GeneratedProgram, IrBackend, JsBackend};
pub use ground::{convert, ConvertError};
pub use interp::{apply, RuntimeError};
pub use ir::{parse_ir, serialize_ir, well_formed, Rewrite, Sequence, WellFormednessError};
pub use json::{JsonValue, Pointer};
pub use schema::{parse_schema, schema_equal, validate, GroundType, Schema, SchemaError};
pub use search::{find_path, SearchOutcome, Searcher};
