//! Reference semantics for rewrite sequences.
//!
//! [`apply`] runs a well-formed [`Sequence`] on a value with an explicit
//! frame stack: array frames loop their body once per element, object frames
//! collect the results of their property blocks.

use thiserror::Error;

use crate::ground::{convert, ConvertError};
use crate::ir::{bracket_pairs, well_formed, Rewrite, Sequence, WellFormednessError};
use crate::json::{JsonValue, Map};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum RuntimeError {
    #[error("instruction {at} ({instr}) expected {expected}, found {found}")]
    Shape {
        at: usize,
        instr: &'static str,
        expected: String,
        found: &'static str,
    },
    #[error("instruction {at}: {source}")]
    Conversion {
        at: usize,
        #[source]
        source: ConvertError,
    },
    #[error("instruction {at}: {reason}")]
    NonUniformInvert { at: usize, reason: String },
    #[error(transparent)]
    IllFormed(#[from] WellFormednessError),
}

enum Frame {
    Arr {
        out: Vec<JsonValue>,
        input: Vec<JsonValue>,
        index: usize,
        body: usize,
    },
    Obj {
        out: Map,
        input: Map,
    },
    Prop {
        name: String,
    },
}

/// Per-invocation machine state.
struct EvalState {
    current: JsonValue,
    frames: Vec<Frame>,
}

/// Executes `seq` on `value`. Any error aborts the whole run.
pub fn apply(seq: &Sequence, value: &JsonValue) -> Result<JsonValue, RuntimeError> {
    well_formed(seq)?;
    let pairs = bracket_pairs(seq);
    let instrs = seq.instrs();
    let mut st = EvalState {
        current: value.clone(),
        frames: Vec::new(),
    };

    let mut pc = 0;
    while pc < instrs.len() {
        let shape = |expected: &str, found: &JsonValue| RuntimeError::Shape {
            at: pc,
            instr: mnemonic(&instrs[pc]),
            expected: expected.to_string(),
            found: found.kind(),
        };
        match &instrs[pc] {
            Rewrite::Copy => {}
            Rewrite::B2B(c) => {
                st.current = convert(c.src(), c.dst(), &st.current)
                    .map_err(|source| RuntimeError::Conversion { at: pc, source })?;
            }
            Rewrite::PushArr => {
                let input = match std::mem::replace(&mut st.current, JsonValue::Null) {
                    JsonValue::Arr(items) => items,
                    other => return Err(shape("array", &other)),
                };
                if input.is_empty() {
                    st.current = JsonValue::Arr(Vec::new());
                    pc = pairs[pc].expect("bracket pair") + 1;
                    continue;
                }
                st.current = input[0].clone();
                st.frames.push(Frame::Arr {
                    out: Vec::with_capacity(input.len()),
                    input,
                    index: 0,
                    body: pc + 1,
                });
            }
            Rewrite::PopArr => {
                let Some(Frame::Arr {
                    out,
                    input,
                    index,
                    body,
                }) = st.frames.last_mut()
                else {
                    unreachable!("well-formed sequence")
                };
                out.push(std::mem::replace(&mut st.current, JsonValue::Null));
                *index += 1;
                if *index < input.len() {
                    st.current = input[*index].clone();
                    pc = *body;
                    continue;
                }
                let Some(Frame::Arr { out, .. }) = st.frames.pop() else {
                    unreachable!()
                };
                st.current = JsonValue::Arr(out);
            }
            Rewrite::PushObj => {
                let input = match std::mem::replace(&mut st.current, JsonValue::Null) {
                    JsonValue::Obj(props) => props,
                    other => return Err(shape("object", &other)),
                };
                st.frames.push(Frame::Obj {
                    out: Map::new(),
                    input,
                });
            }
            Rewrite::PushProp(name) => {
                let Some(Frame::Obj { input, .. }) = st.frames.last() else {
                    unreachable!("well-formed sequence")
                };
                st.current = match input.get(name) {
                    Some(v) => v.clone(),
                    None => {
                        return Err(shape(
                            &format!("object with property \"{name}\""),
                            &JsonValue::Obj(input.clone()),
                        ))
                    }
                };
                st.frames.push(Frame::Prop { name: name.clone() });
            }
            Rewrite::PopProp => {
                let Some(Frame::Prop { name }) = st.frames.pop() else {
                    unreachable!()
                };
                let Some(Frame::Obj { out, .. }) = st.frames.last_mut() else {
                    unreachable!()
                };
                out.insert(name, std::mem::replace(&mut st.current, JsonValue::Null));
            }
            Rewrite::PopObj => {
                let Some(Frame::Obj { out, .. }) = st.frames.pop() else {
                    unreachable!()
                };
                st.current = JsonValue::Obj(out);
            }
            Rewrite::ExtractProp(name) => {
                st.current = match &mut st.current {
                    JsonValue::Obj(props) if props.contains_key(name) => {
                        props.swap_remove(name).expect("checked")
                    }
                    other => return Err(shape(&format!("object with property \"{name}\""), other)),
                };
            }
            Rewrite::NestObj(name) => {
                let inner = std::mem::replace(&mut st.current, JsonValue::Null);
                st.current = JsonValue::obj([(name.clone(), inner)]);
            }
            Rewrite::InvertArr(names) => {
                st.current = invert_arr(pc, names, &st.current)?;
            }
            Rewrite::InvertObj(names) => {
                st.current = invert_obj(pc, names, &st.current)?;
            }
        }
        pc += 1;
    }
    debug_assert!(st.frames.is_empty());
    Ok(st.current)
}

fn same_keys(props: &Map, names: &[String]) -> bool {
    props.len() == names.len() && names.iter().all(|n| props.contains_key(n))
}

fn invert_arr(at: usize, names: &[String], value: &JsonValue) -> Result<JsonValue, RuntimeError> {
    let JsonValue::Arr(items) = value else {
        return Err(RuntimeError::Shape {
            at,
            instr: "invert_arr",
            expected: "array of objects".into(),
            found: value.kind(),
        });
    };
    let mut columns: Vec<Vec<JsonValue>> = vec![Vec::with_capacity(items.len()); names.len()];
    for (i, item) in items.iter().enumerate() {
        match item {
            JsonValue::Obj(props) if same_keys(props, names) => {
                for (col, name) in columns.iter_mut().zip(names) {
                    col.push(props[name.as_str()].clone());
                }
            }
            _ => {
                return Err(RuntimeError::NonUniformInvert {
                    at,
                    reason: format!("element {i} is not an object with exactly the inverted properties"),
                })
            }
        }
    }
    Ok(JsonValue::Obj(
        names
            .iter()
            .cloned()
            .zip(columns.into_iter().map(JsonValue::Arr))
            .collect(),
    ))
}

fn invert_obj(at: usize, names: &[String], value: &JsonValue) -> Result<JsonValue, RuntimeError> {
    let non_uniform = |reason: String| RuntimeError::NonUniformInvert { at, reason };
    let JsonValue::Obj(props) = value else {
        return Err(RuntimeError::Shape {
            at,
            instr: "invert_obj",
            expected: "object of arrays".into(),
            found: value.kind(),
        });
    };
    if !same_keys(props, names) {
        return Err(non_uniform(
            "object does not have exactly the inverted properties".into(),
        ));
    }
    let mut columns = Vec::with_capacity(names.len());
    for name in names {
        match &props[name.as_str()] {
            JsonValue::Arr(items) => columns.push(items),
            other => {
                return Err(non_uniform(format!(
                    "property \"{name}\" is {}, not an array",
                    other.kind()
                )))
            }
        }
    }
    let len = columns[0].len();
    if let Some((name, col)) = names.iter().zip(&columns).find(|(_, c)| c.len() != len) {
        return Err(non_uniform(format!(
            "property \"{name}\" has {} elements, expected {len}",
            col.len()
        )));
    }
    Ok(JsonValue::Arr(
        (0..len)
            .map(|i| {
                JsonValue::Obj(
                    names
                        .iter()
                        .zip(&columns)
                        .map(|(n, c)| (n.clone(), c[i].clone()))
                        .collect(),
                )
            })
            .collect(),
    ))
}

fn mnemonic(instr: &Rewrite) -> &'static str {
    match instr {
        Rewrite::B2B(_) => "b2b",
        Rewrite::Copy => "copy",
        Rewrite::PushArr => "push_arr",
        Rewrite::PopArr => "pop_arr",
        Rewrite::PushObj => "push_obj",
        Rewrite::PopObj => "pop_obj",
        Rewrite::PushProp(_) => "push_prop",
        Rewrite::PopProp => "pop_prop",
        Rewrite::ExtractProp(_) => "extract_prop",
        Rewrite::NestObj(_) => "nest_obj",
        Rewrite::InvertArr(_) => "invert_arr",
        Rewrite::InvertObj(_) => "invert_obj",
    }
}
