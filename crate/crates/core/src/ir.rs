//! Rewrite instructions and sequences.
//!
//! A sequence is a flat list of instructions whose push/pop pairs nest like
//! brackets:
//!
//! ```text
//! R ::= B2B | Copy | PushArr S PopArr | PushObj K* PopObj
//!     | ExtractProp p | NestObj p | InvertArr | InvertObj
//! K ::= PushProp p S PopProp
//! S ::= R*
//! ```
//!
//! On top of the bracket structure, [`well_formed`] rejects sequences that
//! would rename a property by extracting it and nesting the result under a
//! different name at the same level.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::schema::GroundType;

/// A conversion between two distinct ground types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Conversion {
    src: GroundType,
    dst: GroundType,
}

impl Conversion {
    /// `None` for the degenerate `src == dst` case, which is just `Copy`.
    pub fn new(src: GroundType, dst: GroundType) -> Option<Self> {
        (src != dst).then_some(Conversion { src, dst })
    }

    pub fn src(self) -> GroundType {
        self.src
    }

    pub fn dst(self) -> GroundType {
        self.dst
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rewrite {
    B2B(Conversion),
    Copy,
    PushArr,
    PopArr,
    PushObj,
    PopObj,
    PushProp(String),
    PopProp,
    ExtractProp(String),
    NestObj(String),
    /// Array of objects to object of arrays, over the listed properties.
    InvertArr(Vec<String>),
    /// Object of arrays to array of objects, over the listed properties.
    InvertObj(Vec<String>),
}

impl Rewrite {
    /// Shorthand for a ground conversion.
    ///
    /// # Panics
    ///
    /// If `src == dst`.
    pub fn b2b(src: GroundType, dst: GroundType) -> Self {
        Rewrite::B2B(Conversion::new(src, dst).expect("degenerate B2B; use Copy"))
    }

    pub fn push_prop(name: impl Into<String>) -> Self {
        Rewrite::PushProp(name.into())
    }

    pub fn extract(name: impl Into<String>) -> Self {
        Rewrite::ExtractProp(name.into())
    }

    pub fn nest(name: impl Into<String>) -> Self {
        Rewrite::NestObj(name.into())
    }

    pub fn invert_arr<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Rewrite::InvertArr(names.into_iter().map(Into::into).collect())
    }

    pub fn invert_obj<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Rewrite::InvertObj(names.into_iter().map(Into::into).collect())
    }
}

/// An instruction list. Construction does not check well-formedness; call
/// [`well_formed`] (or go through [`parse_ir`]) for that.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sequence(pub Vec<Rewrite>);

impl Sequence {
    pub fn new(instrs: Vec<Rewrite>) -> Self {
        Sequence(instrs)
    }

    pub fn instrs(&self) -> &[Rewrite] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation; the result may need re-checking.
    pub fn then(mut self, other: Sequence) -> Sequence {
        self.0.extend(other.0);
        self
    }
}

impl From<Vec<Rewrite>> for Sequence {
    fn from(instrs: Vec<Rewrite>) -> Self {
        Sequence(instrs)
    }
}

impl FromIterator<Rewrite> for Sequence {
    fn from_iter<I: IntoIterator<Item = Rewrite>>(iter: I) -> Self {
        Sequence(iter.into_iter().collect())
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_ir(self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WellFormednessError {
    #[error("unbalanced bracket at instruction {0}")]
    Unbalanced(usize),
    #[error("push_prop at instruction {0} is not directly inside push_obj")]
    StrayPushProp(usize),
    #[error("instruction {0} appears directly inside push_obj; only push_prop blocks may")]
    NotAPropBlock(usize),
    #[error("property block \"{0}\" appears twice in one object")]
    DuplicatePropBlock(String),
    #[error("invert at instruction {0} needs a nonempty list of distinct property names")]
    InvalidInvertNames(usize),
    #[error(
        "extract_prop \"{extracted}\" (instruction {extract_at}) followed by nest_obj \
         \"{nested}\" (instruction {nest_at}) renames a property"
    )]
    RenamePattern {
        extracted: String,
        nested: String,
        extract_at: usize,
        nest_at: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Bracket {
    Arr,
    Obj,
    Prop,
}

// One value thread: the root sequence or the body of an array/property block.
struct Level<'a> {
    opener: Option<(Bracket, usize)>,
    extracts: Vec<(&'a str, usize)>,
    props: HashSet<&'a str>,
}

impl<'a> Level<'a> {
    fn new(opener: Option<(Bracket, usize)>) -> Self {
        Level {
            opener,
            extracts: Vec::new(),
            props: HashSet::new(),
        }
    }

    fn bracket(&self) -> Option<Bracket> {
        self.opener.map(|(b, _)| b)
    }
}

/// Checks bracket balance, object block structure, invert name lists and
/// the anti-rename rule. Reports the first violation in instruction order.
pub fn well_formed(seq: &Sequence) -> Result<(), WellFormednessError> {
    use WellFormednessError::*;

    let mut levels = vec![Level::new(None)];
    for (i, instr) in seq.0.iter().enumerate() {
        let top = levels.last_mut().expect("root level is never popped");
        let in_obj = top.bracket() == Some(Bracket::Obj);
        if in_obj && !matches!(instr, Rewrite::PushProp(_) | Rewrite::PopObj) {
            return Err(match instr {
                Rewrite::PopArr | Rewrite::PopProp => Unbalanced(i),
                _ => NotAPropBlock(i),
            });
        }
        match instr {
            Rewrite::B2B(_) | Rewrite::Copy => {}
            Rewrite::InvertArr(names) | Rewrite::InvertObj(names) => {
                let distinct: HashSet<_> = names.iter().collect();
                if names.is_empty() || distinct.len() != names.len() {
                    return Err(InvalidInvertNames(i));
                }
            }
            Rewrite::ExtractProp(p) => top.extracts.push((p, i)),
            Rewrite::NestObj(q) => {
                if let Some((p, j)) = top.extracts.iter().find(|(p, _)| *p != q.as_str()) {
                    return Err(RenamePattern {
                        extracted: p.to_string(),
                        nested: q.clone(),
                        extract_at: *j,
                        nest_at: i,
                    });
                }
            }
            Rewrite::PushArr => levels.push(Level::new(Some((Bracket::Arr, i)))),
            Rewrite::PushObj => levels.push(Level::new(Some((Bracket::Obj, i)))),
            Rewrite::PushProp(p) => {
                if !in_obj {
                    return Err(StrayPushProp(i));
                }
                if !top.props.insert(p) {
                    return Err(DuplicatePropBlock(p.clone()));
                }
                levels.push(Level::new(Some((Bracket::Prop, i))));
            }
            Rewrite::PopArr | Rewrite::PopObj | Rewrite::PopProp => {
                let want = match instr {
                    Rewrite::PopArr => Bracket::Arr,
                    Rewrite::PopObj => Bracket::Obj,
                    _ => Bracket::Prop,
                };
                if top.bracket() != Some(want) {
                    return Err(Unbalanced(i));
                }
                levels.pop();
            }
        }
    }
    match levels.pop().and_then(|l| l.opener) {
        Some((_, opened_at)) => Err(Unbalanced(opened_at)),
        None => Ok(()),
    }
}

/// Index of the matching bracket for every push/pop instruction.
/// Assumes `seq` is well formed.
pub(crate) fn bracket_pairs(seq: &Sequence) -> Vec<Option<usize>> {
    let mut pairs = vec![None; seq.len()];
    let mut open = Vec::new();
    for (i, instr) in seq.0.iter().enumerate() {
        match instr {
            Rewrite::PushArr | Rewrite::PushObj | Rewrite::PushProp(_) => open.push(i),
            Rewrite::PopArr | Rewrite::PopObj | Rewrite::PopProp => {
                let j = open.pop().expect("well-formed sequence");
                pairs[i] = Some(j);
                pairs[j] = Some(i);
            }
            _ => {}
        }
    }
    pairs
}

fn quote(name: &str) -> String {
    serde_json::to_string(name).expect("strings always serialize")
}

fn quote_list(names: &[String]) -> String {
    names.iter().map(|n| quote(n)).collect::<Vec<_>>().join(",")
}

/// Text form: one lowercase mnemonic per line, property names as JSON
/// string literals, LF endings, trailing newline.
pub fn serialize_ir(seq: &Sequence) -> String {
    let mut out = String::new();
    for instr in &seq.0 {
        let line = match instr {
            Rewrite::B2B(c) => format!("b2b {} {}", c.src(), c.dst()),
            Rewrite::Copy => "copy".into(),
            Rewrite::PushArr => "push_arr".into(),
            Rewrite::PopArr => "pop_arr".into(),
            Rewrite::PushObj => "push_obj".into(),
            Rewrite::PopObj => "pop_obj".into(),
            Rewrite::PushProp(p) => format!("push_prop {}", quote(p)),
            Rewrite::PopProp => "pop_prop".into(),
            Rewrite::ExtractProp(p) => format!("extract_prop {}", quote(p)),
            Rewrite::NestObj(p) => format!("nest_obj {}", quote(p)),
            Rewrite::InvertArr(ns) => format!("invert_arr {}", quote_list(ns)),
            Rewrite::InvertObj(ns) => format!("invert_obj {}", quote_list(ns)),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IrParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    IllFormed(#[from] WellFormednessError),
}

/// Parses the text form and checks well-formedness.
pub fn parse_ir(text: &str) -> Result<Sequence, IrParseError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut instrs = Vec::new();
    if !body.is_empty() {
        for (n, line) in body.split('\n').enumerate() {
            instrs.push(parse_line(line).map_err(|message| IrParseError::Syntax { line: n + 1, message })?);
        }
    }
    let seq = Sequence(instrs);
    well_formed(&seq)?;
    Ok(seq)
}

fn parse_line(line: &str) -> Result<Rewrite, String> {
    let (op, arg) = match line.split_once(' ') {
        Some((op, arg)) => (op, Some(arg)),
        None => (line, None),
    };
    let name = |arg: Option<&str>| -> Result<String, String> {
        let arg = arg.ok_or_else(|| format!("`{op}` needs a property name"))?;
        serde_json::from_str::<String>(arg).map_err(|e| format!("bad property name {arg}: {e}"))
    };
    let names = |arg: Option<&str>| -> Result<Vec<String>, String> {
        let arg = arg.ok_or_else(|| format!("`{op}` needs property names"))?;
        serde_json::from_str::<Vec<String>>(&format!("[{arg}]"))
            .map_err(|e| format!("bad property name list {arg}: {e}"))
    };
    let no_arg = |r: Rewrite| match arg {
        None => Ok(r),
        Some(a) => Err(format!("unexpected operand `{a}` for `{op}`")),
    };

    match op {
        "copy" => no_arg(Rewrite::Copy),
        "push_arr" => no_arg(Rewrite::PushArr),
        "pop_arr" => no_arg(Rewrite::PopArr),
        "push_obj" => no_arg(Rewrite::PushObj),
        "pop_obj" => no_arg(Rewrite::PopObj),
        "pop_prop" => no_arg(Rewrite::PopProp),
        "push_prop" => Ok(Rewrite::PushProp(name(arg)?)),
        "extract_prop" => Ok(Rewrite::ExtractProp(name(arg)?)),
        "nest_obj" => Ok(Rewrite::NestObj(name(arg)?)),
        "invert_arr" => Ok(Rewrite::InvertArr(names(arg)?)),
        "invert_obj" => Ok(Rewrite::InvertObj(names(arg)?)),
        "b2b" => {
            let arg = arg.ok_or("`b2b` needs two ground types")?;
            let (src, dst) = arg.split_once(' ').ok_or("`b2b` needs two ground types")?;
            let ground =
                |s: &str| GroundType::from_name(s).ok_or_else(|| format!("unknown ground type `{s}`"));
            Conversion::new(ground(src)?, ground(dst)?)
                .map(Rewrite::B2B)
                .ok_or_else(|| "degenerate b2b conversion; use `copy`".to_string())
        }
        other => Err(format!("unknown instruction `{other}`")),
    }
}
