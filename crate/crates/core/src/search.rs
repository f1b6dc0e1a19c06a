//! Top-down, type-directed search for a rewrite sequence relating a source
//! schema to a target schema.
//!
//! Rules are tried in a fixed order and the first that produces a path wins:
//!
//! 0. equal schemas: `Copy`
//! 1. trivial schemas: `true` targets accept anything, `false` targets and
//!    trivial sources admit nothing
//! 2. two ground types: a single `B2B`
//! 3. two arrays: the item path, lifted with `PushArr`/`PopArr`
//! 4. two objects whose target keys are a subset of the source keys: one
//!    property block per target property; other source properties are dropped
//! 5. object source: extract the unique property that has a path
//! 6. single-property object target: nest the path into that property
//! 7. inversion between arrays of objects and objects of arrays
//!
//! Candidates that would rename a property are discarded before the
//! uniqueness checks of rules 5 and 6.

use std::fmt;

use crate::ir::{well_formed, Rewrite, Sequence};
use crate::json::Pointer;
use crate::schema::{schema_equal, Properties, Schema};

pub const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(Sequence),
    NoPath(NoPath),
    Ambiguous(Ambiguity),
}

impl SearchOutcome {
    pub fn found(self) -> Option<Sequence> {
        match self {
            SearchOutcome::Found(seq) => Some(seq),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

/// Locates the subschema pair a diagnostic is about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Site {
    pub source: Pointer,
    pub target: Pointer,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "source {} -> target {}", self.source, self.target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoPath {
    pub reason: String,
    pub site: Site,
}

impl fmt::Display for NoPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no transformation found ({}): {}", self.site, self.reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambiguity {
    /// Competing property names, in declaration order.
    pub candidates: Vec<String>,
    pub site: Site,
}

impl fmt::Display for Ambiguity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.candidates.iter().map(|c| format!("\"{c}\"")).collect();
        write!(
            f,
            "ambiguous transformation ({}): properties {} could each supply the target",
            self.site,
            names.join(", ")
        )
    }
}

/// Search with the default depth limit.
pub fn find_path(src: &Schema, tgt: &Schema) -> SearchOutcome {
    Searcher::default().find_path(src, tgt)
}

#[derive(Clone, Debug)]
pub struct Searcher {
    max_depth: usize,
}

impl Default for Searcher {
    fn default() -> Self {
        Searcher {
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

type Step = Result<Sequence, Failure>;

// Internal failure; Ambiguity outranks NoPath when reporting.
#[derive(Clone, Debug)]
enum Failure {
    NoPath(NoPath),
    Ambiguous(Ambiguity),
}

impl Failure {
    fn prefer(self, other: Failure) -> Failure {
        match (&self, &other) {
            (Failure::NoPath(_), Failure::Ambiguous(_)) => other,
            _ => self,
        }
    }
}

struct Node<'a> {
    schema: &'a Schema,
    at: Pointer,
}

impl<'a> Node<'a> {
    fn root(schema: &'a Schema) -> Self {
        Node {
            schema,
            at: Pointer::root(),
        }
    }

    fn items(&self, items: &'a Schema) -> Node<'a> {
        Node {
            schema: items,
            at: self.at.push("items"),
        }
    }

    fn prop(&self, name: &str, sub: &'a Schema) -> Node<'a> {
        Node {
            schema: sub,
            at: self.at.push("properties").push(name),
        }
    }

    // A derived schema (after inversion) reported at the original location.
    fn derived(&self, schema: &'a Schema) -> Node<'a> {
        Node {
            schema,
            at: self.at.clone(),
        }
    }
}

impl Searcher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn find_path(&self, src: &Schema, tgt: &Schema) -> SearchOutcome {
        match self.search(&Node::root(src), &Node::root(tgt), 0) {
            Ok(seq) => {
                debug_assert_eq!(well_formed(&seq), Ok(()));
                SearchOutcome::Found(seq)
            }
            Err(Failure::NoPath(n)) => SearchOutcome::NoPath(n),
            Err(Failure::Ambiguous(a)) => SearchOutcome::Ambiguous(a),
        }
    }

    fn search(&self, src: &Node<'_>, tgt: &Node<'_>, depth: usize) -> Step {
        let no_path = |reason: String| {
            Failure::NoPath(NoPath {
                reason,
                site: Site {
                    source: src.at.clone(),
                    target: tgt.at.clone(),
                },
            })
        };
        if depth > self.max_depth {
            return Err(no_path("depth limit".into()));
        }

        // Rules 0-3: decided by the shapes alone.
        if schema_equal(src.schema, tgt.schema) {
            return Ok(Sequence(vec![Rewrite::Copy]));
        }
        match (src.schema, tgt.schema) {
            (_, Schema::Trivial(true)) => return Ok(Sequence(vec![Rewrite::Copy])),
            (_, Schema::Trivial(false)) => {
                return Err(no_path("the target schema `false` accepts no value".into()))
            }
            (Schema::Trivial(_), _) => {
                return Err(no_path(format!(
                    "source schema `{}` says nothing about the shape required by target {}",
                    src.schema.kind(),
                    tgt.schema.kind()
                )))
            }
            (Schema::Ground(a), Schema::Ground(b)) => return Ok(Sequence(vec![Rewrite::b2b(*a, *b)])),
            (Schema::Array(a), Schema::Array(b)) => {
                let inner = self.search(&src.items(a), &tgt.items(b), depth + 1)?;
                return Ok(lift_array(inner));
            }
            _ => {}
        }

        let mut failure: Option<Failure> = None;
        let mut note = |f: Failure| {
            failure = Some(match failure.take() {
                Some(prev) => prev.prefer(f),
                None => f,
            })
        };

        // Rule 4: property-wise descent.
        if let (Schema::Object(sp), Schema::Object(tp)) = (src.schema, tgt.schema) {
            match self.descend_props(src, sp, tgt, tp, depth) {
                Ok(seq) => return Ok(seq),
                Err(f) => note(f),
            }
        }

        // Rule 5: extract a unique source property.
        if let Schema::Object(sp) = src.schema {
            let mut found = Vec::new();
            for (name, sub) in sp {
                match self.search(&src.prop(name, sub), tgt, depth + 1) {
                    Ok(path) => {
                        let seq = Sequence(vec![Rewrite::ExtractProp(name.clone())]).then(path);
                        if well_formed(&seq).is_ok() {
                            found.push((name.clone(), seq));
                        }
                    }
                    Err(f) => note(f),
                }
            }
            match pick_unique(found) {
                Pick::One(seq) => return Ok(seq),
                Pick::Many(candidates) => {
                    return Err(Failure::Ambiguous(Ambiguity {
                        candidates,
                        site: Site {
                            source: src.at.clone(),
                            target: tgt.at.clone(),
                        },
                    }))
                }
                Pick::None => {}
            }
        }

        // Rule 6: nest into the target's only property. A multi-property
        // target cannot be produced by a single NestObj.
        if let Schema::Object(tp) = tgt.schema {
            if tp.len() == 1 {
                let (name, sub) = tp.first().expect("one property");
                match self.search(src, &tgt.prop(name, sub), depth + 1) {
                    Ok(path) => {
                        let seq = path.then(Sequence(vec![Rewrite::NestObj(name.clone())]));
                        if well_formed(&seq).is_ok() {
                            return Ok(seq);
                        }
                    }
                    Err(f) => note(f),
                }
            }
        }

        // Rule 7: inversion.
        match (src.schema, tgt.schema) {
            (Schema::Array(items), Schema::Object(_)) => {
                if let Some((names, inverted)) = invert_array_schema(items) {
                    match self.search(&src.derived(&inverted), tgt, depth + 1) {
                        Ok(path) => return Ok(Sequence(vec![Rewrite::InvertArr(names)]).then(path)),
                        Err(f) => note(f),
                    }
                }
            }
            (Schema::Object(props), Schema::Array(_)) => {
                if let Some((names, inverted)) = invert_object_schema(props) {
                    match self.search(&src.derived(&inverted), tgt, depth + 1) {
                        Ok(path) => return Ok(Sequence(vec![Rewrite::InvertObj(names)]).then(path)),
                        Err(f) => note(f),
                    }
                }
            }
            _ => {}
        }

        Err(failure.unwrap_or_else(|| {
            no_path(format!(
                "no rewrite relates source {} to target {}",
                src.schema.kind(),
                tgt.schema.kind()
            ))
        }))
    }

    fn descend_props(
        &self,
        src: &Node<'_>,
        sp: &Properties,
        tgt: &Node<'_>,
        tp: &Properties,
        depth: usize,
    ) -> Step {
        if let Some(missing) = tp.keys().find(|k| !sp.contains_key(*k)) {
            return Err(Failure::NoPath(NoPath {
                reason: format!("target property \"{missing}\" has no counterpart in the source object"),
                site: Site {
                    source: src.at.clone(),
                    target: tgt.at.push("properties").push(missing),
                },
            }));
        }
        let mut seq = vec![Rewrite::PushObj];
        for (name, t) in tp {
            let s = &sp[name.as_str()];
            let path = self.search(&src.prop(name, s), &tgt.prop(name, t), depth + 1)?;
            seq.push(Rewrite::PushProp(name.clone()));
            seq.extend(path.0);
            seq.push(Rewrite::PopProp);
        }
        seq.push(Rewrite::PopObj);
        Ok(Sequence(seq))
    }
}

fn lift_array(inner: Sequence) -> Sequence {
    let mut seq = Vec::with_capacity(inner.len() + 2);
    seq.push(Rewrite::PushArr);
    seq.extend(inner.0);
    seq.push(Rewrite::PopArr);
    Sequence(seq)
}

enum Pick {
    None,
    One(Sequence),
    Many(Vec<String>),
}

fn pick_unique(mut found: Vec<(String, Sequence)>) -> Pick {
    match found.len() {
        0 => Pick::None,
        1 => Pick::One(found.pop().expect("one candidate").1),
        _ => Pick::Many(found.into_iter().map(|(n, _)| n).collect()),
    }
}

/// `[{p: s}]` to `{p: [s]}`; `None` unless the items are a nonempty object.
pub fn invert_array_schema(items: &Schema) -> Option<(Vec<String>, Schema)> {
    match items {
        Schema::Object(props) if !props.is_empty() => Some((
            props.keys().cloned().collect(),
            Schema::Object(
                props
                    .iter()
                    .map(|(k, s)| (k.clone(), Schema::array(s.clone())))
                    .collect(),
            ),
        )),
        _ => None,
    }
}

/// `{p: [s]}` to `[{p: s}]`; `None` unless every property is an array and
/// there is at least one.
pub fn invert_object_schema(props: &Properties) -> Option<(Vec<String>, Schema)> {
    if props.is_empty() {
        return None;
    }
    let mut items = Properties::with_capacity(props.len());
    for (k, s) in props {
        match s {
            Schema::Array(inner) => {
                items.insert(k.clone(), (**inner).clone());
            }
            _ => return None,
        }
    }
    Some((
        props.keys().cloned().collect(),
        Schema::array(Schema::Object(items)),
    ))
}
