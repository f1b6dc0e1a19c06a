#![allow(dead_code)]

//! Test-only oracles, kept independent of the search and interpreter code.

use jsonsynth::schema::Properties;
use jsonsynth::{well_formed, GroundType, Rewrite, Schema, Sequence};

pub const RESEARCHER_SCHEMA: &str = r#"{
    "type": "object",
    "properties": {
        "name": { "type": "string" },
        "birth_year": { "type": "number" },
        "paper_titles": { "type": "array", "items": { "type": "string" } }
    }
}"#;

pub const RESEARCHER: &str = r#"{
   "name": "Alan Turing",
   "birth_year": 1912,
   "paper_titles": [
      "Computing Machinery and Intelligence",
      "On Computable Numbers",
      "Computability and λ-Definability"
   ]
}"#;

pub const PUSH_ARR_GOLDEN: &str = "\
function(input) {
    let arr0 = [];
    for (let idx1 = 0; idx1 < input.length; idx1++) {
        arr0[idx1] = parseInt(input[idx1]);
    }
    output = arr0;
    return output;
}";

#[derive(Clone, Debug)]
enum Frame {
    Arr,
    Obj { src: Properties, out: Properties },
    Prop { name: String },
}

/// Schema-level execution state: what the current value is known to
/// conform to, plus open brackets. `current` is `None` directly inside an
/// object bracket, where only property blocks may appear.
#[derive(Clone, Debug)]
pub struct TypeState {
    current: Option<Schema>,
    frames: Vec<Frame>,
}

impl TypeState {
    pub fn new(src: &Schema) -> Self {
        TypeState {
            current: Some(src.clone()),
            frames: Vec::new(),
        }
    }

    /// Result schema once every bracket is closed.
    pub fn finished(&self) -> Option<&Schema> {
        if self.frames.is_empty() {
            self.current.as_ref()
        } else {
            None
        }
    }

    /// Abstractly executes one instruction; `None` if it cannot apply.
    pub fn step(&self, instr: &Rewrite) -> Option<TypeState> {
        let mut st = self.clone();
        let in_obj = matches!(st.frames.last(), Some(Frame::Obj { .. }));
        match instr {
            Rewrite::PushProp(name) => {
                let Some(Frame::Obj { src, out }) = st.frames.last() else {
                    return None;
                };
                if out.contains_key(name) {
                    return None;
                }
                st.current = Some(src.get(name)?.clone());
                st.frames.push(Frame::Prop { name: name.clone() });
                return Some(st);
            }
            Rewrite::PopObj => {
                let Some(Frame::Obj { out, .. }) = st.frames.pop() else {
                    return None;
                };
                st.current = Some(Schema::Object(out));
                return Some(st);
            }
            _ if in_obj => return None,
            _ => {}
        }
        let cur = st.current.take()?;
        st.current = match instr {
            Rewrite::Copy => Some(cur),
            Rewrite::B2B(c) => match cur {
                Schema::Ground(g) if g == c.src() => Some(Schema::Ground(c.dst())),
                _ => None,
            },
            Rewrite::PushArr => match cur {
                Schema::Array(items) => {
                    st.frames.push(Frame::Arr);
                    Some(*items)
                }
                _ => None,
            },
            Rewrite::PopArr => match st.frames.pop()? {
                Frame::Arr => Some(Schema::array(cur)),
                _ => None,
            },
            Rewrite::PushObj => match cur {
                Schema::Object(src) => {
                    st.frames.push(Frame::Obj {
                        src,
                        out: Properties::new(),
                    });
                    None
                }
                _ => return None,
            },
            Rewrite::PopProp => match st.frames.pop()? {
                Frame::Prop { name } => {
                    let Some(Frame::Obj { out, .. }) = st.frames.last_mut() else {
                        return None;
                    };
                    out.insert(name, cur);
                    None
                }
                _ => return None,
            },
            Rewrite::ExtractProp(p) => match cur {
                Schema::Object(mut props) => Some(props.swap_remove(p)?),
                _ => None,
            },
            Rewrite::NestObj(p) => Some(Schema::object([(p.clone(), cur)])),
            Rewrite::InvertArr(names) => match cur {
                Schema::Array(items) => match *items {
                    Schema::Object(props) if same_names(&props, names) => Some(Schema::Object(
                        names
                            .iter()
                            .map(|n| (n.clone(), Schema::array(props[n.as_str()].clone())))
                            .collect(),
                    )),
                    _ => None,
                },
                _ => None,
            },
            Rewrite::InvertObj(names) => match cur {
                Schema::Object(props) if same_names(&props, names) => {
                    let mut items = Properties::new();
                    for n in names {
                        match &props[n.as_str()] {
                            Schema::Array(inner) => {
                                items.insert(n.clone(), (**inner).clone());
                            }
                            _ => return None,
                        }
                    }
                    Some(Schema::array(Schema::Object(items)))
                }
                _ => None,
            },
            Rewrite::PushProp(_) | Rewrite::PopObj => unreachable!(),
        };
        if st.current.is_none() && !matches!(instr, Rewrite::PushObj | Rewrite::PopProp) {
            return None;
        }
        Some(st)
    }
}

fn same_names(props: &Properties, names: &[String]) -> bool {
    props.len() == names.len() && names.iter().all(|n| props.contains_key(n))
}

/// Schema a sequence maps `src` to, if it type-checks.
pub fn type_of(seq: &Sequence, src: &Schema) -> Option<Schema> {
    let mut st = TypeState::new(src);
    for instr in seq.instrs() {
        st = st.step(instr)?;
    }
    st.finished().cloned()
}

/// `a` describes a subset of the values `b` accepts (structurally).
pub fn subsumed(a: &Schema, b: &Schema) -> bool {
    match (a, b) {
        (_, Schema::Trivial(true)) => true,
        (Schema::Trivial(false), _) => true,
        (Schema::Ground(x), Schema::Ground(y)) => x == y,
        (Schema::Array(x), Schema::Array(y)) => subsumed(x, y),
        (Schema::Object(x), Schema::Object(y)) => {
            x.len() == y.len() && x.iter().all(|(k, s)| y.get(k).is_some_and(|t| subsumed(s, t)))
        }
        _ => false,
    }
}

/// Any boolean schema anywhere in the tree.
pub fn has_trivial(s: &Schema) -> bool {
    match s {
        Schema::Trivial(_) => true,
        Schema::Ground(_) => false,
        Schema::Array(items) => has_trivial(items),
        Schema::Object(props) => props.values().any(has_trivial),
    }
}

fn candidates(st: &TypeState, names: &[String]) -> Vec<Rewrite> {
    let mut out = Vec::new();
    for a in GroundType::ALL {
        for b in GroundType::ALL {
            if a != b {
                out.push(Rewrite::b2b(a, b));
            }
        }
    }
    out.extend([
        Rewrite::PushArr,
        Rewrite::PopArr,
        Rewrite::PushObj,
        Rewrite::PopObj,
        Rewrite::PopProp,
    ]);
    for n in names {
        out.push(Rewrite::PushProp(n.clone()));
        out.push(Rewrite::ExtractProp(n.clone()));
        out.push(Rewrite::NestObj(n.clone()));
    }
    match &st.current {
        Some(Schema::Array(items)) => {
            if let Schema::Object(p) = &**items {
                if !p.is_empty() {
                    out.push(Rewrite::InvertArr(p.keys().cloned().collect()));
                }
            }
        }
        Some(Schema::Object(p)) if !p.is_empty() => {
            out.push(Rewrite::InvertObj(p.keys().cloned().collect()));
        }
        _ => {}
    }
    out
}

/// Every Copy-free, well-formed sequence of at most `max_len` instructions
/// that maps `src` exactly onto `tgt`, in length-then-lexical order.
/// Copy is the identity, so leaving it out loses no behaviour.
pub fn enumerate_paths(src: &Schema, tgt: &Schema, names: &[&str], max_len: usize) -> Vec<Sequence> {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let mut found = Vec::new();
    let mut prefix = Vec::new();
    dfs(
        &TypeState::new(src),
        tgt,
        &names,
        max_len,
        &mut prefix,
        &mut found,
    );
    found.sort_by_key(|s: &Sequence| s.len());
    found
}

fn dfs(
    st: &TypeState,
    tgt: &Schema,
    names: &[String],
    budget: usize,
    prefix: &mut Vec<Rewrite>,
    found: &mut Vec<Sequence>,
) {
    if st.finished() == Some(tgt) && !prefix.is_empty() {
        let seq = Sequence::new(prefix.clone());
        if well_formed(&seq).is_ok() {
            found.push(seq);
        }
    }
    if budget == 0 {
        return;
    }
    for instr in candidates(st, names) {
        if let Some(next) = st.step(&instr) {
            prefix.push(instr);
            dfs(&next, tgt, names, budget - 1, prefix, found);
            prefix.pop();
        }
    }
}
