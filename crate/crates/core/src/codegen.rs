//! Code generation back-ends.
//!
//! The JavaScript back-end emits source text directly, without building a
//! target AST. It walks the instruction list once, keeping a stack of fresh
//! array/object variables, index variables and property keys; each value
//! thread carries the expression its value is read from and the location its
//! result is assigned to.

use thiserror::Error;

use crate::ir::{serialize_ir, well_formed, Rewrite, Sequence, WellFormednessError};
use crate::schema::GroundType;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CodegenError {
    #[error("cannot generate code for an ill-formed sequence: {0}")]
    IllFormed(#[from] WellFormednessError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedProgram {
    /// Program text without a trailing newline.
    pub source_text: String,
    pub backend: &'static str,
    pub entry_shape: &'static str,
}

/// A target language.
pub trait Backend {
    fn name(&self) -> &'static str;
    fn generate(&self, seq: &Sequence) -> Result<GeneratedProgram, CodegenError>;
}

/// Emits the textual IR itself.
#[derive(Clone, Copy, Debug, Default)]
pub struct IrBackend;

impl Backend for IrBackend {
    fn name(&self) -> &'static str {
        "ir"
    }

    fn generate(&self, seq: &Sequence) -> Result<GeneratedProgram, CodegenError> {
        well_formed(seq)?;
        let mut text = serialize_ir(seq);
        text.pop();
        Ok(GeneratedProgram {
            source_text: text,
            backend: "ir",
            entry_shape: "instruction list",
        })
    }
}

#[derive(Clone, Debug)]
pub struct JsBackend {
    input_name: String,
    output_name: String,
}

impl JsBackend {
    pub fn new(input_name: impl Into<String>, output_name: impl Into<String>) -> Self {
        JsBackend {
            input_name: input_name.into(),
            output_name: output_name.into(),
        }
    }
}

impl Default for JsBackend {
    fn default() -> Self {
        JsBackend::new("input", "output")
    }
}

impl Backend for JsBackend {
    fn name(&self) -> &'static str {
        "js"
    }

    fn generate(&self, seq: &Sequence) -> Result<GeneratedProgram, CodegenError> {
        emit(seq, &self.input_name, &self.output_name)
    }
}

/// Lowers `seq` to an anonymous unary JavaScript function.
pub fn emit(seq: &Sequence, input_name: &str, output_name: &str) -> Result<GeneratedProgram, CodegenError> {
    well_formed(seq)?;
    let mut e = Emitter::new(input_name, output_name);
    for instr in seq.instrs() {
        e.lower(instr);
    }
    Ok(GeneratedProgram {
        source_text: e.finish(),
        backend: "js",
        entry_shape: "anonymous unary function",
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NameKind {
    Arr,
    Obj,
    Idx,
}

impl NameKind {
    fn prefix(self) -> &'static str {
        match self {
            NameKind::Arr => "arr",
            NameKind::Obj => "obj",
            NameKind::Idx => "idx",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StackEntry {
    FreshVar(String),
    PropKey(String),
    IndexVar(String),
}

/// Fresh-name supply plus the variable stack.
#[derive(Clone, Debug, Default)]
pub struct EmitStack {
    pub entries: Vec<StackEntry>,
    counter: usize,
}

impl EmitStack {
    /// `<kind><n>`; the counter is shared across kinds and never reused.
    pub fn fresh_name(&mut self, kind: NameKind) -> String {
        let name = format!("{}{}", kind.prefix(), self.counter);
        self.counter += 1;
        name
    }
}

// A JavaScript expression; `atomic` ones can take `.x`, `[i]` or a unary
// operator without parentheses.
#[derive(Clone, Debug)]
struct Expr {
    text: String,
    atomic: bool,
}

impl Expr {
    fn atom(text: impl Into<String>) -> Self {
        Expr {
            text: text.into(),
            atomic: true,
        }
    }

    fn compound(text: impl Into<String>) -> Self {
        Expr {
            text: text.into(),
            atomic: false,
        }
    }

    fn operand(&self) -> String {
        if self.atomic {
            self.text.clone()
        } else {
            format!("({})", self.text)
        }
    }

    fn member(&self, name: &str) -> Expr {
        Expr::atom(format!("{}{}", self.operand(), accessor(name)))
    }

    fn index(&self, idx: &str) -> Expr {
        Expr::atom(format!("{}[{idx}]", self.operand()))
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '$')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
}

fn string_literal(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn accessor(name: &str) -> String {
    if is_identifier(name) {
        format!(".{name}")
    } else {
        format!("[{}]", string_literal(name))
    }
}

fn conversion(src: GroundType, dst: GroundType, x: &Expr) -> Expr {
    use GroundType::*;
    match (src, dst) {
        (_, Null) => Expr::atom("null"),
        (Null, Number) => Expr::atom("0"),
        (Null, String) => Expr::atom("\"\""),
        (Null, Boolean) => Expr::atom("false"),
        (Number, String) => Expr::atom(format!("String({})", x.text)),
        (Number, Boolean) => Expr::compound(format!("{} !== 0", x.operand())),
        (String, Number) => Expr::atom(format!("parseInt({})", x.text)),
        (String, Boolean) => Expr::atom(format!("Boolean({})", x.text)),
        (Boolean, Number) => Expr::atom(format!("Number({})", x.text)),
        (Boolean, String) => Expr::compound(format!("{} ? \"true\" : \"false\"", x.operand())),
        (a, b) => unreachable!("degenerate conversion {a} -> {b}"),
    }
}

// One value thread: where its value currently comes from and where it goes.
struct Thread {
    current: Expr,
    dest: String,
}

enum Scope {
    Arr { thread: Thread, var: String },
    Obj { source: Expr, var: String },
    Prop { thread: Thread },
}

struct Emitter {
    out: String,
    indent: usize,
    stack: EmitStack,
    scopes: Vec<Scope>,
    root: Thread,
}

impl Emitter {
    fn new(input: &str, output: &str) -> Self {
        let mut e = Emitter {
            out: String::new(),
            indent: 0,
            stack: EmitStack::default(),
            scopes: Vec::new(),
            root: Thread {
                current: Expr::atom(input),
                dest: output.to_string(),
            },
        };
        e.line(&format!("function({input}) {{"));
        e.indent += 1;
        e
    }

    fn line(&mut self, text: &str) {
        for _ in 0..self.indent {
            self.out.push_str("    ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn thread(&mut self) -> &mut Thread {
        for scope in self.scopes.iter_mut().rev() {
            match scope {
                Scope::Arr { thread, .. } | Scope::Prop { thread } => return thread,
                Scope::Obj { .. } => {}
            }
        }
        &mut self.root
    }

    fn assign(&mut self, dest: &str, value: &Expr) {
        self.line(&format!("{dest} = {};", value.text));
    }

    fn lower(&mut self, instr: &Rewrite) {
        match instr {
            Rewrite::Copy => {}
            Rewrite::B2B(c) => {
                let t = self.thread();
                t.current = conversion(c.src(), c.dst(), &t.current);
            }
            Rewrite::ExtractProp(name) => {
                let t = self.thread();
                t.current = t.current.member(name);
            }
            Rewrite::NestObj(name) => {
                let t = self.thread();
                t.current = Expr::compound(format!("{{{}: {}}}", string_literal(name), t.current.text));
            }
            Rewrite::PushArr => {
                let source = self.thread().current.clone();
                let var = self.stack.fresh_name(NameKind::Arr);
                let idx = self.stack.fresh_name(NameKind::Idx);
                self.line(&format!("let {var} = [];"));
                self.open_loop(&idx, &source);
                self.stack.entries.push(StackEntry::FreshVar(var.clone()));
                self.stack.entries.push(StackEntry::IndexVar(idx.clone()));
                self.scopes.push(Scope::Arr {
                    thread: Thread {
                        current: source.index(&idx),
                        dest: format!("{var}[{idx}]"),
                    },
                    var,
                });
            }
            Rewrite::PopArr => {
                let Some(Scope::Arr { thread, var }) = self.scopes.pop() else {
                    unreachable!("well-formed sequence")
                };
                self.assign(&thread.dest, &thread.current);
                self.indent -= 1;
                self.line("}");
                self.pop_entry(|e| matches!(e, StackEntry::IndexVar(_)));
                self.pop_entry(|e| matches!(e, StackEntry::FreshVar(_)));
                self.thread().current = Expr::atom(var);
            }
            Rewrite::PushObj => {
                let source = self.thread().current.clone();
                let var = self.stack.fresh_name(NameKind::Obj);
                self.line(&format!("let {var} = {{}};"));
                self.stack.entries.push(StackEntry::FreshVar(var.clone()));
                self.scopes.push(Scope::Obj { source, var });
            }
            Rewrite::PushProp(name) => {
                let Some(Scope::Obj { source, var }) = self.scopes.last() else {
                    unreachable!("well-formed sequence")
                };
                let thread = Thread {
                    current: source.member(name),
                    dest: format!("{var}{}", accessor(name)),
                };
                self.stack.entries.push(StackEntry::PropKey(name.clone()));
                self.scopes.push(Scope::Prop { thread });
            }
            Rewrite::PopProp => {
                let Some(Scope::Prop { thread }) = self.scopes.pop() else {
                    unreachable!("well-formed sequence")
                };
                self.assign(&thread.dest, &thread.current);
                self.pop_entry(|e| matches!(e, StackEntry::PropKey(_)));
            }
            Rewrite::PopObj => {
                let Some(Scope::Obj { var, .. }) = self.scopes.pop() else {
                    unreachable!("well-formed sequence")
                };
                self.pop_entry(|e| matches!(e, StackEntry::FreshVar(_)));
                self.thread().current = Expr::atom(var);
            }
            Rewrite::InvertArr(names) => {
                let source = self.thread().current.clone();
                let var = self.stack.fresh_name(NameKind::Obj);
                let idx = self.stack.fresh_name(NameKind::Idx);
                let columns: Vec<_> = names
                    .iter()
                    .map(|n| format!("{}: []", string_literal(n)))
                    .collect();
                self.line(&format!("let {var} = {{{}}};", columns.join(", ")));
                self.open_loop(&idx, &source);
                let element = source.index(&idx);
                for n in names {
                    let push = format!("{var}{}.push({});", accessor(n), element.member(n).text);
                    self.line(&push);
                }
                self.indent -= 1;
                self.line("}");
                self.thread().current = Expr::atom(var);
            }
            Rewrite::InvertObj(names) => {
                let source = self.thread().current.clone();
                let var = self.stack.fresh_name(NameKind::Arr);
                let idx = self.stack.fresh_name(NameKind::Idx);
                self.line(&format!("let {var} = [];"));
                self.open_loop(&idx, &source.member(&names[0]));
                let fields: Vec<_> = names
                    .iter()
                    .map(|n| format!("{}: {}", string_literal(n), source.member(n).index(&idx).text))
                    .collect();
                self.line(&format!("{var}[{idx}] = {{{}}};", fields.join(", ")));
                self.indent -= 1;
                self.line("}");
                self.thread().current = Expr::atom(var);
            }
        }
    }

    fn open_loop(&mut self, idx: &str, over: &Expr) {
        self.line(&format!(
            "for (let {idx} = 0; {idx} < {}.length; {idx}++) {{",
            over.operand()
        ));
        self.indent += 1;
    }

    fn pop_entry(&mut self, expect: impl Fn(&StackEntry) -> bool) {
        let entry = self.stack.entries.pop();
        debug_assert!(
            entry.as_ref().is_some_and(expect),
            "emit stack out of sync: {entry:?}"
        );
    }

    fn finish(mut self) -> String {
        debug_assert!(self.scopes.is_empty() && self.stack.entries.is_empty());
        let root = Thread {
            current: self.root.current.clone(),
            dest: self.root.dest.clone(),
        };
        self.assign(&root.dest, &root.current);
        self.line(&format!("return {};", root.dest));
        self.indent -= 1;
        self.out.push('}');
        self.out
    }
}
