//! Seeded random generation of schemas, conforming values, derived target
//! schemas and well-formed rewrite sequences, for property testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ir::{well_formed, Rewrite, Sequence};
use crate::json::{JsonValue, Map};
use crate::schema::{GroundType, Properties, Schema};

const NAMES: &[&str] = &["a", "b", "c", "d", "id", "name", "x y", "ünï"];
const NUMBERS: &[f64] = &[0.0, 1.0, -1.0, 3.5, 1912.0, -0.25, 1e21, 1e-7, 0.1];
const INTEGER_STRINGS: &[&str] = &["0", "7", "-12", "42", "1912", "+3"];
const FREE_STRINGS: &[&str] = &["", "abc", "hello world", "42", "0x1f", "  -3", "true", "λ"];

#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Maximum nesting of arrays and objects in generated source schemas.
    pub max_depth: usize,
    /// Maximum number of properties per object and elements per array.
    pub max_fanout: usize,
    /// Only emit strings that `parseInt` accepts.
    pub integer_strings: bool,
    /// Allow `true` leaves in generated schemas.
    pub trivial_leaves: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 4,
            max_fanout: 4,
            integer_strings: true,
            trivial_leaves: true,
        }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

impl Generator {
    pub fn new(seed: u64, cfg: GenConfig) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
        }
    }

    pub fn seeded(seed: u64) -> Self {
        Self::new(seed, GenConfig::default())
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn name(&mut self) -> String {
        NAMES.choose(&mut self.rng).expect("nonempty").to_string()
    }

    fn names(&mut self, min: usize) -> Vec<String> {
        let n = self.rng.gen_range(min..=self.cfg.max_fanout.max(min));
        let mut pool: Vec<&str> = NAMES.to_vec();
        pool.shuffle(&mut self.rng);
        pool.into_iter().take(n).map(str::to_owned).collect()
    }

    pub fn ground(&mut self) -> GroundType {
        *GroundType::ALL.choose(&mut self.rng).expect("nonempty")
    }

    /// A schema of nesting depth at most `max_depth`.
    pub fn schema(&mut self) -> Schema {
        let depth = self.cfg.max_depth;
        self.schema_at(depth)
    }

    fn schema_at(&mut self, depth: usize) -> Schema {
        let roll = self.rng.gen_range(0..100);
        if depth == 0 || roll < 35 {
            if self.cfg.trivial_leaves && roll < 3 {
                return Schema::Trivial(true);
            }
            return Schema::Ground(self.ground());
        }
        if roll < 60 {
            Schema::array(self.schema_at(depth - 1))
        } else {
            let names = self.names(0);
            Schema::Object(
                names
                    .into_iter()
                    .map(|n| (n, self.schema_at(depth - 1)))
                    .collect(),
            )
        }
    }

    /// A value conforming to `schema`, or `None` if the schema is empty.
    /// Sibling arrays in an object share a length, so objects of arrays can
    /// always be inverted.
    pub fn value(&mut self, schema: &Schema) -> Option<JsonValue> {
        self.value_with_len(schema, None)
    }

    fn value_with_len(&mut self, schema: &Schema, len: Option<usize>) -> Option<JsonValue> {
        Some(match schema {
            Schema::Trivial(false) => return None,
            Schema::Trivial(true) => self.any_value(2),
            Schema::Ground(g) => self.ground_value(*g),
            Schema::Array(items) => {
                let n = len.unwrap_or_else(|| self.rng.gen_range(0..=self.cfg.max_fanout));
                if n > 0 && matches!(**items, Schema::Trivial(false)) {
                    return Some(JsonValue::Arr(Vec::new()));
                }
                JsonValue::Arr((0..n).map(|_| self.value(items)).collect::<Option<_>>()?)
            }
            Schema::Object(props) => {
                let shared = self.rng.gen_range(0..=self.cfg.max_fanout);
                let mut out = Map::with_capacity(props.len());
                for (name, sub) in props {
                    out.insert(name.clone(), self.value_with_len(sub, Some(shared))?);
                }
                JsonValue::Obj(out)
            }
        })
    }

    pub fn ground_value(&mut self, g: GroundType) -> JsonValue {
        match g {
            GroundType::Null => JsonValue::Null,
            GroundType::Boolean => JsonValue::Bool(self.rng.gen()),
            GroundType::Number => {
                if self.rng.gen_bool(0.5) {
                    JsonValue::Num(*NUMBERS.choose(&mut self.rng).expect("nonempty"))
                } else {
                    JsonValue::Num(self.rng.gen_range(-1000..=1000) as f64)
                }
            }
            GroundType::String => {
                let pool = if self.cfg.integer_strings {
                    INTEGER_STRINGS
                } else {
                    FREE_STRINGS
                };
                JsonValue::str(*pool.choose(&mut self.rng).expect("nonempty"))
            }
        }
    }

    fn any_value(&mut self, depth: usize) -> JsonValue {
        match self.rng.gen_range(0..if depth == 0 { 4 } else { 6 }) {
            0 => JsonValue::Null,
            1 => self.ground_value(GroundType::Boolean),
            2 => self.ground_value(GroundType::Number),
            3 => self.ground_value(GroundType::String),
            4 => JsonValue::Arr(
                (0..self.rng.gen_range(0..3))
                    .map(|_| self.any_value(depth - 1))
                    .collect(),
            ),
            _ => {
                let names = self.names(0);
                JsonValue::Obj(
                    names
                        .into_iter()
                        .map(|n| (n, self.any_value(depth - 1)))
                        .collect(),
                )
            }
        }
    }

    /// A target schema derived from `src` by local edits: retyping ground
    /// leaves, dropping properties, extracting, nesting, inverting, or
    /// replacing a subtree outright. Most results are reachable from `src`.
    pub fn mutate(&mut self, src: &Schema) -> Schema {
        self.mutate_at(src, 3)
    }

    fn mutate_at(&mut self, src: &Schema, budget: usize) -> Schema {
        let roll = self.rng.gen_range(0..100);
        if budget == 0 || roll < 15 {
            return src.clone();
        }
        match roll {
            15..=19 => return Schema::Trivial(true),
            20..=23 => return self.schema_at(2),
            24..=33 => {
                let name = self.name();
                return Schema::object([(name, self.mutate_at(src, budget - 1))]);
            }
            _ => {}
        }
        match src {
            Schema::Trivial(_) => src.clone(),
            Schema::Ground(_) => Schema::Ground(self.ground()),
            Schema::Array(items) => {
                if let (Schema::Object(props), true) = (&**items, roll < 55) {
                    if !props.is_empty() {
                        return Schema::Object(
                            props
                                .iter()
                                .map(|(k, s)| (k.clone(), Schema::array(self.mutate_at(s, budget - 1))))
                                .collect(),
                        );
                    }
                }
                Schema::array(self.mutate_at(items, budget - 1))
            }
            Schema::Object(props) => {
                if props.is_empty() {
                    return src.clone();
                }
                if roll < 50 {
                    let (_, sub) = props
                        .get_index(self.rng.gen_range(0..props.len()))
                        .expect("in range");
                    return self.mutate_at(sub, budget - 1);
                }
                if roll < 58 && props.values().all(|s| matches!(s, Schema::Array(_))) {
                    let items: Properties = props
                        .iter()
                        .map(|(k, s)| match s {
                            Schema::Array(inner) => (k.clone(), (**inner).clone()),
                            _ => unreachable!(),
                        })
                        .collect();
                    return Schema::array(self.mutate_at(&Schema::Object(items), budget - 1));
                }
                let mut out = Properties::new();
                for (k, s) in props {
                    match self.rng.gen_range(0..10) {
                        0..=1 => {}
                        2..=5 => {
                            out.insert(k.clone(), s.clone());
                        }
                        _ => {
                            out.insert(k.clone(), self.mutate_at(s, budget - 1));
                        }
                    }
                }
                if self.rng.gen_range(0..10) == 0 {
                    let extra = self.name();
                    out.entry(extra)
                        .or_insert_with(|| Schema::Ground(GroundType::Null));
                }
                Schema::Object(out)
            }
        }
    }

    /// A random well-formed sequence.
    pub fn sequence(&mut self) -> Sequence {
        loop {
            let mut instrs = Vec::new();
            self.body(&mut instrs, 3);
            let seq = Sequence(instrs);
            if well_formed(&seq).is_ok() {
                return seq;
            }
        }
    }

    fn body(&mut self, out: &mut Vec<Rewrite>, depth: usize) {
        for _ in 0..self.rng.gen_range(0..=3) {
            self.rewrite(out, depth);
        }
    }

    fn rewrite(&mut self, out: &mut Vec<Rewrite>, depth: usize) {
        let choices = if depth == 0 { 6 } else { 8 };
        match self.rng.gen_range(0..choices) {
            0 => loop {
                let (a, b) = (self.ground(), self.ground());
                if a != b {
                    out.push(Rewrite::b2b(a, b));
                    break;
                }
            },
            1 => out.push(Rewrite::Copy),
            2 => out.push(Rewrite::ExtractProp(self.name())),
            3 => out.push(Rewrite::NestObj(self.name())),
            4 => out.push(Rewrite::InvertArr(self.names(1))),
            5 => out.push(Rewrite::InvertObj(self.names(1))),
            6 => {
                out.push(Rewrite::PushArr);
                self.body(out, depth - 1);
                out.push(Rewrite::PopArr);
            }
            _ => {
                out.push(Rewrite::PushObj);
                for name in self.names(0) {
                    out.push(Rewrite::PushProp(name));
                    self.body(out, depth - 1);
                    out.push(Rewrite::PopProp);
                }
                out.push(Rewrite::PopObj);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::validate;

    #[test]
    fn generated_values_conform() {
        let mut g = Generator::seeded(7);
        let mut checked = 0;
        for _ in 0..2000 {
            let s = g.schema();
            assert!(s.depth() <= 4);
            if let Some(v) = g.value(&s) {
                assert!(validate(&v, &s), "{v} !~ {s}");
                checked += 1;
            }
        }
        assert!(checked > 1900);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a: Vec<_> = (0..20).map(|_| Generator::seeded(3).schema()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn sequences_are_well_formed() {
        let mut g = Generator::seeded(11);
        for _ in 0..500 {
            assert_eq!(well_formed(&g.sequence()), Ok(()));
        }
    }
}
