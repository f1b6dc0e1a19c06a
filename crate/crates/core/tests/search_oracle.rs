//! Cross-checks path search against brute-force enumeration of every
//! well-typed, well-formed sequence up to a length bound.

mod common;

use common::{enumerate_paths, has_trivial, subsumed, type_of};
use jsonsynth::generate::Generator;
use jsonsynth::{find_path, GroundType, Rewrite, Schema, SearchOutcome, Sequence};

use GroundType::*;

fn g(t: GroundType) -> Schema {
    Schema::Ground(t)
}

#[test]
fn deleting_b_is_the_only_object_path() {
    let src = Schema::object([("A", g(Number)), ("B", g(Number))]);
    let tgt = Schema::object([("A", g(String))]);
    let all = enumerate_paths(&src, &tgt, &["A", "B"], 6);
    assert!(!all.is_empty());

    // Nothing ever reads B: renaming B to A is not expressible.
    for seq in &all {
        assert!(
            !seq.instrs()
                .iter()
                .any(|r| matches!(r, Rewrite::ExtractProp(p) | Rewrite::PushProp(p) if p == "B")),
            "sequence reads B: {seq}"
        );
    }

    let object_shaped: Vec<&Sequence> = all
        .iter()
        .filter(|s| {
            s.instrs().first() == Some(&Rewrite::PushObj) && s.instrs().last() == Some(&Rewrite::PopObj)
        })
        .collect();
    let shortest = object_shaped[0].len();
    let minimal: Vec<_> = object_shaped.iter().filter(|s| s.len() == shortest).collect();
    assert_eq!(minimal.len(), 1);

    let expected = Sequence::new(vec![
        Rewrite::PushObj,
        Rewrite::push_prop("A"),
        Rewrite::b2b(Number, String),
        Rewrite::PopProp,
        Rewrite::PopObj,
    ]);
    assert_eq!(*minimal[0], &expected);
    assert_eq!(find_path(&src, &tgt), SearchOutcome::Found(expected));
}

#[test]
fn unwrapping_is_the_unique_short_path() {
    let src = Schema::object([("wrapped", Schema::object([("x", g(Number))]))]);
    let tgt = Schema::object([("x", g(String))]);
    let all = enumerate_paths(&src, &tgt, &["wrapped", "x"], 6);
    assert_eq!(all.len(), 1, "{all:?}");
    let expected = Sequence::new(vec![
        Rewrite::extract("wrapped"),
        Rewrite::PushObj,
        Rewrite::push_prop("x"),
        Rewrite::b2b(Number, String),
        Rewrite::PopProp,
        Rewrite::PopObj,
    ]);
    assert_eq!(all[0], expected);
    assert_eq!(find_path(&src, &tgt), SearchOutcome::Found(expected));
}

#[test]
fn array_conversion_matches_enumeration() {
    let src = Schema::array(g(String));
    let tgt = Schema::array(g(Number));
    let all = enumerate_paths(&src, &tgt, &[], 3);
    assert_eq!(all.len(), 1);
    assert_eq!(find_path(&src, &tgt), SearchOutcome::Found(all[0].clone()));
}

#[test]
fn renaming_has_no_path_at_all() {
    let src = Schema::object([("age", g(Number))]);
    let tgt = Schema::object([("name", g(String))]);
    assert!(enumerate_paths(&src, &tgt, &["age", "name"], 6).is_empty());
    assert!(matches!(find_path(&src, &tgt), SearchOutcome::NoPath(_)));
}

/// Whatever search returns must type-check against the schemas, checked by
/// the independent abstract interpreter.
#[test]
fn found_paths_type_check() {
    let mut gen = Generator::seeded(2024);
    let mut found = 0;
    for _ in 0..3000 {
        let src = gen.schema();
        let tgt = gen.mutate(&src);
        if let SearchOutcome::Found(seq) = find_path(&src, &tgt) {
            let out = type_of(&seq, &src).unwrap_or_else(|| panic!("{seq} does not type-check on {src}"));
            assert!(subsumed(&out, &tgt), "{seq}: {src} -> {out}, wanted {tgt}");
            found += 1;
        }
    }
    assert!(found > 1000, "only {found} paths found");
}

/// Short paths found by search are among the enumerated ones.
#[test]
fn short_found_paths_appear_in_enumeration() {
    let mut gen = Generator::new(
        99,
        jsonsynth::generate::GenConfig {
            max_depth: 2,
            max_fanout: 2,
            trivial_leaves: false,
            ..Default::default()
        },
    );
    let names = ["a", "b", "c", "d", "id", "name", "x y", "ünï"];
    for _ in 0..150 {
        let src = gen.schema();
        let tgt = gen.mutate(&src);
        if has_trivial(&tgt) || has_trivial(&src) {
            continue;
        }
        if let SearchOutcome::Found(seq) = find_path(&src, &tgt) {
            let copy_free: Vec<_> = seq
                .instrs()
                .iter()
                .filter(|r| **r != Rewrite::Copy)
                .cloned()
                .collect();
            if copy_free.len() <= 4 && !copy_free.is_empty() {
                let all = enumerate_paths(&src, &tgt, &names, copy_free.len());
                assert!(
                    all.contains(&Sequence::new(copy_free.clone())),
                    "{seq} missing from enumeration for {src} -> {tgt}"
                );
            }
        }
    }
}
