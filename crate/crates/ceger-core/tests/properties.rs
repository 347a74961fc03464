//! Cross-module properties that only make sense over the full stack:
//! everything here routes payloads through their serialized string form.

mod common;

use ceger_core::{
    align, compile, compile_representation, expand_representation, parse, serialize, ExpandMode,
    Method, NoiseConfig,
};
use common::{random_pair, seeded_rng};
use rand::Rng;

/// Exact methods stay exact when the payload travels as a string.
#[test]
fn exact_methods_round_trip_through_the_wire_format() {
    let mut rng = seeded_rng(0x717E);
    for _ in 0..2_000 {
        let (hyp, reference) = random_pair(&mut rng, 30);
        let alignment = align(&hyp, &reference);
        for method in [Method::Ceger, Method::FullRewrite, Method::Span] {
            let rep = compile_representation(method, &alignment);
            let out = expand_representation(method, &hyp, &rep.payload, ExpandMode::Strict)
                .unwrap_or_else(|err| {
                    panic!("{method} failed on payload {:?}: {err}", rep.payload)
                });
            assert_eq!(out, reference, "{method} diverged via {:?}", rep.payload);
        }
    }
}

/// With zero edited regions the command payload is never longer than the
/// full rewrite. (The one-word identity pair is the lone exception:
/// "[MOVE_FORWARD 1]" splits into two whitespace tokens against a one-token
/// rewrite, so lengths start at 2.)
#[test]
fn identity_pairs_favour_the_command_payload() {
    let mut rng = seeded_rng(0x1DE0);
    for _ in 0..500 {
        let len = rng.gen_range(2..=40);
        let words: Vec<String> = (0..len).map(|i| format!("w{}", i % 7)).collect();
        let text = ceger_core::TokenSeq::new(words).unwrap();
        let alignment = align(&text, &text);
        let ceger = compile_representation(Method::Ceger, &alignment);
        let full = compile_representation(Method::FullRewrite, &alignment);
        assert!(ceger.token_count <= full.token_count);
        assert_eq!(ceger.token_count, 2);
    }
}

/// Noisy command sequences remain valid commands: they always serialize to
/// a string the strict parser accepts.
#[test]
fn noisy_sequences_always_reparse() {
    let mut rng = seeded_rng(0x0153);
    for record_index in 0..2_000u64 {
        let (hyp, reference) = random_pair(&mut rng, 25);
        let commands = compile(&align(&hyp, &reference));
        let rate = rng.gen_range(0.0..=1.0);
        let noise = NoiseConfig::new(rng.gen(), rate).unwrap();
        let noisy = noise.perturb(&commands, record_index);
        for command in &noisy {
            assert!(command.validate().is_ok(), "noise produced {command:?}");
        }
        let wire = serialize(&noisy);
        let reparsed = parse(&wire)
            .unwrap_or_else(|err| panic!("noisy payload failed to reparse: {err}\n{wire}"));
        assert_eq!(reparsed, noisy);
    }
}

/// Every expander is total over arbitrary payload text: stored corpus
/// files pass through them unvalidated, so hostile payloads must come back
/// as structured errors, never a panic or an out-of-range slice.
#[test]
fn baseline_expanders_are_total_on_arbitrary_payloads() {
    let mut rng = seeded_rng(0xBAD5EED);
    let pieces = [
        "[", "]", "'", "\\", " ", "SPAN", "PAIR", "AT", "PUT", "SUB", "->", "0", "1", "7", "99",
        "word", "''", "\t",
    ];
    for i in 0..20_000u32 {
        let (hyp, _) = random_pair(&mut rng, 10);
        let payload: String = if i % 2 == 0 {
            let len = rng.gen_range(0..20);
            (0..len)
                .map(|_| pieces[rng.gen_range(0..pieces.len())])
                .collect()
        } else {
            let len = rng.gen_range(0..60);
            let bytes: Vec<u8> = (0..len).map(|_| rng.gen::<u8>()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        };
        for method in Method::ALL {
            let _ = expand_representation(method, &hyp, &payload, ExpandMode::Lenient);
        }
    }
}

/// Serialization is injective: distinct command lists never share a wire
/// form (a direct consequence of the parse round-trip, checked head-on).
#[test]
fn serialization_is_injective_on_samples() {
    use std::collections::HashMap;

    let mut rng = seeded_rng(0x1A7E);
    let mut seen: HashMap<String, Vec<ceger_core::Command>> = HashMap::new();
    for _ in 0..4_000 {
        let (hyp, reference) = random_pair(&mut rng, 12);
        let commands = compile(&align(&hyp, &reference));
        let wire = serialize(&commands);
        if let Some(previous) = seen.insert(wire.clone(), commands.clone()) {
            assert_eq!(previous, commands, "two command lists share {wire:?}");
        }
    }
}
