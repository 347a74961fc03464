//! Shared oracles and generators for the integration suites.
//!
//! `dp_distance` is the independent dynamic-programming oracle: a plain
//! full-matrix Levenshtein recomputed from scratch, deliberately sharing no
//! code with the library's aligner so the two can disagree.

#![allow(dead_code)]

use ceger_core::TokenSeq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent unit-cost Levenshtein distance, full matrix.
pub fn dp_distance(a: &[String], b: &[String]) -> usize {
    let rows = a.len() + 1;
    let cols = b.len() + 1;
    let mut table = vec![vec![0usize; cols]; rows];
    for (i, row) in table.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in table[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..rows {
        for j in 1..cols {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            table[i][j] = (table[i - 1][j - 1] + cost)
                .min(table[i - 1][j] + 1)
                .min(table[i][j - 1] + 1);
        }
    }
    table[rows - 1][cols - 1]
}

/// Small vocabulary so repeated words are common in generated pairs.
pub const VOCAB: &[&str] = &[
    "the", "a", "cat", "dog", "ran", "sat", "on", "mat", "and", "to", "went", "store",
];

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_words(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<String> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| VOCAB[rng.gen_range(0..VOCAB.len())].to_string())
        .collect()
}

/// A (hyp, ref) pair: half the time two independent sequences (dense
/// edits), half the time a word-level mutation of the hypothesis (long
/// matched runs). Lengths range 0..=max_len.
pub fn random_pair(rng: &mut ChaCha8Rng, max_len: usize) -> (TokenSeq, TokenSeq) {
    let hyp = random_words(rng, max_len);
    let reference = if rng.gen_bool(0.5) {
        random_words(rng, max_len)
    } else {
        let mut out = Vec::with_capacity(hyp.len() + 2);
        for word in &hyp {
            match rng.gen_range(0..12u8) {
                0 => out.push(VOCAB[rng.gen_range(0..VOCAB.len())].to_string()),
                1 => {}
                2 => {
                    out.push(word.clone());
                    out.push(VOCAB[rng.gen_range(0..VOCAB.len())].to_string());
                }
                _ => out.push(word.clone()),
            }
        }
        out
    };
    (
        TokenSeq::new(hyp).expect("generated words are valid tokens"),
        TokenSeq::new(reference).expect("generated words are valid tokens"),
    )
}

/// Hand-picked adversarial pairs: empty sides, all-different words, and
/// heavy repetition.
pub fn adversarial_pairs() -> Vec<(TokenSeq, TokenSeq)> {
    let seq = |text: &str| ceger_core::tokenize(text, false);
    vec![
        (TokenSeq::empty(), TokenSeq::empty()),
        (TokenSeq::empty(), seq("a b c")),
        (seq("a b c"), TokenSeq::empty()),
        (seq("p q r s"), seq("w x y z")),
        (seq("a a a a a a"), seq("a a a")),
        (seq("a a a"), seq("a a a a a a")),
        (seq("a b a b a b"), seq("b a b a b a")),
        (seq("x"), seq("x")),
        (seq("x"), seq("y")),
    ]
}

/// Reference sentences over a wider vocabulary, for synthetic corpora.
pub fn source_sentences(rng: &mut ChaCha8Rng, count: usize) -> Vec<String> {
    (0..count)
        .map(|_| {
            let len = rng.gen_range(8..=20);
            let words: Vec<String> = (0..len)
                .map(|_| format!("word{}", rng.gen_range(0..80)))
                .collect();
            words.join(" ")
        })
        .collect()
}
