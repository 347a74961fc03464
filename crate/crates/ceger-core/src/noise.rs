//! Seeded noise over command sequences, standing in for an imperfect
//! command generator.
//!
//! Noise perturbs commands rather than text because that is where a real
//! generator fails: dropped commands, off-by-one counts, wrong payload
//! words. Every perturbed command is still a valid command, so the noisy
//! sequence always serializes; whether it still expands cleanly is exactly
//! what the harness measures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::random_filler_except;
use crate::edits::Command;

/// Which perturbations the noisy generator may apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerturbationSet {
    pub drop_command: bool,
    pub count_off_by_one: bool,
    pub payload_word_swap: bool,
}

impl Default for PerturbationSet {
    fn default() -> Self {
        PerturbationSet {
            drop_command: true,
            count_off_by_one: true,
            payload_word_swap: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("noise rate must lie in [0, 1], got {0}")]
pub struct InvalidNoiseRate(pub f64);

/// A seeded per-command perturbation policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    seed: u64,
    rate: f64,
    perturbations: PerturbationSet,
}

impl NoiseConfig {
    pub fn new(seed: u64, rate: f64) -> Result<Self, InvalidNoiseRate> {
        if !rate.is_finite() || !(0.0..=1.0).contains(&rate) {
            return Err(InvalidNoiseRate(rate));
        }
        Ok(NoiseConfig {
            seed,
            rate,
            perturbations: PerturbationSet::default(),
        })
    }

    pub fn with_perturbations(mut self, perturbations: PerturbationSet) -> Self {
        self.perturbations = perturbations;
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Perturb each command independently with probability `rate`. The RNG
    /// derives from (seed, record index), so a fixed seed and corpus give
    /// identical payloads no matter how records are scheduled.
    pub fn perturb(&self, commands: &[Command], record_index: u64) -> Vec<Command> {
        let mut rng = derive_rng(self.seed, record_index);
        let mut out = Vec::with_capacity(commands.len());
        for command in commands {
            if rng.gen::<f64>() >= self.rate {
                out.push(command.clone());
                continue;
            }
            let mut choices: Vec<Perturbation> = Vec::with_capacity(3);
            if self.perturbations.drop_command {
                choices.push(Perturbation::Drop);
            }
            if self.perturbations.count_off_by_one && command.count().is_some() {
                choices.push(Perturbation::CountOffByOne);
            }
            if self.perturbations.payload_word_swap && command.payload().is_some() {
                choices.push(Perturbation::PayloadWordSwap);
            }
            let Some(choice) = pick(&mut rng, &choices) else {
                out.push(command.clone());
                continue;
            };
            match choice {
                Perturbation::Drop => {}
                Perturbation::CountOffByOne => out.push(bump_count(command, &mut rng)),
                Perturbation::PayloadWordSwap => out.push(swap_payload_word(command, &mut rng)),
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
enum Perturbation {
    Drop,
    CountOffByOne,
    PayloadWordSwap,
}

fn pick(rng: &mut ChaCha8Rng, choices: &[Perturbation]) -> Option<Perturbation> {
    if choices.is_empty() {
        None
    } else {
        Some(choices[rng.gen_range(0..choices.len())])
    }
}

fn bump_count(command: &Command, rng: &mut ChaCha8Rng) -> Command {
    let mut shift = |n: usize| {
        if n == 1 || rng.gen_bool(0.5) {
            n + 1
        } else {
            n - 1
        }
    };
    match command {
        Command::MoveForward(n) => Command::MoveForward(shift(*n)),
        Command::Delete(n) => Command::Delete(shift(*n)),
        Command::Replace(n, words) => Command::Replace(shift(*n), words.clone()),
        Command::Insert(_) => command.clone(),
    }
}

fn swap_payload_word(command: &Command, rng: &mut ChaCha8Rng) -> Command {
    let swap = |words: &[String], rng: &mut ChaCha8Rng| {
        let mut words = words.to_vec();
        let index = rng.gen_range(0..words.len());
        words[index] = random_filler_except(rng, &words[index]);
        words
    };
    match command {
        Command::Insert(words) => Command::Insert(swap(words, rng)),
        Command::Replace(n, words) => Command::Replace(*n, swap(words, rng)),
        _ => command.clone(),
    }
}

/// A ChaCha stream decorrelated from neighbouring indices via a
/// SplitMix64-style mix. Stable across platforms.
pub(crate) fn derive_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}
