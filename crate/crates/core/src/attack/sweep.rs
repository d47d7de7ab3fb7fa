use std::collections::HashMap;

use serde::Serialize;

use super::{AttackError, AttackResult, BitGuess};
use crate::key::KeyBits;
use crate::netlist::Netlist;
use crate::opt::{eliminate_dead, estimate, propagate_constants, Estimate};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    /// Deciding deltas with magnitude below this give an unknown bit.
    pub threshold: f64,
    pub patterns: usize,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { threshold: 0.0, patterns: 256, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepBit {
    pub fixed_zero: Estimate,
    pub fixed_one: Estimate,
    pub guess: BitGuess,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub result: AttackResult,
    pub bits: Vec<SweepBit>,
}

/// Fixes each key bit to 0 and to 1, simplifies, and guesses the value
/// whose circuit comes out smaller. Area decides; delay and then power
/// break ties. A plain XOR key gate folds away under its correct value and
/// leaves an inverter otherwise, which is what the rule keys on.
pub fn sweep_attack(
    locked: &Netlist,
    true_key: Option<&KeyBits>,
    opts: &SweepOptions,
) -> Result<SweepOutcome, AttackError> {
    if locked.key_inputs().is_empty() {
        return Err(AttackError::NoKeys);
    }
    let mut bits = Vec::with_capacity(locked.key_inputs().len());
    for &k in locked.key_inputs() {
        let feature = |v: bool| -> Result<Estimate, AttackError> {
            let fixed = propagate_constants(locked, &HashMap::from([(k, v)]))?;
            let clean = eliminate_dead(&fixed)?;
            Ok(estimate(&clean, None, opts.patterns, opts.seed)?)
        };
        let zero = feature(false)?;
        let one = feature(true)?;
        let deltas = [
            zero.area as f64 - one.area as f64,
            f64::from(zero.delay) - f64::from(one.delay),
            zero.power - one.power,
        ];
        let guess = match deltas.iter().find(|d| **d != 0.0) {
            Some(&d) if d.abs() >= opts.threshold => BitGuess::from(d > 0.0),
            _ => BitGuess::Unknown,
        };
        bits.push(SweepBit { fixed_zero: zero, fixed_one: one, guess });
    }
    let guesses: Vec<BitGuess> = bits.iter().map(|b| b.guess).collect();
    let mut result = AttackResult::new("sweep", guesses);
    result.iterations = bits.len() as u64 * 2;
    if result.per_bit_guess.iter().all(|g| *g != BitGuess::Unknown) {
        let key: Vec<bool> = result.per_bit_guess.iter().map(|g| *g == BitGuess::One).collect();
        result.recovered_key = Some(KeyBits(key).to_hex());
    }
    if let Some(t) = true_key {
        result.score(t);
    }
    Ok(SweepOutcome { result, bits })
}
