//! Key-recovery attacks sized for small circuits.

mod brute;
mod dip;
mod hill;
mod sweep;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use brute::{brute_force_attack, brute_force_keys};
pub use dip::{dip_attack, DipOutcome};
pub use hill::{hill_climb, HillOptions, HillOutcome};
pub use sweep::{sweep_attack, SweepBit, SweepOptions, SweepOutcome};

use crate::key::KeyBits;
use crate::netlist::Netlist;
use crate::opt::OptError;
use crate::sim::{check_ports, PatternBatches, PatternMode, SimError, Simulator};

pub const MAX_ATTACK_KEY_BITS: usize = 20;
pub const MAX_ATTACK_INPUTS: usize = 16;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("{got} key bits exceed the attack limit of {max}")]
    TooManyKeyBits { got: usize, max: usize },
    #[error("{got} primary inputs exceed the attack limit of {max}")]
    TooManyInputs { got: usize, max: usize },
    #[error("locked netlist has no key inputs")]
    NoKeys,
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Opt(#[from] OptError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitGuess {
    Zero,
    One,
    Unknown,
}

impl Serialize for BitGuess {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            BitGuess::Zero => "0",
            BitGuess::One => "1",
            BitGuess::Unknown => "x",
        })
    }
}

impl From<bool> for BitGuess {
    fn from(b: bool) -> Self {
        if b {
            BitGuess::One
        } else {
            BitGuess::Zero
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackResult {
    pub schema_version: u32,
    pub attack: &'static str,
    pub recovered_key: Option<String>,
    pub per_bit_guess: Vec<BitGuess>,
    /// Over guessed bits only; `None` without a true key or without guesses.
    pub accuracy: Option<f64>,
    /// Unknown bits counted as wrong.
    pub accuracy_with_unknown: Option<f64>,
    pub iterations: u64,
    pub queries: u64,
    pub timed_out: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surviving_keys: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub match_rate: Option<f64>,
    /// Filled in by callers that ask for timing; never set by the attacks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl AttackResult {
    pub(crate) fn new(attack: &'static str, guesses: Vec<BitGuess>) -> Self {
        AttackResult {
            schema_version: crate::SCHEMA_VERSION,
            attack,
            recovered_key: None,
            per_bit_guess: guesses,
            accuracy: None,
            accuracy_with_unknown: None,
            iterations: 0,
            queries: 0,
            timed_out: false,
            surviving_keys: None,
            match_rate: None,
            wall_time_ms: None,
        }
    }

    /// Sets both accuracies against `truth`.
    pub fn score(&mut self, truth: &KeyBits) {
        let mut guessed = 0usize;
        let mut right = 0usize;
        for (g, &t) in self.per_bit_guess.iter().zip(truth.bits()) {
            if *g != BitGuess::Unknown {
                guessed += 1;
                if *g == BitGuess::from(t) {
                    right += 1;
                }
            }
        }
        let total = truth.len().max(1);
        self.accuracy = (guessed > 0).then(|| 100.0 * right as f64 / guessed as f64);
        self.accuracy_with_unknown = Some(100.0 * right as f64 / total as f64);
    }
}

fn key_guesses(key: &KeyBits) -> Vec<BitGuess> {
    key.bits().iter().map(|&b| BitGuess::from(b)).collect()
}

/// Size limits shared by the enumerative attacks.
fn check_limits(locked: &Netlist) -> Result<(), AttackError> {
    let k = locked.key_inputs().len();
    if k == 0 {
        return Err(AttackError::NoKeys);
    }
    if k > MAX_ATTACK_KEY_BITS {
        return Err(AttackError::TooManyKeyBits { got: k, max: MAX_ATTACK_KEY_BITS });
    }
    let n = locked.primary_inputs().len();
    if n > MAX_ATTACK_INPUTS {
        return Err(AttackError::TooManyInputs { got: n, max: MAX_ATTACK_INPUTS });
    }
    Ok(())
}

/// Every input pattern with the oracle's response, one 64-lane batch each.
struct OracleTable {
    batches: Vec<(Vec<u64>, u64, Vec<u64>)>,
}

impl OracleTable {
    fn exhaustive(oracle: &Netlist) -> Result<Self, AttackError> {
        let mut gen = PatternBatches::new(oracle.primary_inputs().len(), PatternMode::Exhaustive)?;
        let mut sim = Simulator::new(oracle);
        let mut batches = Vec::new();
        let mut words = Vec::new();
        while let Some(mask) = gen.next_into(&mut words) {
            sim.run(&words, &[]);
            batches.push((words.clone(), mask, sim.outputs()));
        }
        Ok(OracleTable { batches })
    }
}

/// Checks ports and limits, then tabulates the oracle.
fn prepare(locked: &Netlist, oracle: &Netlist) -> Result<OracleTable, AttackError> {
    check_limits(locked)?;
    check_ports(oracle, locked, &vec![false; locked.key_inputs().len()])?;
    OracleTable::exhaustive(oracle)
}

fn key_words(key: u64, k: usize) -> Vec<u64> {
    (0..k).map(|i| crate::sim::bit_word((key >> i) & 1 == 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoring() {
        let mut r = AttackResult::new("t", vec![BitGuess::One, BitGuess::Unknown, BitGuess::Zero, BitGuess::Zero]);
        r.score(&KeyBits(vec![true, true, true, false]));
        assert_eq!(r.accuracy, Some(200.0 / 3.0));
        assert_eq!(r.accuracy_with_unknown, Some(50.0));
    }
}
