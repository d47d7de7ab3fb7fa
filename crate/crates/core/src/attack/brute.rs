use super::{key_words, prepare, AttackError, AttackResult, BitGuess};
use crate::key::KeyBits;
use crate::netlist::Netlist;
use crate::sim::Simulator;

/// Every key under which `locked` matches `oracle` on all input patterns,
/// ascending by key value.
pub fn brute_force_keys(locked: &Netlist, oracle: &Netlist) -> Result<Vec<KeyBits>, AttackError> {
    let table = prepare(locked, oracle)?;
    let k = locked.key_inputs().len();
    let mut sim = Simulator::new(locked);
    let mut found = Vec::new();
    for key in 0..(1u64 << k) {
        let kw = key_words(key, k);
        let ok = table.batches.iter().all(|(words, mask, expect)| {
            sim.run(words, &kw);
            locked.primary_outputs().iter().zip(expect).all(|(&o, &e)| (sim.value(o) ^ e) & mask == 0)
        });
        if ok {
            found.push(KeyBits::from_u64(key, k));
        }
    }
    Ok(found)
}

/// [`brute_force_keys`] as an attack result. A bit is guessed when every
/// surviving key agrees on it; the key is recovered when exactly one
/// survives.
pub fn brute_force_attack(locked: &Netlist, oracle: &Netlist) -> Result<AttackResult, AttackError> {
    let keys = brute_force_keys(locked, oracle)?;
    let k = locked.key_inputs().len();
    let guesses = (0..k)
        .map(|i| match keys.first() {
            Some(first) if keys.iter().all(|key| key.bits()[i] == first.bits()[i]) => BitGuess::from(first.bits()[i]),
            _ => BitGuess::Unknown,
        })
        .collect();
    let mut result = AttackResult::new("brute", guesses);
    if keys.len() == 1 {
        result.recovered_key = Some(keys[0].to_hex());
    }
    result.iterations = 1u64 << k;
    result.queries = 1u64 << locked.primary_inputs().len();
    result.surviving_keys = Some(keys.len() as u64);
    Ok(result)
}
