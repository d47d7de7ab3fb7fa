use super::{key_guesses, key_words, prepare, AttackError, AttackResult};
use crate::key::KeyBits;
use crate::netlist::Netlist;
use crate::sim::Simulator;

#[derive(Clone, Debug)]
pub struct DipOutcome {
    pub result: AttackResult,
    /// Keys consistent with every oracle answer, ascending.
    pub survivors: Vec<KeyBits>,
    /// Pattern indices queried, in order.
    pub dips: Vec<u64>,
}

/// Distinguishing-input loop with enumeration in place of a solver.
///
/// Patterns are visited once, in index order. Whenever the surviving keys
/// disagree on a pattern, the oracle is queried there and inconsistent keys
/// are dropped. A pattern on which the survivors agree stays that way for
/// any subset, so one pass leaves no distinguishing input.
pub fn dip_attack(locked: &Netlist, oracle: &Netlist, max_queries: u64) -> Result<DipOutcome, AttackError> {
    let table = prepare(locked, oracle)?;
    let k = locked.key_inputs().len();
    let outs = locked.primary_outputs();
    let mut survivors: Vec<u64> = (0..(1u64 << k)).collect();
    let mut sim = Simulator::new(locked);
    let mut dips = Vec::new();
    let mut timed_out = false;
    let mut responses: Vec<Vec<u64>> = Vec::new();
    'batches: for (b, (words, mask, expect)) in table.batches.iter().enumerate() {
        responses.clear();
        for &key in &survivors {
            sim.run(words, &key_words(key, k));
            responses.push(outs.iter().map(|&o| sim.value(o)).collect());
        }
        loop {
            let first = &responses[0];
            let mut diff = 0u64;
            for r in &responses[1..] {
                for (a, b) in r.iter().zip(first) {
                    diff |= a ^ b;
                }
            }
            diff &= mask;
            if diff == 0 {
                break;
            }
            if dips.len() as u64 >= max_queries {
                timed_out = true;
                break 'batches;
            }
            let lane = diff.trailing_zeros();
            dips.push(b as u64 * 64 + u64::from(lane));
            let bit = |w: u64| (w >> lane) & 1;
            let mut keep_keys = Vec::with_capacity(survivors.len());
            let mut keep_resp = Vec::with_capacity(survivors.len());
            for (key, r) in survivors.iter().zip(responses.drain(..)) {
                if r.iter().zip(expect).all(|(&a, &e)| bit(a) == bit(e)) {
                    keep_keys.push(*key);
                    keep_resp.push(r);
                }
            }
            survivors = keep_keys;
            responses = keep_resp;
            if survivors.is_empty() {
                break 'batches;
            }
        }
    }
    let survivors: Vec<KeyBits> = survivors.into_iter().map(|s| KeyBits::from_u64(s, k)).collect();
    let recovered = survivors.first().cloned();
    let mut result = AttackResult::new("dip", recovered.as_ref().map(key_guesses).unwrap_or_default());
    result.recovered_key = recovered.as_ref().map(KeyBits::to_hex);
    result.iterations = dips.len() as u64;
    result.queries = dips.len() as u64;
    result.timed_out = timed_out;
    result.surviving_keys = Some(survivors.len() as u64);
    Ok(DipOutcome { result, survivors, dips })
}
