use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{key_guesses, AttackError, AttackResult};
use crate::key::KeyBits;
use crate::netlist::Netlist;
use crate::sim::{bit_word, check_ports, PatternBatches, PatternMode, Simulator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HillOptions {
    /// Random input patterns queried from the oracle once, up front.
    pub patterns: usize,
    /// Budget of candidate-key evaluations.
    pub iterations: u64,
    pub restarts: u32,
    pub seed: u64,
}

impl Default for HillOptions {
    fn default() -> Self {
        HillOptions { patterns: 256, iterations: 10_000, restarts: 8, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct HillOutcome {
    pub result: AttackResult,
    /// Match rate after each accepted flip, one list per restart.
    pub trajectories: Vec<Vec<f64>>,
}

/// Greedy single-bit flips on the output match rate, restarting from a
/// fresh random key on every plateau.
pub fn hill_climb(locked: &Netlist, oracle: &Netlist, opts: &HillOptions) -> Result<HillOutcome, AttackError> {
    let k = locked.key_inputs().len();
    if k == 0 {
        return Err(AttackError::NoKeys);
    }
    check_ports(oracle, locked, &vec![false; k])?;
    let mode = PatternMode::Sampled { patterns: opts.patterns.max(1), seed: opts.seed };
    let mut gen = PatternBatches::new(oracle.primary_inputs().len(), mode)?;
    let mut osim = Simulator::new(oracle);
    let mut batches = Vec::new();
    let mut words = Vec::new();
    while let Some(mask) = gen.next_into(&mut words) {
        osim.run(&words, &[]);
        batches.push((words.clone(), mask, osim.outputs()));
    }
    let total_bits = (opts.patterns.max(1) * locked.primary_outputs().len()).max(1) as f64;
    let mut sim = Simulator::new(locked);
    let mut rate = |key: &[bool]| -> f64 {
        let kw: Vec<u64> = key.iter().map(|&b| bit_word(b)).collect();
        let mut wrong = 0u64;
        for (w, mask, expect) in &batches {
            sim.run(w, &kw);
            for (&o, &e) in locked.primary_outputs().iter().zip(expect) {
                wrong += u64::from(((sim.value(o) ^ e) & mask).count_ones());
            }
        }
        1.0 - wrong as f64 / total_bits
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6869_6C6C);
    let mut used = 0u64;
    let mut best: Option<(f64, KeyBits)> = None;
    let mut trajectories = Vec::new();
    let mut timed_out = false;
    'restarts: for _ in 0..=opts.restarts {
        if used >= opts.iterations {
            timed_out = true;
            break;
        }
        let mut key = KeyBits::random(k, &mut rng);
        let mut current = rate(key.bits());
        used += 1;
        let mut trajectory = vec![current];
        while current < 1.0 {
            let mut step: Option<(usize, f64)> = None;
            for i in 0..k {
                if used >= opts.iterations {
                    timed_out = true;
                    break;
                }
                key.0[i] ^= true;
                let r = rate(key.bits());
                key.0[i] ^= true;
                used += 1;
                if r > step.map_or(current, |s| s.1) {
                    step = Some((i, r));
                }
            }
            match step {
                Some((i, r)) => {
                    key.0[i] ^= true;
                    current = r;
                    trajectory.push(r);
                }
                None => break,
            }
            if timed_out {
                break;
            }
        }
        trajectories.push(trajectory);
        if best.as_ref().is_none_or(|b| current > b.0) {
            best = Some((current, key));
        }
        if current >= 1.0 || timed_out {
            break 'restarts;
        }
    }
    let (rate, key) = best.expect("at least one restart runs");
    let mut result = AttackResult::new("hill", key_guesses(&key));
    result.recovered_key = Some(key.to_hex());
    result.match_rate = Some(rate);
    result.iterations = used;
    result.queries = opts.patterns as u64;
    result.timed_out = timed_out && rate < 1.0;
    Ok(HillOutcome { result, trajectories })
}
