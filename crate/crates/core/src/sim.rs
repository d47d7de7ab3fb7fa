//! Bit-parallel logic simulation and equivalence measurement.
//!
//! Patterns are packed 64 per machine word; lane `j` of a batch is one input
//! pattern. Results only depend on the pattern set, never on the packing.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{Driver, NetId, Netlist};

/// Above this many primary inputs only sampling is allowed.
pub const EXHAUSTIVE_INPUT_LIMIT: usize = 20;
pub const DEFAULT_SAMPLED_PATTERNS: usize = 1_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("{what}: expected {expected} bits, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("port mismatch: {0}")]
    PortMismatch(String),
    #[error("exhaustive simulation over {0} inputs exceeds the {EXHAUSTIVE_INPUT_LIMIT}-input limit")]
    ExhaustiveTooLarge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub pi_bits: Vec<bool>,
    pub key_bits: Vec<bool>,
}

impl Assignment {
    pub fn new(pi_bits: Vec<bool>, key_bits: Vec<bool>) -> Self {
        Assignment { pi_bits, key_bits }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum PatternMode {
    Exhaustive,
    Sampled { patterns: usize, seed: u64 },
}

#[inline]
pub fn bit_word(b: bool) -> u64 {
    if b {
        !0
    } else {
        0
    }
}

/// Reusable simulation buffer for one netlist.
pub struct Simulator<'a> {
    netlist: &'a Netlist,
    values: Vec<u64>,
    scratch: Vec<u64>,
}

impl<'a> Simulator<'a> {
    pub fn new(netlist: &'a Netlist) -> Self {
        Simulator { netlist, values: vec![0; netlist.net_count()], scratch: Vec::new() }
    }

    pub fn netlist(&self) -> &'a Netlist {
        self.netlist
    }

    /// Evaluates one 64-pattern batch. Slices must match the port counts.
    pub fn run(&mut self, pi_words: &[u64], key_words: &[u64]) -> &[u64] {
        let n = self.netlist;
        debug_assert_eq!(pi_words.len(), n.primary_inputs().len());
        debug_assert_eq!(key_words.len(), n.key_inputs().len());
        for (&net, &w) in n.primary_inputs().iter().zip(pi_words) {
            self.values[net.index()] = w;
        }
        for (&net, &w) in n.key_inputs().iter().zip(key_words) {
            self.values[net.index()] = w;
        }
        for &g in n.eval_order() {
            let gate = n.gate(g);
            self.scratch.clear();
            self.scratch.extend(gate.inputs.iter().map(|i| self.values[i.index()]));
            self.values[gate.output.index()] = gate.kind.eval_word(self.scratch.iter().copied());
        }
        &self.values
    }

    pub fn value(&self, net: NetId) -> u64 {
        self.values[net.index()]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn outputs(&self) -> Vec<u64> {
        self.netlist.primary_outputs().iter().map(|o| self.values[o.index()]).collect()
    }
}

/// Single-pattern simulation; returns one bit per primary output.
pub fn simulate(netlist: &Netlist, assignment: &Assignment) -> Result<Vec<bool>, SimError> {
    check_len("primary inputs", netlist.primary_inputs().len(), assignment.pi_bits.len())?;
    check_len("key inputs", netlist.key_inputs().len(), assignment.key_bits.len())?;
    let pi: Vec<u64> = assignment.pi_bits.iter().map(|&b| bit_word(b)).collect();
    let key: Vec<u64> = assignment.key_bits.iter().map(|&b| bit_word(b)).collect();
    let mut sim = Simulator::new(netlist);
    sim.run(&pi, &key);
    Ok(sim.outputs().into_iter().map(|w| w & 1 == 1).collect())
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<(), SimError> {
    if expected == got {
        Ok(())
    } else {
        Err(SimError::LengthMismatch { what, expected, got })
    }
}

/// Word for input `i` of exhaustive batch `batch`: lane j carries pattern
/// `batch * 64 + j`, and input `i` is bit `i` of the pattern index.
#[inline]
pub fn exhaustive_word(i: usize, batch: u64) -> u64 {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if i < 6 {
        LOW[i]
    } else {
        bit_word((batch >> (i - 6)) & 1 == 1)
    }
}

#[inline]
pub fn lane_mask(lanes: u64) -> u64 {
    if lanes >= 64 {
        !0
    } else {
        (1u64 << lanes) - 1
    }
}

/// Deterministic stream of input batches.
pub struct PatternBatches {
    inputs: usize,
    remaining: u64,
    batch: u64,
    rng: Option<ChaCha8Rng>,
}

impl PatternBatches {
    pub fn new(inputs: usize, mode: PatternMode) -> Result<Self, SimError> {
        match mode {
            PatternMode::Exhaustive => {
                if inputs > EXHAUSTIVE_INPUT_LIMIT {
                    return Err(SimError::ExhaustiveTooLarge(inputs));
                }
                Ok(PatternBatches { inputs, remaining: 1u64 << inputs, batch: 0, rng: None })
            }
            PatternMode::Sampled { patterns, seed } => Ok(PatternBatches {
                inputs,
                remaining: patterns as u64,
                batch: 0,
                rng: Some(ChaCha8Rng::seed_from_u64(seed)),
            }),
        }
    }

    pub fn total(inputs: usize, mode: PatternMode) -> u64 {
        match mode {
            PatternMode::Exhaustive => 1u64 << inputs.min(63),
            PatternMode::Sampled { patterns, .. } => patterns as u64,
        }
    }

    /// Fills `words` (one per input) and returns the valid-lane mask.
    pub fn next_into(&mut self, words: &mut Vec<u64>) -> Option<u64> {
        if self.remaining == 0 {
            return None;
        }
        words.clear();
        match &mut self.rng {
            None => words.extend((0..self.inputs).map(|i| exhaustive_word(i, self.batch))),
            Some(rng) => words.extend((0..self.inputs).map(|_| rng.gen::<u64>())),
        }
        let lanes = self.remaining.min(64);
        self.remaining -= lanes;
        self.batch += 1;
        Some(lane_mask(lanes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivReport {
    pub patterns_applied: u64,
    pub mismatched_patterns: u64,
    /// Output Hamming distance -> number of patterns at that distance.
    pub hamming_histogram: BTreeMap<usize, u64>,
    pub exhaustive: bool,
}

impl EquivReport {
    pub fn equivalent(&self) -> bool {
        self.mismatched_patterns == 0
    }
}

pub(crate) fn check_ports(golden: &Netlist, dut: &Netlist, key: &[bool]) -> Result<(), SimError> {
    if !golden.key_inputs().is_empty() {
        return Err(SimError::PortMismatch("golden netlist has key inputs".into()));
    }
    if golden.primary_inputs().len() != dut.primary_inputs().len() {
        return Err(SimError::PortMismatch(format!(
            "{} vs {} primary inputs",
            golden.primary_inputs().len(),
            dut.primary_inputs().len()
        )));
    }
    for (&g, &d) in golden.primary_inputs().iter().zip(dut.primary_inputs()) {
        if golden.net_name(g) != dut.net_name(d) {
            return Err(SimError::PortMismatch(format!(
                "primary input `{}` vs `{}`",
                golden.net_name(g),
                dut.net_name(d)
            )));
        }
    }
    if golden.primary_outputs().len() != dut.primary_outputs().len() {
        return Err(SimError::PortMismatch(format!(
            "{} vs {} primary outputs",
            golden.primary_outputs().len(),
            dut.primary_outputs().len()
        )));
    }
    check_len("key", dut.key_inputs().len(), key.len())
}

/// Calls `visit(distance)` once per applied pattern, where `distance` is the
/// output Hamming distance between `golden` and `dut` under `key`.
pub fn for_each_distance(
    golden: &Netlist,
    dut: &Netlist,
    key: &[bool],
    mode: PatternMode,
    mut visit: impl FnMut(u32),
) -> Result<u64, SimError> {
    check_ports(golden, dut, key)?;
    let mut batches = PatternBatches::new(golden.primary_inputs().len(), mode)?;
    let key_words: Vec<u64> = key.iter().map(|&b| bit_word(b)).collect();
    let mut gsim = Simulator::new(golden);
    let mut dsim = Simulator::new(dut);
    let mut words = Vec::new();
    let mut applied = 0u64;
    while let Some(mask) = batches.next_into(&mut words) {
        gsim.run(&words, &[]);
        dsim.run(&words, &key_words);
        let mut dist = [0u32; 64];
        for (&go, &dob) in golden.primary_outputs().iter().zip(dut.primary_outputs()) {
            let mut diff = (gsim.value(go) ^ dsim.value(dob)) & mask;
            while diff != 0 {
                dist[diff.trailing_zeros() as usize] += 1;
                diff &= diff - 1;
            }
        }
        let lanes = mask.count_ones() as usize;
        for &d in &dist[..lanes] {
            visit(d);
        }
        applied += lanes as u64;
    }
    Ok(applied)
}

pub fn equivalence_check(
    golden: &Netlist,
    dut: &Netlist,
    key: &[bool],
    mode: PatternMode,
) -> Result<EquivReport, SimError> {
    let mut histogram = BTreeMap::new();
    let mut mismatched = 0u64;
    let applied = for_each_distance(golden, dut, key, mode, |d| {
        *histogram.entry(d as usize).or_insert(0u64) += 1;
        if d > 0 {
            mismatched += 1;
        }
    })?;
    Ok(EquivReport {
        patterns_applied: applied,
        mismatched_patterns: mismatched,
        hamming_histogram: histogram,
        exhaustive: matches!(mode, PatternMode::Exhaustive),
    })
}

/// Exhaustive when the circuit is small enough, otherwise sampled.
pub fn default_mode(inputs: usize, exhaustive_limit: usize, seed: u64) -> PatternMode {
    if inputs <= exhaustive_limit.min(EXHAUSTIVE_INPUT_LIMIT) {
        PatternMode::Exhaustive
    } else {
        PatternMode::Sampled { patterns: DEFAULT_SAMPLED_PATTERNS, seed }
    }
}

/// Reference evaluator used to cross-check [`Simulator`]: recursive, one
/// pattern at a time, no evaluation order.
pub fn eval_recursive(netlist: &Netlist, assignment: &Assignment) -> Vec<bool> {
    fn go(n: &Netlist, a: &Assignment, net: NetId, memo: &mut Vec<Option<bool>>) -> bool {
        if let Some(v) = memo[net.index()] {
            return v;
        }
        let v = match n.net(net).driver {
            Driver::PrimaryInput(i) => a.pi_bits[i],
            Driver::KeyInput(i) => a.key_bits[i],
            Driver::Gate(g) => {
                let gate = n.gate(g);
                let ins: Vec<bool> = gate.inputs.iter().map(|&i| go(n, a, i, memo)).collect();
                gate.kind.eval_bits(ins)
            }
        };
        memo[net.index()] = Some(v);
        v
    }
    let mut memo = vec![None; netlist.net_count()];
    netlist.primary_outputs().iter().map(|&o| go(netlist, assignment, o, &mut memo)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;

    const C17: &str = "INPUT(1)\nINPUT(2)\nINPUT(3)\nINPUT(6)\nINPUT(7)\nOUTPUT(22)\nOUTPUT(23)\n\
        10 = NAND(1, 3)\n11 = NAND(3, 6)\n16 = NAND(2, 11)\n19 = NAND(11, 7)\n22 = NAND(10, 16)\n23 = NAND(16, 19)\n";

    fn bits(v: u32, n: usize) -> Vec<bool> {
        (0..n).map(|i| (v >> i) & 1 == 1).collect()
    }

    #[test]
    fn and_and_xnor_truth() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\nOUTPUT(x)\no = AND(a, b)\nx = XNOR(a, b)\n")
            .unwrap();
        let run = |a, b| simulate(&n, &Assignment::new(vec![a, b], vec![])).unwrap();
        assert_eq!(run(true, true), [true, true]);
        assert_eq!(run(true, false), [false, false]);
        assert_eq!(run(false, false), [false, true]);
    }

    #[test]
    fn length_mismatch() {
        let n = parse_bench("INPUT(a)\nOUTPUT(a)\n").unwrap();
        assert!(matches!(
            simulate(&n, &Assignment::new(vec![], vec![])),
            Err(SimError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn c17_matches_hand_table() {
        // Independent evaluation of the six NAND gates written out by hand.
        let nand = |a: bool, b: bool| !(a && b);
        let n = parse_bench(C17).unwrap();
        for v in 0..32u32 {
            let x = bits(v, 5);
            let (i1, i2, i3, i6, i7) = (x[0], x[1], x[2], x[3], x[4]);
            let g10 = nand(i1, i3);
            let g11 = nand(i3, i6);
            let g16 = nand(i2, g11);
            let g19 = nand(g11, i7);
            let want = vec![nand(g10, g16), nand(g16, g19)];
            assert_eq!(simulate(&n, &Assignment::new(x, vec![])).unwrap(), want, "pattern {v}");
        }
    }

    #[test]
    fn exhaustive_words_enumerate_patterns() {
        for batch in 0..4u64 {
            for lane in 0..64u64 {
                let p = batch * 64 + lane;
                for i in 0..8 {
                    let bit = (exhaustive_word(i, batch) >> lane) & 1;
                    assert_eq!(bit, (p >> i) & 1);
                }
            }
        }
    }

    #[test]
    fn reflexive_equivalence() {
        let n = parse_bench(C17).unwrap();
        let r = equivalence_check(&n, &n, &[], PatternMode::Exhaustive).unwrap();
        assert_eq!(r.patterns_applied, 32);
        assert_eq!(r.mismatched_patterns, 0);
        assert_eq!(r.hamming_histogram.get(&0), Some(&32));
        assert!(r.exhaustive);
    }

    #[test]
    fn inverted_output_always_mismatches() {
        let g = parse_bench(C17).unwrap();
        let d = parse_bench(&C17.replace("22 = NAND(10, 16)", "22 = AND(10, 16)")).unwrap();
        let r = equivalence_check(&g, &d, &[], PatternMode::Exhaustive).unwrap();
        assert_eq!(r.mismatched_patterns, 32);
        assert!(r.hamming_histogram.keys().all(|&k| k >= 1));
        let total: u64 = r.hamming_histogram.values().sum();
        assert_eq!(total, r.patterns_applied);
    }

    #[test]
    fn sampled_is_reproducible() {
        let g = parse_bench(C17).unwrap();
        let d = parse_bench(&C17.replace("23 = NAND(16, 19)", "23 = OR(16, 19)")).unwrap();
        let mode = PatternMode::Sampled { patterns: 100, seed: 7 };
        let a = equivalence_check(&g, &d, &[], mode).unwrap();
        let b = equivalence_check(&g, &d, &[], mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.patterns_applied, 100);
        assert!(!a.exhaustive);
    }

    #[test]
    fn port_errors() {
        let g = parse_bench(C17).unwrap();
        let small = parse_bench("INPUT(1)\nOUTPUT(1)\n").unwrap();
        assert!(matches!(
            equivalence_check(&g, &small, &[], PatternMode::Exhaustive),
            Err(SimError::PortMismatch(_))
        ));
        assert!(matches!(
            equivalence_check(&g, &g, &[true], PatternMode::Exhaustive),
            Err(SimError::LengthMismatch { .. })
        ));
        let wide: String = (0..21).map(|i| format!("INPUT(i{i})\n")).collect::<String>() + "OUTPUT(i0)\n";
        let w = parse_bench(&wide).unwrap();
        assert_eq!(
            equivalence_check(&w, &w, &[], PatternMode::Exhaustive),
            Err(SimError::ExhaustiveTooLarge(21))
        );
    }
}
