//! Scatter, coverage and formality indexes and their mean.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::key::KeyBits;
use crate::netlist::{GateId, Netlist};
use crate::sim::{default_mode, for_each_distance, PatternMode, SimError};

/// Circuits with at most this many inputs are simulated exhaustively.
pub const EXHAUSTIVE_METRIC_INPUTS: usize = 16;
pub const DEFAULT_WRONG_KEYS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("netlist has no key inputs")]
    NoKeys,
    #[error("no key input drives a gate")]
    NoEntryNodes,
    #[error("index {0} is outside [0, 100]")]
    Range(f64),
    #[error("at least one wrong key is required")]
    NoWrongKeys,
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Gates reading at least one key input, ascending.
pub fn key_entry_nodes(n: &Netlist) -> Result<Vec<GateId>, MetricsError> {
    if n.key_inputs().is_empty() {
        return Err(MetricsError::NoKeys);
    }
    let mut gates: Vec<GateId> = n.key_inputs().iter().flat_map(|&k| n.net(k).sinks.iter().copied()).collect();
    gates.sort_unstable();
    gates.dedup();
    Ok(gates)
}

/// `max(1, gates / key_bits)`.
pub fn default_max_depth(gates: usize, key_bits: usize) -> usize {
    (gates / key_bits.max(1)).max(1)
}

/// Undirected hop distance from every gate to the nearest key-entry gate;
/// `None` when unreachable. Two gates are adjacent when one drives an input
/// of the other.
pub fn entry_distances(n: &Netlist) -> Result<Vec<Option<usize>>, MetricsError> {
    let entries = key_entry_nodes(n)?;
    let mut dist = vec![None; n.gate_count()];
    let mut queue = VecDeque::new();
    for &g in &entries {
        dist[g.index()] = Some(0);
        queue.push_back(g);
    }
    while let Some(g) = queue.pop_front() {
        let d = dist[g.index()].expect("queued gates have a distance") + 1;
        let gate = n.gate(g);
        let upstream = gate.inputs.iter().filter_map(|&i| n.driver_gate(i));
        let downstream = n.net(gate.output).sinks.iter().copied();
        for h in upstream.chain(downstream) {
            if dist[h.index()].is_none() {
                dist[h.index()] = Some(d);
                queue.push_back(h);
            }
        }
    }
    Ok(dist)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scatter {
    pub t_index: f64,
    pub scatter_score: usize,
    pub max_depth: usize,
}

pub fn scatter_index(n: &Netlist, max_depth: usize) -> Result<Scatter, MetricsError> {
    let dist = entry_distances(n)?;
    let score = dist.iter().filter(|d| d.is_some_and(|d| d <= max_depth)).count();
    Ok(Scatter { t_index: percent(score, n.gate_count()), scatter_score: score, max_depth })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coverage {
    pub c_index: f64,
    pub covered_gates: usize,
    /// Sum of per-entry cone sizes, overlaps counted repeatedly.
    pub summed_cone_gates: usize,
}

impl Coverage {
    /// The summed variant as a percentage; may exceed 100.
    pub fn summed_percent(&self, gates: usize) -> f64 {
        percent(self.summed_cone_gates, gates)
    }
}

/// Share of gates in the union of key-entry fan-out cones, entries included.
pub fn coverage_index(n: &Netlist) -> Result<Coverage, MetricsError> {
    let entries = key_entry_nodes(n)?;
    let mut covered = vec![false; n.gate_count()];
    let mut summed = 0;
    for &e in &entries {
        let cone = n.fanout_cone(n.gate(e).output).expect("gate outputs exist");
        summed += 1 + cone.iter().filter(|&&g| g != e).count();
        covered[e.index()] = true;
        for g in cone {
            covered[g.index()] = true;
        }
    }
    let count = covered.iter().filter(|&&c| c).count();
    Ok(Coverage { c_index: percent(count, n.gate_count()), covered_gates: count, summed_cone_gates: summed })
}

/// Corruption of one pattern: 0 when all or none of the outputs match,
/// 1 when exactly half do.
pub fn corruption_term(pattern_match: f64) -> f64 {
    1.0 - (2.0 * pattern_match - 1.0).abs()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Formality {
    pub f_index: f64,
    pub per_key: Vec<f64>,
    pub patterns: u64,
    pub exhaustive: bool,
}

/// Mean corruption over the pattern set, averaged over `keys`.
pub fn formality_index(
    golden: &Netlist,
    locked: &Netlist,
    keys: &[KeyBits],
    mode: PatternMode,
) -> Result<Formality, MetricsError> {
    if keys.is_empty() {
        return Err(MetricsError::NoWrongKeys);
    }
    let outputs = golden.primary_outputs().len().max(1) as f64;
    let mut per_key = Vec::with_capacity(keys.len());
    let mut patterns = 0;
    for key in keys {
        let mut sum = 0.0;
        patterns = for_each_distance(golden, locked, key.bits(), mode, |d| {
            sum += corruption_term((outputs - f64::from(d)) / outputs);
        })?;
        per_key.push(if patterns == 0 { 0.0 } else { 100.0 * sum / patterns as f64 });
    }
    let f_index = per_key.iter().sum::<f64>() / per_key.len() as f64;
    Ok(Formality { f_index, per_key, patterns, exhaustive: matches!(mode, PatternMode::Exhaustive) })
}

/// `count` random keys, each different from `correct` when one exists.
pub fn sample_wrong_keys(correct: &KeyBits, count: usize, seed: u64) -> Vec<KeyBits> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let k = KeyBits::random(correct.len(), &mut rng);
            if k != *correct || correct.is_empty() {
                break k;
            }
        })
        .collect()
}

pub fn t3_metric(t_index: f64, c_index: f64, f_index: f64) -> Result<f64, MetricsError> {
    for v in [t_index, c_index, f_index] {
        if !(0.0..=100.0).contains(&v) {
            return Err(MetricsError::Range(v));
        }
    }
    Ok((t_index + c_index + f_index) / 3.0)
}

fn percent(part: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * part as f64 / total as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsOptions {
    /// `None` uses [`default_max_depth`].
    pub max_depth: Option<usize>,
    /// Sampled pattern count for circuits too wide to enumerate.
    pub patterns: usize,
    pub seed: u64,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        MetricsOptions { max_depth: None, patterns: crate::sim::DEFAULT_SAMPLED_PATTERNS, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    pub t_index: f64,
    pub c_index: f64,
    pub f_index: f64,
    pub t3_metric: f64,
    pub max_depth: usize,
    pub p_total: u64,
    pub exhaustive: bool,
    pub key_bits: usize,
    pub key_entry_nodes: Vec<u32>,
    pub key_entry_names: Vec<String>,
    pub scatter_score: usize,
    pub covered_gate_count: usize,
    pub summed_cone_gates: usize,
    pub g_total: usize,
    pub wrong_keys: Vec<String>,
    pub f_per_key: Vec<f64>,
    pub seed: u64,
}

/// All three indexes for `locked` against `golden`, with F measured under
/// `keys`.
pub fn metrics_report(
    golden: &Netlist,
    locked: &Netlist,
    keys: &[KeyBits],
    opts: &MetricsOptions,
) -> Result<MetricsReport, MetricsError> {
    let entries = key_entry_nodes(locked)?;
    if entries.is_empty() {
        return Err(MetricsError::NoEntryNodes);
    }
    let k = locked.key_inputs().len();
    let max_depth = opts.max_depth.unwrap_or_else(|| default_max_depth(locked.gate_count(), k));
    let scatter = scatter_index(locked, max_depth)?;
    let coverage = coverage_index(locked)?;
    let mode = match default_mode(golden.primary_inputs().len(), EXHAUSTIVE_METRIC_INPUTS, opts.seed) {
        PatternMode::Sampled { seed, .. } => PatternMode::Sampled { patterns: opts.patterns, seed },
        m => m,
    };
    let f = formality_index(golden, locked, keys, mode)?;
    Ok(MetricsReport {
        schema_version: crate::SCHEMA_VERSION,
        t_index: scatter.t_index,
        c_index: coverage.c_index,
        f_index: f.f_index,
        t3_metric: t3_metric(scatter.t_index, coverage.c_index, f.f_index)?,
        max_depth,
        p_total: f.patterns,
        exhaustive: f.exhaustive,
        key_bits: k,
        key_entry_names: entries.iter().map(|&g| locked.net_name(locked.gate(g).output).to_string()).collect(),
        key_entry_nodes: entries.iter().map(|g| g.0).collect(),
        scatter_score: scatter.scatter_score,
        covered_gate_count: coverage.covered_gates,
        summed_cone_gates: coverage.summed_cone_gates,
        g_total: locked.gate_count(),
        wrong_keys: keys.iter().map(KeyBits::to_hex).collect(),
        f_per_key: f.per_key,
        seed: opts.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;

    fn chain(key_at: usize) -> Netlist {
        // Five NOT/XOR gates in a row; the key enters gate `key_at`.
        let mut s = String::from("INPUT(a)\nINPUT(keyinput0)\nOUTPUT(g4)\n");
        for i in 0..5 {
            let prev = if i == 0 { "a".to_string() } else { format!("g{}", i - 1) };
            if i == key_at {
                s += &format!("g{i} = XOR({prev}, keyinput0)\n");
            } else {
                s += &format!("g{i} = NOT({prev})\n");
            }
        }
        parse_bench(&s).unwrap()
    }

    #[test]
    fn entry_nodes() {
        let n = parse_bench(
            "INPUT(a)\nINPUT(keyinput0)\nOUTPUT(x)\nOUTPUT(y)\nx = XOR(keyinput0, a)\ny = AND(keyinput0, a)\n",
        )
        .unwrap();
        assert_eq!(key_entry_nodes(&n).unwrap(), vec![GateId(0), GateId(1)]);
        let plain = parse_bench("INPUT(a)\nOUTPUT(o)\no = NOT(a)\n").unwrap();
        assert_eq!(key_entry_nodes(&plain), Err(MetricsError::NoKeys));
    }

    #[test]
    fn chain_scatter() {
        assert_eq!(scatter_index(&chain(2), 1).unwrap().t_index, 60.0);
        assert_eq!(scatter_index(&chain(0), 1).unwrap().t_index, 40.0);
        assert_eq!(scatter_index(&chain(0), 4).unwrap().t_index, 100.0);
    }

    #[test]
    fn chain_coverage() {
        assert_eq!(coverage_index(&chain(0)).unwrap().c_index, 100.0);
        assert_eq!(coverage_index(&chain(4)).unwrap().c_index, 20.0);
    }

    #[test]
    fn corruption_shape() {
        assert_eq!(corruption_term(1.0), 0.0);
        assert_eq!(corruption_term(0.0), 0.0);
        assert_eq!(corruption_term(0.5), 1.0);
        assert!((corruption_term(0.25) - corruption_term(0.75)).abs() < 1e-12);
    }

    #[test]
    fn formality_extremes() {
        let golden = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(x)\nOUTPUT(y)\nx = AND(a, b)\ny = OR(a, b)\n").unwrap();
        // keyinput0 = 1 inverts x only: exactly half the outputs wrong.
        let half = parse_bench(
            "INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nOUTPUT(x)\nOUTPUT(y)\n\
             w = AND(a, b)\nx = XOR(w, keyinput0)\ny = OR(a, b)\n",
        )
        .unwrap();
        let one = KeyBits(vec![true]);
        let zero = KeyBits(vec![false]);
        let f = formality_index(&golden, &half, &[one], PatternMode::Exhaustive).unwrap();
        assert_eq!(f.f_index, 100.0);
        let f = formality_index(&golden, &half, &[zero], PatternMode::Exhaustive).unwrap();
        assert_eq!(f.f_index, 0.0);
    }

    #[test]
    fn table_values() {
        assert!((t3_metric(13.4, 72.4, 47.2).unwrap() - 44.33).abs() < 0.005);
        assert!((t3_metric(7.9, 61.2, 45.1).unwrap() - 38.06).abs() <= 0.01);
        assert_eq!(t3_metric(0.0, 0.0, 0.0).unwrap(), 0.0);
        assert!(t3_metric(101.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn wrong_keys_differ() {
        let c = KeyBits(vec![true, false]);
        for k in sample_wrong_keys(&c, 20, 1) {
            assert_ne!(k, c);
        }
    }
}
