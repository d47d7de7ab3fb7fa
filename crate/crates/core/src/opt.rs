//! Constant propagation, dead-gate removal and unit-cost estimates.
//!
//! Propagation folds constants only; it never merges an inverter into its
//! reader, so `XOR(x, 1)` stays a visible `NOT(x)`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::netlist::{topo_order, GateKind, NetId, Netlist, NetlistBuilder, NetlistError};
use crate::sim::{lane_mask, Simulator};

pub const DEFAULT_POWER_PATTERNS: usize = 1_000;

#[derive(Debug, Error)]
pub enum OptError {
    #[error("net `{0}` is not a primary or key input")]
    NotAnInput(String),
    #[error("a constant output needs at least one input port to tie to")]
    NoTieSource,
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    Const(bool),
    Net(NetId),
}

/// Folds the given input values through the circuit. Ports are kept, so
/// the result has the same interface as `n`.
pub fn propagate_constants(n: &Netlist, fixed: &HashMap<NetId, bool>) -> Result<Netlist, OptError> {
    for &net in fixed.keys() {
        if net.index() >= n.net_count() || !(n.is_primary_input(net) || n.is_key_input(net)) {
            let name = n.nets().get(net.index()).map_or_else(|| net.0.to_string(), |x| x.name.clone());
            return Err(OptError::NotAnInput(name));
        }
    }
    let mut b = NetlistBuilder::new(n.name());
    b.reserve(n.nets().iter().map(|x| x.name.as_str()));
    let mut val = vec![Val::Const(false); n.net_count()];
    let mut ports: Vec<NetId> = Vec::new();
    for &pi in n.primary_inputs() {
        let id = b.add_primary_input(n.net_name(pi))?;
        ports.push(id);
        val[pi.index()] = fixed.get(&pi).map_or(Val::Net(id), |&c| Val::Const(c));
    }
    for &k in n.key_inputs() {
        let id = b.add_key_input()?;
        ports.push(id);
        val[k.index()] = fixed.get(&k).map_or(Val::Net(id), |&c| Val::Const(c));
    }
    let tie = ports.first().copied();
    for &g in n.eval_order() {
        let gate = n.gate(g);
        let ins: Vec<Val> = gate.inputs.iter().map(|i| val[i.index()]).collect();
        val[gate.output.index()] = fold(&mut b, gate.kind, &ins, n.net_name(gate.output))?;
    }
    let mut consts: [Option<NetId>; 2] = [None, None];
    for &o in n.primary_outputs() {
        let net = match val[o.index()] {
            Val::Net(x) => x,
            Val::Const(c) => match consts[c as usize] {
                Some(x) => x,
                None => {
                    let t = tie.ok_or(OptError::NoTieSource)?;
                    let kind = if c { GateKind::Xnor } else { GateKind::Xor };
                    let name = b.fresh_name(if c { "const1_" } else { "const0_" });
                    let x = b.add_gate(kind, vec![t, t], name)?;
                    consts[c as usize] = Some(x);
                    x
                }
            },
        };
        b.add_output(net);
    }
    Ok(b.build()?)
}

fn fold(b: &mut NetlistBuilder, kind: GateKind, ins: &[Val], name: &str) -> Result<Val, OptError> {
    let nets: Vec<NetId> = ins.iter().filter_map(|v| if let Val::Net(x) = v { Some(*x) } else { None }).collect();
    let has = |c: bool| ins.contains(&Val::Const(c));
    let mut gate = |kind: GateKind, inputs: Vec<NetId>| -> Result<Val, OptError> {
        Ok(Val::Net(b.add_gate(kind, inputs, name)?))
    };
    if nets.len() == ins.len() {
        return gate(kind, nets);
    }
    // (dominating constant, output when dominated, output when no net remains, inverting)
    let (dom, dom_out, empty_out, inv) = match kind {
        GateKind::And => (false, false, true, false),
        GateKind::Nand => (false, true, false, true),
        GateKind::Or => (true, true, false, false),
        GateKind::Nor => (true, false, true, true),
        GateKind::Not | GateKind::Buf => {
            let Val::Const(c) = ins[0] else { unreachable!("unary gate with a constant input") };
            return Ok(Val::Const(c ^ (kind == GateKind::Not)));
        }
        GateKind::Xor | GateKind::Xnor => {
            let parity = ins.iter().filter(|v| **v == Val::Const(true)).count() % 2 == 1;
            let flip = parity ^ (kind == GateKind::Xnor);
            return match nets.len() {
                0 => Ok(Val::Const(flip)),
                1 if flip => gate(GateKind::Not, nets),
                1 => Ok(Val::Net(nets[0])),
                _ => gate(if flip { GateKind::Xnor } else { GateKind::Xor }, nets),
            };
        }
    };
    if has(dom) {
        return Ok(Val::Const(dom_out));
    }
    match nets.len() {
        0 => Ok(Val::Const(empty_out)),
        1 if inv => gate(GateKind::Not, nets),
        1 => Ok(Val::Net(nets[0])),
        _ => gate(kind, nets),
    }
}

/// Drops gates with no path to a primary output.
pub fn eliminate_dead(n: &Netlist) -> Result<Netlist, OptError> {
    let mut live = vec![false; n.gate_count()];
    let mut stack: Vec<NetId> = n.primary_outputs().to_vec();
    while let Some(net) = stack.pop() {
        if let Some(g) = n.driver_gate(net) {
            if !std::mem::replace(&mut live[g.index()], true) {
                stack.extend(n.gate(g).inputs.iter().copied());
            }
        }
    }
    let mut b = NetlistBuilder::new(n.name());
    let mut map = vec![NetId(u32::MAX); n.net_count()];
    for &pi in n.primary_inputs() {
        map[pi.index()] = b.add_primary_input(n.net_name(pi))?;
    }
    for &k in n.key_inputs() {
        map[k.index()] = b.add_key_input()?;
    }
    for &g in n.eval_order() {
        if live[g.index()] {
            let gate = n.gate(g);
            let ins = gate.inputs.iter().map(|i| map[i.index()]).collect();
            map[gate.output.index()] = b.add_gate(gate.kind, ins, n.net_name(gate.output))?;
        }
    }
    for &o in n.primary_outputs() {
        b.add_output(map[o.index()]);
    }
    Ok(b.build()?)
}

/// Unit area of one gate: 1 for NOT/BUF, otherwise its input count.
pub fn gate_area(kind: GateKind, inputs: usize) -> u64 {
    if kind.is_unary() {
        1
    } else {
        inputs as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub area: u64,
    pub delay: u32,
    /// Mean gate-output toggles between two random patterns.
    pub power: f64,
    pub gates: usize,
}

/// Area, delay and toggle power. Key inputs get `key` when given, random
/// values otherwise; primary-input patterns depend only on `seed`.
pub fn estimate(n: &Netlist, key: Option<&[bool]>, patterns: usize, seed: u64) -> Result<Estimate, OptError> {
    let area = n.gates().iter().map(|g| gate_area(g.kind, g.inputs.len())).sum();
    let delay = topo_order(n)?.depth();
    let mut pi_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut key_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6B65_7973);
    let mut sim_a = Simulator::new(n);
    let mut sim_b = Simulator::new(n);
    let mut toggles = 0u64;
    let mut left = patterns;
    while left > 0 {
        let lanes = left.min(64);
        left -= lanes;
        let mask = lane_mask(lanes as u64);
        let draw = |rng: &mut ChaCha8Rng, count: usize| -> (Vec<u64>, Vec<u64>) {
            ((0..count).map(|_| rng.gen()).collect(), (0..count).map(|_| rng.gen()).collect())
        };
        let (pa, pb) = draw(&mut pi_rng, n.primary_inputs().len());
        let (ka, kb) = match key {
            Some(bits) => {
                let w: Vec<u64> = bits.iter().map(|&b| crate::sim::bit_word(b)).collect();
                (w.clone(), w)
            }
            None => draw(&mut key_rng, n.key_inputs().len()),
        };
        sim_a.run(&pa, &ka);
        sim_b.run(&pb, &kb);
        for g in n.gates() {
            toggles += u64::from(((sim_a.value(g.output) ^ sim_b.value(g.output)) & mask).count_ones());
        }
    }
    let power = if patterns == 0 { 0.0 } else { toggles as f64 / patterns as f64 };
    Ok(Estimate { area, delay, power, gates: n.gate_count() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Overhead {
    pub schema_version: u32,
    pub original: Estimate,
    pub locked: Estimate,
    pub area_pct: f64,
    pub delay_pct: f64,
    pub power_pct: f64,
}

/// `(locked - original) / original * 100`, 0 when the original is 0.
pub fn percent_delta(original: f64, locked: f64) -> f64 {
    if original == 0.0 {
        0.0
    } else {
        (locked - original) / original * 100.0
    }
}

/// Compares the two circuits under the same input patterns, the locked one
/// with its correct key.
pub fn overhead(
    original: &Netlist,
    locked: &Netlist,
    key: &[bool],
    patterns: usize,
    seed: u64,
) -> Result<Overhead, OptError> {
    let o = estimate(original, None, patterns, seed)?;
    let l = estimate(locked, Some(key), patterns, seed)?;
    Ok(Overhead {
        schema_version: crate::SCHEMA_VERSION,
        area_pct: percent_delta(o.area as f64, l.area as f64),
        delay_pct: percent_delta(f64::from(o.delay), f64::from(l.delay)),
        power_pct: percent_delta(o.power, l.power),
        original: o,
        locked: l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;
    use crate::sim::{equivalence_check, PatternMode};

    fn fix(n: &Netlist, name: &str, v: bool) -> HashMap<NetId, bool> {
        HashMap::from([(n.net_by_name(name).unwrap(), v)])
    }

    #[test]
    fn and_with_zero_is_constant() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = AND(a, b)\n").unwrap();
        let p = propagate_constants(&n, &fix(&n, "b", false)).unwrap();
        assert_eq!(p.gate_count(), 1);
        assert_eq!(p.gates()[0].kind, GateKind::Xor);
        assert_eq!(p.gates()[0].inputs[0], p.gates()[0].inputs[1]);
    }

    #[test]
    fn xor_with_one_is_not() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = XOR(a, b)\n").unwrap();
        let p = propagate_constants(&n, &fix(&n, "b", true)).unwrap();
        assert_eq!(p.gate_count(), 1);
        assert_eq!(p.gates()[0].kind, GateKind::Not);
    }

    #[test]
    fn correct_key_bit_restores_gate_count() {
        let orig = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\nx = AND(a, b)\no = NOT(x)\n").unwrap();
        let locked = parse_bench(
            "INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nOUTPUT(o)\np = AND(a, b)\nx = XOR(p, keyinput0)\no = NOT(x)\n",
        )
        .unwrap();
        let p = propagate_constants(&locked, &fix(&locked, "keyinput0", false)).unwrap();
        assert_eq!(p.gate_count(), orig.gate_count());
        assert!(equivalence_check(&orig, &p, &[false], PatternMode::Exhaustive).unwrap().equivalent());
    }

    #[test]
    fn rejects_internal_net() {
        let n = parse_bench("INPUT(a)\nOUTPUT(o)\nx = NOT(a)\no = NOT(x)\n").unwrap();
        assert!(matches!(propagate_constants(&n, &fix(&n, "x", true)), Err(OptError::NotAnInput(_))));
    }

    #[test]
    fn dead_gates_go() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\nd = OR(a, b)\ne = NOT(d)\no = AND(a, b)\n").unwrap();
        let e = eliminate_dead(&n).unwrap();
        assert_eq!(e.gate_count(), 1);
        assert_eq!(eliminate_dead(&e).unwrap(), e);
    }

    #[test]
    fn estimates() {
        let n = parse_bench("INPUT(a)\nOUTPUT(o)\no = NOT(a)\n").unwrap();
        let e = estimate(&n, None, 100, 1).unwrap();
        assert_eq!((e.area, e.delay), (1, 1));
        let c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nx = AND(a, b)\ny = OR(x, b)\nz = XOR(y, a)\n").unwrap();
        let e = estimate(&c, None, 100, 1).unwrap();
        assert_eq!((e.area, e.delay), (6, 3));
        assert_eq!(estimate(&c, None, 100, 1).unwrap(), e);
        assert_eq!(percent_delta(4.0, 5.0), 25.0);
    }
}
