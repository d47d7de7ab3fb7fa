//! Seeded random circuits for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GateKind, NetId, Netlist, NetlistBuilder};

/// Shape of a generated circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomCircuit {
    pub inputs: usize,
    pub gates: usize,
    /// Each gate reads mostly from the last `window` nets, which keeps the
    /// circuit deep and its partitions well connected.
    pub window: usize,
}

impl RandomCircuit {
    pub fn new(inputs: usize, gates: usize) -> Self {
        RandomCircuit { inputs, gates, window: 6 }
    }
}

const KINDS: [(GateKind, u32); 8] = [
    (GateKind::And, 4),
    (GateKind::Nand, 4),
    (GateKind::Or, 3),
    (GateKind::Nor, 3),
    (GateKind::Xor, 2),
    (GateKind::Xnor, 1),
    (GateKind::Not, 2),
    (GateKind::Buf, 1),
];

/// Every net without a reader becomes a primary output, so nothing is dead.
pub fn random_netlist(shape: RandomCircuit, seed: u64) -> Netlist {
    assert!(shape.inputs >= 1 && shape.gates >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = NetlistBuilder::new(format!("rand_{}_{}_{seed}", shape.inputs, shape.gates));
    let mut nets: Vec<NetId> =
        (0..shape.inputs).map(|i| b.add_primary_input(format!("i{i}")).expect("fresh name")).collect();
    let mut read = vec![false; shape.inputs + shape.gates];
    let total: u32 = KINDS.iter().map(|k| k.1).sum();
    for g in 0..shape.gates {
        let mut pick = rng.gen_range(0..total);
        let kind = KINDS.iter().find(|k| {
            if pick < k.1 {
                true
            } else {
                pick -= k.1;
                false
            }
        });
        let kind = kind.expect("weights cover the range").0;
        let arity = if kind.is_unary() { 1 } else if rng.gen_bool(0.15) { 3 } else { 2 };
        let arity = arity.min(nets.len());
        let mut inputs: Vec<usize> = Vec::with_capacity(arity);
        // Unread inputs first so every primary input ends up used.
        let unread_pi = (0..shape.inputs).find(|&i| !read[i]);
        if let Some(i) = unread_pi.filter(|_| rng.gen_bool(0.5)) {
            inputs.push(i);
        }
        let mut guard = 0;
        while inputs.len() < arity && guard < 64 {
            guard += 1;
            let len = nets.len();
            let i = if rng.gen_bool(0.85) {
                len - 1 - rng.gen_range(0..shape.window.min(len))
            } else {
                rng.gen_range(0..len)
            };
            if !inputs.contains(&i) {
                inputs.push(i);
            }
        }
        let kind = if inputs.len() == 1 && !kind.is_unary() { GateKind::Not } else { kind };
        for &i in &inputs {
            read[i] = true;
        }
        let ins = inputs.iter().map(|&i| nets[i]).collect();
        nets.push(b.add_gate(kind, ins, format!("g{g}")).expect("arity and names are valid"));
    }
    for (i, &n) in nets.iter().enumerate().skip(shape.inputs) {
        if !read[i] {
            b.add_output(n);
        }
    }
    b.build().expect("generated circuits are acyclic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::topo_order;

    #[test]
    fn shape_and_determinism() {
        let a = random_netlist(RandomCircuit::new(8, 200), 3);
        let b = random_netlist(RandomCircuit::new(8, 200), 3);
        assert_eq!(a, b);
        assert_eq!(a.gate_count(), 200);
        assert!(!a.primary_outputs().is_empty());
        assert!(topo_order(&a).unwrap().depth() > 5);
        for n in a.nets() {
            assert!(!n.sinks.is_empty() || a.primary_outputs().iter().any(|&o| a.net(o).name == n.name));
        }
    }
}
