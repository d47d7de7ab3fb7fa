//! Partition boundaries, eligibility and function extraction.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::truth::BooleanFunction;
use crate::netlist::{GateId, NetId, Netlist, TopoOrder};
use crate::sim::exhaustive_word;

/// Largest cone arity `extract_function` accepts.
pub const MAX_TT_INPUTS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionView {
    pub index: usize,
    /// Ascending.
    pub gates: Vec<GateId>,
    /// Nets entering the partition, ascending by id.
    pub inputs: Vec<NetId>,
    /// Nets leaving the partition or driving primary outputs, ascending by
    /// (level, id).
    pub outputs: Vec<NetId>,
    pub max_logic_depth: u32,
    /// Per output, the fraction of `inputs` its cone reaches.
    pub fanin_coverage: Vec<f64>,
    /// Per output, positions in `inputs` its cone reaches, ascending.
    pub cone_inputs: Vec<Vec<usize>>,
}

impl PartitionView {
    pub fn n(&self) -> usize {
        self.inputs.len()
    }

    pub fn m(&self) -> usize {
        self.outputs.len()
    }

    pub fn mean_coverage(&self) -> f64 {
        if self.fanin_coverage.is_empty() {
            0.0
        } else {
            self.fanin_coverage.iter().sum::<f64>() / self.fanin_coverage.len() as f64
        }
    }

    pub fn max_cone_arity(&self) -> usize {
        self.cone_inputs.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Views for every partition; `assignment[g]` is the partition of gate `g`.
pub fn build_views(netlist: &Netlist, topo: &TopoOrder, assignment: &[u32], p: usize) -> Vec<PartitionView> {
    assert_eq!(assignment.len(), netlist.gate_count());
    let mut gates: Vec<Vec<GateId>> = vec![Vec::new(); p];
    for (g, &a) in assignment.iter().enumerate() {
        gates[a as usize].push(GateId(g as u32));
    }
    let mut is_po = vec![false; netlist.net_count()];
    for &o in netlist.primary_outputs() {
        is_po[o.index()] = true;
    }
    let part_of_net = |net: NetId| netlist.driver_gate(net).map(|g| assignment[g.index()]);

    let mut local_depth = vec![0u32; netlist.gate_count()];
    for &g in topo.order() {
        let pi = assignment[g.index()];
        let d = netlist
            .gate(g)
            .inputs
            .iter()
            .filter_map(|&i| netlist.driver_gate(i))
            .filter(|d| assignment[d.index()] == pi)
            .map(|d| local_depth[d.index()])
            .max()
            .unwrap_or(0);
        local_depth[g.index()] = d + 1;
    }

    gates
        .into_iter()
        .enumerate()
        .map(|(index, gs)| {
            let pi = index as u32;
            let mut inputs: Vec<NetId> = gs
                .iter()
                .flat_map(|&g| netlist.gate(g).inputs.iter().copied())
                .filter(|&i| part_of_net(i) != Some(pi))
                .collect();
            inputs.sort_unstable();
            inputs.dedup();
            let mut outputs: Vec<NetId> = gs
                .iter()
                .map(|&g| netlist.gate(g).output)
                .filter(|&o| {
                    is_po[o.index()] || netlist.net(o).sinks.iter().any(|s| assignment[s.index()] != pi)
                })
                .collect();
            outputs.sort_by_key(|&o| (topo.net_level(netlist, o), o.0));
            let position: HashMap<NetId, usize> = inputs.iter().enumerate().map(|(i, &n)| (n, i)).collect();
            let cone_inputs: Vec<Vec<usize>> = outputs
                .iter()
                .map(|&o| {
                    let mut c: Vec<usize> =
                        cone_leaves(netlist, assignment, pi, o).iter().map(|l| position[l]).collect();
                    c.sort_unstable();
                    c
                })
                .collect();
            let n = inputs.len().max(1) as f64;
            let fanin_coverage = cone_inputs.iter().map(|c| c.len() as f64 / n).collect();
            let max_logic_depth = gs.iter().map(|g| local_depth[g.index()]).max().unwrap_or(0);
            PartitionView { index, gates: gs, inputs, outputs, max_logic_depth, fanin_coverage, cone_inputs }
        })
        .collect()
}

/// Gates of partition `part` in the fan-in cone of `net`, ascending by id.
pub(crate) fn cone_gates(netlist: &Netlist, assignment: &[u32], part: u32, net: NetId) -> Vec<GateId> {
    let mut out = Vec::new();
    let mut stack: Vec<GateId> = netlist.driver_gate(net).into_iter().collect();
    let mut seen = std::collections::HashSet::new();
    while let Some(g) = stack.pop() {
        if assignment[g.index()] != part || !seen.insert(g) {
            continue;
        }
        out.push(g);
        for &i in &netlist.gate(g).inputs {
            if let Some(d) = netlist.driver_gate(i) {
                stack.push(d);
            }
        }
    }
    out.sort_unstable();
    out
}

/// External nets feeding the partition-restricted cone of `net`.
fn cone_leaves(netlist: &Netlist, assignment: &[u32], part: u32, net: NetId) -> Vec<NetId> {
    let mut leaves: Vec<NetId> = cone_gates(netlist, assignment, part, net)
        .iter()
        .flat_map(|&g| netlist.gate(g).inputs.iter().copied())
        .filter(|&i| netlist.driver_gate(i).is_none_or(|d| assignment[d.index()] != part))
        .collect();
    leaves.sort_unstable();
    leaves.dedup();
    leaves
}

/// Depth and mean-coverage thresholds; `(0, 0.0)` accepts everything.
pub fn evaluate_partition(view: &PartitionView, min_depth: u32, min_coverage: f64) -> bool {
    !view.outputs.is_empty() && view.max_logic_depth >= min_depth && view.mean_coverage() >= min_coverage
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("output cone has {arity} inputs, above the {MAX_TT_INPUTS}-input extraction limit")]
pub struct ArityOverflow {
    pub arity: usize,
}

/// A partition output's function over its own cone inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedFunction {
    /// Cone input nets in `view.inputs` order.
    pub inputs: Vec<NetId>,
    pub table: BooleanFunction,
    /// Functions of every partition gate output in the cone, over `inputs`.
    pub internal: Vec<(NetId, BooleanFunction)>,
}

pub fn extract_function(
    netlist: &Netlist,
    assignment: &[u32],
    view: &PartitionView,
    t: usize,
) -> Result<ExtractedFunction, ArityOverflow> {
    let arity = view.cone_inputs[t].len();
    if arity > MAX_TT_INPUTS {
        return Err(ArityOverflow { arity });
    }
    let inputs: Vec<NetId> = view.cone_inputs[t].iter().map(|&i| view.inputs[i]).collect();
    let part = view.index as u32;
    let out = view.outputs[t];
    let gates = cone_gates(netlist, assignment, part, out);
    let order = local_order(netlist, &gates);
    let words = if arity <= 6 { 1 } else { 1usize << (arity - 6) };
    let mut value: HashMap<NetId, Vec<u64>> = HashMap::new();
    for (i, &n) in inputs.iter().enumerate() {
        value.insert(n, (0..words).map(|b| exhaustive_word(i, b as u64)).collect());
    }
    for &g in &order {
        let gate = netlist.gate(g);
        let ins: Vec<&Vec<u64>> = gate.inputs.iter().map(|i| &value[i]).collect();
        let w: Vec<u64> = (0..words).map(|b| gate.kind.eval_word(ins.iter().map(|v| v[b]))).collect();
        value.insert(gate.output, w);
    }
    let internal: Vec<(NetId, BooleanFunction)> = order
        .iter()
        .map(|&g| {
            let o = netlist.gate(g).output;
            (o, BooleanFunction::from_words(arity, value[&o].clone()))
        })
        .collect();
    let table = BooleanFunction::from_words(arity, value[&out].clone());
    Ok(ExtractedFunction { inputs, table, internal })
}

/// `gates` in a dependency-respecting order (inputs before users).
pub(crate) fn local_order(netlist: &Netlist, gates: &[GateId]) -> Vec<GateId> {
    let set: std::collections::HashSet<GateId> = gates.iter().copied().collect();
    let mut done = std::collections::HashSet::new();
    let mut order = Vec::with_capacity(gates.len());
    for &root in gates {
        let mut stack = vec![(root, false)];
        while let Some((g, expanded)) = stack.pop() {
            if done.contains(&g) {
                continue;
            }
            if expanded {
                done.insert(g);
                order.push(g);
                continue;
            }
            stack.push((g, true));
            for &i in &netlist.gate(g).inputs {
                if let Some(d) = netlist.driver_gate(i) {
                    if set.contains(&d) && !done.contains(&d) {
                        stack.push((d, false));
                    }
                }
            }
        }
    }
    order
}
