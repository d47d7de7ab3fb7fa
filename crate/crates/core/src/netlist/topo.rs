use std::collections::VecDeque;

use super::{Driver, GateId, NetId, Netlist, NetlistError};

/// Gate logic levels and a level-sorted topological order.
///
/// Primary and key inputs sit at level 0; a gate is one above its deepest
/// input driver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopoOrder {
    levels: Vec<u32>,
    order: Vec<GateId>,
}

impl TopoOrder {
    pub fn level(&self, gate: GateId) -> u32 {
        self.levels[gate.index()]
    }

    /// Level of a net's driver (0 for inputs).
    pub fn net_level(&self, netlist: &Netlist, net: NetId) -> u32 {
        match netlist.net(net).driver {
            Driver::Gate(g) => self.levels[g.index()],
            _ => 0,
        }
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// Gate ids ascending by level, ties broken by gate id.
    pub fn order(&self) -> &[GateId] {
        &self.order
    }

    pub fn depth(&self) -> u32 {
        self.levels.iter().copied().max().unwrap_or(0)
    }
}

pub fn topo_order(netlist: &Netlist) -> Result<TopoOrder, NetlistError> {
    let levels = compute_levels(netlist)?;
    let mut order: Vec<GateId> = (0..netlist.gate_count()).map(|i| GateId(i as u32)).collect();
    order.sort_by_key(|g| (levels[g.index()], g.0));
    Ok(TopoOrder { levels, order })
}

pub(crate) fn kahn_order(netlist: &Netlist) -> Result<Vec<GateId>, NetlistError> {
    Ok(topo_order(netlist)?.order)
}

fn compute_levels(netlist: &Netlist) -> Result<Vec<u32>, NetlistError> {
    let gates = netlist.gates();
    let mut pending: Vec<u32> = gates
        .iter()
        .map(|g| {
            let mut drivers: Vec<GateId> =
                g.inputs.iter().filter_map(|&i| netlist.driver_gate(i)).collect();
            drivers.sort_unstable();
            drivers.dedup();
            drivers.len() as u32
        })
        .collect();
    let mut levels = vec![1u32; gates.len()];
    let mut queue: VecDeque<GateId> =
        (0..gates.len()).filter(|&i| pending[i] == 0).map(|i| GateId(i as u32)).collect();
    let mut seen = 0usize;
    while let Some(g) = queue.pop_front() {
        seen += 1;
        let out = gates[g.index()].output;
        let level = levels[g.index()];
        for &s in &netlist.net(out).sinks {
            let si = s.index();
            levels[si] = levels[si].max(level + 1);
            pending[si] -= 1;
            if pending[si] == 0 {
                queue.push_back(s);
            }
        }
    }
    if seen != gates.len() {
        let stuck = (0..gates.len()).find(|&i| pending[i] > 0).expect("some gate is stuck");
        return Err(NetlistError::Cycle(netlist.net_name(gates[stuck].output).to_string()));
    }
    Ok(levels)
}

pub(crate) fn fanin_cone(netlist: &Netlist, net: NetId) -> Vec<GateId> {
    let mut seen = vec![false; netlist.gate_count()];
    let mut stack: Vec<GateId> = netlist.driver_gate(net).into_iter().collect();
    let mut cone = Vec::new();
    while let Some(g) = stack.pop() {
        if std::mem::replace(&mut seen[g.index()], true) {
            continue;
        }
        cone.push(g);
        for &i in &netlist.gate(g).inputs {
            if let Some(d) = netlist.driver_gate(i) {
                if !seen[d.index()] {
                    stack.push(d);
                }
            }
        }
    }
    cone.sort_unstable();
    cone
}

pub(crate) fn fanout_cone(netlist: &Netlist, net: NetId) -> Vec<GateId> {
    let mut seen = vec![false; netlist.gate_count()];
    let mut stack: Vec<GateId> = netlist.net(net).sinks.clone();
    let mut cone = Vec::new();
    while let Some(g) = stack.pop() {
        if std::mem::replace(&mut seen[g.index()], true) {
            continue;
        }
        cone.push(g);
        for &s in &netlist.net(netlist.gate(g).output).sinks {
            if !seen[s.index()] {
                stack.push(s);
            }
        }
    }
    cone.sort_unstable();
    cone
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_bench, GateKind, NetlistBuilder};

    fn diamond() -> Netlist {
        // a -> g0 -> g1 -> g3 ; a -> g2 -> g3 (paths of depth 2 and 1 reconverge at level 3)
        parse_bench(
            "INPUT(a)\nOUTPUT(o)\nx = NOT(a)\ny = NOT(x)\nz = BUF(a)\nw = AND(y, z)\no = NOT(w)\n",
        )
        .unwrap()
    }

    #[test]
    fn chain_levels() {
        let mut b = NetlistBuilder::new("chain");
        let a = b.add_primary_input("a").unwrap();
        let x = b.add_gate(GateKind::Not, vec![a], "x").unwrap();
        let o = b.add_gate(GateKind::Not, vec![x], "o").unwrap();
        b.add_output(o);
        let n = b.build().unwrap();
        let t = topo_order(&n).unwrap();
        assert_eq!(t.level(GateId(0)), 1);
        assert_eq!(t.level(GateId(1)), 2);
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn two_pi_gate_is_level_one() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = AND(a, b)\n").unwrap();
        assert_eq!(topo_order(&n).unwrap().level(GateId(0)), 1);
    }

    #[test]
    fn diamond_reconvergence_level() {
        let n = diamond();
        let t = topo_order(&n).unwrap();
        let w = n.driver_gate(n.net_by_name("w").unwrap()).unwrap();
        assert_eq!(t.level(w), 3);
        for g in t.order().windows(2) {
            assert!(t.level(g[0]) <= t.level(g[1]));
        }
    }

    #[test]
    fn cones() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = AND(a, b)\n").unwrap();
        let a = n.net_by_name("a").unwrap();
        let o = n.net_by_name("o").unwrap();
        assert_eq!(n.fanout_cone(a).unwrap(), vec![GateId(0)]);
        assert!(n.fanout_cone(o).unwrap().is_empty());
        assert_eq!(n.fanin_cone(o).unwrap(), vec![GateId(0)]);
        assert!(n.fanin_cone(a).unwrap().is_empty());
        assert!(n.fanout_cone(NetId(99)).is_err());
    }

    #[test]
    fn diamond_apex_fanout_covers_all_gates() {
        let n = parse_bench("INPUT(a)\nOUTPUT(o)\nx = NOT(a)\ny = NOT(x)\nz = NOT(a)\no = AND(y, z)\n")
            .unwrap();
        let a = n.net_by_name("a").unwrap();
        assert_eq!(n.fanout_cone(a).unwrap().len(), 4);
    }
}
