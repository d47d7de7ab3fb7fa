//! Mutable gate graph used while locking, compacted into a [`Netlist`] at
//! the end.
//!
//! Every net carries a label. Original nets keep their logic level; new
//! gates take the largest label among their inputs, and a rewritten
//! partition output keeps its original level. Labels never decrease along
//! an edge and strictly increase into every rewired output, which is what
//! keeps the graph acyclic.

use std::collections::{HashSet, VecDeque};

use crate::netlist::{Driver, GateKind, NetId, Netlist, NetlistBuilder, NetlistError, TopoOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum WDriver {
    Primary,
    Key,
    Gate(u32),
}

#[derive(Clone, Debug)]
pub(crate) struct WGate {
    pub kind: GateKind,
    pub inputs: Vec<u32>,
    pub output: u32,
    pub alive: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Work {
    pub name: String,
    pub names: Vec<String>,
    pub driver: Vec<WDriver>,
    pub label: Vec<u32>,
    pub sinks: Vec<Vec<u32>>,
    pub gates: Vec<WGate>,
    pub primary_inputs: Vec<u32>,
    pub key_inputs: Vec<u32>,
    pub primary_outputs: Vec<u32>,
    taken: HashSet<String>,
    counter: u64,
}

impl Work {
    /// Net and gate ids match `netlist`.
    pub fn new(netlist: &Netlist, topo: &TopoOrder) -> Self {
        let names: Vec<String> = netlist.nets().iter().map(|n| n.name.clone()).collect();
        let driver = netlist
            .nets()
            .iter()
            .map(|n| match n.driver {
                Driver::PrimaryInput(_) => WDriver::Primary,
                Driver::KeyInput(_) => WDriver::Key,
                Driver::Gate(g) => WDriver::Gate(g.0),
            })
            .collect();
        let label = (0..netlist.net_count()).map(|i| topo.net_level(netlist, NetId(i as u32))).collect();
        let sinks = netlist.nets().iter().map(|n| n.sinks.iter().map(|g| g.0).collect()).collect();
        let gates = netlist
            .gates()
            .iter()
            .map(|g| WGate {
                kind: g.kind,
                inputs: g.inputs.iter().map(|i| i.0).collect(),
                output: g.output.0,
                alive: true,
            })
            .collect();
        let taken = names.iter().cloned().collect();
        Work {
            name: netlist.name().to_string(),
            names,
            driver,
            label,
            sinks,
            gates,
            primary_inputs: netlist.primary_inputs().iter().map(|n| n.0).collect(),
            key_inputs: netlist.key_inputs().iter().map(|n| n.0).collect(),
            primary_outputs: netlist.primary_outputs().iter().map(|n| n.0).collect(),
            taken,
            counter: 0,
        }
    }

    pub fn net_count(&self) -> usize {
        self.names.len()
    }

    pub fn fresh_name(&mut self, prefix: &str) -> String {
        loop {
            let c = format!("{prefix}{}", self.counter);
            self.counter += 1;
            if !self.taken.contains(&c) {
                return c;
            }
        }
    }

    fn push_net(&mut self, name: String, driver: WDriver, label: u32) -> u32 {
        let id = self.names.len() as u32;
        self.taken.insert(name.clone());
        self.names.push(name);
        self.driver.push(driver);
        self.label.push(label);
        self.sinks.push(Vec::new());
        id
    }

    pub fn add_key_input(&mut self, name: String) -> u32 {
        let id = self.push_net(name, WDriver::Key, 0);
        self.key_inputs.push(id);
        id
    }

    /// New gate driving a new net.
    pub fn add_gate(&mut self, kind: GateKind, inputs: Vec<u32>, name: String, label: u32) -> u32 {
        let gid = self.gates.len() as u32;
        let out = self.push_net(name, WDriver::Gate(gid), label);
        for &i in &inputs {
            self.sinks[i as usize].push(gid);
        }
        self.gates.push(WGate { kind, inputs, output: out, alive: true });
        out
    }

    /// New gate driving the existing net `out`, whose old driver must
    /// already be dead.
    pub fn redrive(&mut self, kind: GateKind, inputs: Vec<u32>, out: u32) {
        let gid = self.gates.len() as u32;
        for &i in &inputs {
            self.sinks[i as usize].push(gid);
        }
        self.driver[out as usize] = WDriver::Gate(gid);
        self.gates.push(WGate { kind, inputs, output: out, alive: true });
    }

    pub fn kill(&mut self, gate: u32) {
        self.gates[gate as usize].alive = false;
    }

    /// Whether `target` is reachable forward from any of `from`. Only nets
    /// with label at most `label[target]` are explored, which is exact
    /// because labels never decrease along edges.
    pub fn reaches(&self, from: &[u32], target: u32) -> bool {
        let limit = self.label[target as usize];
        let mut seen = HashSet::new();
        let mut queue: VecDeque<u32> = from.iter().copied().collect();
        while let Some(n) = queue.pop_front() {
            if n == target {
                return true;
            }
            if !seen.insert(n) {
                continue;
            }
            for &g in &self.sinks[n as usize] {
                let gate = &self.gates[g as usize];
                if gate.alive && self.label[gate.output as usize] <= limit {
                    queue.push_back(gate.output);
                }
            }
        }
        false
    }

    /// Builds the final netlist from live gates in topological order.
    pub fn compact(&self) -> Result<Netlist, NetlistError> {
        let live: Vec<u32> = (0..self.gates.len() as u32).filter(|&g| self.gates[g as usize].alive).collect();
        let mut pending = vec![0usize; self.gates.len()];
        let mut users: Vec<Vec<u32>> = vec![Vec::new(); self.net_count()];
        for &g in &live {
            let gate = &self.gates[g as usize];
            for &i in &gate.inputs {
                if let WDriver::Gate(d) = self.driver[i as usize] {
                    debug_assert!(self.gates[d as usize].alive, "live gate reads dead net {}", self.names[i as usize]);
                    pending[g as usize] += 1;
                    users[i as usize].push(g);
                }
            }
        }
        let mut queue: VecDeque<u32> = live.iter().copied().filter(|&g| pending[g as usize] == 0).collect();
        let mut order = Vec::with_capacity(live.len());
        while let Some(g) = queue.pop_front() {
            order.push(g);
            for &u in &users[self.gates[g as usize].output as usize] {
                pending[u as usize] -= 1;
                if pending[u as usize] == 0 {
                    queue.push_back(u);
                }
            }
        }
        if order.len() != live.len() {
            let stuck = live.iter().find(|&&g| pending[g as usize] > 0).expect("stuck gate");
            let out = self.gates[*stuck as usize].output;
            return Err(NetlistError::Cycle(self.names[out as usize].clone()));
        }
        let mut b = NetlistBuilder::new(self.name.clone());
        let mut map = vec![NetId(u32::MAX); self.net_count()];
        for &pi in &self.primary_inputs {
            map[pi as usize] = b.add_primary_input(self.names[pi as usize].clone())?;
        }
        for &k in &self.key_inputs {
            let id = b.add_key_input()?;
            debug_assert_eq!(b.net_name(id), self.names[k as usize]);
            map[k as usize] = id;
        }
        for &g in &order {
            let gate = &self.gates[g as usize];
            let inputs = gate.inputs.iter().map(|&i| map[i as usize]).collect();
            map[gate.output as usize] = b.add_gate(gate.kind, inputs, self.names[gate.output as usize].clone())?;
        }
        for &o in &self.primary_outputs {
            b.add_output(map[o as usize]);
        }
        b.build()
    }
}
