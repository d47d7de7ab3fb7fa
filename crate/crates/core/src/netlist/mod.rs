//! Gate-level combinational netlist IR.
//!
//! A [`Netlist`] is immutable once built. Passes that rewrite a circuit go
//! through [`NetlistBuilder`], which only lets a gate reference nets that
//! already exist and therefore cannot produce a cycle.

mod bench;
mod gen;
mod topo;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bench::{emit_bench, parse_bench};
pub use gen::{random_netlist, RandomCircuit};
pub use topo::{topo_order, TopoOrder};

/// Prefix that marks a BENCH input as a key input.
pub const KEY_INPUT_PREFIX: &str = "keyinput";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NetId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GateId(pub u32);

impl NetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl GateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
    ];

    pub fn bench_name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
        }
    }

    /// Case-insensitive; accepts the ISCAS spelling `BUFF`.
    pub fn from_bench_name(s: &str) -> Option<GateKind> {
        let upper = s.to_ascii_uppercase();
        Some(match upper.as_str() {
            "AND" => GateKind::And,
            "NAND" => GateKind::Nand,
            "OR" => GateKind::Or,
            "NOR" => GateKind::Nor,
            "XOR" => GateKind::Xor,
            "XNOR" => GateKind::Xnor,
            "NOT" | "INV" => GateKind::Not,
            "BUF" | "BUFF" => GateKind::Buf,
            _ => return None,
        })
    }

    pub fn is_unary(self) -> bool {
        matches!(self, GateKind::Not | GateKind::Buf)
    }

    pub fn arity_ok(self, n: usize) -> bool {
        if self.is_unary() {
            n == 1
        } else {
            n >= 2
        }
    }

    /// Bit-parallel evaluation over 64 patterns.
    #[inline]
    pub fn eval_word<I: IntoIterator<Item = u64>>(self, inputs: I) -> u64 {
        let mut it = inputs.into_iter();
        let first = it.next().unwrap_or(0);
        match self {
            GateKind::And => it.fold(first, |a, b| a & b),
            GateKind::Nand => !it.fold(first, |a, b| a & b),
            GateKind::Or => it.fold(first, |a, b| a | b),
            GateKind::Nor => !it.fold(first, |a, b| a | b),
            GateKind::Xor => it.fold(first, |a, b| a ^ b),
            GateKind::Xnor => !it.fold(first, |a, b| a ^ b),
            GateKind::Not => !first,
            GateKind::Buf => first,
        }
    }

    #[inline]
    pub fn eval_bits<I: IntoIterator<Item = bool>>(self, inputs: I) -> bool {
        self.eval_word(inputs.into_iter().map(|b| if b { !0 } else { 0 })) & 1 == 1
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.bench_name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Driver {
    PrimaryInput(usize),
    KeyInput(usize),
    Gate(GateId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Net {
    pub name: String,
    pub driver: Driver,
    /// Distinct sink gates in ascending id order.
    pub sinks: Vec<GateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: net `{name}` is used but never driven")]
    UndefinedNet { line: usize, name: String },
    #[error("line {line}: net `{name}` has more than one driver")]
    MultipleDrivers { line: usize, name: String },
    #[error("combinational cycle through net `{0}`")]
    Cycle(String),
    #[error("line {line}: {kind} gate with {got} inputs")]
    Arity { line: usize, kind: GateKind, got: usize },
    #[error("unknown net `{0}`")]
    UnknownNet(String),
    #[error("invalid net name `{0}`")]
    InvalidName(String),
    #[error("key inputs must be numbered keyinput0..keyinput{max}: missing keyinput{missing}")]
    KeyNumbering { max: usize, missing: usize },
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '=' | '#'))
}

/// Returns the key index when `name` follows the `keyinput<i>` convention.
pub fn key_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix(KEY_INPUT_PREFIX)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // Leading zeros would break the round trip of the index.
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

#[derive(Clone, Debug)]
pub struct Netlist {
    name: String,
    nets: Vec<Net>,
    gates: Vec<Gate>,
    primary_inputs: Vec<NetId>,
    key_inputs: Vec<NetId>,
    primary_outputs: Vec<NetId>,
    eval_order: Vec<GateId>,
    by_name: HashMap<String, NetId>,
}

impl PartialEq for Netlist {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.nets == other.nets
            && self.gates == other.gates
            && self.primary_inputs == other.primary_inputs
            && self.key_inputs == other.key_inputs
            && self.primary_outputs == other.primary_outputs
    }
}

impl Eq for Netlist {}

impl Netlist {
    /// Validates raw tables and computes sinks and evaluation order.
    ///
    /// `nets[i].sinks` is recomputed; whatever the caller put there is ignored.
    pub(crate) fn assemble(
        name: String,
        mut nets: Vec<Net>,
        gates: Vec<Gate>,
        primary_inputs: Vec<NetId>,
        key_inputs: Vec<NetId>,
        primary_outputs: Vec<NetId>,
    ) -> Result<Netlist, NetlistError> {
        let mut by_name = HashMap::with_capacity(nets.len());
        for (i, net) in nets.iter_mut().enumerate() {
            if !is_valid_name(&net.name) {
                return Err(NetlistError::InvalidName(net.name.clone()));
            }
            if by_name.insert(net.name.clone(), NetId(i as u32)).is_some() {
                return Err(NetlistError::MultipleDrivers { line: 0, name: net.name.clone() });
            }
            net.sinks.clear();
        }
        for (gi, gate) in gates.iter().enumerate() {
            if !gate.kind.arity_ok(gate.inputs.len()) {
                return Err(NetlistError::Arity { line: 0, kind: gate.kind, got: gate.inputs.len() });
            }
            for &inp in &gate.inputs {
                let net = nets
                    .get_mut(inp.index())
                    .ok_or_else(|| NetlistError::UnknownNet(inp.to_string()))?;
                let g = GateId(gi as u32);
                if net.sinks.last() != Some(&g) {
                    net.sinks.push(g);
                }
            }
            match nets.get(gate.output.index()) {
                Some(net) if net.driver == Driver::Gate(GateId(gi as u32)) => {}
                Some(net) => {
                    return Err(NetlistError::MultipleDrivers { line: 0, name: net.name.clone() })
                }
                None => return Err(NetlistError::UnknownNet(gate.output.to_string())),
            }
        }
        for net in &mut nets {
            net.sinks.sort_unstable();
            net.sinks.dedup();
        }
        for (pos, &pi) in primary_inputs.iter().enumerate() {
            if nets.get(pi.index()).map(|n| n.driver) != Some(Driver::PrimaryInput(pos)) {
                return Err(NetlistError::UnknownNet(pi.to_string()));
            }
        }
        for (pos, &ki) in key_inputs.iter().enumerate() {
            if nets.get(ki.index()).map(|n| n.driver) != Some(Driver::KeyInput(pos)) {
                return Err(NetlistError::UnknownNet(ki.to_string()));
            }
        }
        for &po in &primary_outputs {
            if po.index() >= nets.len() {
                return Err(NetlistError::UnknownNet(po.to_string()));
            }
        }
        let mut netlist = Netlist {
            name,
            nets,
            gates,
            primary_inputs,
            key_inputs,
            primary_outputs,
            eval_order: Vec::new(),
            by_name,
        };
        netlist.eval_order = topo::kahn_order(&netlist)?;
        Ok(netlist)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nets(&self) -> &[Net] {
        &self.nets
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn net(&self, id: NetId) -> &Net {
        &self.nets[id.index()]
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id.index()]
    }

    pub fn net_name(&self, id: NetId) -> &str {
        &self.nets[id.index()].name
    }

    pub fn net_by_name(&self, name: &str) -> Option<NetId> {
        self.by_name.get(name).copied()
    }

    pub fn primary_inputs(&self) -> &[NetId] {
        &self.primary_inputs
    }

    pub fn key_inputs(&self) -> &[NetId] {
        &self.key_inputs
    }

    pub fn primary_outputs(&self) -> &[NetId] {
        &self.primary_outputs
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn net_count(&self) -> usize {
        self.nets.len()
    }

    /// A topological order of the gates (the order simulation uses).
    pub fn eval_order(&self) -> &[GateId] {
        &self.eval_order
    }

    pub fn driver_gate(&self, net: NetId) -> Option<GateId> {
        match self.nets[net.index()].driver {
            Driver::Gate(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_key_input(&self, net: NetId) -> bool {
        matches!(self.nets[net.index()].driver, Driver::KeyInput(_))
    }

    pub fn is_primary_input(&self, net: NetId) -> bool {
        matches!(self.nets[net.index()].driver, Driver::PrimaryInput(_))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Netlist {
        self.name = name.into();
        self
    }

    /// Transitive fan-in cone of `net`, including the net's own driver.
    pub fn fanin_cone(&self, net: NetId) -> Result<Vec<GateId>, NetlistError> {
        self.check_net(net)?;
        Ok(topo::fanin_cone(self, net))
    }

    /// Transitive fan-out cone of `net`; the net's own driver is excluded.
    pub fn fanout_cone(&self, net: NetId) -> Result<Vec<GateId>, NetlistError> {
        self.check_net(net)?;
        Ok(topo::fanout_cone(self, net))
    }

    fn check_net(&self, net: NetId) -> Result<(), NetlistError> {
        if net.index() < self.nets.len() {
            Ok(())
        } else {
            Err(NetlistError::UnknownNet(net.to_string()))
        }
    }

    pub fn builder(name: impl Into<String>) -> NetlistBuilder {
        NetlistBuilder::new(name)
    }
}

/// Incremental constructor. Gates may only reference existing nets.
#[derive(Clone, Debug)]
pub struct NetlistBuilder {
    name: String,
    nets: Vec<Net>,
    gates: Vec<Gate>,
    primary_inputs: Vec<NetId>,
    key_inputs: Vec<NetId>,
    primary_outputs: Vec<NetId>,
    by_name: HashMap<String, NetId>,
    reserved: HashSet<String>,
    fresh_counter: u64,
}

impl NetlistBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetlistBuilder {
            name: name.into(),
            nets: Vec::new(),
            gates: Vec::new(),
            primary_inputs: Vec::new(),
            key_inputs: Vec::new(),
            primary_outputs: Vec::new(),
            by_name: HashMap::new(),
            reserved: HashSet::new(),
            fresh_counter: 0,
        }
    }

    fn add_net(&mut self, name: String, driver: Driver) -> Result<NetId, NetlistError> {
        if !is_valid_name(&name) {
            return Err(NetlistError::InvalidName(name));
        }
        let id = NetId(self.nets.len() as u32);
        if self.by_name.contains_key(&name) {
            return Err(NetlistError::MultipleDrivers { line: 0, name });
        }
        self.by_name.insert(name.clone(), id);
        self.nets.push(Net { name, driver, sinks: Vec::new() });
        Ok(id)
    }

    pub fn add_primary_input(&mut self, name: impl Into<String>) -> Result<NetId, NetlistError> {
        let name = name.into();
        if key_index(&name).is_some() {
            return Err(NetlistError::InvalidName(name));
        }
        let pos = self.primary_inputs.len();
        let id = self.add_net(name, Driver::PrimaryInput(pos))?;
        self.primary_inputs.push(id);
        Ok(id)
    }

    /// Adds the next key input, named `keyinput<i>`.
    pub fn add_key_input(&mut self) -> Result<NetId, NetlistError> {
        let pos = self.key_inputs.len();
        let id = self.add_net(format!("{KEY_INPUT_PREFIX}{pos}"), Driver::KeyInput(pos))?;
        self.key_inputs.push(id);
        Ok(id)
    }

    pub fn add_gate(
        &mut self,
        kind: GateKind,
        inputs: Vec<NetId>,
        output: impl Into<String>,
    ) -> Result<NetId, NetlistError> {
        if !kind.arity_ok(inputs.len()) {
            return Err(NetlistError::Arity { line: 0, kind, got: inputs.len() });
        }
        if let Some(bad) = inputs.iter().find(|i| i.index() >= self.nets.len()) {
            return Err(NetlistError::UnknownNet(bad.to_string()));
        }
        let gid = GateId(self.gates.len() as u32);
        let out = self.add_net(output.into(), Driver::Gate(gid))?;
        self.gates.push(Gate { kind, inputs, output: out });
        Ok(out)
    }

    pub fn add_output(&mut self, net: NetId) {
        self.primary_outputs.push(net);
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    pub fn net_by_name(&self, name: &str) -> Option<NetId> {
        self.by_name.get(name).copied()
    }

    pub fn net_name(&self, id: NetId) -> &str {
        &self.nets[id.index()].name
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Keeps `fresh_name` away from names that will be added later.
    pub fn reserve<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) {
        self.reserved.extend(names.into_iter().map(str::to_string));
    }

    /// A name of the form `<prefix><counter>` not used or reserved so far.
    pub fn fresh_name(&mut self, prefix: &str) -> String {
        loop {
            let candidate = format!("{prefix}{}", self.fresh_counter);
            self.fresh_counter += 1;
            if !self.by_name.contains_key(&candidate)
                && !self.reserved.contains(&candidate)
                && key_index(&candidate).is_none()
            {
                return candidate;
            }
        }
    }

    /// Renumbers nets canonically (primary inputs, key inputs, then gate
    /// outputs in gate order) and validates the result.
    pub fn build(self) -> Result<Netlist, NetlistError> {
        let NetlistBuilder { name, nets, gates, primary_inputs, key_inputs, primary_outputs, .. } = self;
        let mut remap = vec![NetId(u32::MAX); nets.len()];
        let mut order: Vec<usize> = Vec::with_capacity(nets.len());
        for id in primary_inputs.iter().chain(key_inputs.iter()) {
            order.push(id.index());
        }
        for g in &gates {
            order.push(g.output.index());
        }
        for (new, &old) in order.iter().enumerate() {
            remap[old] = NetId(new as u32);
        }
        let mut old_nets: Vec<Option<Net>> = nets.into_iter().map(Some).collect();
        let new_nets: Vec<Net> =
            order.iter().map(|&old| old_nets[old].take().expect("each net listed once")).collect();
        let gates: Vec<Gate> = gates
            .into_iter()
            .map(|g| Gate {
                kind: g.kind,
                inputs: g.inputs.iter().map(|i| remap[i.index()]).collect(),
                output: remap[g.output.index()],
            })
            .collect();
        Netlist::assemble(
            name,
            new_nets,
            gates,
            primary_inputs.iter().map(|i| remap[i.index()]).collect(),
            key_inputs.iter().map(|i| remap[i.index()]).collect(),
            primary_outputs.iter().map(|i| remap[i.index()]).collect(),
        )
    }
}
