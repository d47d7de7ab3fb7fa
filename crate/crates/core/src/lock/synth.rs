//! Truth-table synthesis into staged gates.
//!
//! Functions are decomposed on their highest variable first (key bits sit
//! on top), with cofactor pruning into AND/OR/XOR/NOT. A memo keyed by
//! `(variables, reduced table)` shares logic, and can be seeded with lazy
//! copies of a partition's original gates so the correct-key branch reuses
//! the original structure.

use std::collections::HashMap;

use thiserror::Error;

use super::truth::BooleanFunction;
use super::work::Work;
use crate::netlist::{GateKind, NetId, Netlist};
use crate::sim::{exhaustive_word, lane_mask};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("net {net} has label {label}, not below the output level {bound}")]
    Bound { net: u32, label: u32, bound: u32 },
}

#[derive(Clone, Debug)]
pub(crate) struct StagedGate {
    pub kind: GateKind,
    pub inputs: Vec<u32>,
}

#[derive(Clone, Copy, Debug)]
enum Seed {
    Net(u32),
    /// Copy of an original partition net, optionally under the input
    /// substitution of variant `v`.
    Copy(NetId, Option<usize>),
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    seed: Seed,
    label: u32,
}

/// Original partition structure available for copying.
pub(crate) struct Source<'a> {
    pub netlist: &'a Netlist,
    pub assignment: &'a [u32],
    pub part: u32,
}

impl Source<'_> {
    fn inside(&self, net: NetId) -> bool {
        self.netlist.driver_gate(net).is_some_and(|g| self.assignment[g.index()] == self.part)
    }
}

pub(crate) struct Stage<'a> {
    work: &'a Work,
    src: Source<'a>,
    base: u32,
    pub gates: Vec<StagedGate>,
    labels: Vec<u32>,
    memo: HashMap<(Vec<u32>, BooleanFunction), Entry>,
    copies: HashMap<(u32, Option<usize>), u32>,
    substitutions: Vec<HashMap<u32, u32>>,
    tie: u32,
}

impl<'a> Stage<'a> {
    /// `tie` is a net with label 0, used to build constants.
    pub fn new(work: &'a Work, src: Source<'a>, tie: u32) -> Self {
        Stage {
            base: work.net_count() as u32,
            work,
            src,
            gates: Vec::new(),
            labels: Vec::new(),
            memo: HashMap::new(),
            copies: HashMap::new(),
            substitutions: Vec::new(),
            tie,
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn label(&self, net: u32) -> u32 {
        if net < self.base {
            self.work.label[net as usize]
        } else {
            self.labels[(net - self.base) as usize]
        }
    }

    fn emit(&mut self, kind: GateKind, inputs: Vec<u32>) -> u32 {
        let label = inputs.iter().map(|&i| self.label(i)).max().unwrap_or(0);
        let id = self.base + self.gates.len() as u32;
        self.gates.push(StagedGate { kind, inputs });
        self.labels.push(label);
        id
    }

    pub fn xor(&mut self, a: u32, b: u32) -> u32 {
        self.emit(GateKind::Xor, vec![a, b])
    }

    /// Registers a substitution (original net -> replacement) and returns
    /// its variant number.
    pub fn add_substitution(&mut self, map: HashMap<u32, u32>) -> usize {
        self.substitutions.push(map);
        self.substitutions.len() - 1
    }

    /// Label a copy of `net` would get, without building it.
    pub fn copy_label(&self, net: NetId, variant: Option<usize>) -> u32 {
        let mut best = 0;
        let mut stack = vec![net];
        let mut seen = std::collections::HashSet::new();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            if let Some(&r) = variant.and_then(|v| self.substitutions[v].get(&n.0)) {
                best = best.max(self.label(r));
            } else if self.src.inside(n) {
                let g = self.src.netlist.driver_gate(n).expect("inside nets have drivers");
                stack.extend(self.src.netlist.gate(g).inputs.iter().copied());
            } else {
                best = best.max(self.label(n.0));
            }
        }
        best
    }

    /// Staged copy of original net `net` (external nets are returned as is).
    pub fn copy(&mut self, net: NetId, variant: Option<usize>) -> u32 {
        if let Some(&r) = variant.and_then(|v| self.substitutions[v].get(&net.0)) {
            return r;
        }
        if !self.src.inside(net) {
            return net.0;
        }
        if let Some(&c) = self.copies.get(&(net.0, variant)) {
            return c;
        }
        let g = self.src.netlist.driver_gate(net).expect("inside nets have drivers");
        let gate = self.src.netlist.gate(g);
        let kind = gate.kind;
        let ins: Vec<NetId> = gate.inputs.clone();
        let inputs: Vec<u32> = ins.iter().map(|&i| self.copy(i, variant)).collect();
        let c = self.emit(kind, inputs);
        self.copies.insert((net.0, variant), c);
        c
    }

    fn insert(&mut self, key: (Vec<u32>, BooleanFunction), entry: Entry) {
        match self.memo.get(&key) {
            Some(e) if e.label <= entry.label => {}
            _ => {
                self.memo.insert(key, entry);
            }
        }
    }

    /// Makes `(vars, table)` resolve to a lazy copy of original net `net`.
    pub fn seed_copy(&mut self, vars: &[u32], table: &BooleanFunction, net: NetId, variant: Option<usize>) {
        let (keep, t) = table.reduce();
        let vars: Vec<u32> = keep.iter().map(|&i| vars[i]).collect();
        let label = self.copy_label(net, variant);
        self.insert((vars, t), Entry { seed: Seed::Copy(net, variant), label });
    }

    fn lookup(&mut self, vars: &[u32], f: &BooleanFunction, bound: u32) -> Option<u32> {
        let key = (vars.to_vec(), f.clone());
        let e = *self.memo.get(&key)?;
        if e.label >= bound {
            return None;
        }
        let net = match e.seed {
            Seed::Net(n) => n,
            Seed::Copy(net, variant) => {
                let n = self.copy(net, variant);
                self.memo.insert(key, Entry { seed: Seed::Net(n), label: self.label(n) });
                n
            }
        };
        Some(net)
    }

    fn remember(&mut self, vars: Vec<u32>, f: BooleanFunction, net: u32) {
        let label = self.label(net);
        self.insert((vars, f), Entry { seed: Seed::Net(net), label });
    }

    fn constant(&mut self, value: bool) -> u32 {
        let key = (Vec::new(), BooleanFunction::constant(0, value));
        if let Some(e) = self.memo.get(&key) {
            if let Seed::Net(n) = e.seed {
                return n;
            }
        }
        let kind = if value { GateKind::Xnor } else { GateKind::Xor };
        let n = self.emit(kind, vec![self.tie, self.tie]);
        self.remember(key.0, key.1, n);
        n
    }

    fn not(&mut self, v: u32) -> u32 {
        let f = BooleanFunction::var(1, 0).not();
        if let Some(e) = self.memo.get(&(vec![v], f.clone())) {
            if let Seed::Net(n) = e.seed {
                return n;
            }
        }
        let n = self.emit(GateKind::Not, vec![v]);
        self.remember(vec![v], f, n);
        n
    }

    /// Net computing `f` over `vars`; every net used has label below
    /// `bound`.
    pub fn realize(&mut self, vars: &[u32], f: &BooleanFunction, bound: u32) -> Result<u32, SynthError> {
        let (keep, g) = f.reduce();
        let vars: Vec<u32> = keep.iter().map(|&i| vars[i]).collect();
        for &v in &vars {
            let label = self.label(v);
            if label >= bound {
                return Err(SynthError::Bound { net: v, label, bound });
            }
        }
        self.realize_reduced(vars, g, bound)
    }

    fn realize_reduced(&mut self, vars: Vec<u32>, f: BooleanFunction, bound: u32) -> Result<u32, SynthError> {
        if f.arity() == 0 {
            return Ok(self.constant(f.get(0)));
        }
        if let Some(n) = self.lookup(&vars, &f, bound) {
            return Ok(n);
        }
        if f.arity() == 1 {
            // Reduced, so f is the variable or its complement.
            return Ok(if f.get(1) { vars[0] } else { self.not(vars[0]) });
        }
        let comp = f.not();
        if let Some(n) = self.lookup(&vars, &comp, bound) {
            let out = self.emit(GateKind::Not, vec![n]);
            self.remember(vars, f, out);
            return Ok(out);
        }
        let top = vars.len() - 1;
        let s = vars[top];
        let rest = &vars[..top];
        let f0 = f.cofactor_top(false);
        let f1 = f.cofactor_top(true);
        let out = if f0 == f1.not() {
            let a = self.realize(rest, &f0, bound)?;
            self.emit(GateKind::Xor, vec![s, a])
        } else if f0.is_zero() {
            let a = self.realize(rest, &f1, bound)?;
            self.emit(GateKind::And, vec![s, a])
        } else if f1.is_one() {
            let a = self.realize(rest, &f0, bound)?;
            self.emit(GateKind::Or, vec![s, a])
        } else if f1.is_zero() {
            let a = self.realize(rest, &f0, bound)?;
            let ns = self.not(s);
            self.emit(GateKind::And, vec![ns, a])
        } else if f0.is_one() {
            let a = self.realize(rest, &f1, bound)?;
            let ns = self.not(s);
            self.emit(GateKind::Or, vec![ns, a])
        } else {
            let hi = self.realize(rest, &f1, bound)?;
            let lo = self.realize(rest, &f0, bound)?;
            let ns = self.not(s);
            let a = self.emit(GateKind::And, vec![s, hi]);
            let b = self.emit(GateKind::And, vec![ns, lo]);
            self.emit(GateKind::Or, vec![a, b])
        };
        self.remember(vars, f, out);
        Ok(out)
    }

    /// Staged gates (offsets from `base`) in the cone of `root`, ascending.
    pub fn cone(&self, roots: &[u32]) -> Vec<usize> {
        let mut seen = vec![false; self.gates.len()];
        let mut stack: Vec<u32> = roots.iter().copied().filter(|&r| r >= self.base).collect();
        while let Some(n) = stack.pop() {
            let i = (n - self.base) as usize;
            if std::mem::replace(&mut seen[i], true) {
                continue;
            }
            stack.extend(self.gates[i].inputs.iter().copied().filter(|&x| x >= self.base));
        }
        (0..self.gates.len()).filter(|&i| seen[i]).collect()
    }

    /// Exhaustively simulates `root` over `vars` and compares with `table`.
    pub fn verify(&self, root: u32, vars: &[u32], table: &BooleanFunction) -> bool {
        let a = vars.len();
        assert_eq!(table.arity(), a);
        let cone = self.cone(&[root]);
        let leaf_pos: HashMap<u32, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut slot = vec![usize::MAX; self.gates.len()];
        for (j, &i) in cone.iter().enumerate() {
            slot[i] = j;
        }
        enum Src {
            Var(usize),
            Gate(usize),
            // Tie-gate input outside `vars`; constants ignore its value.
            Tie,
        }
        let resolve = |n: u32| -> Option<Src> {
            if n >= self.base {
                Some(Src::Gate(slot[(n - self.base) as usize]))
            } else if let Some(&p) = leaf_pos.get(&n) {
                Some(Src::Var(p))
            } else if n == self.tie {
                Some(Src::Tie)
            } else {
                None
            }
        };
        let Some(root_src) = resolve(root) else { return false };
        let mut plan: Vec<(GateKind, Vec<Src>)> = Vec::with_capacity(cone.len());
        for &i in &cone {
            let g = &self.gates[i];
            let mut ins = Vec::with_capacity(g.inputs.len());
            for &x in &g.inputs {
                match resolve(x) {
                    Some(s) => ins.push(s),
                    None => return false,
                }
            }
            plan.push((g.kind, ins));
        }
        let batches = if a <= 6 { 1 } else { 1u64 << (a - 6) };
        let mask = lane_mask(1u64 << a.min(6));
        let mut val = vec![0u64; plan.len()];
        for b in 0..batches {
            let var = |p: usize| exhaustive_word(p, b);
            for (j, (kind, ins)) in plan.iter().enumerate() {
                let w = kind.eval_word(ins.iter().map(|s| match *s {
                    Src::Var(p) => var(p),
                    Src::Gate(q) => val[q],
                    Src::Tie => 0x5A5A_5A5A_5A5A_5A5A,
                }));
                val[j] = w;
            }
            let got = match root_src {
                Src::Var(p) => var(p),
                Src::Gate(q) => val[q],
                Src::Tie => return false,
            } & mask;
            if got != table.words()[b as usize] {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_bench, topo_order};

    fn setup(src: &str) -> (Netlist, Vec<u32>) {
        let n = parse_bench(src).unwrap();
        let a = vec![0; n.gate_count()];
        (n, a)
    }

    #[test]
    fn inverted_and_is_an_xor_key_gate() {
        let (n, a) = setup("INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nOUTPUT(o)\no = AND(a, b)\n");
        let t = topo_order(&n).unwrap();
        let w = Work::new(&n, &t);
        let k = n.key_inputs()[0].0;
        let mut st = Stage::new(&w, Source { netlist: &n, assignment: &a, part: 0 }, k);
        let vars = [n.primary_inputs()[0].0, n.primary_inputs()[1].0, k];
        let and = BooleanFunction::from_bits_str("0001").unwrap();
        st.seed_copy(&vars[..2], &and, n.primary_outputs()[0], None);
        let f = BooleanFunction::from_fn(3, |j| ((j & 1 == 1) && (j & 2 == 2)) ^ (j & 4 == 4));
        let root = st.realize(&vars, &f, 5).unwrap();
        assert!(st.verify(root, &vars, &f));
        let kinds: Vec<GateKind> = st.gates.iter().map(|g| g.kind).collect();
        assert_eq!(kinds, [GateKind::And, GateKind::Xor]);
    }

    #[test]
    fn constant_uses_tie_gate() {
        let (n, a) = setup("INPUT(a)\nINPUT(keyinput0)\nOUTPUT(o)\no = NOT(a)\n");
        let t = topo_order(&n).unwrap();
        let w = Work::new(&n, &t);
        let k = n.key_inputs()[0].0;
        let mut st = Stage::new(&w, Source { netlist: &n, assignment: &a, part: 0 }, k);
        let vars = [n.primary_inputs()[0].0];
        let zero = BooleanFunction::zero(1);
        let r = st.realize(&vars, &zero, 5).unwrap();
        assert_eq!(st.gates.len(), 1);
        assert_eq!(st.gates[0].kind, GateKind::Xor);
        assert!(st.verify(r, &vars, &zero));
    }

    #[test]
    fn random_functions_resynthesize_exactly() {
        let src: String = (0..6).map(|i| format!("INPUT(x{i})\n")).collect::<String>() + "OUTPUT(x0)\n";
        let (n, a) = setup(&src);
        let t = topo_order(&n).unwrap();
        let w = Work::new(&n, &t);
        let vars: Vec<u32> = n.primary_inputs().iter().map(|x| x.0).collect();
        for seed in 0..30u64 {
            let arity = 2 + (seed as usize % 5);
            let f = BooleanFunction::from_fn(arity, |j| {
                (j as u64).wrapping_mul(0x9E37_79B9).wrapping_add(seed * 77).is_multiple_of(3)
            });
            let mut st = Stage::new(&w, Source { netlist: &n, assignment: &a, part: 0 }, vars[0]);
            let r = st.realize(&vars[..arity], &f, 1).unwrap();
            assert!(st.verify(r, &vars[..arity], &f), "seed {seed}");
        }
    }

    #[test]
    fn bound_is_enforced() {
        let (n, a) = setup("INPUT(a)\nINPUT(b)\nOUTPUT(o)\nx = NOT(a)\no = AND(x, b)\n");
        let t = topo_order(&n).unwrap();
        let w = Work::new(&n, &t);
        let x = n.net_by_name("x").unwrap().0;
        let mut st = Stage::new(&w, Source { netlist: &n, assignment: &a, part: 0 }, 0);
        let f = BooleanFunction::var(1, 0);
        assert!(matches!(st.realize(&[x], &f, 1), Err(SynthError::Bound { .. })));
        assert!(st.realize(&[x], &f, 2).is_ok());
    }
}
