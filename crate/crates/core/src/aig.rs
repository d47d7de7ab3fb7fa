//! Rewriting into two-input AND gates and inverters.

use crate::netlist::{GateKind, NetId, Netlist, NetlistBuilder};

const PREFIX: &str = "aig_";

struct Rewriter {
    b: NetlistBuilder,
}

impl Rewriter {
    fn gate(&mut self, kind: GateKind, inputs: Vec<NetId>, name: Option<&str>) -> NetId {
        let name = match name {
            Some(n) => n.to_string(),
            None => self.b.fresh_name(PREFIX),
        };
        self.b.add_gate(kind, inputs, name).expect("rewrite emits valid gates")
    }

    fn not(&mut self, a: NetId, name: Option<&str>) -> NetId {
        self.gate(GateKind::Not, vec![a], name)
    }

    fn and(&mut self, a: NetId, b: NetId, name: Option<&str>) -> NetId {
        self.gate(GateKind::And, vec![a, b], name)
    }

    /// Left-leaning AND chain; the last gate takes `name`.
    fn and_tree(&mut self, ins: &[NetId], name: Option<&str>) -> NetId {
        let mut acc = ins[0];
        for (i, &x) in ins.iter().enumerate().skip(1) {
            let last = i + 1 == ins.len();
            acc = self.and(acc, x, if last { name } else { None });
        }
        acc
    }

    fn xor2(&mut self, a: NetId, b: NetId, name: Option<&str>) -> NetId {
        let both = self.and(a, b, None);
        let nboth = self.not(both, None);
        let na = self.not(a, None);
        let nb = self.not(b, None);
        let neither = self.and(na, nb, None);
        let some = self.not(neither, None);
        self.and(nboth, some, name)
    }

    fn xor_tree(&mut self, ins: &[NetId], name: Option<&str>) -> NetId {
        let mut acc = ins[0];
        for (i, &x) in ins.iter().enumerate().skip(1) {
            let last = i + 1 == ins.len();
            acc = self.xor2(acc, x, if last { name } else { None });
        }
        acc
    }

    fn nots(&mut self, ins: &[NetId]) -> Vec<NetId> {
        ins.iter().map(|&i| self.not(i, None)).collect()
    }
}

/// Functionally equivalent netlist using only `AND` (two inputs) and `NOT`.
/// Buffers become wire aliases, so a primary output may end up naming the
/// buffered net instead.
pub fn to_aig(netlist: &Netlist) -> Netlist {
    let mut b = NetlistBuilder::new(netlist.name());
    b.reserve(netlist.nets().iter().map(|n| n.name.as_str()));
    let mut map = vec![NetId(u32::MAX); netlist.net_count()];
    for &pi in netlist.primary_inputs() {
        map[pi.index()] = b.add_primary_input(netlist.net_name(pi)).expect("valid source names");
    }
    for &k in netlist.key_inputs() {
        map[k.index()] = b.add_key_input().expect("key names are canonical");
    }
    let mut r = Rewriter { b };
    for &g in netlist.eval_order() {
        let gate = netlist.gate(g);
        let ins: Vec<NetId> = gate.inputs.iter().map(|i| map[i.index()]).collect();
        let name = Some(netlist.net_name(gate.output));
        let out = match gate.kind {
            GateKind::Buf => ins[0],
            GateKind::Not => r.not(ins[0], name),
            GateKind::And => r.and_tree(&ins, name),
            GateKind::Nand => {
                let a = r.and_tree(&ins, None);
                r.not(a, name)
            }
            GateKind::Or => {
                let n = r.nots(&ins);
                let a = r.and_tree(&n, None);
                r.not(a, name)
            }
            GateKind::Nor => {
                let n = r.nots(&ins);
                r.and_tree(&n, name)
            }
            GateKind::Xor => r.xor_tree(&ins, name),
            GateKind::Xnor => {
                let x = r.xor_tree(&ins, None);
                r.not(x, name)
            }
        };
        map[gate.output.index()] = out;
    }
    let mut b = r.b;
    for &po in netlist.primary_outputs() {
        b.add_output(map[po.index()]);
    }
    b.build().expect("rewrite preserves acyclicity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;
    use crate::sim::{equivalence_check, PatternMode};

    fn check(src: &str) -> Netlist {
        let n = parse_bench(src).unwrap();
        let a = to_aig(&n);
        assert!(a
            .gates()
            .iter()
            .all(|g| g.kind == GateKind::Not || (g.kind == GateKind::And && g.inputs.len() == 2)));
        let r = equivalence_check(&n, &a, &[], PatternMode::Exhaustive).unwrap();
        assert!(r.equivalent(), "{src}");
        a
    }

    fn count(n: &Netlist, kind: GateKind) -> usize {
        n.gates().iter().filter(|g| g.kind == kind).count()
    }

    #[test]
    fn or_is_de_morgan() {
        let a = check("INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = OR(a, b)\n");
        let o = a.gate(a.driver_gate(a.primary_outputs()[0]).unwrap());
        assert_eq!(o.kind, GateKind::Not);
        let inner = a.gate(a.driver_gate(o.inputs[0]).unwrap());
        assert_eq!(inner.kind, GateKind::And);
        for &i in &inner.inputs {
            let g = a.gate(a.driver_gate(i).unwrap());
            assert_eq!(g.kind, GateKind::Not);
            assert!(a.is_primary_input(g.inputs[0]));
        }
    }

    #[test]
    fn xor_shape() {
        let a = check("INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = XOR(a, b)\n");
        assert_eq!(count(&a, GateKind::And), 3);
        assert_eq!(count(&a, GateKind::Not), 4);
    }

    #[test]
    fn buffer_is_an_alias() {
        let a = check("INPUT(a)\nOUTPUT(o)\no = BUF(a)\n");
        assert_eq!(a.gate_count(), 0);
        assert_eq!(a.primary_outputs(), a.primary_inputs());
    }

    #[test]
    fn wide_gates_and_keys() {
        check(
            "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(p)\nOUTPUT(q)\nOUTPUT(r)\nOUTPUT(s)\n\
             p = NAND(a, b, c)\nq = NOR(a, b, d)\nr = XNOR(a, b, c)\nx = BUF(q)\ns = OR(x, r, a)\n",
        );
    }

    #[test]
    fn key_inputs_survive() {
        let n = parse_bench("INPUT(a)\nINPUT(keyinput0)\nOUTPUT(o)\no = XOR(a, keyinput0)\n").unwrap();
        let a = to_aig(&n);
        assert_eq!(a.key_inputs().len(), 1);
        assert_eq!(a.net_name(a.key_inputs()[0]), "keyinput0");
    }

    #[test]
    fn keeps_names_and_avoids_collisions() {
        let a = check("INPUT(a)\nINPUT(b)\nOUTPUT(aig_0)\nOUTPUT(o)\no = XOR(a, b)\naig_0 = NOT(o)\n");
        assert!(a.net_by_name("o").is_some());
        assert!(a.gate(a.driver_gate(a.net_by_name("aig_0").unwrap()).unwrap()).kind == GateKind::Not);
    }
}
