//! ISCAS BENCH reader and writer.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::{
    is_valid_name, key_index, Driver, Gate, GateId, GateKind, Net, NetId, Netlist, NetlistError,
};

const NAME_MARKER: &str = "netlist:";

struct GateLine {
    line: usize,
    output: String,
    kind: GateKind,
    args: Vec<String>,
}

fn syntax(line: usize, msg: impl Into<String>) -> NetlistError {
    NetlistError::Syntax { line, msg: msg.into() }
}

/// Splits `KEYWORD(arg, ...)` into the keyword and its arguments.
fn call(text: &str, line: usize) -> Result<(&str, Vec<&str>), NetlistError> {
    let open = text.find('(').ok_or_else(|| syntax(line, "expected `(`"))?;
    let body = text[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| syntax(line, "expected `)` at end of statement"))?;
    if body.contains('(') || body.contains(')') {
        return Err(syntax(line, "unbalanced parentheses"));
    }
    let head = text[..open].trim();
    let args: Vec<&str> = if body.trim().is_empty() {
        Vec::new()
    } else {
        body.split(',').map(str::trim).collect()
    };
    for a in &args {
        if !is_valid_name(a) {
            return Err(syntax(line, format!("invalid net name `{a}`")));
        }
    }
    Ok((head, args))
}

pub fn parse_bench(text: &str) -> Result<Netlist, NetlistError> {
    let mut name = String::from("netlist");
    let mut inputs: Vec<(String, usize)> = Vec::new();
    let mut outputs: Vec<(String, usize)> = Vec::new();
    let mut gates: Vec<GateLine> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let (stmt, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(raw[p + 1..].trim())),
            None => (raw, None),
        };
        if let Some(c) = comment.and_then(|c| c.strip_prefix(NAME_MARKER)) {
            let c = c.trim();
            if !c.is_empty() {
                name = c.to_string();
            }
        }
        let stmt = stmt.trim();
        if stmt.is_empty() {
            continue;
        }
        if let Some(eq) = stmt.find('=') {
            let lhs = stmt[..eq].trim();
            if !is_valid_name(lhs) {
                return Err(syntax(line, format!("invalid net name `{lhs}`")));
            }
            let (head, args) = call(stmt[eq + 1..].trim(), line)?;
            let kind = GateKind::from_bench_name(head)
                .ok_or_else(|| syntax(line, format!("unsupported gate type `{head}`")))?;
            if !kind.arity_ok(args.len()) {
                return Err(NetlistError::Arity { line, kind, got: args.len() });
            }
            gates.push(GateLine {
                line,
                output: lhs.to_string(),
                kind,
                args: args.into_iter().map(String::from).collect(),
            });
        } else {
            let (head, args) = call(stmt, line)?;
            let target = match head.to_ascii_uppercase().as_str() {
                "INPUT" => &mut inputs,
                "OUTPUT" => &mut outputs,
                _ => return Err(syntax(line, format!("unknown statement `{head}`"))),
            };
            if args.len() != 1 {
                return Err(syntax(line, format!("{head} takes exactly one net")));
            }
            target.push((args[0].to_string(), line));
        }
    }

    let mut defined: HashSet<&str> = HashSet::new();
    for (n, line) in &inputs {
        if !defined.insert(n.as_str()) {
            return Err(NetlistError::MultipleDrivers { line: *line, name: n.clone() });
        }
    }
    for g in &gates {
        if !defined.insert(g.output.as_str()) {
            return Err(NetlistError::MultipleDrivers { line: g.line, name: g.output.clone() });
        }
    }

    let mut primary: Vec<&str> = Vec::new();
    let mut keyed: Vec<(usize, &str)> = Vec::new();
    for (n, _) in &inputs {
        match key_index(n) {
            Some(i) => keyed.push((i, n.as_str())),
            None => primary.push(n.as_str()),
        }
    }
    keyed.sort_unstable();
    for (pos, &(i, _)) in keyed.iter().enumerate() {
        if i != pos {
            return Err(NetlistError::KeyNumbering { max: keyed.len() - 1, missing: pos });
        }
    }

    let mut ids: HashMap<&str, NetId> = HashMap::new();
    let mut nets: Vec<Net> = Vec::with_capacity(inputs.len() + gates.len());
    let mut push = |n: &str, driver: Driver| {
        let id = NetId(nets.len() as u32);
        nets.push(Net { name: n.to_string(), driver, sinks: Vec::new() });
        id
    };
    let mut pis = Vec::with_capacity(primary.len());
    for (pos, n) in primary.iter().enumerate() {
        let id = push(n, Driver::PrimaryInput(pos));
        ids.insert(n, id);
        pis.push(id);
    }
    let mut keys = Vec::with_capacity(keyed.len());
    for (pos, (_, n)) in keyed.iter().enumerate() {
        let id = push(n, Driver::KeyInput(pos));
        ids.insert(n, id);
        keys.push(id);
    }
    for (gi, g) in gates.iter().enumerate() {
        let id = push(&g.output, Driver::Gate(GateId(gi as u32)));
        ids.insert(g.output.as_str(), id);
    }

    let resolve = |n: &str, line: usize| {
        ids.get(n).copied().ok_or_else(|| NetlistError::UndefinedNet { line, name: n.to_string() })
    };
    let mut gate_table = Vec::with_capacity(gates.len());
    for g in &gates {
        let inputs = g.args.iter().map(|a| resolve(a, g.line)).collect::<Result<Vec<_>, _>>()?;
        gate_table.push(Gate { kind: g.kind, inputs, output: ids[g.output.as_str()] });
    }
    let pos = outputs.iter().map(|(n, line)| resolve(n, *line)).collect::<Result<Vec<_>, _>>()?;

    Netlist::assemble(name, nets, gate_table, pis, keys, pos)
}

/// Writes BENCH text; `parse_bench` of the result reproduces `netlist`.
pub fn emit_bench(netlist: &Netlist) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {NAME_MARKER} {}", netlist.name());
    let _ = writeln!(
        out,
        "# {} inputs, {} key inputs, {} outputs, {} gates",
        netlist.primary_inputs().len(),
        netlist.key_inputs().len(),
        netlist.primary_outputs().len(),
        netlist.gate_count()
    );
    for &pi in netlist.primary_inputs() {
        let _ = writeln!(out, "INPUT({})", netlist.net_name(pi));
    }
    if !netlist.key_inputs().is_empty() {
        out.push_str("# key input\n");
        for &k in netlist.key_inputs() {
            let _ = writeln!(out, "INPUT({})", netlist.net_name(k));
        }
    }
    for &po in netlist.primary_outputs() {
        let _ = writeln!(out, "OUTPUT({})", netlist.net_name(po));
    }
    out.push('\n');
    for g in netlist.gates() {
        let _ = write!(out, "{} = {}(", netlist.net_name(g.output), g.kind.bench_name());
        for (i, &inp) in g.inputs.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(netlist.net_name(inp));
        }
        out.push_str(")\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let n = parse_bench("INPUT(a) \nINPUT(b)\nOUTPUT(o)\no = AND(a, b)\n").unwrap();
        assert_eq!(n.gate_count(), 1);
        assert_eq!(n.primary_inputs().len(), 2);
        assert_eq!(n.primary_outputs().len(), 1);
        assert!(n.key_inputs().is_empty());
    }

    #[test]
    fn undefined_net() {
        let err = parse_bench("INPUT(b)\nOUTPUT(o)\no = AND(a, b)\n").unwrap_err();
        assert_eq!(err, NetlistError::UndefinedNet { line: 3, name: "a".into() });
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let err = parse_bench("INPUT(a)\nOUTPUT(x)\nx = NOT(x)\n").unwrap_err();
        assert!(matches!(err, NetlistError::Cycle(_)), "{err:?}");
    }

    #[test]
    fn longer_cycle() {
        let err =
            parse_bench("INPUT(a)\nOUTPUT(y)\nx = AND(a, y)\ny = NOT(x)\n").unwrap_err();
        assert!(matches!(err, NetlistError::Cycle(_)));
    }

    #[test]
    fn multiple_drivers() {
        let err = parse_bench("INPUT(a)\nOUTPUT(x)\nx = NOT(a)\nx = BUF(a)\n").unwrap_err();
        assert_eq!(err, NetlistError::MultipleDrivers { line: 4, name: "x".into() });
        let err = parse_bench("INPUT(a)\nOUTPUT(a)\na = NOT(a)\n").unwrap_err();
        assert!(matches!(err, NetlistError::MultipleDrivers { line: 3, .. }));
    }

    #[test]
    fn bad_arity_and_syntax() {
        let err = parse_bench("INPUT(a)\nOUTPUT(o)\no = AND(a)\n").unwrap_err();
        assert!(matches!(err, NetlistError::Arity { line: 3, kind: GateKind::And, got: 1 }));
        let err = parse_bench("INPUT(a)\nOUTPUT(o)\no = NOT(a, a)\n").unwrap_err();
        assert!(matches!(err, NetlistError::Arity { line: 3, .. }));
        let err = parse_bench("INPUT(a)\nwat\n").unwrap_err();
        assert!(matches!(err, NetlistError::Syntax { line: 2, .. }));
        let err = parse_bench("INPUT(a)\nOUTPUT(o)\no = DFF(a)\n").unwrap_err();
        assert!(matches!(err, NetlistError::Syntax { line: 3, .. }));
        let err = parse_bench("INPUT(a\n").unwrap_err();
        assert!(matches!(err, NetlistError::Syntax { line: 1, .. }));
    }

    #[test]
    fn comments_crlf_and_buff() {
        let text = "# c17-ish\r\nINPUT(a)\r\nINPUT(b) # trailing\r\nOUTPUT(o)\r\nt = BUFF(a)\r\no = nand(t, b)\r\n";
        let n = parse_bench(text).unwrap();
        assert_eq!(n.gate_count(), 2);
        assert_eq!(n.gate(GateId(1)).kind, GateKind::Nand);
    }

    #[test]
    fn out_of_order_gates_and_keys() {
        let text = "INPUT(keyinput1)\nINPUT(a)\nINPUT(keyinput0)\nOUTPUT(o)\no = XOR(t, keyinput1)\nt = XOR(a, keyinput0)\n";
        let n = parse_bench(text).unwrap();
        assert_eq!(n.key_inputs().len(), 2);
        assert_eq!(n.net_name(n.key_inputs()[0]), "keyinput0");
        assert_eq!(n.eval_order(), &[GateId(1), GateId(0)]);
        let err = parse_bench("INPUT(keyinput1)\nINPUT(a)\nOUTPUT(a)\n").unwrap_err();
        assert!(matches!(err, NetlistError::KeyNumbering { .. }));
    }

    #[test]
    fn round_trip_small() {
        let text = "INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = AND(a, b)\n";
        let n = parse_bench(text).unwrap();
        let again = parse_bench(&emit_bench(&n)).unwrap();
        assert_eq!(n, again);
    }

    #[test]
    fn emit_marks_key_inputs_and_keeps_output_order() {
        let text = "INPUT(a)\nINPUT(keyinput0)\nOUTPUT(z)\nOUTPUT(y)\ny = XOR(a, keyinput0)\nz = NOT(y)\n";
        let n = parse_bench(text).unwrap();
        let emitted = emit_bench(&n);
        assert!(emitted.contains("# key input\nINPUT(keyinput0)\n"));
        let again = parse_bench(&emitted).unwrap();
        let names: Vec<&str> = again.primary_outputs().iter().map(|&o| again.net_name(o)).collect();
        assert_eq!(names, ["z", "y"]);
        assert_eq!(again, n);
    }

    #[test]
    fn name_marker() {
        let n = parse_bench("# netlist: c17\nINPUT(a)\nOUTPUT(a)\n").unwrap();
        assert_eq!(n.name(), "c17");
    }
}
