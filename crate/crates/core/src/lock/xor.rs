//! Random XOR/XNOR key-gate insertion, the traditional baseline.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{mix, LockError};
use crate::key::KeyBits;
use crate::netlist::{GateKind, NetId, Netlist, NetlistBuilder};

#[derive(Clone, Debug)]
pub struct XorLocked {
    pub netlist: Netlist,
    pub key: KeyBits,
    /// Locked net name per key bit.
    pub sites: Vec<String>,
}

/// Puts one key gate behind each of `key_size` distinct, randomly chosen
/// gate outputs. The key gate takes over the original net name; a bit of 0
/// gives XOR and 1 gives XNOR.
pub fn xor_lock(netlist: &Netlist, key_size: usize, seed: u64) -> Result<XorLocked, LockError> {
    if key_size == 0 {
        return Err(LockError::ZeroKey);
    }
    if !netlist.key_inputs().is_empty() {
        return Err(LockError::AlreadyKeyed);
    }
    if key_size > netlist.gate_count() {
        return Err(LockError::KeyCapacity { requested: key_size, capacity: netlist.gate_count() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 0x0058_4F52));
    let key = KeyBits::random(key_size, &mut rng);
    let chosen = sample(&mut rng, netlist.gate_count(), key_size).into_vec();
    let mut bit_of = vec![None; netlist.gate_count()];
    for (bit, &g) in chosen.iter().enumerate() {
        bit_of[g] = Some(bit);
    }

    let mut b = NetlistBuilder::new(netlist.name());
    b.reserve(netlist.nets().iter().map(|n| n.name.as_str()));
    let mut map = vec![NetId(u32::MAX); netlist.net_count()];
    for &pi in netlist.primary_inputs() {
        map[pi.index()] = b.add_primary_input(netlist.net_name(pi))?;
    }
    let keys: Vec<NetId> = (0..key_size).map(|_| b.add_key_input()).collect::<Result<_, _>>()?;
    let mut sites = vec![String::new(); key_size];
    for &g in netlist.eval_order() {
        let gate = netlist.gate(g);
        let inputs: Vec<NetId> = gate.inputs.iter().map(|i| map[i.index()]).collect();
        let name = netlist.net_name(gate.output);
        let out = match bit_of[g.index()] {
            None => b.add_gate(gate.kind, inputs, name)?,
            Some(bit) => {
                let pre_name = b.fresh_name(&format!("{name}_pre"));
                let pre = b.add_gate(gate.kind, inputs, pre_name)?;
                let kind = if key.bits()[bit] { GateKind::Xnor } else { GateKind::Xor };
                sites[bit] = name.to_string();
                b.add_gate(kind, vec![pre, keys[bit]], name)?
            }
        };
        map[gate.output.index()] = out;
    }
    for &o in netlist.primary_outputs() {
        b.add_output(map[o.index()]);
    }
    Ok(XorLocked { netlist: b.build()?, key, sites })
}
