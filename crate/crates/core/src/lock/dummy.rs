//! Dummy-input selection.
//!
//! A dummy must sit no deeper than the partition's shallowest input, must
//! not be one of its inputs, and must not be reachable from any of its
//! outputs. Only primary inputs and partition outputs are candidates, since
//! those nets survive the locking of other partitions.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::view::PartitionView;
use crate::netlist::{NetId, Netlist, TopoOrder};

/// Above this many candidates, draws use rejection sampling instead of a
/// full scan.
const SCAN_LIMIT: usize = 2048;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DummyChoice {
    pub nets: Vec<NetId>,
    pub requested: usize,
    /// Fewer qualifying nets than requested.
    pub reduced: bool,
    /// Some nets came from outside the preferred same-level set.
    pub fallback: bool,
    pub min_input_level: u32,
}

/// Candidate nets sorted by `(level, id)`, plus the partition outputs on
/// their own.
#[derive(Clone, Debug)]
pub struct DummyPool {
    all: Vec<(u32, NetId)>,
    outputs: Vec<(u32, NetId)>,
}

impl DummyPool {
    pub fn new(netlist: &Netlist, topo: &TopoOrder, views: &[PartitionView]) -> Self {
        let mut outputs: Vec<(u32, NetId)> = views
            .iter()
            .flat_map(|v| v.outputs.iter().map(|&o| (topo.net_level(netlist, o), o)))
            .collect();
        outputs.sort_unstable();
        outputs.dedup();
        let mut all: Vec<(u32, NetId)> = netlist.primary_inputs().iter().map(|&n| (0, n)).collect();
        all.extend_from_slice(&outputs);
        all.sort_unstable();
        all.dedup();
        DummyPool { all, outputs }
    }

    /// Picks up to `count` nets for `view`; `reachable(net)` reports whether
    /// a net is in the fan-out of the partition's outputs.
    pub fn choose(
        &self,
        view: &PartitionView,
        level_of: impl Fn(NetId) -> u32,
        count: usize,
        reachable: impl Fn(NetId) -> bool,
        rng: &mut impl Rng,
    ) -> DummyChoice {
        let min_level = view.inputs.iter().map(|&i| level_of(i)).min().unwrap_or(0);
        let qualifies = |n: NetId| view.inputs.binary_search(&n).is_err() && !reachable(n);
        let lo = self.outputs.partition_point(|c| c.0 < min_level);
        let hi = self.outputs.partition_point(|c| c.0 <= min_level);
        let mut chosen: Vec<NetId> = Vec::new();
        draw(&self.outputs[lo..hi], count, &qualifies, &mut chosen, rng);
        let from_preferred = chosen.len();
        if chosen.len() < count {
            let end = self.all.partition_point(|c| c.0 <= min_level);
            draw(&self.all[..end], count - chosen.len(), &qualifies, &mut chosen, rng);
        }
        DummyChoice {
            fallback: chosen.len() > from_preferred,
            reduced: chosen.len() < count,
            nets: chosen,
            requested: count,
            min_input_level: min_level,
        }
    }
}

/// Adds up to `count` qualifying nets from `pool` not already in `chosen`.
fn draw(
    pool: &[(u32, NetId)],
    count: usize,
    qualifies: &impl Fn(NetId) -> bool,
    chosen: &mut Vec<NetId>,
    rng: &mut impl Rng,
) {
    if count == 0 || pool.is_empty() {
        return;
    }
    if pool.len() <= SCAN_LIMIT {
        let mut ok: Vec<NetId> =
            pool.iter().map(|c| c.1).filter(|&n| !chosen.contains(&n) && qualifies(n)).collect();
        ok.shuffle(rng);
        chosen.extend(ok.into_iter().take(count));
        return;
    }
    let target = chosen.len() + count;
    let mut rejected = HashSet::new();
    let mut attempts = 0;
    while chosen.len() < target && attempts < 64 * count {
        attempts += 1;
        let n = pool[rng.gen_range(0..pool.len())].1;
        if chosen.contains(&n) || rejected.contains(&n) {
            continue;
        }
        if qualifies(n) {
            chosen.push(n);
        } else {
            rejected.insert(n);
        }
    }
}

/// Standalone selection against an unmodified netlist.
pub fn assign_dummy_inputs(
    netlist: &Netlist,
    topo: &TopoOrder,
    views: &[PartitionView],
    view: &PartitionView,
    max_dummies: usize,
    rng: &mut impl Rng,
) -> DummyChoice {
    let pool = DummyPool::new(netlist, topo, views);
    let d = rng.gen_range(0..=max_dummies.min(view.n()));
    let mut downstream = HashSet::new();
    for &o in &view.outputs {
        for g in netlist.fanout_cone(o).expect("view nets exist") {
            downstream.insert(netlist.gate(g).output);
        }
    }
    pool.choose(view, |n| topo.net_level(netlist, n), d, |n| downstream.contains(&n), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lock::view::build_views;
    use crate::netlist::{parse_bench, topo_order};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn whole_circuit_only_takes_primary_inputs() {
        let n = parse_bench(
            "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(o)\nx = AND(a, b)\no = OR(x, b)\n",
        )
        .unwrap();
        let t = topo_order(&n).unwrap();
        let views = build_views(&n, &t, &[0, 0], 1);
        let pool = DummyPool::new(&n, &t, &views);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = pool.choose(&views[0], |x| t.net_level(&n, x), 3, |_| false, &mut rng);
        assert_eq!(c.nets, vec![n.net_by_name("c").unwrap()]);
        assert!(c.reduced && c.fallback);
    }

    #[test]
    fn level_and_fanout_rules() {
        // Partition 1 = {y, z}; its inputs are x (level 1) and b.
        let n = parse_bench(
            "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(z)\nOUTPUT(w)\n\
             x = NOT(a)\nu = NOT(c)\ny = AND(x, b)\nz = OR(y, x)\nw = AND(z, u)\n",
        )
        .unwrap();
        let t = topo_order(&n).unwrap();
        // gates: x=0 u=1 y=2 z=3 w=4
        let asg = [0, 0, 1, 1, 0];
        let views = build_views(&n, &t, &asg, 2);
        let v = &views[1];
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = assign_dummy_inputs(&n, &t, &views, v, 2, &mut rng);
            for &d in &c.nets {
                assert!(t.net_level(&n, d) <= c.min_input_level);
                assert!(!v.inputs.contains(&d));
                let name = n.net_name(d);
                assert_ne!(name, "w", "downstream of the partition");
            }
        }
    }
}
